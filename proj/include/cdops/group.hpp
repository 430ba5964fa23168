#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdops/elements.hpp"

namespace cdops {

/// Result of splitting g = rep(h) * u with u in the tile U.
struct Decomposition {
    DElem h;
    int u = 0;  // index into tile_point(0..tile_size-1)
};

/// Thrown by decompose() when a discretized-R^d element does not lie on the
/// cell-center grid. Carries the nearest cell as a diagnostic.
struct OffGridError : std::invalid_argument {
    OffGridError(const std::string& msg, DElem nearest_h, int nearest_u)
        : std::invalid_argument(msg), nearest_h(nearest_h), nearest_u(nearest_u) {}
    DElem nearest_h;
    int nearest_u;
};

enum class WindowKind { Box, WordBall };

/// A locally compact group together with a tile U and a transversal indexed
/// by the group D, so that {rep(h)U : h in D} partitions G and U is invariant
/// under conjugation by the transversal.
///
/// Haar measure is normalised so that |U| = 1: finite tiles carry the
/// counting measure rescaled by 1/#U, grid tiles carry cell weight 1/q^d.
/// All arithmetic is exact integer arithmetic; the R^d grid stores positions
/// in units of 1/(2q) so that decomposition never rounds.
class TiledGroup {
public:
    virtual ~TiledGroup() = default;

    virtual std::string kind() const = 0;
    virtual std::string config_string() const = 0;  // round-trippable description
    virtual int dim() const = 0;

    // --- group arithmetic on G
    virtual GElem g_mul(const GElem& a, const GElem& b) const = 0;
    virtual GElem g_inv(const GElem& a) const = 0;
    virtual GElem g_id() const = 0;

    // --- arithmetic on the index group D
    virtual DElem d_mul(const DElem& a, const DElem& b) const = 0;
    virtual DElem d_inv(const DElem& a) const = 0;
    virtual DElem d_id() const = 0;

    // --- the tiling
    virtual GElem rep(const DElem& h) const = 0;
    virtual Decomposition decompose(const GElem& g) const = 0;
    virtual int tile_size() const = 0;      // number of sample points of U
    virtual GElem tile_point(int u) const = 0;
    double haar_weight() const { return 1.0 / tile_size(); }

    /// Cells per axis for the discretized R^d grid; 0 for discrete groups
    /// (where tiles are genuine point sets rather than unions of cells).
    virtual int grid_resolution() const { return 0; }

    /// Word-metric length on D. Boxes use the sup-norm of the coordinates;
    /// groups without a natural box structure may override (the Heisenberg
    /// group uses the word metric of the standard generators).
    virtual std::int64_t d_box_norm(const DElem& h) const;
    virtual std::int64_t d_word_length(const DElem& h) const { return d_box_norm(h); }

    /// Standard generating set of D (used for word-metric balls and as the
    /// default test set of Folner searches).
    virtual std::vector<DElem> d_generators() const = 0;

    virtual std::vector<DElem> window_elements(WindowKind kind, int radius) const = 0;

    // --- serialization: decimal tuples joined by ':'
    virtual std::string g_format(const GElem& g) const = 0;
    virtual GElem g_parse(const std::string& s) const = 0;
    virtual std::string d_format(const DElem& h) const = 0;
    virtual DElem d_parse(const std::string& s) const = 0;
};

using GroupPtr = std::shared_ptr<const TiledGroup>;

GroupPtr make_zd_group(int d);
GroupPtr make_heisenberg_group();
GroupPtr make_zxs3_group(bool alternate_transversal = false);
GroupPtr make_rd_grid_group(int d, int q);

/// Same tiling: identical object or identical configuration.
inline bool same_tiling(const GroupPtr& a, const GroupPtr& b) {
    return a == b || (a && b && a->config_string() == b->config_string());
}

/// Parses "Zd d=2", "heisenberg", "ZxS3", "Rd_grid d=1 q=8".
GroupPtr make_group(const std::string& config);

/// Finite truncation of D used by all matrix computations: a centered box in
/// D-coordinates, or a word-metric ball (the natural choice for the
/// Heisenberg group where boxes grow too fast along the center direction).
/// Cheap to copy; the enumeration is shared and immutable.
class Window {
public:
    Window() = default;
    static Window box(GroupPtr group, int radius);
    static Window word_ball(GroupPtr group, int radius);
    static Window make(GroupPtr group, WindowKind kind, int radius);

    const GroupPtr& group() const;
    WindowKind window_kind() const;
    int radius() const;
    int size() const;
    const std::vector<DElem>& elements() const;
    bool contains(const DElem& h) const { return index_of(h) >= 0; }
    int index_of(const DElem& h) const;  // -1 if absent

    /// Distance of h from the window center in the metric that defines the
    /// window (sup-norm for boxes, word length for balls).
    std::int64_t boundary_metric(const DElem& h) const;

    bool inversion_closed() const;

    friend bool operator==(const Window& a, const Window& b);

private:
    struct Data;
    explicit Window(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

/// Word-metric distances of all elements within the given radius,
/// computed by breadth-first search over d_generators().
std::map<DElem, std::int64_t> word_ball_distances(const TiledGroup& group, std::int64_t radius);

}  // namespace cdops
