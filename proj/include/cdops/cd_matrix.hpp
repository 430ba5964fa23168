#pragma once

#include <map>
#include <optional>

#include "cdops/group.hpp"
#include "cdops/kernel.hpp"

namespace cdops {

namespace detail {

/// Shared storage shape of CDMatrix diagonals and twisted-algebra elements:
/// diagonal label -> (column index in the window -> kernel block).
using DiagMap = std::map<DElem, std::map<DElem, KernelBlock>>;

/// The twisted convolution both algebras share:
///   out[h](j) = sum over label pairs la*lb = h of conv(A[la](lb*j), B[lb](j)),
/// with the intermediate index lb*j looked up within the window (zero
/// extension outside). Accumulation runs in key-sorted order, so results are
/// bit-stable and identical for CDMatrix::mul and TwistedElement::star.
DiagMap convolve_diag_maps(const TiledGroup& group, const DiagMap& a, const DiagMap& b);

/// out[l^-1](l*c) = a[l](c)^* for l*c inside the window.
DiagMap adjoint_diag_map(const TiledGroup& group, const Window& window, const DiagMap& a);

/// sum over labels (key-sorted) of the per-diagonal sup of block sup-norms;
/// evaluates both the CD_H norm and the twisted l^1 norm.
double diag_map_norm(const DiagMap& a);

void prune_zero_blocks(DiagMap& a);

}  // namespace detail

/// Per-diagonal sup-norm sequence d(l) of a matrix; the aggregate sum is the
/// empirical CD norm.
struct DecayProfile {
    std::map<DElem, double> d;

    double aggregate() const {
        double s = 0.0;
        for (const auto& [l, v] : d) s += v;
        return s;
    }
};

/// Element of the orthogonal sum over the window of L2(U): one length-q
/// complex vector per window index, with Haar-weighted norm.
class BlockVector {
public:
    BlockVector(Window window, int q);

    static BlockVector indicator(const Window& window, const DElem& j, int q, int u);

    const Window& window() const { return window_; }
    int q() const { return q_; }
    Eigen::VectorXcd& block(int index) { return blocks_[index]; }
    const Eigen::VectorXcd& block(int index) const { return blocks_[index]; }

    double norm() const;
    Eigen::VectorXcd flatten() const;
    static BlockVector from_flat(const Window& window, int q, const Eigen::VectorXcd& flat);

private:
    Window window_;
    int q_;
    std::vector<Eigen::VectorXcd> blocks_;
};

/// Finitely supported map D -> KernelBlock describing a translation-invariant
/// operator (the same block on every column of each diagonal). These form a
/// subalgebra under the diagonal convolution; powers can be evaluated without
/// a window, which the spectral experiments use for exact CD norms of powers.
class KernelSeries {
public:
    explicit KernelSeries(GroupPtr group);

    static KernelSeries identity(const GroupPtr& group);
    static KernelSeries shift(const GroupPtr& group, const DElem& label, cplx coef = 1.0);

    const GroupPtr& group() const { return group_; }
    const std::map<DElem, KernelBlock>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const DElem& label, const KernelBlock& block);

    KernelSeries conv(const KernelSeries& other) const;
    KernelSeries adjoint() const;
    KernelSeries scaled(cplx factor) const;
    KernelSeries operator+(const KernelSeries& other) const;
    KernelSeries operator-(const KernelSeries& other) const;

    double cd_norm() const;
    bool is_self_adjoint(double tol = 0.0) const;

    /// Largest window metric of a support label (box norm or word length).
    std::int64_t support_radius(WindowKind kind) const;

private:
    GroupPtr group_;
    std::map<DElem, KernelBlock> terms_;
};

/// Side-diagonal-sparse matrix of kernel blocks over a window, carrying the
/// CD_H norm sum_l sup_j ||a(l,j)||_inf.
///
/// Blocks are stored by (diagonal label l, column j in the window); the row
/// index l*j of a stored block may fall outside the window. Materialization
/// (to_dense, apply) projects rows onto the window, which realizes the
/// zero-extension boundary policy; norms and the twisted-algebra isometry see
/// the full stored data. clip_rows_to_window() drops the out-of-window rows,
/// giving the plain finite section.
class CDMatrix {
public:
    CDMatrix(GroupPtr group, Window window);
    CDMatrix(GroupPtr group, Window window, detail::DiagMap diagonals);

    static CDMatrix identity(const GroupPtr& group, const Window& window);
    static CDMatrix shift(const GroupPtr& group, const Window& window, const DElem& label,
                          cplx coef = 1.0);
    static CDMatrix from_series(const KernelSeries& series, const Window& window);
    static CDMatrix from_dense(const Eigen::MatrixXcd& m, const GroupPtr& group,
                               const Window& window);

    const GroupPtr& group() const { return group_; }
    const Window& window() const { return window_; }
    const detail::DiagMap& diagonals() const { return diag_; }
    int q() const { return group_->tile_size(); }

    const KernelBlock* block_at(const DElem& label, const DElem& column) const;

    CDMatrix mul(const CDMatrix& other) const;
    CDMatrix adjoint() const;
    CDMatrix scaled(cplx factor) const;
    CDMatrix add(const CDMatrix& other) const;
    CDMatrix sub(const CDMatrix& other) const;
    CDMatrix clip_rows_to_window() const;

    BlockVector apply(const BlockVector& xi) const;
    Eigen::MatrixXcd to_dense() const;

    double cd_norm() const { return detail::diag_map_norm(diag_); }
    DecayProfile profile() const;

    /// Largest window metric of a support label.
    std::int64_t support_radius() const;

    PowerIterResult op_norm_estimate(double tol = 1e-9, int iter_max = 20000) const;

    friend bool operator==(const CDMatrix& a, const CDMatrix& b) {
        return a.window_ == b.window_ && a.diag_ == b.diag_;
    }

private:
    void require_compatible(const CDMatrix& other) const;

    GroupPtr group_;
    Window window_;
    detail::DiagMap diag_;
};

/// Decay profile of a dense matrix indexed by window x tile grid: d(l) is the
/// max over columns j with boundary metric <= radius - interior_margin of the
/// kernel sup-norm of the block at (l*j, j).
DecayProfile decay_profile(const Eigen::MatrixXcd& m, const Window& window,
                           std::int64_t interior_margin = 0);

}  // namespace cdops
