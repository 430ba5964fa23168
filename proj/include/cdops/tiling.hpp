#pragma once

#include <optional>
#include <vector>

#include "cdops/group.hpp"

namespace cdops {

struct OverlapResult {
    std::int64_t count = 0;  // #{h in D : rep(h) L meets z K}
    double bound = 0.0;      // |K L^-1 U| / |U| with the tile measure
};

/// Counts the tiles rep(h)L can hit inside zK and the covering-measure bound
/// that dominates the count. K and L are finite families of grid points; for
/// the discretized R^d each point stands for its cell, intersections and the
/// Minkowski-sum measure are computed exactly on the 1/(2q)-refined lattice.
OverlapResult overlap_count(const GElem& z, const std::vector<GElem>& K,
                            const std::vector<GElem>& L, const TiledGroup& T);

struct DiagonalOverlap {
    std::int64_t n = 0;           // ceil of |U^2 U^-2 U| / |U|
    double measure_ratio = 0.0;   // exact ratio
    // For discrete tilings: whether every approximate block diagonal equals
    // one block diagonal, verified by enumeration over a window.
    std::optional<bool> block_diagonals_coincide;
};

DiagonalOverlap diagonal_overlap_constant(const TiledGroup& T, int check_radius = 4);

struct FolnerTest {
    GElem x;
    double sym_diff = 0.0;  // |xUE delta UE|
    double ue_measure = 0.0;
    double ratio = 0.0;     // sym_diff / |UE|
    double bound = 0.0;     // 2 eps |UE|
};

struct FolnerResult {
    bool found = false;
    std::vector<DElem> set;  // E
    double set_measure = 0.0;
    int box_radius = 0;
    std::vector<FolnerTest> certificate;
    double worst_ratio = 0.0;  // of the returned E, or of the best candidate on failure
};

/// Searches boxes E of increasing radius for the Folner certificate
/// |xUE delta UE| <= 2 eps |UE| for every x = rep(k) u with k in K and u a
/// tile point. The search accepts only when the sharper per-x bound
/// |xUE delta UE| <= eps |UE| holds, so returned certificates carry slack.
/// Boxes are anchored at the identity, [0,r)^d per axis; on the Heisenberg
/// group the center axis grows like r^2/2 (cubes cannot satisfy the
/// condition for small eps).
FolnerResult folner_set(const std::vector<DElem>& K, double eps, const TiledGroup& T, int n_max);

}  // namespace cdops
