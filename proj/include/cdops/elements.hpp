#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

namespace cdops {

/// Coordinates of a group element. The meaning of the slots is fixed by the
/// concrete group: integer tuple for Z^d, (a,b,c) for the Heisenberg group,
/// (n, permutation index) for Z x S3, and per-axis positions in units of
/// 1/(2q) for the discretized R^d grid.
struct GElem {
    std::array<std::int64_t, 4> v{0, 0, 0, 0};

    friend auto operator<=>(const GElem&, const GElem&) = default;
};

/// Element of the index group D labelling the tiles of the partition
/// {rep(h)U}. For Z^d and the Heisenberg group D coincides with G; for
/// Z x S3 it is Z x Z/2, and for the R^d grid it is Z^d.
struct DElem {
    std::array<std::int64_t, 4> v{0, 0, 0, 0};

    friend auto operator<=>(const DElem&, const DElem&) = default;
};

}  // namespace cdops

template <>
struct std::hash<cdops::DElem> {
    std::size_t operator()(const cdops::DElem& e) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto x : e.v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};
