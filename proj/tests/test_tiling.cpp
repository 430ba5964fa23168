#include <doctest.h>

#include <algorithm>
#include <set>

#include "cdops/rng.hpp"
#include "cdops/tiling.hpp"

using namespace cdops;

namespace {

GElem random_point(Rng& rng, const TiledGroup& g, int radius) {
    auto window = g.window_elements(WindowKind::Box, radius);
    DElem h = window[static_cast<std::size_t>(rng.uniform_int(0, window.size() - 1))];
    int u = static_cast<int>(rng.uniform_int(0, g.tile_size() - 1));
    return g.g_mul(g.rep(h), g.tile_point(u));
}

// recount |xUE delta UE| from the definition, independently of folner_set
double recount_sym_diff(const TiledGroup& g, const std::vector<DElem>& e, const GElem& x) {
    std::set<GElem> ue;
    for (const DElem& h : e) {
        for (int u = 0; u < g.tile_size(); ++u) ue.insert(g.g_mul(g.rep(h), g.tile_point(u)));
    }
    std::set<GElem> xue;
    for (const GElem& p : ue) xue.insert(g.g_mul(x, p));
    std::size_t diff = 0;
    for (const GElem& p : ue) diff += xue.count(p) ? 0 : 1;
    for (const GElem& p : xue) diff += ue.count(p) ? 0 : 1;
    return static_cast<double>(diff) * g.haar_weight();
}

}  // namespace

TEST_CASE("overlap: enumerated examples") {
    SUBCASE("Z with U={0}: equality count = bound = 5") {
        auto g = make_zd_group(1);
        std::vector<GElem> k = {GElem{{0}}, GElem{{1}}, GElem{{2}}};
        OverlapResult res = overlap_count(GElem{}, k, k, *g);
        CHECK(res.count == 5);
        CHECK(res.bound == doctest::Approx(5.0).epsilon(1e-15));
    }
    SUBCASE("empty K gives zero") {
        auto g = make_zd_group(1);
        OverlapResult res = overlap_count(GElem{}, {}, {GElem{}}, *g);
        CHECK(res.count == 0);
        CHECK(res.bound == 0.0);
    }
    SUBCASE("Z^2 with K = L = {0,1}^2: count = bound = 9") {
        auto g = make_zd_group(2);
        std::vector<GElem> k;
        for (std::int64_t a = 0; a <= 1; ++a)
            for (std::int64_t b = 0; b <= 1; ++b) k.push_back(GElem{{a, b, 0, 0}});
        OverlapResult res = overlap_count(GElem{}, k, k, *g);
        CHECK(res.count == 9);
        CHECK(res.bound == doctest::Approx(9.0).epsilon(1e-15));
    }
}

TEST_CASE("overlap: count never exceeds the covering bound") {
    std::vector<GroupPtr> groups = {make_zd_group(1), make_zd_group(2), make_zxs3_group(),
                                    make_heisenberg_group(), make_rd_grid_group(1, 8),
                                    make_rd_grid_group(2, 3)};
    Rng rng(2024);
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        for (int trial = 0; trial < 200; ++trial) {
            GElem z = random_point(rng, *g, 4);
            std::vector<GElem> k, l;
            for (int i = rng.uniform_int(1, 5); i > 0; --i) k.push_back(random_point(rng, *g, 3));
            for (int i = rng.uniform_int(1, 5); i > 0; --i) l.push_back(random_point(rng, *g, 3));
            OverlapResult res = overlap_count(z, k, l, *g);
            CHECK(static_cast<double>(res.count) <= res.bound + 1e-9);
        }
    }
}

TEST_CASE("diagonal overlap constants") {
    SUBCASE("trivial tiles give n = 1") {
        CHECK(diagonal_overlap_constant(*make_zd_group(1)).n == 1);
        CHECK(diagonal_overlap_constant(*make_heisenberg_group()).n == 1);
    }
    SUBCASE("ZxS3: U is a subgroup, approximate block diagonals are block diagonals") {
        DiagonalOverlap d = diagonal_overlap_constant(*make_zxs3_group(), 4);
        CHECK(d.n == 1);  // U^2 U^-2 U = U has measure |U| = 1
        REQUIRE(d.block_diagonals_coincide.has_value());
        CHECK(*d.block_diagonals_coincide);
    }
    SUBCASE("continuum tile: interval arithmetic gives 5 per axis") {
        DiagonalOverlap d1 = diagonal_overlap_constant(*make_rd_grid_group(1, 8));
        CHECK(d1.n == 5);
        CHECK(d1.measure_ratio == doctest::Approx(5.0));
        DiagonalOverlap d2 = diagonal_overlap_constant(*make_rd_grid_group(2, 4));
        CHECK(d2.n == 25);
    }
}

TEST_CASE("folner: Z with K = {-1,0,1} and eps = 0.2 returns {0..9}") {
    auto g = make_zd_group(1);
    std::vector<DElem> k = {DElem{{-1}}, DElem{{0}}, DElem{{1}}};
    FolnerResult res = folner_set(k, 0.2, *g, 64);
    REQUIRE(res.found);
    CHECK(res.box_radius == 10);
    REQUIRE(res.set.size() == 10);
    for (std::int64_t i = 0; i < 10; ++i) CHECK(res.set[i] == DElem{{i, 0, 0, 0}});
    // |(x+E) delta E| = 2 for x = +-1
    double worst = 0.0;
    for (const FolnerTest& t : res.certificate) {
        CHECK(t.sym_diff <= t.bound);
        worst = std::max(worst, t.sym_diff);
    }
    CHECK(worst == doctest::Approx(2.0));
}

TEST_CASE("folner: K = {identity} is satisfied by E = {identity}") {
    for (const auto& g : {make_zd_group(2), make_heisenberg_group(), make_zxs3_group()}) {
        CAPTURE(g->kind());
        FolnerResult res = folner_set({g->d_id()}, 0.5, *g, 8);
        REQUIRE(res.found);
        CHECK(res.box_radius == 1);
        CHECK(res.worst_ratio == 0.0);
    }
}

TEST_CASE("folner: ZxS3 at eps = 0.1 needs a box of 20 classes") {
    auto g = make_zxs3_group();
    std::vector<DElem> k;
    for (auto& [h, d] : word_ball_distances(*g, 1)) k.push_back(h);
    FolnerResult res = folner_set(k, 0.1, *g, 64);
    REQUIRE(res.found);
    CHECK(res.box_radius == 20);
    CHECK(res.set.size() == 40);
    for (const FolnerTest& t : res.certificate) {
        CHECK(t.sym_diff <= t.bound);
        CHECK(t.sym_diff == doctest::Approx(recount_sym_diff(*g, res.set, t.x)).epsilon(1e-12));
    }
}

TEST_CASE("folner: continuum tiles, exact interval measures") {
    auto g = make_rd_grid_group(1, 8);
    std::vector<DElem> k = {DElem{{-1}}, DElem{{0}}, DElem{{1}}};
    FolnerResult res = folner_set(k, 0.2, *g, 64);
    REQUIRE(res.found);
    for (const FolnerTest& t : res.certificate) {
        CHECK(t.sym_diff <= t.bound + 1e-12);
        // recount on the 1/(2q) lattice: UE is the interval [-1/2, r - 1/2)
        double width = static_cast<double>(res.set.size());
        double shift = std::abs(static_cast<double>(t.x.v[0])) / 16.0;
        double expected = 2.0 * std::min(width, shift);
        CHECK(t.sym_diff == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("folner: exhausted search reports its best ratio") {
    auto g = make_zd_group(1);
    std::vector<DElem> k = {DElem{{-1}}, DElem{{0}}, DElem{{1}}};
    FolnerResult res = folner_set(k, 0.001, *g, 5);  // needs r = 2000, cap at 5
    CHECK_FALSE(res.found);
    CHECK(res.worst_ratio > 0.001);
    CHECK(res.worst_ratio <= 2.0 / 5.0 + 1e-12);
}
