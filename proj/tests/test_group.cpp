#include <doctest.h>

#include <set>

#include "cdops/group.hpp"

using namespace cdops;

namespace {

std::vector<GElem> all_group_elements(const TiledGroup& g, int radius) {
    std::vector<GElem> out;
    for (const DElem& h : g.window_elements(WindowKind::Box, radius)) {
        for (int u = 0; u < g.tile_size(); ++u) out.push_back(g.g_mul(g.rep(h), g.tile_point(u)));
    }
    return out;
}

}  // namespace

TEST_CASE("decompose worked examples") {
    SUBCASE("ZxS3: (5, id) splits off the even class") {
        auto g = make_zxs3_group();
        Decomposition dec = g->decompose(GElem{{5, 0, 0, 0}});
        CHECK(dec.h == DElem{{5, 0, 0, 0}});
        CHECK(g->tile_point(dec.u) == g->g_id());
    }
    SUBCASE("R grid q=8: 1.3125 = 1 + 0.3125") {
        auto g = make_rd_grid_group(1, 8);
        GElem x = g->g_parse("1.3125");
        Decomposition dec = g->decompose(x);
        CHECK(dec.h == DElem{{1, 0, 0, 0}});
        CHECK(g->g_format(g->tile_point(dec.u)) == "0.3125");
        CHECK(g->g_mul(g->rep(dec.h), g->tile_point(dec.u)) == x);
    }
    SUBCASE("heisenberg: trivial tile") {
        auto g = make_heisenberg_group();
        Decomposition dec = g->decompose(GElem{{2, 3, 1, 0}});
        CHECK(dec.h == DElem{{2, 3, 1, 0}});
        CHECK(dec.u == 0);
    }
}

TEST_CASE("off-grid elements are rejected with a nearest-cell diagnostic") {
    auto g = make_rd_grid_group(1, 8);
    GElem off;
    off.v[0] = 16;  // 1.0 exactly: integer points are not cell centers for even q
    CHECK_THROWS_AS(g->decompose(off), OffGridError);
    try {
        g->decompose(off);
    } catch (const OffGridError& e) {
        CHECK(e.nearest_h == DElem{{1, 0, 0, 0}});
    }
}

TEST_CASE("group axioms by enumeration over balls") {
    std::vector<GroupPtr> groups = {make_zd_group(2), make_heisenberg_group(), make_zxs3_group(),
                                    make_rd_grid_group(1, 4)};
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        auto elems = all_group_elements(*g, 1);
        for (const GElem& a : elems) {
            CHECK(g->g_mul(g->g_inv(a), a) == g->g_id());
            for (const GElem& b : elems) {
                for (const GElem& c : elems) {
                    CHECK(g->g_mul(g->g_mul(a, b), c) == g->g_mul(a, g->g_mul(b, c)));
                }
            }
        }
    }
}

TEST_CASE("partition: every window element decomposes uniquely") {
    std::vector<GroupPtr> groups = {make_zd_group(1), make_heisenberg_group(), make_zxs3_group(),
                                    make_rd_grid_group(1, 8), make_rd_grid_group(2, 3)};
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        auto window = g->window_elements(WindowKind::Box, 3);
        std::set<GElem> seen;
        for (const DElem& h : window) {
            for (int u = 0; u < g->tile_size(); ++u) {
                GElem x = g->g_mul(g->rep(h), g->tile_point(u));
                CHECK(seen.insert(x).second);  // tiles are disjoint
                Decomposition dec = g->decompose(x);
                CHECK(dec.h == h);
                CHECK(dec.u == u);
            }
        }
        // sum over h of |rep(h)U ∩ window points| equals |window points|
        CHECK(seen.size() == window.size() * static_cast<std::size_t>(g->tile_size()));
    }
}

TEST_CASE("D and the transversal are inverse bijections") {
    std::vector<GroupPtr> groups = {make_zd_group(1), make_zxs3_group(),
                                    make_zxs3_group(/*alternate=*/true), make_heisenberg_group(),
                                    make_rd_grid_group(1, 5)};
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        for (const DElem& h : g->window_elements(WindowKind::Box, 4)) {
            CHECK(g->decompose(g->rep(h)).h == h);
        }
    }
}

TEST_CASE("tile is invariant under conjugation by transversal representatives") {
    std::vector<GroupPtr> groups = {make_zxs3_group(), make_zxs3_group(true),
                                    make_rd_grid_group(1, 8)};
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        std::set<GElem> tile;
        for (int u = 0; u < g->tile_size(); ++u) tile.insert(g->tile_point(u));
        for (const DElem& h : g->window_elements(WindowKind::Box, 4)) {
            GElem r = g->rep(h);
            std::set<GElem> conj;
            for (const GElem& u : tile) conj.insert(g->g_mul(g->g_mul(r, u), g->g_inv(r)));
            CHECK(conj == tile);
        }
    }
}

TEST_CASE("D multiplication matches multiplication of representatives") {
    // (hk)^dot = h^dot k^dot even though the transversal need not be a group
    auto g = make_zxs3_group();
    for (const DElem& a : g->window_elements(WindowKind::Box, 3)) {
        for (const DElem& b : g->window_elements(WindowKind::Box, 3)) {
            GElem prod = g->g_mul(g->rep(a), g->rep(b));
            CHECK(g->decompose(prod).h == g->d_mul(a, b));
        }
        CHECK(g->decompose(g->g_inv(g->rep(a))).h == g->d_inv(a));
    }
}

TEST_CASE("element serialization round-trips") {
    std::vector<GroupPtr> groups = {make_zd_group(2), make_heisenberg_group(), make_zxs3_group(),
                                    make_rd_grid_group(1, 8), make_rd_grid_group(1, 3)};
    for (const auto& g : groups) {
        CAPTURE(g->kind());
        for (const GElem& x : all_group_elements(*g, 2)) {
            CHECK(g->g_parse(g->g_format(x)) == x);
        }
        for (const DElem& h : g->window_elements(WindowKind::Box, 2)) {
            CHECK(g->d_parse(g->d_format(h)) == h);
        }
    }
}

TEST_CASE("windows: monotone in radius, boxes and balls") {
    auto g = make_heisenberg_group();
    Window b4 = Window::word_ball(g, 4);
    Window b6 = Window::word_ball(g, 6);
    CHECK(b4.size() == 135);  // |B_4| of the standard generators
    CHECK(b6.size() == 593);
    for (const DElem& h : b4.elements()) CHECK(b6.contains(h));
    CHECK(b6.inversion_closed());  // word balls are symmetric
    CHECK_FALSE(Window::box(g, 2).inversion_closed());  // boxes are not (c-coordinate)

    auto z = make_zd_group(2);
    Window box = Window::box(z, 3);
    CHECK(box.size() == 49);
    CHECK(box.inversion_closed());
    CHECK(box.boundary_metric(DElem{{3, -1, 0, 0}}) == 3);
}

TEST_CASE("group factory parses config strings") {
    CHECK(make_group("Zd d=2")->config_string() == "Zd d=2");
    CHECK(make_group("heisenberg")->kind() == "heisenberg");
    CHECK(make_group("ZxS3 transversal=alt")->config_string() == "ZxS3 transversal=alt");
    CHECK(make_group("Rd_grid d=1 q=8")->tile_size() == 8);
    CHECK_THROWS_AS(make_group("U5"), std::invalid_argument);
    CHECK_THROWS_AS(make_group("Zd d=9"), std::invalid_argument);
}
