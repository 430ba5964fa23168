#include <doctest.h>

#include <sstream>

#include "cdops/io.hpp"
#include "cdops/rng.hpp"

using namespace cdops;

TEST_CASE("kernel blocks round-trip bit-exactly") {
    Rng rng(301);
    for (int q : {1, 3, 8}) {
        KernelBlock b = rng.random_block(q, 1.0 / q);
        std::stringstream buf;
        save_block(buf, b);
        KernelBlock back = load_block(buf);
        CHECK(back == b);
    }
}

TEST_CASE("matrices round-trip through the container format") {
    Rng rng(307);
    for (const auto& g : {make_zd_group(2), make_zxs3_group(), make_heisenberg_group(),
                          make_rd_grid_group(1, 4)}) {
        CAPTURE(g->kind());
        Window win = g->kind() == "heisenberg" ? Window::word_ball(g, 2) : Window::box(g, 3);
        detail::DiagMap diag;
        auto labels = g->window_elements(WindowKind::Box, 1);
        for (const DElem& l : labels) {
            for (const DElem& j : win.elements()) {
                if (!win.contains(g->d_mul(l, j))) continue;
                if (rng.uniform() < 0.5) continue;
                diag[l].insert_or_assign(j, rng.random_block(g->tile_size(), g->haar_weight()));
            }
        }
        CDMatrix m(g, win, std::move(diag));
        std::stringstream buf;
        save_matrix(buf, m);
        CDMatrix back = load_matrix(buf);
        CHECK(back.window() == m.window());
        CHECK(back == m);
    }
}

TEST_CASE("twisted elements round-trip with their label table") {
    Rng rng(311);
    auto g = make_zxs3_group();
    Window win = Window::box(g, 3);
    TwistedElement f(g, win);
    f.set_block(DElem{{1, 0, 0, 0}}, DElem{{0, 0, 0, 0}}, rng.random_block(3, 1.0 / 3.0));
    f.set_block(DElem{{-1, 1, 0, 0}}, DElem{{2, 1, 0, 0}}, rng.random_block(3, 1.0 / 3.0));
    std::stringstream buf;
    save_twisted(buf, f);
    TwistedElement back = load_twisted(buf);
    CHECK(back == f);
    CHECK(back.l1_norm() == f.l1_norm());
}

TEST_CASE("corrupt input is rejected") {
    std::stringstream buf("not a cdops file at all");
    CHECK_THROWS_AS(load_block(buf), std::runtime_error);
    std::stringstream buf2;
    save_block(buf2, KernelBlock::identity(2, 0.5));
    CHECK_THROWS_AS(load_matrix(buf2), std::runtime_error);  // wrong magic for this loader
}
