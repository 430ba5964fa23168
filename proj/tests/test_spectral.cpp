#include <doctest.h>

#include <cmath>

#include "cdops/config.hpp"
#include "cdops/rng.hpp"
#include "cdops/spectral.hpp"

using namespace cdops;

namespace {

// dense-grid maximization of |1 + z + z^2 - z^3| on the circle
double rudin_shapiro_symbol_max() {
    double best = 0.0;
    const int n = 1 << 20;
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n;
        cplx z = std::polar(1.0, th);
        best = std::max(best, std::abs(1.0 + z + z * z - z * z * z));
    }
    return 0.3 * best;
}

}  // namespace

TEST_CASE("cd power sequence: shifts and zero") {
    auto g = make_zd_group(1);
    KernelSeries lam = KernelSeries::shift(g, DElem{{1}});
    PowerSequence seq = spectral_radius_cd(lam, 8);
    for (const PowerEntry& e : seq.entries) CHECK(e.r == 1.0);

    PowerSequence zero = spectral_radius_cd(KernelSeries(g), 4);
    CHECK(zero.entries.front().r == 0.0);
}

TEST_CASE("cd power sequence of the Rudin-Shapiro perturbation") {
    auto g = make_zd_group(1);
    KernelSeries p(g);
    for (std::int64_t k : {0, 1, 2}) p = p + KernelSeries::shift(g, DElem{{k}}, 0.3);
    p = p - KernelSeries::shift(g, DElem{{3}}, 0.3);

    PowerSequence seq = spectral_radius_cd(p, 32);
    CHECK(seq.entries.front().r == doctest::Approx(1.2).epsilon(1e-15));
    double sym = rudin_shapiro_symbol_max();
    CHECK(sym == doctest::Approx(0.798203).epsilon(1e-5));
    // r_n dominates the symbol maximum and approaches it from above
    for (const PowerEntry& e : seq.entries) CHECK(e.r >= sym - 1e-12);
    CHECK(seq.entries.back().r <= 1.05 * sym);
    CHECK(seq.entries.back().r < seq.entries.front().r);
}

TEST_CASE("windowed power sequence agrees with the invariant one on interior-dominated cases") {
    auto g = make_zd_group(1);
    KernelSeries geo = KernelSeries::shift(g, DElem{{1}}, 0.5);
    Window win = Window::box(g, 40);
    PowerSequence inv = spectral_radius_cd(geo, 8);
    PowerSequence windowed = spectral_radius_cd(CDMatrix::from_series(geo, win), 8);
    for (std::size_t i = 0; i < inv.entries.size(); ++i) {
        CHECK(windowed.entries[i].cd_norm ==
              doctest::Approx(inv.entries[i].cd_norm).epsilon(1e-14));
    }
}

TEST_CASE("operator spectral radius") {
    auto g = make_zd_group(1);
    SUBCASE("identity") {
        Window win = Window::box(g, 10);
        CHECK(spectral_radius_op(CDMatrix::identity(g, win)) == doctest::Approx(1.0));
    }
    SUBCASE("random walk on a radius-200 window matches the tridiagonal formula") {
        Window win = Window::box(g, 200);
        KernelSeries walk = KernelSeries::shift(g, DElem{{1}}) + KernelSeries::shift(g, DElem{{-1}});
        double sr = spectral_radius_op(CDMatrix::from_series(walk, win));
        double oracle = 2.0 * std::cos(M_PI / 402.0);  // 2 cos(pi/(N+1)), N = 401
        CHECK(sr == doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("self-adjoint random matrix: r_n limit within 5 percent of the dense radius") {
        Window win = Window::box(g, 16);
        Rng rng(12345);
        detail::DiagMap diag;
        for (std::int64_t k : {0, 1, 2}) {
            DElem l{{k}};
            for (const DElem& j : win.elements()) {
                if (!win.contains(g->d_mul(l, j))) continue;
                diag[l].insert_or_assign(j, rng.random_block(1, 1.0));
            }
        }
        CDMatrix b(g, win, std::move(diag));
        CDMatrix a = b.add(b.adjoint());
        double sr = spectral_radius_op(a);
        PowerSequence seq = spectral_radius_cd(a, 64);
        double r_terminal = seq.entries.back().r;
        CHECK(sr <= r_terminal + 1e-9);
        CHECK(r_terminal <= 1.05 * sr);
    }
}

TEST_CASE("Neumann inversion") {
    auto g = make_zd_group(1);
    Window win = Window::box(g, 40);
    SUBCASE("T = 0 returns the identity") {
        NeumannResult res = neumann_inverse(CDMatrix(g, win), 1e-10, 100);
        CHECK(res.converged);
        CHECK(res.inverse == CDMatrix::identity(g, win));
    }
    SUBCASE("T = 0.5 shift: geometric diagonals, aggregate 2") {
        CDMatrix t = CDMatrix::shift(g, win, DElem{{1}}, 0.5);
        NeumannResult res = neumann_inverse(t, 1e-9, 200);
        CHECK(res.converged);
        CHECK(res.tail_bound <= 1e-9);
        DecayProfile p = res.inverse.profile();
        for (const auto& [l, v] : p.d) {
            CHECK(v == std::pow(0.5, static_cast<double>(l.v[0])));  // powers of two are exact
        }
        CHECK(p.aggregate() == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("random T with cd norm 0.7: clipped residual below tolerance") {
        Rng rng(651);
        KernelSeries s(g);
        for (std::int64_t k : {-1, 0, 2}) s = s + KernelSeries::shift(g, DElem{{k}}, rng.complex_box());
        s = s.scaled(0.7 / s.cd_norm());
        CDMatrix t = CDMatrix::from_series(s, win);
        NeumannResult res = neumann_inverse(t, 1e-8, 300);
        REQUIRE(res.converged);
        CDMatrix one_minus_t = CDMatrix::identity(g, win).sub(t);
        CDMatrix resid = one_minus_t.mul(res.inverse).clip_rows_to_window().sub(
            CDMatrix::identity(g, win));
        CHECK(resid.cd_norm() <= 1e-8);
    }
    SUBCASE("cd norm >= 1 is rejected toward finite sections") {
        CDMatrix t = CDMatrix::shift(g, win, DElem{{1}}, 1.2);
        CHECK_THROWS_WITH_AS(neumann_inverse(t, 1e-8, 100),
                             doctest::Contains("finite_section_inverse"),
                             std::invalid_argument);
    }
}

TEST_CASE("finite sections") {
    auto g = make_zd_group(1);
    SUBCASE("identity inverts to the single-diagonal profile {e: 1}") {
        Window win = Window::box(g, 10);
        FiniteSectionResult fs = finite_section_inverse(CDMatrix::identity(g, win));
        CHECK(fs.profile.d.size() == 1);
        CHECK(fs.profile.d.at(DElem{{0}}) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("1 - 0.5 shift inverts to exact geometric diagonals") {
        Window win = Window::box(g, 32);
        KernelSeries a = KernelSeries::identity(g) - KernelSeries::shift(g, DElem{{1}}, 0.5);
        FiniteSectionResult fs = finite_section_inverse(CDMatrix::from_series(a, win));
        CHECK(fs.interior_margin == 4);
        for (const auto& [l, v] : fs.profile.d) {
            REQUIRE(l.v[0] >= 0);
            CHECK(v == doctest::Approx(std::pow(0.5, static_cast<double>(l.v[0])))
                           .epsilon(1e-12));
        }
        // matches the Neumann profile on interior diagonals
        NeumannResult nm = neumann_inverse(CDMatrix::shift(g, win, DElem{{1}}, 0.5), 1e-10, 200);
        DecayProfile np = nm.inverse.profile();
        for (const auto& [l, v] : fs.profile.d) {
            auto it = np.d.find(l);
            double nv = it == np.d.end() ? 0.0 : it->second;
            CHECK(std::abs(nv - v) <= 1e-8);
        }
    }
    SUBCASE("singular sections are rejected with a condition estimate") {
        Window win = Window::box(g, 6);
        CHECK_THROWS_AS(finite_section_inverse(CDMatrix(g, win)), dense::SingularMatrixError);
    }
}

TEST_CASE("inverse-closedness report on the geometric case") {
    auto g = make_zd_group(1);
    KernelSeries a = KernelSeries::identity(g) - KernelSeries::shift(g, DElem{{1}}, 0.5);
    InversionReport rep = inverse_closedness_report(a, WindowKind::Box, {16, 32, 64});
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.complete);
    CHECK(rep.stable);
    for (const WindowRecord& rec : rep.records) {
        CHECK(rec.ok);
        CHECK(rec.aggregate == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(rec.residual_norm <= 1e-10);
    }
    CHECK(rep.records.back().increment <= 1e-6);
    CHECK_THROWS_AS(inverse_closedness_report(a, WindowKind::Box, {16, 32}),
                    std::invalid_argument);
    CHECK_THROWS_AS(inverse_closedness_report(a, WindowKind::Box, {16, 32, 32}),
                    std::invalid_argument);
}

TEST_CASE("report flags singular windows and keeps going") {
    auto g = make_zd_group(1);
    // 1 - lambda_0 is identically zero: every section is singular
    KernelSeries a = KernelSeries::identity(g) - KernelSeries::shift(g, DElem{{0}}, 1.0);
    InversionReport rep = inverse_closedness_report(a, WindowKind::Box, {2, 4, 6});
    CHECK_FALSE(rep.complete);
    CHECK_FALSE(rep.stable);
    for (const WindowRecord& rec : rep.records) CHECK_FALSE(rec.ok);
}

TEST_CASE("small Heisenberg report runs end to end") {
    auto g = make_heisenberg_group();
    KernelSeries a = preset_operator("heisenberg-walk", g);
    // the readout collar has width 4, so radius 5 is the smallest window
    // with a nonempty interior
    InversionReport rep = inverse_closedness_report(a, WindowKind::WordBall, {5, 6, 7});
    CHECK(rep.complete);
    for (const WindowRecord& rec : rep.records) {
        CHECK(rec.ok);
        CHECK(rec.residual_norm <= 1e-10);
        CHECK(rec.aggregate > 0.0);
    }
}
