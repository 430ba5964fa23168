#include "cdops/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "cdops/rng.hpp"
#include "cdops/spectral.hpp"
#include "cdops/tiling.hpp"
#include "cdops/twisted.hpp"

namespace cdops {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_report(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void report_header(std::ostream& out, const ExperimentConfig& cfg) {
    out << "run experiment=" << experiment_name(cfg.kind) << " group=\"" << cfg.group << "\""
        << " seed=" << cfg.seed;
    if (!cfg.preset.empty()) out << " preset=" << cfg.preset;
    out << "\n";
}

DElem random_window_element(Rng& rng, const Window& win) {
    return win.elements()[static_cast<std::size_t>(
        rng.uniform_int(0, win.size() - 1))];
}

GElem random_grid_point(Rng& rng, const Window& win) {
    const TiledGroup& g = *win.group();
    DElem h = random_window_element(rng, win);
    int u = static_cast<int>(rng.uniform_int(0, g.tile_size() - 1));
    return g.g_mul(g.rep(h), g.tile_point(u));
}

/// Random matrix with a few fully populated random diagonals, labels drawn
/// from the half-radius box of the window.
CDMatrix random_matrix(Rng& rng, const GroupPtr& group, const Window& win, int n_labels) {
    const int q = group->tile_size();
    const double w = group->haar_weight();
    Window label_box = Window::make(group, win.window_kind(), std::max(1, win.radius() / 2));
    detail::DiagMap diag;
    for (int i = 0; i < n_labels; ++i) {
        DElem label = random_window_element(rng, label_box);
        auto& cols = diag[label];
        for (const DElem& j : win.elements()) {
            if (!win.contains(group->d_mul(label, j))) continue;
            cols.insert_or_assign(j, rng.random_block(q, w));
        }
        if (cols.empty()) diag.erase(label);
    }
    return CDMatrix(group, win, std::move(diag));
}

TwistedElement random_twisted(Rng& rng, const GroupPtr& group, const Window& win, int n_labels) {
    const int q = group->tile_size();
    const double w = group->haar_weight();
    Window label_box = Window::make(group, win.window_kind(), std::max(1, win.radius() / 2));
    TwistedElement f(group, win);
    for (int i = 0; i < n_labels; ++i) {
        DElem h = random_window_element(rng, label_box);
        for (const DElem& j : win.elements()) f.set_block(h, j, rng.random_block(q, w));
    }
    return f;
}

// midpoint-rule convergence probe for the continuum tile: convolve a smooth
// non-periodic kernel at resolution q and compare against a fine reference
// quadrature; the error ratio between q and 2q approaches 4
double conv_probe_error(int q) {
    auto f = [](double x, double y) { return std::exp(x - 0.5 * y) + x * y; };
    auto point = [&](int q_, int k) { return (2.0 * k + 1.0 - q_) / (2.0 * q_); };
    const int fine = 4096;
    double err = 0.0;
    for (int xi = 0; xi < q; ++xi) {
        for (int yi = 0; yi < q; ++yi) {
            double x = point(q, xi), y = point(q, yi);
            double coarse = 0.0;
            for (int zi = 0; zi < q; ++zi) {
                double z = point(q, zi);
                coarse += f(x, z) * f(z, y);
            }
            coarse /= q;
            double ref = 0.0;
            for (int zi = 0; zi < fine; ++zi) {
                double z = point(fine, zi);
                ref += f(x, z) * f(z, y);
            }
            ref /= fine;
            err = std::max(err, std::abs(coarse - ref));
        }
    }
    return err;
}

// ---------------------------------------------------------------------------

RunResult run_norms(const ExperimentConfig& cfg, const GroupPtr& group) {
    Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
    KernelSeries series = build_operator(cfg, group);
    CDMatrix a = CDMatrix::from_series(series, win);
    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    double cd = a.cd_norm();
    PowerIterResult op = a.op_norm_estimate(cfg.tol * 1e-3, 50000);
    report << "window radius=" << win.radius() << " size=" << win.size() << "\n";
    report << "cd_norm " << fmt(cd) << "\n";
    report << "op_norm " << fmt(op.value) << " converged=" << (op.converged ? 1 : 0)
           << " iterations=" << op.iterations << "\n";
    for (const auto& [label, block] : series.terms()) {
        report << "block label=" << group->d_format(label) << " sup=" << fmt(block.sup_norm())
               << " l2=" << fmt(block.l2_norm()) << " k2inf=" << fmt(block.k2inf_norm()) << "\n";
    }
    if (group->grid_resolution() > 0) {
        int q = group->grid_resolution();
        double e1 = conv_probe_error(q), e2 = conv_probe_error(2 * q);
        report << "conv-refinement q=" << q << " err=" << fmt(e1) << " err_2q=" << fmt(e2)
               << " ratio=" << fmt(e2 > 0 ? e1 / e2 : 0.0) << "\n";
    }
    if (!op.converged) {
        return {kExitNumericalFailure, "op-norm power iteration did not converge"};
    }
    if (op.value > cd + cfg.tol) {
        return {kExitInvariantViolation, "operator norm exceeds CD norm"};
    }
    return {kExitOk, "cd_norm=" + fmt(cd) + " op_norm=" + fmt(op.value)};
}

RunResult run_multiply_check(const ExperimentConfig& cfg, const GroupPtr& group) {
    Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
    Rng rng(cfg.seed);
    double worst_mul = 0.0, worst_apply = 0.0, worst_adj = 0.0;
    int violations = 0;
    const int q = group->tile_size();
    for (int t = 0; t < cfg.trials; ++t) {
        CDMatrix a = random_matrix(rng, group, win, 3);
        CDMatrix b = random_matrix(rng, group, win, 3);
        Eigen::MatrixXcd da = a.to_dense(), db = b.to_dense();
        double scale = std::max(1.0, da.cwiseAbs().maxCoeff() * db.cwiseAbs().maxCoeff());

        double dev_mul = (a.mul(b).to_dense() - da * db).cwiseAbs().maxCoeff() / scale;
        double dev_adj = (a.adjoint().to_dense() - da.adjoint()).cwiseAbs().maxCoeff();

        BlockVector xi(win, q);
        for (int i = 0; i < win.size(); ++i) {
            for (int x = 0; x < q; ++x) xi.block(i)[x] = rng.complex_box();
        }
        double dev_apply =
            (a.apply(xi).flatten() - da * xi.flatten()).cwiseAbs().maxCoeff() / scale;

        worst_mul = std::max(worst_mul, dev_mul);
        worst_adj = std::max(worst_adj, dev_adj);
        worst_apply = std::max(worst_apply, dev_apply);
        if (dev_mul > cfg.tol || dev_adj > cfg.tol || dev_apply > cfg.tol) ++violations;
        double sub = a.mul(b).cd_norm() - a.cd_norm() * b.cd_norm() * (1.0 + 1e-12);
        if (sub > 0.0) ++violations;
    }
    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    report << "trials " << cfg.trials << "\n";
    report << "max_mul_deviation " << fmt(worst_mul) << "\n";
    report << "max_adjoint_deviation " << fmt(worst_adj) << "\n";
    report << "max_apply_deviation " << fmt(worst_apply) << "\n";
    report << "violations " << violations << "\n";
    if (violations > 0) {
        return {kExitInvariantViolation,
                "dense-oracle violations in " + std::to_string(violations) + " trials"};
    }
    return {kExitOk, "max deviation " + fmt(std::max({worst_mul, worst_adj, worst_apply}))};
}

RunResult run_invert(const ExperimentConfig& cfg, const GroupPtr& group) {
    KernelSeries series = build_operator(cfg, group);
    InversionReport rep =
        inverse_closedness_report(series, cfg.window_kind, cfg.radii, cfg.stability_threshold);

    auto csv = open_report(cfg, "profile.csv");
    csv << "window,label,d\n";
    for (const WindowRecord& rec : rep.records) {
        for (const auto& [label, v] : rec.profile.d) {
            csv << rec.radius << "," << group->d_format(label) << "," << fmt(v) << "\n";
        }
    }

    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    for (const WindowRecord& rec : rep.records) {
        report << "window radius=" << rec.radius << " size=" << rec.size << " ok=" << rec.ok;
        if (rec.ok) {
            report << " aggregate=" << fmt(rec.aggregate) << " increment=" << fmt(rec.increment)
                   << " residual=" << fmt(rec.residual_norm) << " rcond=" << fmt(rec.rcond);
        } else {
            report << " error=\"" << rec.error << "\"";
        }
        report << "\n";
    }

    // Neumann cross-check whenever the series inverse converges in CD norm
    // and the final window is small enough for the series powers.
    KernelSeries pert = KernelSeries::identity(group) - series;
    double pert_norm = pert.cd_norm();
    if (pert_norm > 0.0 && pert_norm < 1.0 && rep.records.back().ok &&
        rep.records.back().size <= 300) {
        Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
        CDMatrix t = CDMatrix::from_series(pert, win);
        NeumannResult nm = neumann_inverse(t, cfg.tol * 1e-2, 4096);
        double worst = 0.0;
        const DecayProfile& fs = rep.records.back().profile;
        DecayProfile np = nm.inverse.profile();
        for (const auto& [label, v] : fs.d) {
            auto it = np.d.find(label);
            double nv = it == np.d.end() ? 0.0 : it->second;
            worst = std::max(worst, std::abs(nv - v));
        }
        report << "neumann terms=" << nm.terms << " tail_bound=" << fmt(nm.tail_bound)
               << " max_profile_deviation=" << fmt(worst) << "\n";
    }
    report << "verdict " << (rep.stable ? "stable" : "unstable")
           << " threshold=" << fmt(rep.stability_threshold)
           << " final_increment=" << fmt(rep.records.back().increment) << "\n";

    if (!rep.complete) return {kExitNumericalFailure, "a finite section was singular"};
    return {kExitOk, std::string("verdict ") + (rep.stable ? "stable" : "unstable") +
                         ", final aggregate " + fmt(rep.records.back().aggregate)};
}

RunResult run_spectral(const ExperimentConfig& cfg, const GroupPtr& group) {
    KernelSeries series = build_operator(cfg, group);
    PowerSequence seq = spectral_radius_cd(series, cfg.n_max);
    Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
    double sr_op = spectral_radius_op(CDMatrix::from_series(series, win));
    bool self_adjoint = series.is_self_adjoint(1e-14);

    auto csv = open_report(cfg, "spectral.csv");
    csv << "n,cd_norm,r_n\n";
    for (const PowerEntry& e : seq.entries) {
        csv << e.n << "," << fmt(e.cd_norm) << "," << fmt(e.r) << "\n";
    }

    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    report << "window radius=" << win.radius() << " size=" << win.size() << "\n";
    report << "self_adjoint " << (self_adjoint ? 1 : 0) << "\n";
    report << "spectral_radius_op " << fmt(sr_op) << "\n";
    report << "r_terminal n=" << seq.entries.back().n << " value=" << fmt(seq.entries.back().r)
           << "\n";
    if (seq.overflowed) report << "overflow-guard tripped\n";
    bool ok = true;
    if (self_adjoint) {
        double prev_gap = std::numeric_limits<double>::infinity();
        for (const PowerEntry& e : seq.entries) {
            double gap = e.r - sr_op;
            if (sr_op > e.r + 1e-9) ok = false;          // operator norm must not exceed r_n
            if (gap > prev_gap + 1e-9) ok = false;       // gaps must not grow
            prev_gap = gap;
        }
        report << "terminal_gap " << fmt(seq.entries.back().r - sr_op) << " relative="
               << fmt(sr_op > 0 ? (seq.entries.back().r - sr_op) / sr_op : 0.0) << "\n";
    }
    if (seq.overflowed) return {kExitNumericalFailure, "cd-norm overflow while powering"};
    if (!ok) return {kExitInvariantViolation, "spectral-radius ordering violated"};
    return {kExitOk, "r_" + std::to_string(seq.entries.back().n) + "=" +
                         fmt(seq.entries.back().r) + " sr_op=" + fmt(sr_op)};
}

RunResult run_folner(const ExperimentConfig& cfg, const GroupPtr& group) {
    std::vector<DElem> k_set;
    for (auto& [h, d] : word_ball_distances(*group, 1)) k_set.push_back(h);

    auto csv = open_report(cfg, "folner.csv");
    csv << "eps,x,sym_diff,ue_measure,ratio,bound\n";
    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);

    bool all_found = true;
    std::string summary;
    for (double eps : cfg.eps) {
        FolnerResult res = folner_set(k_set, eps, *group, cfg.folner_cap);
        report << "folner eps=" << fmt(eps) << " found=" << res.found
               << " box_radius=" << res.box_radius << " set_size=" << res.set.size()
               << " ue_measure=" << fmt(res.set_measure) << " worst_ratio=" << fmt(res.worst_ratio)
               << "\n";
        for (const FolnerTest& t : res.certificate) {
            csv << fmt(eps) << "," << group->g_format(t.x) << "," << fmt(t.sym_diff) << ","
                << fmt(t.ue_measure) << "," << fmt(t.ratio) << "," << fmt(t.bound) << "\n";
        }
        all_found = all_found && res.found;
        if (!summary.empty()) summary += "; ";
        summary += "eps=" + fmt(eps) + (res.found ? " r=" + std::to_string(res.box_radius)
                                                  : " exhausted");
    }
    if (!all_found) return {kExitNumericalFailure, "Folner search exhausted: " + summary};
    return {kExitOk, summary};
}

RunResult run_overlap(const ExperimentConfig& cfg, const GroupPtr& group) {
    Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
    Rng rng(cfg.seed);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
        GElem z = random_grid_point(rng, win);
        std::vector<GElem> K, L;
        int nk = static_cast<int>(rng.uniform_int(1, 6));
        int nl = static_cast<int>(rng.uniform_int(1, 6));
        for (int i = 0; i < nk; ++i) K.push_back(random_grid_point(rng, win));
        for (int i = 0; i < nl; ++i) L.push_back(random_grid_point(rng, win));
        OverlapResult res = overlap_count(z, K, L, *group);
        if (static_cast<double>(res.count) > res.bound + 1e-9) ++violations;
        if (res.bound > 0.0) {
            worst_ratio = std::max(worst_ratio, static_cast<double>(res.count) / res.bound);
        }
    }
    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    report << "trials " << cfg.trials << "\n";
    report << "violations " << violations << "\n";
    report << "worst_count_to_bound_ratio " << fmt(worst_ratio) << "\n";
    if (violations > 0) {
        return {kExitInvariantViolation, std::to_string(violations) + " overlap bound violations"};
    }
    return {kExitOk, "worst count/bound ratio " + fmt(worst_ratio)};
}

RunResult run_intertwine(const ExperimentConfig& cfg, const GroupPtr& group) {
    Window win = Window::make(group, cfg.window_kind, cfg.radii.back());
    Rng rng(cfg.seed);
    double worst = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
        TwistedElement f = random_twisted(rng, group, win, 1 + static_cast<int>(t % 2));
        worst = std::max(worst, intertwiner_check(f));
    }
    auto report = open_report(cfg, "report.txt");
    report_header(report, cfg);
    report << "trials " << cfg.trials << "\n";
    report << "max_residual " << fmt(worst) << "\n";
    if (worst > cfg.tol) {
        return {kExitInvariantViolation, "intertwiner residual " + fmt(worst)};
    }
    return {kExitOk, "max intertwiner residual " + fmt(worst)};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    GroupPtr group = make_group(cfg.group);
    try {
        switch (cfg.kind) {
            case ExperimentKind::Norms: return run_norms(cfg, group);
            case ExperimentKind::MultiplyCheck: return run_multiply_check(cfg, group);
            case ExperimentKind::Invert: return run_invert(cfg, group);
            case ExperimentKind::Spectral: return run_spectral(cfg, group);
            case ExperimentKind::Folner: return run_folner(cfg, group);
            case ExperimentKind::Overlap: return run_overlap(cfg, group);
            case ExperimentKind::Intertwine: return run_intertwine(cfg, group);
        }
        return {kExitValidationError, "unknown experiment"};
    } catch (const dense::SingularMatrixError& e) {
        return {kExitNumericalFailure, e.what()};
    } catch (const ConfigValidationError& e) {
        return {kExitValidationError, e.what()};
    } catch (const std::invalid_argument& e) {
        return {kExitValidationError, e.what()};
    } catch (const std::runtime_error& e) {
        return {kExitNumericalFailure, e.what()};
    }
}

}  // namespace cdops
