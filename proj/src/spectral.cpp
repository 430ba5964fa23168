#include "cdops/spectral.hpp"

#include <cmath>
#include <limits>

namespace cdops {

namespace {

PowerEntry make_entry(int n, double norm) {
    return {n, norm, std::pow(norm, 1.0 / static_cast<double>(n))};
}

}  // namespace

PowerSequence spectral_radius_cd(const KernelSeries& a, int n_max, double overflow_guard) {
    if (n_max < 1) throw std::invalid_argument("spectral_radius_cd: n_max must be >= 1");
    PowerSequence seq;
    KernelSeries power = a;
    for (int n = 1; n <= n_max; ++n) {
        double norm = power.cd_norm();
        seq.entries.push_back(make_entry(n, norm));
        if (norm > overflow_guard || norm == 0.0) {
            seq.overflowed = norm > overflow_guard;
            break;
        }
        if (n < n_max) power = power.conv(a);
    }
    return seq;
}

PowerSequence spectral_radius_cd(const CDMatrix& a, int n_max, double overflow_guard) {
    if (n_max < 1) throw std::invalid_argument("spectral_radius_cd: n_max must be >= 1");
    PowerSequence seq;
    // powers of the finite section: rows clipped each step, so the n-th
    // iterate equals the dense n-th power of the truncation
    CDMatrix section = a.clip_rows_to_window();
    CDMatrix power = section;
    for (int n = 1; n <= n_max; ++n) {
        double norm = power.cd_norm();
        seq.entries.push_back(make_entry(n, norm));
        if (norm > overflow_guard || norm == 0.0) {
            seq.overflowed = norm > overflow_guard;
            break;
        }
        if (n < n_max) power = power.mul(section).clip_rows_to_window();
    }
    return seq;
}

double spectral_radius_op(const CDMatrix& a) { return dense::spectral_radius(a.to_dense()); }

NeumannResult neumann_inverse(const CDMatrix& t_pert, double tol, int n_max) {
    if (tol <= 0.0) throw std::invalid_argument("neumann_inverse: tol must be positive");
    const double c = t_pert.cd_norm();
    if (c >= 1.0) {
        throw std::invalid_argument(
            "neumann_inverse: cd_norm(T) = " + std::to_string(c) +
            " >= 1; the series diverges in CD norm, use finite_section_inverse");
    }
    CDMatrix sum = CDMatrix::identity(t_pert.group(), t_pert.window());
    NeumannResult res{sum, 0, c == 0.0 ? 0.0 : c / (1.0 - c), c == 0.0};
    if (c == 0.0) {
        res.inverse = sum;
        return res;
    }
    CDMatrix section = t_pert.clip_rows_to_window();
    CDMatrix power = section;
    double power_bound = c;
    for (int n = 1; n <= n_max; ++n) {
        sum = sum.add(power);
        res.terms = n;
        res.tail_bound = power_bound * c / (1.0 - c);  // cd_norm(T)^(n+1) / (1 - cd_norm)
        if (res.tail_bound <= tol) {
            res.converged = true;
            break;
        }
        power = power.mul(section).clip_rows_to_window();
        power_bound *= c;
    }
    res.inverse = sum;
    return res;
}

FiniteSectionResult finite_section_inverse(const CDMatrix& a, double rcond_threshold) {
    FiniteSectionResult res;
    res.interior_margin = 4 * a.support_radius();
    dense::InverseResult inv = dense::invert(a.to_dense(), rcond_threshold);
    res.rcond = inv.rcond;
    res.profile = decay_profile(inv.inverse, a.window(), res.interior_margin);
    res.inverse = std::move(inv.inverse);
    return res;
}

namespace {

// op-norm of (A A^-1 - 1) restricted to interior columns, by power iteration
// on the explicit residual columns.
double interior_residual_norm(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& inv,
                              const Window& window, std::int64_t margin) {
    const int q = window.group()->tile_size();
    std::vector<int> cols;
    const auto& elems = window.elements();
    for (int j = 0; j < window.size(); ++j) {
        if (window.boundary_metric(elems[j]) <= window.radius() - margin) {
            for (int u = 0; u < q; ++u) cols.push_back(j * q + u);
        }
    }
    if (cols.empty()) return 0.0;
    Eigen::MatrixXcd sub(inv.rows(), static_cast<std::int64_t>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(c) = inv.col(cols[c]);
    Eigen::MatrixXcd resid = m * sub;
    for (std::size_t c = 0; c < cols.size(); ++c) resid(cols[c], c) -= 1.0;

    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(resid.cols());
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXcd y = resid.adjoint() * (resid * v);
        double next = y.norm();
        if (next == 0.0) return 0.0;
        v = y / next;
        if (std::abs(next - lambda) <= 1e-6 * std::max(1e-30, next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

}  // namespace

InversionReport inverse_closedness_report(const KernelSeries& a, WindowKind kind,
                                          const std::vector<int>& radii,
                                          double stability_threshold) {
    if (radii.size() < 3) {
        throw std::invalid_argument("inverse_closedness_report: need at least 3 windows");
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) {
            throw std::invalid_argument("inverse_closedness_report: radii must increase");
        }
    }
    InversionReport report;
    report.stability_threshold = stability_threshold;
    report.complete = true;
    double prev_aggregate = std::numeric_limits<double>::quiet_NaN();
    for (int radius : radii) {
        WindowRecord rec;
        rec.radius = radius;
        rec.increment = std::numeric_limits<double>::quiet_NaN();
        try {
            Window window = Window::make(a.group(), kind, radius);
            rec.size = window.size();
            CDMatrix section = CDMatrix::from_series(a, window);
            FiniteSectionResult fs = finite_section_inverse(section);
            rec.ok = true;
            rec.rcond = fs.rcond;
            rec.profile = std::move(fs.profile);
            rec.aggregate = rec.profile.aggregate();
            rec.residual_norm = interior_residual_norm(section.to_dense(), fs.inverse, window,
                                                       fs.interior_margin);
            if (!std::isnan(prev_aggregate) && prev_aggregate != 0.0) {
                rec.increment = std::abs(rec.aggregate - prev_aggregate) / prev_aggregate;
            }
            prev_aggregate = rec.aggregate;
        } catch (const dense::SingularMatrixError& e) {
            rec.ok = false;
            rec.error = e.what();
            report.complete = false;
            prev_aggregate = std::numeric_limits<double>::quiet_NaN();
        }
        report.records.push_back(std::move(rec));
    }
    const WindowRecord& last = report.records.back();
    report.stable = report.complete && last.ok && !std::isnan(last.increment) &&
                    last.increment < stability_threshold;
    return report;
}

}  // namespace cdops
