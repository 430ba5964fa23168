#pragma once

#include "cdops/cd_matrix.hpp"
#include "cdops/dense.hpp"

namespace cdops {

struct PowerEntry {
    int n = 0;
    double cd_norm = 0.0;
    double r = 0.0;  // cd_norm^(1/n)
};

struct PowerSequence {
    std::vector<PowerEntry> entries;
    bool overflowed = false;  // guard tripped before n_max
};

/// r_n = cd_norm(A^n)^(1/n) for a translation-invariant operator, evaluated
/// exactly in the diagonal algebra (no window truncation).
PowerSequence spectral_radius_cd(const KernelSeries& a, int n_max, double overflow_guard = 1e280);

/// Same sequence for a windowed matrix, by repeated mul (the finite-section
/// surrogate: equals the dense matrix powers of the truncation).
PowerSequence spectral_radius_cd(const CDMatrix& a, int n_max, double overflow_guard = 1e280);

/// Largest |eigenvalue| of the dense materialization on the window.
double spectral_radius_op(const CDMatrix& a);

struct NeumannResult {
    CDMatrix inverse;   // of 1 - T
    int terms = 0;      // highest power included
    double tail_bound = 0.0;
    bool converged = false;
};

/// Inverse of (1 - T) by the geometric series, valid for cd_norm(T) < 1;
/// the tail bound cd_norm(T)^(N+1) / (1 - cd_norm(T)) is driven below tol.
NeumannResult neumann_inverse(const CDMatrix& t_pert, double tol, int n_max);

struct FiniteSectionResult {
    Eigen::MatrixXcd inverse;
    DecayProfile profile;       // read on interior columns only
    double rcond = 0.0;
    std::int64_t interior_margin = 0;  // collar width used for the readout
};

/// Dense LU inverse of the finite section together with its decay profile.
/// The readout excludes a boundary collar of width 4 x support radius of A.
FiniteSectionResult finite_section_inverse(const CDMatrix& a, double rcond_threshold = 1e-12);

struct WindowRecord {
    int radius = 0;
    int size = 0;
    bool ok = false;
    std::string error;
    double aggregate = 0.0;
    double increment = 0.0;  // relative to the previous window; NaN for the first
    double residual_norm = 0.0;
    double rcond = 0.0;
    DecayProfile profile;
};

struct InversionReport {
    std::vector<WindowRecord> records;
    double stability_threshold = 0.0;
    bool complete = false;  // every window solved
    bool stable = false;    // final relative increment below the threshold
};

/// Finite-section inversion across a strictly increasing list of (>= 3)
/// window radii: per-window profile aggregates, relative increments, interior
/// residual norms, and the stability verdict.
InversionReport inverse_closedness_report(const KernelSeries& a, WindowKind kind,
                                          const std::vector<int>& radii,
                                          double stability_threshold = 0.02);

}  // namespace cdops
