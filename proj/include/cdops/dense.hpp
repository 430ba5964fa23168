#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace cdops::dense {

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError(const std::string& msg, double condition)
        : std::runtime_error(msg), condition(condition) {}
    double condition;
};

struct InverseResult {
    Eigen::MatrixXcd inverse;
    double rcond = 0.0;  // 1-norm reciprocal condition estimate
};

/// LU inversion with partial pivoting (LAPACK), with a reciprocal-condition
/// estimate. Throws SingularMatrixError when rcond falls below the threshold.
InverseResult invert(const Eigen::MatrixXcd& m, double rcond_threshold = 1e-12);

/// Largest |eigenvalue|. Hermitian inputs (detected entrywise) take the
/// symmetric path, everything else the general complex eigensolver.
double spectral_radius(const Eigen::MatrixXcd& m, double hermitian_tol = 1e-12);

/// Largest singular value, via the symmetric eigensolver on m^H m.
double op_norm(const Eigen::MatrixXcd& m);

}  // namespace cdops::dense
