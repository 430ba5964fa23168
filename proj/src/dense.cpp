#include "cdops/dense.hpp"

#include <complex>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cdops::dense {

InverseResult invert(const Eigen::MatrixXcd& m, double rcond_threshold) {
    if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    InverseResult res;
    res.inverse = m;
    if (n == 0) {
        res.rcond = 1.0;
        return res;
    }

    const double anorm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm

    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, res.inverse.data(), n, ipiv.data());
    if (info > 0) {
        throw SingularMatrixError("finite section is numerically singular (zero pivot)",
                                  std::numeric_limits<double>::infinity());
    }
    if (info < 0) throw std::runtime_error("zgetrf failed");

    double rcond = 0.0;
    info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, res.inverse.data(), n, anorm, &rcond);
    if (info != 0) throw std::runtime_error("zgecon failed");
    res.rcond = rcond;
    if (rcond < rcond_threshold) {
        throw SingularMatrixError("finite section is numerically singular (condition estimate " +
                                      std::to_string(1.0 / std::max(rcond, 1e-300)) + ")",
                                  1.0 / std::max(rcond, 1e-300));
    }

    info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, res.inverse.data(), n, ipiv.data());
    if (info != 0) throw std::runtime_error("zgetri failed");
    return res;
}

double spectral_radius(const Eigen::MatrixXcd& m, double hermitian_tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: square input required");
    if (m.rows() == 0) return 0.0;
    const double scale = m.cwiseAbs().maxCoeff();
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev <= hermitian_tol * std::max(1.0, scale)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("complex eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double op_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::MatrixXcd gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace cdops::dense
