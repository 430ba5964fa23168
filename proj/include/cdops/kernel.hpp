#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cdops {

using cplx = std::complex<double>;

struct PowerIterResult {
    double value = 0.0;
    bool converged = false;
    double last_gap = 0.0;
    int iterations = 0;
};

/// Discretized kernel a(x,y) on U x U: a q x q complex grid of kernel values
/// over the tile sample points, together with the Haar cell weight w = 1/q.
///
/// Convolution is the Haar-weighted product (a*b)(x,y) = w sum_z a(x,z) b(z,y),
/// exact for finite tiles and the midpoint rule for grid tiles. The identity
/// of the convolution algebra is e(x,y) = (1/w)[x == y].
class KernelBlock {
public:
    KernelBlock() = default;
    KernelBlock(Eigen::MatrixXcd grid, double weight);

    static KernelBlock zero(int q, double weight);
    static KernelBlock identity(int q, double weight);
    static KernelBlock constant(int q, double weight, cplx value);

    int q() const { return static_cast<int>(grid_.rows()); }
    double weight() const { return weight_; }
    const Eigen::MatrixXcd& grid() const { return grid_; }
    Eigen::MatrixXcd& grid() { return grid_; }

    KernelBlock conv(const KernelBlock& other) const;
    KernelBlock adjoint() const;  // a*(x,y) = conj(a(y,x))
    KernelBlock scaled(cplx factor) const;
    KernelBlock operator+(const KernelBlock& other) const;
    KernelBlock operator-(const KernelBlock& other) const;

    double sup_norm() const;    // max over the grid
    double l2_norm() const;     // Haar-weighted Frobenius norm
    double k2inf_norm() const;  // max over columns y of the weighted column L2 norm

    bool is_zero() const { return sup_norm() == 0.0; }

    /// Action on an L2(U) vector: (a xi)(x) = w sum_y a(x,y) xi(y).
    Eigen::VectorXcd apply(const Eigen::VectorXcd& xi) const;

    /// Operator norm of the kernel on L2(U), i.e. sqrt of the spectral radius
    /// of a* conv a, estimated by power iteration.
    PowerIterResult op_norm(double tol = 1e-12, int iter_max = 10000) const;

    friend bool operator==(const KernelBlock& a, const KernelBlock& b) {
        return a.weight_ == b.weight_ && a.grid_.rows() == b.grid_.rows() &&
               (a.grid_.array() == b.grid_.array()).all();
    }

private:
    void require_same_grid(const KernelBlock& other) const;

    Eigen::MatrixXcd grid_;
    double weight_ = 1.0;
};

}  // namespace cdops
