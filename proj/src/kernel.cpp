#include "cdops/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace cdops {

KernelBlock::KernelBlock(Eigen::MatrixXcd grid, double weight)
    : grid_(std::move(grid)), weight_(weight) {
    if (grid_.rows() != grid_.cols()) throw std::invalid_argument("kernel grid must be square");
    if (weight_ <= 0.0) throw std::invalid_argument("kernel weight must be positive");
}

KernelBlock KernelBlock::zero(int q, double weight) {
    return KernelBlock(Eigen::MatrixXcd::Zero(q, q), weight);
}

KernelBlock KernelBlock::identity(int q, double weight) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(q, q) / weight;
    return KernelBlock(std::move(g), weight);
}

KernelBlock KernelBlock::constant(int q, double weight, cplx value) {
    return KernelBlock(Eigen::MatrixXcd::Constant(q, q, value), weight);
}

void KernelBlock::require_same_grid(const KernelBlock& other) const {
    if (q() != other.q() || weight_ != other.weight_) {
        throw std::invalid_argument("kernel grids do not match (q=" + std::to_string(q()) +
                                    " vs q=" + std::to_string(other.q()) + ")");
    }
}

KernelBlock KernelBlock::conv(const KernelBlock& other) const {
    require_same_grid(other);
    return KernelBlock(weight_ * (grid_ * other.grid_), weight_);
}

KernelBlock KernelBlock::adjoint() const {
    return KernelBlock(grid_.adjoint(), weight_);
}

KernelBlock KernelBlock::scaled(cplx factor) const {
    return KernelBlock(factor * grid_, weight_);
}

KernelBlock KernelBlock::operator+(const KernelBlock& other) const {
    require_same_grid(other);
    return KernelBlock(grid_ + other.grid_, weight_);
}

KernelBlock KernelBlock::operator-(const KernelBlock& other) const {
    require_same_grid(other);
    return KernelBlock(grid_ - other.grid_, weight_);
}

double KernelBlock::sup_norm() const {
    return grid_.size() == 0 ? 0.0 : grid_.cwiseAbs().maxCoeff();
}

double KernelBlock::l2_norm() const {
    return weight_ * grid_.norm();
}

double KernelBlock::k2inf_norm() const {
    double best = 0.0;
    for (int y = 0; y < grid_.cols(); ++y) {
        best = std::max(best, std::sqrt(weight_) * grid_.col(y).norm());
    }
    return best;
}

Eigen::VectorXcd KernelBlock::apply(const Eigen::VectorXcd& xi) const {
    if (xi.size() != grid_.cols()) throw std::invalid_argument("kernel/vector size mismatch");
    return weight_ * (grid_ * xi);
}

PowerIterResult KernelBlock::op_norm(double tol, int iter_max) const {
    if (tol <= 0.0) throw std::invalid_argument("op_norm: tol must be positive");
    PowerIterResult res;
    if (sup_norm() == 0.0) {
        res.converged = true;
        return res;
    }
    const int n = q();
    KernelBlock ata = adjoint().conv(*this);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.01 * std::sin(i + 1.0), 0.0);
    v.normalize();
    double prev = 0.0;
    for (int it = 1; it <= iter_max; ++it) {
        Eigen::VectorXcd y = ata.apply(v);
        double lambda = y.norm();
        res.iterations = it;
        res.last_gap = std::abs(lambda - prev);
        if (lambda == 0.0) {
            res.value = 0.0;
            res.converged = true;
            return res;
        }
        v = y / lambda;
        if (it > 1 && res.last_gap <= tol * std::max(1.0, lambda)) {
            res.value = std::sqrt(lambda);
            res.converged = true;
            return res;
        }
        prev = lambda;
    }
    res.value = std::sqrt(prev);
    return res;
}

}  // namespace cdops
