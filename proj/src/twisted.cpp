#include "cdops/twisted.hpp"

#include <stdexcept>

namespace cdops {

TwistedElement::TwistedElement(GroupPtr group, Window window)
    : group_(std::move(group)), window_(std::move(window)) {}

TwistedElement TwistedElement::delta(const GroupPtr& group, const Window& window, const DElem& h,
                                     const std::map<DElem, KernelBlock>& fiber) {
    TwistedElement f(group, window);
    for (const auto& [j, b] : fiber) f.set_block(h, j, b);
    return f;
}

TwistedElement TwistedElement::delta_const(const GroupPtr& group, const Window& window,
                                           const DElem& h, const KernelBlock& block) {
    TwistedElement f(group, window);
    for (const DElem& j : window.elements()) f.set_block(h, j, block);
    return f;
}

TwistedElement TwistedElement::unit(const GroupPtr& group, const Window& window) {
    return delta_const(group, window, group->d_id(),
                       KernelBlock::identity(group->tile_size(), group->haar_weight()));
}

void TwistedElement::set_block(const DElem& h, const DElem& j, const KernelBlock& block) {
    if (!window_.contains(j)) throw std::invalid_argument("fiber index outside window");
    if (block.is_zero()) {
        auto it = fib_.find(h);
        if (it != fib_.end()) {
            it->second.erase(j);
            if (it->second.empty()) fib_.erase(it);
        }
        return;
    }
    fib_[h].insert_or_assign(j, block);
}

const KernelBlock* TwistedElement::block_at(const DElem& h, const DElem& j) const {
    auto it = fib_.find(h);
    if (it == fib_.end()) return nullptr;
    auto jt = it->second.find(j);
    return jt == it->second.end() ? nullptr : &jt->second;
}

TwistedElement TwistedElement::star(const TwistedElement& other) const {
    if (!same_tiling(group_, other.group_) || !(window_ == other.window_)) {
        throw std::invalid_argument("twisted elements live on different tilings or windows");
    }
    TwistedElement out(group_, window_);
    out.fib_ = detail::convolve_diag_maps(*group_, fib_, other.fib_);
    return out;
}

TwistedElement TwistedElement::involution() const {
    TwistedElement out(group_, window_);
    out.fib_ = detail::adjoint_diag_map(*group_, window_, fib_);
    return out;
}

TwistedElement TwistedElement::scaled(cplx factor) const {
    TwistedElement out = *this;
    for (auto& [h, cols] : out.fib_) {
        for (auto& [j, b] : cols) b = b.scaled(factor);
    }
    return out;
}

TwistedElement TwistedElement::operator+(const TwistedElement& other) const {
    if (!same_tiling(group_, other.group_) || !(window_ == other.window_)) {
        throw std::invalid_argument("twisted elements live on different tilings or windows");
    }
    TwistedElement out = *this;
    for (const auto& [h, cols] : other.fib_) {
        for (const auto& [j, b] : cols) {
            auto [it, inserted] = out.fib_[h].emplace(j, b);
            if (!inserted) it->second = it->second + b;
        }
    }
    detail::prune_zero_blocks(out.fib_);
    return out;
}

CDMatrix TwistedElement::represent() const { return CDMatrix(group_, window_, fib_); }

double intertwiner_check(const TwistedElement& f) {
    const TiledGroup& g = *f.group();
    const Window& win = f.window();
    const int nw = win.size();
    const int q = g.tile_size();
    const double w = g.haar_weight();
    const auto& elems = win.elements();
    const std::int64_t dim = static_cast<std::int64_t>(nw) * nw * q;
    if (dim > 4000) throw std::invalid_argument("doubled window too large for intertwiner check");

    auto flat = [&](int x, int z) { return (static_cast<std::int64_t>(x) * nw + z) * q; };

    Eigen::MatrixXcd r_omega = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd lambda_m = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);

    for (int xi = 0; xi < nw; ++xi) {
        const DElem& x = elems[xi];
        for (int zi = 0; zi < nw; ++zi) {
            const DElem& z = elems[zi];
            // S xi(x,z) = xi(xz, z): permutation of the first coordinate
            int xz = win.index_of(g.d_mul(x, z));
            if (xz >= 0) {
                s.block(flat(xi, zi), flat(xz, zi), q, q) = Eigen::MatrixXcd::Identity(q, q);
            }
            for (const auto& [y, fiber] : f.fibers()) {
                int xp = win.index_of(g.d_mul(g.d_inv(y), x));
                if (xp < 0) continue;
                // R^omega(F) xi(x,z) = sum_y F(y)(y^-1 x) xi(y^-1 x, z)
                auto it = fiber.find(elems[xp]);
                if (it != fiber.end()) {
                    r_omega.block(flat(xi, zi), flat(xp, zi), q, q) += w * it->second.grid();
                }
                // lambda^M(F) eta(x,z) = sum_y F(y)((y^-1 x) z) eta(y^-1 x, z)
                auto jt = fiber.find(g.d_mul(elems[xp], z));
                if (jt != fiber.end()) {
                    lambda_m.block(flat(xi, zi), flat(xp, zi), q, q) += w * jt->second.grid();
                }
            }
        }
    }

    // interior rows: (x,z) whose supp(F)-shifts stay inside the window
    std::vector<std::int64_t> interior;
    for (int xi = 0; xi < nw; ++xi) {
        const DElem& x = elems[xi];
        for (int zi = 0; zi < nw; ++zi) {
            const DElem& z = elems[zi];
            if (!win.contains(g.d_mul(x, z))) continue;
            bool ok = true;
            for (const auto& [y, fiber] : f.fibers()) {
                DElem yx = g.d_mul(g.d_inv(y), x);
                if (!win.contains(yx) || !win.contains(g.d_mul(yx, z))) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                for (int u = 0; u < q; ++u) interior.push_back(flat(xi, zi) + u);
            }
        }
    }
    if (interior.empty()) {
        throw std::invalid_argument("window too small: no interior rows for supp(F)");
    }

    Eigen::MatrixXcd resid = s * r_omega - lambda_m * s;
    double worst = 0.0;
    for (std::int64_t row : interior) worst = std::max(worst, resid.row(row).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace cdops
