#include "cdops/cd_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdops {

namespace detail {

DiagMap convolve_diag_maps(const TiledGroup& group, const DiagMap& a, const DiagMap& b) {
    DiagMap out;
    for (const auto& [la, cols_a] : a) {
        for (const auto& [lb, cols_b] : b) {
            DElem h = group.d_mul(la, lb);
            DElem lb_inv = group.d_inv(lb);
            auto* out_cols = &out[h];
            // match A's column k = lb * j against B's column j
            for (const auto& [k, block_a] : cols_a) {
                DElem j = group.d_mul(lb_inv, k);
                auto it = cols_b.find(j);
                if (it == cols_b.end()) continue;
                KernelBlock term = block_a.conv(it->second);
                auto [slot, inserted] = out_cols->emplace(j, term);
                if (!inserted) slot->second = slot->second + term;
            }
            if (out_cols->empty()) out.erase(h);
        }
    }
    prune_zero_blocks(out);
    return out;
}

DiagMap adjoint_diag_map(const TiledGroup& group, const Window& window, const DiagMap& a) {
    DiagMap out;
    for (const auto& [l, cols] : a) {
        DElem linv = group.d_inv(l);
        for (const auto& [c, block] : cols) {
            DElem j = group.d_mul(l, c);
            if (!window.contains(j)) continue;
            out[linv].emplace(j, block.adjoint());
        }
    }
    prune_zero_blocks(out);
    return out;
}

double diag_map_norm(const DiagMap& a) {
    double total = 0.0;
    for (const auto& [l, cols] : a) {
        double sup = 0.0;
        for (const auto& [j, block] : cols) sup = std::max(sup, block.sup_norm());
        total += sup;
    }
    return total;
}

void prune_zero_blocks(DiagMap& a) {
    for (auto it = a.begin(); it != a.end();) {
        auto& cols = it->second;
        for (auto jt = cols.begin(); jt != cols.end();) {
            if (jt->second.is_zero()) {
                jt = cols.erase(jt);
            } else {
                ++jt;
            }
        }
        if (cols.empty()) {
            it = a.erase(it);
        } else {
            ++it;
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BlockVector
// ---------------------------------------------------------------------------

BlockVector::BlockVector(Window window, int q) : window_(std::move(window)), q_(q) {
    blocks_.assign(window_.size(), Eigen::VectorXcd::Zero(q));
}

BlockVector BlockVector::indicator(const Window& window, const DElem& j, int q, int u) {
    BlockVector xi(window, q);
    int idx = window.index_of(j);
    if (idx < 0) throw std::invalid_argument("indicator index outside window");
    xi.blocks_[idx][u] = 1.0;
    return xi;
}

double BlockVector::norm() const {
    double w = window_.group()->haar_weight();
    double s = 0.0;
    for (const auto& b : blocks_) s += b.squaredNorm();
    return std::sqrt(w * s);
}

Eigen::VectorXcd BlockVector::flatten() const {
    Eigen::VectorXcd flat(static_cast<std::int64_t>(blocks_.size()) * q_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) flat.segment(i * q_, q_) = blocks_[i];
    return flat;
}

BlockVector BlockVector::from_flat(const Window& window, int q, const Eigen::VectorXcd& flat) {
    if (flat.size() != static_cast<std::int64_t>(window.size()) * q) {
        throw std::invalid_argument("flat vector size does not match window");
    }
    BlockVector xi(window, q);
    for (int i = 0; i < window.size(); ++i) xi.blocks_[i] = flat.segment(i * q, q);
    return xi;
}

// ---------------------------------------------------------------------------
// KernelSeries
// ---------------------------------------------------------------------------

KernelSeries::KernelSeries(GroupPtr group) : group_(std::move(group)) {}

KernelSeries KernelSeries::identity(const GroupPtr& group) {
    KernelSeries s(group);
    s.add_term(group->d_id(), KernelBlock::identity(group->tile_size(), group->haar_weight()));
    return s;
}

KernelSeries KernelSeries::shift(const GroupPtr& group, const DElem& label, cplx coef) {
    KernelSeries s(group);
    s.add_term(label,
               KernelBlock::identity(group->tile_size(), group->haar_weight()).scaled(coef));
    return s;
}

void KernelSeries::add_term(const DElem& label, const KernelBlock& block) {
    auto [it, inserted] = terms_.emplace(label, block);
    if (!inserted) it->second = it->second + block;
    if (it->second.is_zero()) terms_.erase(it);
}

KernelSeries KernelSeries::conv(const KernelSeries& other) const {
    if (!same_tiling(group_, other.group_)) {
        throw std::invalid_argument("series over different groups");
    }
    KernelSeries out(group_);
    for (const auto& [la, ba] : terms_) {
        for (const auto& [lb, bb] : other.terms_) {
            out.add_term(group_->d_mul(la, lb), ba.conv(bb));
        }
    }
    return out;
}

KernelSeries KernelSeries::adjoint() const {
    KernelSeries out(group_);
    for (const auto& [l, b] : terms_) out.add_term(group_->d_inv(l), b.adjoint());
    return out;
}

KernelSeries KernelSeries::scaled(cplx factor) const {
    KernelSeries out(group_);
    for (const auto& [l, b] : terms_) out.add_term(l, b.scaled(factor));
    return out;
}

KernelSeries KernelSeries::operator+(const KernelSeries& other) const {
    KernelSeries out = *this;
    for (const auto& [l, b] : other.terms_) out.add_term(l, b);
    return out;
}

KernelSeries KernelSeries::operator-(const KernelSeries& other) const {
    return *this + other.scaled(-1.0);
}

double KernelSeries::cd_norm() const {
    double s = 0.0;
    for (const auto& [l, b] : terms_) s += b.sup_norm();
    return s;
}

bool KernelSeries::is_self_adjoint(double tol) const {
    KernelSeries diff = *this - adjoint();
    return diff.cd_norm() <= tol;
}

std::int64_t KernelSeries::support_radius(WindowKind kind) const {
    std::int64_t r = 0;
    for (const auto& [l, b] : terms_) {
        r = std::max(r, kind == WindowKind::Box ? group_->d_box_norm(l)
                                                : group_->d_word_length(l));
    }
    return r;
}

// ---------------------------------------------------------------------------
// CDMatrix
// ---------------------------------------------------------------------------

CDMatrix::CDMatrix(GroupPtr group, Window window)
    : group_(std::move(group)), window_(std::move(window)) {}

CDMatrix::CDMatrix(GroupPtr group, Window window, detail::DiagMap diagonals)
    : group_(std::move(group)), window_(std::move(window)), diag_(std::move(diagonals)) {
    detail::prune_zero_blocks(diag_);
}

CDMatrix CDMatrix::identity(const GroupPtr& group, const Window& window) {
    return from_series(KernelSeries::identity(group), window);
}

CDMatrix CDMatrix::shift(const GroupPtr& group, const Window& window, const DElem& label,
                         cplx coef) {
    return from_series(KernelSeries::shift(group, label, coef), window);
}

CDMatrix CDMatrix::from_series(const KernelSeries& series, const Window& window) {
    CDMatrix out(series.group(), window);
    const TiledGroup& g = *series.group();
    for (const auto& [label, block] : series.terms()) {
        auto& cols = out.diag_[label];
        for (const DElem& j : window.elements()) {
            if (!window.contains(g.d_mul(label, j))) continue;  // finite section
            cols.emplace(j, block);
        }
        if (cols.empty()) out.diag_.erase(label);
    }
    return out;
}

CDMatrix CDMatrix::from_dense(const Eigen::MatrixXcd& m, const GroupPtr& group,
                              const Window& window) {
    const int q = group->tile_size();
    const int n = window.size();
    if (m.rows() != static_cast<std::int64_t>(n) * q || m.cols() != m.rows()) {
        throw std::invalid_argument("dense matrix size does not match window");
    }
    const double w = group->haar_weight();
    CDMatrix out(group, window);
    const auto& elems = window.elements();
    for (int jc = 0; jc < n; ++jc) {
        for (int ir = 0; ir < n; ++ir) {
            Eigen::MatrixXcd blk = m.block(ir * q, jc * q, q, q) / w;
            if (blk.cwiseAbs().maxCoeff() == 0.0) continue;
            DElem label = group->d_mul(elems[ir], group->d_inv(elems[jc]));
            out.diag_[label].emplace(elems[jc], KernelBlock(std::move(blk), w));
        }
    }
    return out;
}

const KernelBlock* CDMatrix::block_at(const DElem& label, const DElem& column) const {
    auto it = diag_.find(label);
    if (it == diag_.end()) return nullptr;
    auto jt = it->second.find(column);
    return jt == it->second.end() ? nullptr : &jt->second;
}

void CDMatrix::require_compatible(const CDMatrix& other) const {
    if (!same_tiling(group_, other.group_) || !(window_ == other.window_)) {
        throw std::invalid_argument("matrices live on different tilings or windows");
    }
}

CDMatrix CDMatrix::mul(const CDMatrix& other) const {
    require_compatible(other);
    return CDMatrix(group_, window_, detail::convolve_diag_maps(*group_, diag_, other.diag_));
}

CDMatrix CDMatrix::adjoint() const {
    return CDMatrix(group_, window_, detail::adjoint_diag_map(*group_, window_, diag_));
}

CDMatrix CDMatrix::scaled(cplx factor) const {
    detail::DiagMap out = diag_;
    for (auto& [l, cols] : out) {
        for (auto& [j, b] : cols) b = b.scaled(factor);
    }
    return CDMatrix(group_, window_, std::move(out));
}

CDMatrix CDMatrix::add(const CDMatrix& other) const {
    require_compatible(other);
    detail::DiagMap out = diag_;
    for (const auto& [l, cols] : other.diag_) {
        auto& dst = out[l];
        for (const auto& [j, b] : cols) {
            auto [it, inserted] = dst.emplace(j, b);
            if (!inserted) it->second = it->second + b;
        }
    }
    return CDMatrix(group_, window_, std::move(out));
}

CDMatrix CDMatrix::sub(const CDMatrix& other) const { return add(other.scaled(-1.0)); }

CDMatrix CDMatrix::clip_rows_to_window() const {
    detail::DiagMap out;
    for (const auto& [l, cols] : diag_) {
        for (const auto& [j, b] : cols) {
            if (window_.contains(group_->d_mul(l, j))) out[l].emplace(j, b);
        }
    }
    return CDMatrix(group_, window_, std::move(out));
}

BlockVector CDMatrix::apply(const BlockVector& xi) const {
    if (!(xi.window() == window_)) throw std::invalid_argument("vector window mismatch");
    BlockVector out(window_, q());
    for (const auto& [l, cols] : diag_) {
        for (const auto& [j, b] : cols) {
            int row = window_.index_of(group_->d_mul(l, j));
            if (row < 0) continue;  // zero-extension outside the window
            int col = window_.index_of(j);
            out.block(row) += b.apply(xi.block(col));
        }
    }
    return out;
}

Eigen::MatrixXcd CDMatrix::to_dense() const {
    constexpr std::int64_t kMaxDenseDim = 6000;
    const std::int64_t n = static_cast<std::int64_t>(window_.size()) * q();
    if (n > kMaxDenseDim) {
        throw std::invalid_argument("window too large for dense materialization (" +
                                    std::to_string(n) + " > " + std::to_string(kMaxDenseDim) +
                                    " unknowns)");
    }
    const double w = group_->haar_weight();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [l, cols] : diag_) {
        for (const auto& [j, b] : cols) {
            int row = window_.index_of(group_->d_mul(l, j));
            if (row < 0) continue;
            int col = window_.index_of(j);
            m.block(row * q(), col * q(), q(), q()) += w * b.grid();
        }
    }
    return m;
}

DecayProfile CDMatrix::profile() const {
    DecayProfile p;
    for (const auto& [l, cols] : diag_) {
        double sup = 0.0;
        for (const auto& [j, b] : cols) sup = std::max(sup, b.sup_norm());
        if (sup > 0.0) p.d[l] = sup;
    }
    return p;
}

std::int64_t CDMatrix::support_radius() const {
    std::int64_t r = 0;
    for (const auto& [l, cols] : diag_) {
        r = std::max(r, window_.window_kind() == WindowKind::Box ? group_->d_box_norm(l)
                                                                 : group_->d_word_length(l));
    }
    return r;
}

PowerIterResult CDMatrix::op_norm_estimate(double tol, int iter_max) const {
    if (tol <= 0.0) throw std::invalid_argument("op_norm_estimate: tol must be positive");
    PowerIterResult res;
    if (diag_.empty()) {
        res.converged = true;
        return res;
    }
    CDMatrix at = adjoint();
    BlockVector v(window_, q());
    for (int i = 0; i < window_.size(); ++i) {
        for (int x = 0; x < q(); ++x) {
            v.block(i)[x] = 1.0 + 0.01 * std::sin(static_cast<double>(i * q() + x) + 1.0);
        }
    }
    double nv = v.norm();
    for (int i = 0; i < window_.size(); ++i) v.block(i) /= nv;
    double prev = 0.0;
    for (int it = 1; it <= iter_max; ++it) {
        BlockVector y = at.apply(apply(v));
        double lambda = y.norm();
        res.iterations = it;
        res.last_gap = std::abs(lambda - prev);
        if (lambda == 0.0) {
            res.value = 0.0;
            res.converged = true;
            return res;
        }
        for (int i = 0; i < window_.size(); ++i) v.block(i) = y.block(i) / lambda;
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

DecayProfile decay_profile(const Eigen::MatrixXcd& m, const Window& window,
                           std::int64_t interior_margin) {
    const GroupPtr& group = window.group();
    const int q = group->tile_size();
    const int n = window.size();
    if (m.rows() != static_cast<std::int64_t>(n) * q || m.cols() != m.rows()) {
        throw std::invalid_argument("dense matrix size does not match window");
    }
    const double w = group->haar_weight();
    const std::int64_t max_metric = window.radius() - interior_margin;
    const auto& elems = window.elements();
    DecayProfile p;
    for (int jc = 0; jc < n; ++jc) {
        if (window.boundary_metric(elems[jc]) > max_metric) continue;
        DElem jinv = group->d_inv(elems[jc]);
        for (int ir = 0; ir < n; ++ir) {
            double v = m.block(ir * q, jc * q, q, q).cwiseAbs().maxCoeff() / w;
            if (v == 0.0) continue;
            DElem label = group->d_mul(elems[ir], jinv);
            auto [it, inserted] = p.d.emplace(label, v);
            if (!inserted) it->second = std::max(it->second, v);
        }
    }
    return p;
}

}  // namespace cdops
