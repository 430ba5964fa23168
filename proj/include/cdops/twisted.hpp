#pragma once

#include "cdops/cd_matrix.hpp"

namespace cdops {

/// Element of the twisted l^1 algebra over D: a finitely supported map
/// h -> fiber, each fiber a window-indexed family of kernel blocks (zero
/// outside its stored support). star and involution share their inner loops
/// with CDMatrix::mul / CDMatrix::adjoint, so the representation onto CD
/// matrices is an exact isometric *-homomorphism, not just up to rounding.
class TwistedElement {
public:
    TwistedElement(GroupPtr group, Window window);

    /// Dirac element delta^m_h: one label h, fiber m given per column.
    static TwistedElement delta(const GroupPtr& group, const Window& window, const DElem& h,
                                const std::map<DElem, KernelBlock>& fiber);
    /// delta^m_h with a constant fiber (the same block at every column).
    static TwistedElement delta_const(const GroupPtr& group, const Window& window, const DElem& h,
                                      const KernelBlock& block);
    static TwistedElement unit(const GroupPtr& group, const Window& window);

    const GroupPtr& group() const { return group_; }
    const Window& window() const { return window_; }
    const detail::DiagMap& fibers() const { return fib_; }

    void set_block(const DElem& h, const DElem& j, const KernelBlock& block);
    const KernelBlock* block_at(const DElem& h, const DElem& j) const;

    TwistedElement star(const TwistedElement& other) const;
    TwistedElement involution() const;
    TwistedElement scaled(cplx factor) const;
    TwistedElement operator+(const TwistedElement& other) const;

    double l1_norm() const { return detail::diag_map_norm(fib_); }

    /// The representation R: the h-diagonal of the matrix at column j is
    /// F(h)(j). Keeps every stored block, so l1_norm(F) == cd_norm(R(F))
    /// bit-exactly.
    CDMatrix represent() const;

    friend bool operator==(const TwistedElement& a, const TwistedElement& b) {
        return a.window_ == b.window_ && a.fib_ == b.fib_;
    }

private:
    GroupPtr group_;
    Window window_;
    detail::DiagMap fib_;
};

/// Builds the extension R^omega(F) acting on the first coordinate of the
/// doubled index space W x W, the multiplier-regular representation
/// lambda^M(F), and the permutation S xi(x,z) = xi(xz,z), then returns the
/// largest entry of S R^omega(F) - lambda^M(F) S over rows whose supp(F)-
/// neighborhood stays inside the window. Throws when no such row exists.
double intertwiner_check(const TwistedElement& f);

}  // namespace cdops
