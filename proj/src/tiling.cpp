#include "cdops/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cdops {

namespace {

// ---- discrete tiles: finite point sets with counting measure / #U

std::vector<GElem> tile_points(const TiledGroup& T) {
    std::vector<GElem> pts;
    pts.reserve(T.tile_size());
    for (int u = 0; u < T.tile_size(); ++u) pts.push_back(T.tile_point(u));
    return pts;
}

std::set<GElem> product_set(const TiledGroup& T, const std::set<GElem>& a,
                            const std::set<GElem>& b) {
    std::set<GElem> out;
    for (const GElem& x : a) {
        for (const GElem& y : b) out.insert(T.g_mul(x, y));
    }
    return out;
}

std::set<GElem> inverse_set(const TiledGroup& T, const std::set<GElem>& a) {
    std::set<GElem> out;
    for (const GElem& x : a) out.insert(T.g_inv(x));
    return out;
}

// ---- grid tiles: each sample point stands for its cell of width 1/q; all
// measures are evaluated exactly as counts of 1/(2q)-microcells.

// Inserts the microcells of the box prod_i [lo_i, hi_i) (in 1/(2q) units).
void insert_box_cells(std::set<GElem>& cells, const GElem& lo, const GElem& hi, int d) {
    std::vector<std::int64_t> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = lo.v[i];
    while (true) {
        GElem c;
        for (int i = 0; i < d; ++i) c.v[i] = idx[i];
        cells.insert(c);
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] >= hi.v[axis]) idx[axis--] = lo.v[axis];
        if (axis < 0) break;
    }
}

OverlapResult overlap_count_grid(const GElem& z, const std::vector<GElem>& K,
                                 const std::vector<GElem>& L, const TiledGroup& T) {
    const int d = T.dim();
    const std::int64_t q = T.grid_resolution();
    OverlapResult res;

    // count: h is hit iff some cell of rep(h)L meets some cell of zK; two
    // cells of width 2 (in 1/(2q) units) overlap iff their centers are
    // strictly closer than 2.
    std::set<DElem> hits;
    for (const GElem& k : K) {
        for (const GElem& l : L) {
            std::vector<std::vector<std::int64_t>> ranges(d);
            bool empty = false;
            for (int i = 0; i < d; ++i) {
                std::int64_t delta = z.v[i] + k.v[i] - l.v[i];  // 2q h must be within +-2
                for (std::int64_t h = (delta - 2) / (2 * q) - 1; h <= (delta + 2) / (2 * q) + 1;
                     ++h) {
                    if (std::llabs(2 * q * h - delta) < 2) ranges[i].push_back(h);
                }
                if (ranges[i].empty()) empty = true;
            }
            if (empty) continue;
            std::vector<std::size_t> pick(d, 0);
            while (true) {
                DElem h;
                for (int i = 0; i < d; ++i) h.v[i] = ranges[i][pick[i]];
                hits.insert(h);
                int axis = d - 1;
                while (axis >= 0 && ++pick[axis] >= ranges[axis].size()) pick[axis--] = 0;
                if (axis < 0) break;
            }
        }
    }
    res.count = static_cast<std::int64_t>(hits.size());

    // bound: |K L^-1 U| via microcells of the Minkowski sums
    // (K-cell) + (-L-cell) + U-box, each a box of width 4 + 2q per axis.
    std::set<GElem> cells;
    for (const GElem& k : K) {
        for (const GElem& l : L) {
            GElem lo, hi;
            for (int i = 0; i < d; ++i) {
                std::int64_t delta = k.v[i] - l.v[i];
                lo.v[i] = delta - 2 - q;
                hi.v[i] = delta + 2 + q;
            }
            insert_box_cells(cells, lo, hi, d);
        }
    }
    double micro = 1.0;
    for (int i = 0; i < d; ++i) micro /= 2.0 * static_cast<double>(q);
    res.bound = static_cast<double>(cells.size()) * micro;  // |U| = 1
    return res;
}

OverlapResult overlap_count_discrete(const GElem& z, const std::vector<GElem>& K,
                                     const std::vector<GElem>& L, const TiledGroup& T) {
    OverlapResult res;
    const GElem id = T.g_id();
    std::set<DElem> hits;
    for (const GElem& k : K) {
        for (const GElem& l : L) {
            GElem g = T.g_mul(T.g_mul(z, k), T.g_inv(l));  // candidate rep(h) = z k l^-1
            Decomposition dec = T.decompose(g);
            if (T.tile_point(dec.u) == id) hits.insert(dec.h);
        }
    }
    res.count = static_cast<std::int64_t>(hits.size());

    std::set<GElem> kl;
    for (const GElem& k : K) {
        for (const GElem& l : L) kl.insert(T.g_mul(k, T.g_inv(l)));
    }
    std::set<GElem> klu;
    for (const GElem& g : kl) {
        for (const GElem& u : tile_points(T)) klu.insert(T.g_mul(g, u));
    }
    res.bound = static_cast<double>(klu.size()) * T.haar_weight();  // |U| = 1
    return res;
}

}  // namespace

OverlapResult overlap_count(const GElem& z, const std::vector<GElem>& K,
                            const std::vector<GElem>& L, const TiledGroup& T) {
    if (K.empty() || L.empty()) return {};
    return T.grid_resolution() > 0 ? overlap_count_grid(z, K, L, T)
                                   : overlap_count_discrete(z, K, L, T);
}

DiagonalOverlap diagonal_overlap_constant(const TiledGroup& T, int check_radius) {
    DiagonalOverlap out;
    if (T.grid_resolution() > 0) {
        // interval arithmetic: Minkowski sums of the tile box, widths add
        out.measure_ratio = std::pow(5.0, T.dim());  // |U^2 U^-2 U| per axis = 5
        out.n = std::llround(out.measure_ratio);
        return out;
    }

    std::set<GElem> u;
    for (const GElem& p : tile_points(T)) u.insert(p);
    std::set<GElem> s = product_set(T, u, u);        // U^2
    s = product_set(T, s, inverse_set(T, u));        // U^2 U^-1
    s = product_set(T, s, inverse_set(T, u));        // U^2 U^-2
    s = product_set(T, s, u);                        // U^2 U^-2 U
    out.measure_ratio = static_cast<double>(s.size()) * T.haar_weight();
    out.n = static_cast<std::int64_t>(std::ceil(out.measure_ratio - 1e-12));

    // Remark on subgroup / quotient tilings: approximate block diagonals are
    // exactly block diagonals; verified pairwise over the window.
    bool ok = true;
    std::vector<DElem> elems = T.window_elements(WindowKind::Box, check_radius);
    for (const DElem& i : elems) {
        GElem ri = T.rep(i);
        for (const DElem& j : elems) {
            GElem g = T.g_mul(ri, T.g_inv(T.rep(j)));
            if (!(T.decompose(g).h == T.d_mul(i, T.d_inv(j)))) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
    }
    out.block_diagonals_coincide = ok;
    return out;
}

namespace {

std::vector<DElem> folner_candidate_box(const TiledGroup& T, int r) {
    std::vector<DElem> e;
    const std::string kind = T.kind();
    if (kind == "heisenberg") {
        const std::int64_t ccap = (static_cast<std::int64_t>(r) * r + 1) / 2;
        for (std::int64_t a = 0; a < r; ++a)
            for (std::int64_t b = 0; b < r; ++b)
                for (std::int64_t c = 0; c < ccap; ++c) e.push_back(DElem{{a, b, c, 0}});
        return e;
    }
    if (kind == "ZxS3") {
        for (std::int64_t n = 0; n < r; ++n)
            for (std::int64_t p = 0; p <= 1; ++p) e.push_back(DElem{{n, p, 0, 0}});
        return e;
    }
    const int d = T.dim();
    std::vector<std::int64_t> idx(d, 0);
    while (true) {
        DElem h;
        for (int i = 0; i < d; ++i) h.v[i] = idx[i];
        e.push_back(h);
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] >= r) idx[axis--] = 0;
        if (axis < 0) break;
    }
    return e;
}

// |xUE delta UE| for a grid group, where UE is the solid box of the tiles of
// the box E: exact per-axis interval overlap in 1/(2q) units.
FolnerTest folner_test_grid(const TiledGroup& T, const GElem& x, int r, double eps) {
    const int d = T.dim();
    const std::int64_t q = T.grid_resolution();
    // UE per axis: [-q, 2q(r-1)+q), width 2qr
    double measure = 1.0, overlap = 1.0;
    const double micro = 1.0 / (2.0 * static_cast<double>(q));
    for (int i = 0; i < d; ++i) {
        const std::int64_t width = 2 * q * r;
        const std::int64_t shift = std::llabs(x.v[i]);
        measure *= static_cast<double>(width) * micro;
        overlap *= static_cast<double>(std::max<std::int64_t>(0, width - shift)) * micro;
    }
    FolnerTest t;
    t.x = x;
    t.ue_measure = measure;
    t.sym_diff = 2.0 * (measure - overlap);
    t.ratio = t.sym_diff / measure;
    t.bound = 2.0 * eps * measure;
    return t;
}

FolnerTest folner_test_discrete(const TiledGroup& T, const GElem& x,
                                const std::vector<GElem>& ue_sorted, double eps) {
    std::vector<GElem> shifted;
    shifted.reserve(ue_sorted.size());
    for (const GElem& p : ue_sorted) shifted.push_back(T.g_mul(x, p));
    std::sort(shifted.begin(), shifted.end());
    std::size_t common = 0;
    auto a = ue_sorted.begin();
    auto b = shifted.begin();
    while (a != ue_sorted.end() && b != shifted.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++common;
            ++a;
            ++b;
        }
    }
    const double w = T.haar_weight();
    FolnerTest t;
    t.x = x;
    t.ue_measure = static_cast<double>(ue_sorted.size()) * w;
    t.sym_diff = 2.0 * static_cast<double>(ue_sorted.size() - common) * w;
    t.ratio = t.sym_diff / t.ue_measure;
    t.bound = 2.0 * eps * t.ue_measure;
    return t;
}

}  // namespace

FolnerResult folner_set(const std::vector<DElem>& K, double eps, const TiledGroup& T, int n_max) {
    if (eps <= 0.0) throw std::invalid_argument("folner_set: eps must be positive");
    if (K.empty()) throw std::invalid_argument("folner_set: K must be nonempty");

    // test points x = rep(k) u over the tile grid
    std::vector<GElem> xs;
    for (const DElem& k : K) {
        for (int u = 0; u < T.tile_size(); ++u) xs.push_back(T.g_mul(T.rep(k), T.tile_point(u)));
    }

    FolnerResult best;
    best.worst_ratio = std::numeric_limits<double>::infinity();
    const bool grid = T.grid_resolution() > 0;

    for (int r = 1; r <= n_max; ++r) {
        std::vector<DElem> e = folner_candidate_box(T, r);
        std::vector<GElem> ue;
        if (!grid) {
            ue.reserve(e.size() * T.tile_size());
            for (const DElem& h : e) {
                GElem rh = T.rep(h);
                for (int u = 0; u < T.tile_size(); ++u) ue.push_back(T.g_mul(rh, T.tile_point(u)));
            }
            std::sort(ue.begin(), ue.end());
        }

        std::vector<FolnerTest> cert;
        double worst = 0.0;
        bool ok = true;
        for (const GElem& x : xs) {
            FolnerTest t = grid ? folner_test_grid(T, x, r, eps)
                                : folner_test_discrete(T, x, ue, eps);
            cert.push_back(t);
            worst = std::max(worst, t.ratio);
            if (t.ratio > eps) {  // search against the sharper eps-level bound
                ok = false;
                break;
            }
        }
        if (ok) {
            FolnerResult res;
            res.found = true;
            res.set = std::move(e);
            res.set_measure = cert.front().ue_measure;
            res.box_radius = r;
            res.certificate = std::move(cert);
            res.worst_ratio = worst;
            return res;
        }
        if (worst < best.worst_ratio) {
            best.worst_ratio = worst;
            best.set = std::move(e);
            best.box_radius = r;
            best.certificate = std::move(cert);
            best.set_measure = best.certificate.front().ue_measure;
        }
    }
    best.found = false;
    return best;
}

}  // namespace cdops
