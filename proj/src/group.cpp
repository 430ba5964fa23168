#include "cdops/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>

namespace cdops {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& s) {
    std::int64_t value = 0;
    auto first = s.data();
    auto last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return value;
}

}  // namespace

std::map<DElem, std::int64_t> word_ball_distances(const TiledGroup& group, std::int64_t radius) {
    std::map<DElem, std::int64_t> dist;
    std::deque<DElem> queue;
    const auto gens = group.d_generators();
    dist[group.d_id()] = 0;
    queue.push_back(group.d_id());
    while (!queue.empty()) {
        DElem x = queue.front();
        queue.pop_front();
        std::int64_t d = dist[x];
        if (d == radius) continue;
        for (const DElem& s : gens) {
            DElem y = group.d_mul(x, s);
            if (dist.emplace(y, d + 1).second) queue.push_back(y);
        }
    }
    return dist;
}

std::int64_t TiledGroup::d_box_norm(const DElem& h) const {
    std::int64_t m = 0;
    for (int i = 0; i < dim(); ++i) m = std::max<std::int64_t>(m, std::llabs(h.v[i]));
    return m;
}

// ---------------------------------------------------------------------------
// Z^d with the trivial tile U = {0}
// ---------------------------------------------------------------------------

class ZdGroup final : public TiledGroup {
public:
    explicit ZdGroup(int d) : d_(d) {
        if (d < 1 || d > 3) throw std::invalid_argument("Zd: d must be in 1..3");
    }

    std::string kind() const override { return "Zd"; }
    std::string config_string() const override { return "Zd d=" + std::to_string(d_); }
    int dim() const override { return d_; }

    GElem g_mul(const GElem& a, const GElem& b) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    GElem g_inv(const GElem& a) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = -a.v[i];
        return r;
    }
    GElem g_id() const override { return GElem{}; }

    DElem d_mul(const DElem& a, const DElem& b) const override {
        DElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    DElem d_inv(const DElem& a) const override {
        DElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = -a.v[i];
        return r;
    }
    DElem d_id() const override { return DElem{}; }

    GElem rep(const DElem& h) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = h.v[i];
        return r;
    }
    Decomposition decompose(const GElem& g) const override {
        DElem h;
        for (int i = 0; i < d_; ++i) h.v[i] = g.v[i];
        return {h, 0};
    }
    int tile_size() const override { return 1; }
    GElem tile_point(int) const override { return GElem{}; }

    std::vector<DElem> window_elements(WindowKind kind, int radius) const override;

    std::string g_format(const GElem& g) const override {
        std::string s;
        for (int i = 0; i < d_; ++i) {
            if (i) s += ':';
            s += std::to_string(g.v[i]);
        }
        return s;
    }
    GElem g_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (static_cast<int>(parts.size()) != d_) {
            throw std::invalid_argument("Zd element needs " + std::to_string(d_) + " coordinates");
        }
        GElem g;
        for (int i = 0; i < d_; ++i) g.v[i] = parse_int(parts[i]);
        return g;
    }
    std::string d_format(const DElem& h) const override { return g_format(rep(h)); }
    DElem d_parse(const std::string& s) const override { return decompose(g_parse(s)).h; }

    std::vector<DElem> d_generators() const override {
        std::vector<DElem> gens;
        for (int i = 0; i < d_; ++i) {
            DElem p, m;
            p.v[i] = 1;
            m.v[i] = -1;
            gens.push_back(p);
            gens.push_back(m);
        }
        return gens;
    }

private:
    int d_;
};

std::vector<DElem> ZdGroup::window_elements(WindowKind kind, int radius) const {
    std::vector<DElem> out;
    if (kind == WindowKind::Box) {
        std::vector<std::int64_t> idx(d_, -radius);
        while (true) {
            DElem h;
            for (int i = 0; i < d_; ++i) h.v[i] = idx[i];
            out.push_back(h);
            int axis = d_ - 1;
            while (axis >= 0 && ++idx[axis] > radius) idx[axis--] = -radius;
            if (axis < 0) break;
        }
    } else {
        for (auto& [h, d] : word_ball_distances(*this, radius)) out.push_back(h);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// discrete Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
// ---------------------------------------------------------------------------

class HeisenbergGroup final : public TiledGroup {
public:
    std::string kind() const override { return "heisenberg"; }
    std::string config_string() const override { return "heisenberg"; }
    int dim() const override { return 3; }

    GElem g_mul(const GElem& a, const GElem& b) const override {
        return GElem{{a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2] + a.v[0] * b.v[1], 0}};
    }
    GElem g_inv(const GElem& a) const override {
        return GElem{{-a.v[0], -a.v[1], -a.v[2] + a.v[0] * a.v[1], 0}};
    }
    GElem g_id() const override { return GElem{}; }

    DElem d_mul(const DElem& a, const DElem& b) const override {
        return DElem{{a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2] + a.v[0] * b.v[1], 0}};
    }
    DElem d_inv(const DElem& a) const override {
        return DElem{{-a.v[0], -a.v[1], -a.v[2] + a.v[0] * a.v[1], 0}};
    }
    DElem d_id() const override { return DElem{}; }

    GElem rep(const DElem& h) const override { return GElem{{h.v[0], h.v[1], h.v[2], 0}}; }
    Decomposition decompose(const GElem& g) const override {
        return {DElem{{g.v[0], g.v[1], g.v[2], 0}}, 0};
    }
    int tile_size() const override { return 1; }
    GElem tile_point(int) const override { return GElem{}; }

    std::vector<DElem> d_generators() const override {
        return {DElem{{1, 0, 0, 0}}, DElem{{-1, 0, 0, 0}}, DElem{{0, 1, 0, 0}},
                DElem{{0, -1, 0, 0}}};
    }

    std::int64_t d_word_length(const DElem& h) const override {
        // labels occurring in operators are short words; search outward
        for (std::int64_t r = 4; r <= 64; r *= 2) {
            auto dist = word_ball_distances(*this, r);
            auto it = dist.find(h);
            if (it != dist.end()) return it->second;
        }
        throw std::runtime_error("heisenberg word length beyond search cap");
    }

    std::vector<DElem> window_elements(WindowKind kind, int radius) const override {
        std::vector<DElem> out;
        if (kind == WindowKind::Box) {
            for (std::int64_t a = -radius; a <= radius; ++a)
                for (std::int64_t b = -radius; b <= radius; ++b)
                    for (std::int64_t c = -radius; c <= radius; ++c)
                        out.push_back(DElem{{a, b, c, 0}});
        } else {
            for (auto& [h, d] : word_ball_distances(*this, radius)) out.push_back(h);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string g_format(const GElem& g) const override {
        return std::to_string(g.v[0]) + ':' + std::to_string(g.v[1]) + ':' +
               std::to_string(g.v[2]);
    }
    GElem g_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (parts.size() != 3) throw std::invalid_argument("heisenberg element needs a:b:c");
        return GElem{{parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]), 0}};
    }
    std::string d_format(const DElem& h) const override { return g_format(rep(h)); }
    DElem d_parse(const std::string& s) const override { return decompose(g_parse(s)).h; }
};

// ---------------------------------------------------------------------------
// Z x S3 with tile U = {0} x A3 and index group D = Z x Z/2
// ---------------------------------------------------------------------------

namespace s3 {

// permutations of {0,1,2} in lexicographic one-line order
constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr int kSign[6] = {0, 1, 1, 0, 0, 1};  // 0 = even, 1 = odd
constexpr int kId = 0, kSwap12 = 2, kSwap13 = 5;
constexpr int kEven[3] = {0, 3, 4};  // A3: id, (123), (132)

inline int compose(int s, int t) {  // (s o t)(i) = s[t[i]]
    int img[3] = {kPerm[s][kPerm[t][0]], kPerm[s][kPerm[t][1]], kPerm[s][kPerm[t][2]]};
    for (int p = 0; p < 6; ++p) {
        if (kPerm[p][0] == img[0] && kPerm[p][1] == img[1] && kPerm[p][2] == img[2]) return p;
    }
    return -1;  // unreachable
}

inline int inverse(int s) {
    for (int p = 0; p < 6; ++p) {
        if (compose(s, p) == kId) return p;
    }
    return -1;
}

inline int even_index(int p) {  // position of an even permutation within A3
    for (int u = 0; u < 3; ++u) {
        if (kEven[u] == p) return u;
    }
    return -1;
}

}  // namespace s3

class ZxS3Group final : public TiledGroup {
public:
    explicit ZxS3Group(bool alternate_transversal)
        : odd_rep_(alternate_transversal ? s3::kSwap13 : s3::kSwap12),
          alternate_(alternate_transversal) {}

    std::string kind() const override { return "ZxS3"; }
    std::string config_string() const override {
        return alternate_ ? "ZxS3 transversal=alt" : "ZxS3";
    }
    int dim() const override { return 1; }

    GElem g_mul(const GElem& a, const GElem& b) const override {
        return GElem{{a.v[0] + b.v[0], s3::compose(static_cast<int>(a.v[1]),
                                                   static_cast<int>(b.v[1])),
                      0, 0}};
    }
    GElem g_inv(const GElem& a) const override {
        return GElem{{-a.v[0], s3::inverse(static_cast<int>(a.v[1])), 0, 0}};
    }
    GElem g_id() const override { return GElem{}; }

    DElem d_mul(const DElem& a, const DElem& b) const override {
        return DElem{{a.v[0] + b.v[0], a.v[1] ^ b.v[1], 0, 0}};
    }
    DElem d_inv(const DElem& a) const override { return DElem{{-a.v[0], a.v[1], 0, 0}}; }
    DElem d_id() const override { return DElem{}; }

    GElem rep(const DElem& h) const override {
        return GElem{{h.v[0], h.v[1] ? odd_rep_ : s3::kId, 0, 0}};
    }
    Decomposition decompose(const GElem& g) const override {
        int sigma = static_cast<int>(g.v[1]);
        std::int64_t parity = s3::kSign[sigma];
        int rho = parity ? odd_rep_ : s3::kId;
        int u_perm = s3::compose(s3::inverse(rho), sigma);
        return {DElem{{g.v[0], parity, 0, 0}}, s3::even_index(u_perm)};
    }
    int tile_size() const override { return 3; }
    GElem tile_point(int u) const override { return GElem{{0, s3::kEven[u], 0, 0}}; }

    std::vector<DElem> window_elements(WindowKind kind, int radius) const override {
        std::vector<DElem> out;
        if (kind == WindowKind::Box) {
            for (std::int64_t n = -radius; n <= radius; ++n)
                for (std::int64_t p = 0; p <= 1; ++p) out.push_back(DElem{{n, p, 0, 0}});
        } else {
            for (auto& [h, d] : word_ball_distances(*this, radius)) out.push_back(h);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<DElem> d_generators() const override {
        return {DElem{{1, 0, 0, 0}}, DElem{{-1, 0, 0, 0}}, DElem{{0, 1, 0, 0}}};
    }

    std::string g_format(const GElem& g) const override {
        return std::to_string(g.v[0]) + ':' + std::to_string(g.v[1]);
    }
    GElem g_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (parts.size() != 2) throw std::invalid_argument("ZxS3 element needs n:perm");
        std::int64_t p = parse_int(parts[1]);
        if (p < 0 || p > 5) throw std::invalid_argument("ZxS3 permutation index must be 0..5");
        return GElem{{parse_int(parts[0]), p, 0, 0}};
    }
    std::string d_format(const DElem& h) const override {
        return std::to_string(h.v[0]) + ':' + std::to_string(h.v[1]);
    }
    DElem d_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (parts.size() != 2) throw std::invalid_argument("ZxS3 index needs n:parity");
        std::int64_t p = parse_int(parts[1]);
        if (p < 0 || p > 1) throw std::invalid_argument("ZxS3 parity must be 0 or 1");
        return DElem{{parse_int(parts[0]), p, 0, 0}};
    }

private:
    int odd_rep_;
    bool alternate_;
};

// ---------------------------------------------------------------------------
// discretized R^d: positions stored per axis in units of 1/(2q); the valid
// sample grid is the lattice of cell centers m + (2k+1-q)/(2q), k = 0..q-1
// ---------------------------------------------------------------------------

class RdGridGroup final : public TiledGroup {
public:
    RdGridGroup(int d, int q) : d_(d), q_(q) {
        if (d < 1 || d > 3) throw std::invalid_argument("Rd_grid: d must be in 1..3");
        if (q < 1) throw std::invalid_argument("Rd_grid: q must be >= 1");
        tile_size_ = 1;
        for (int i = 0; i < d; ++i) tile_size_ *= q;
    }

    std::string kind() const override { return "Rd_grid"; }
    std::string config_string() const override {
        return "Rd_grid d=" + std::to_string(d_) + " q=" + std::to_string(q_);
    }
    int dim() const override { return d_; }
    int grid_resolution() const override { return q_; }

    GElem g_mul(const GElem& a, const GElem& b) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    GElem g_inv(const GElem& a) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = -a.v[i];
        return r;
    }
    GElem g_id() const override { return GElem{}; }

    DElem d_mul(const DElem& a, const DElem& b) const override {
        DElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    DElem d_inv(const DElem& a) const override {
        DElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = -a.v[i];
        return r;
    }
    DElem d_id() const override { return DElem{}; }

    GElem rep(const DElem& h) const override {
        GElem r;
        for (int i = 0; i < d_; ++i) r.v[i] = 2ll * q_ * h.v[i];
        return r;
    }

    Decomposition decompose(const GElem& g) const override {
        DElem h;
        int u = 0;
        bool valid = true;
        DElem near_h;
        int near_u = 0;
        for (int i = 0; i < d_; ++i) {
            std::int64_t t = g.v[i];
            // cell [h - 1/2, h + 1/2) in units of 1/(2q): t in [2q h - q, 2q h + q)
            std::int64_t hi = floor_div(t + q_, 2ll * q_);
            std::int64_t r = t - 2ll * q_ * hi;          // in [-q, q)
            std::int64_t num = r + q_ - 1;               // = 2k for a center
            h.v[i] = hi;
            near_h.v[i] = hi;
            std::int64_t k;
            if (num % 2 != 0) {
                valid = false;
                k = std::clamp<std::int64_t>((num + 1) / 2, 0, q_ - 1);
            } else {
                k = num / 2;
            }
            u = u * q_ + static_cast<int>(k);
            near_u = near_u * q_ + static_cast<int>(k);
        }
        if (!valid) {
            throw OffGridError("element " + g_format(g) + " is not on the cell-center grid; "
                               "nearest cell is tile index " + std::to_string(near_u) +
                               " of block " + d_format(near_h),
                               near_h, near_u);
        }
        return {h, u};
    }

    int tile_size() const override { return tile_size_; }
    GElem tile_point(int u) const override {
        GElem r;
        for (int i = d_ - 1; i >= 0; --i) {
            std::int64_t k = u % q_;
            u /= q_;
            r.v[i] = 2 * k + 1 - q_;
        }
        return r;
    }

    std::vector<DElem> window_elements(WindowKind kind, int radius) const override {
        std::vector<DElem> out;
        std::vector<std::int64_t> idx(d_, -radius);
        while (true) {
            DElem h;
            for (int i = 0; i < d_; ++i) h.v[i] = idx[i];
            out.push_back(h);
            int axis = d_ - 1;
            while (axis >= 0 && ++idx[axis] > radius) idx[axis--] = -radius;
            if (axis < 0) break;
        }
        if (kind == WindowKind::WordBall) {
            std::erase_if(out, [&](const DElem& h) {
                std::int64_t s = 0;
                for (int i = 0; i < d_; ++i) s += std::llabs(h.v[i]);
                return s > radius;
            });
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<DElem> d_generators() const override {
        std::vector<DElem> gens;
        for (int i = 0; i < d_; ++i) {
            DElem p, m;
            p.v[i] = 1;
            m.v[i] = -1;
            gens.push_back(p);
            gens.push_back(m);
        }
        return gens;
    }

    std::string g_format(const GElem& g) const override {
        std::string s;
        for (int i = 0; i < d_; ++i) {
            if (i) s += ':';
            s += format_coord(g.v[i]);
        }
        return s;
    }
    GElem g_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (static_cast<int>(parts.size()) != d_) {
            throw std::invalid_argument("Rd_grid element needs " + std::to_string(d_) +
                                        " coordinates");
        }
        GElem g;
        for (int i = 0; i < d_; ++i) {
            double x = std::stod(parts[i]);
            double scaled = x * 2.0 * q_;
            std::int64_t t = std::llround(scaled);
            if (std::abs(scaled - static_cast<double>(t)) > 1e-6) {
                throw std::invalid_argument("coordinate '" + parts[i] +
                                            "' is not a multiple of 1/" + std::to_string(2 * q_));
            }
            g.v[i] = t;
        }
        return g;
    }
    std::string d_format(const DElem& h) const override {
        std::string s;
        for (int i = 0; i < d_; ++i) {
            if (i) s += ':';
            s += std::to_string(h.v[i]);
        }
        return s;
    }
    DElem d_parse(const std::string& s) const override {
        auto parts = split(s, ':');
        if (static_cast<int>(parts.size()) != d_) {
            throw std::invalid_argument("Rd_grid index needs " + std::to_string(d_) +
                                        " coordinates");
        }
        DElem h;
        for (int i = 0; i < d_; ++i) h.v[i] = parse_int(parts[i]);
        return h;
    }

private:
    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t qd = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --qd;
        return qd;
    }

    std::string format_coord(std::int64_t t) const {
        // exact decimal of t / (2q), up to 12 fractional digits
        bool neg = t < 0;
        std::uint64_t num = static_cast<std::uint64_t>(neg ? -t : t);
        std::uint64_t den = 2ull * q_;
        std::string s = std::to_string(num / den);
        std::uint64_t rem = num % den;
        if (rem != 0) {
            s += '.';
            for (int i = 0; i < 12 && rem != 0; ++i) {
                rem *= 10;
                s += static_cast<char>('0' + rem / den);
                rem %= den;
            }
        }
        return neg ? "-" + s : s;
    }

    int d_;
    int q_;
    int tile_size_;
};

// ---------------------------------------------------------------------------

GroupPtr make_zd_group(int d) { return std::make_shared<ZdGroup>(d); }
GroupPtr make_heisenberg_group() { return std::make_shared<HeisenbergGroup>(); }
GroupPtr make_zxs3_group(bool alternate_transversal) {
    return std::make_shared<ZxS3Group>(alternate_transversal);
}
GroupPtr make_rd_grid_group(int d, int q) { return std::make_shared<RdGridGroup>(d, q); }

GroupPtr make_group(const std::string& config) {
    std::istringstream in(config);
    std::string kind;
    in >> kind;
    int d = 1, q = 1;
    bool alt = false;
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("group option needs key=value: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "d") {
            d = static_cast<int>(parse_int(val));
        } else if (key == "q") {
            q = static_cast<int>(parse_int(val));
        } else if (key == "transversal") {
            alt = (val == "alt");
        } else {
            throw std::invalid_argument("unknown group option: " + key);
        }
    }
    if (kind == "Zd" || kind == "Z^d") return make_zd_group(d);
    if (kind == "Z") return make_zd_group(1);
    if (kind == "heisenberg") return make_heisenberg_group();
    if (kind == "ZxS3") return make_zxs3_group(alt);
    if (kind == "Rd_grid") return make_rd_grid_group(d, q);
    throw std::invalid_argument("unknown group kind: " + kind);
}

// ---------------------------------------------------------------------------
// Window
// ---------------------------------------------------------------------------

struct Window::Data {
    GroupPtr group;
    WindowKind kind = WindowKind::Box;
    int radius = 0;
    std::vector<DElem> elems;
    std::map<DElem, int> index;
    std::map<DElem, std::int64_t> metric;
};

Window Window::make(GroupPtr group, WindowKind kind, int radius) {
    if (radius < 0) throw std::invalid_argument("window radius must be >= 0");
    auto data = std::make_shared<Data>();
    data->group = std::move(group);
    data->kind = kind;
    data->radius = radius;
    data->elems = data->group->window_elements(kind, radius);
    for (int i = 0; i < static_cast<int>(data->elems.size()); ++i) {
        data->index.emplace(data->elems[i], i);
    }
    if (kind == WindowKind::WordBall) {
        data->metric = word_ball_distances(*data->group, radius);
    } else {
        for (const DElem& h : data->elems) data->metric.emplace(h, data->group->d_box_norm(h));
    }
    return Window(std::move(data));
}

Window Window::box(GroupPtr group, int radius) {
    return make(std::move(group), WindowKind::Box, radius);
}

Window Window::word_ball(GroupPtr group, int radius) {
    return make(std::move(group), WindowKind::WordBall, radius);
}

const GroupPtr& Window::group() const { return data_->group; }
WindowKind Window::window_kind() const { return data_->kind; }
int Window::radius() const { return data_->radius; }
int Window::size() const { return static_cast<int>(data_->elems.size()); }
const std::vector<DElem>& Window::elements() const { return data_->elems; }

int Window::index_of(const DElem& h) const {
    auto it = data_->index.find(h);
    return it == data_->index.end() ? -1 : it->second;
}

std::int64_t Window::boundary_metric(const DElem& h) const {
    auto it = data_->metric.find(h);
    if (it != data_->metric.end()) return it->second;
    return data_->kind == WindowKind::Box ? data_->group->d_box_norm(h)
                                          : data_->group->d_word_length(h);
}

bool Window::inversion_closed() const {
    for (const DElem& h : data_->elems) {
        if (!contains(data_->group->d_inv(h))) return false;
    }
    return true;
}

bool operator==(const Window& a, const Window& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return same_tiling(a.data_->group, b.data_->group) && a.data_->kind == b.data_->kind &&
           a.data_->radius == b.data_->radius;
}

}  // namespace cdops
