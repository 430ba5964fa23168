#include "cdops/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace cdops {

namespace {

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get_bytes(std::istream& in, void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("unexpected end of file");
}

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(out, b, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    get_bytes(in, b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }
std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    put_bytes(out, b, 8);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    get_bytes(in, b, 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    put_bytes(out, s.data(), s.size());
}

std::string get_string(std::istream& in) {
    std::uint32_t n = get_u32(in);
    if (n > (1u << 20)) throw std::runtime_error("corrupt file: string too long");
    std::string s(n, '\0');
    if (n) get_bytes(in, s.data(), n);
    return s;
}

void put_magic(std::ostream& out, const char m[5]) { put_bytes(out, m, 4); }

void check_magic(std::istream& in, const char m[5]) {
    char got[4];
    get_bytes(in, got, 4);
    if (std::memcmp(got, m, 4) != 0) throw std::runtime_error("bad magic, not a cdops file");
}

void put_grid(std::ostream& out, const Eigen::MatrixXcd& g) {
    for (Eigen::Index x = 0; x < g.rows(); ++x) {
        for (Eigen::Index y = 0; y < g.cols(); ++y) {
            put_f64(out, g(x, y).real());
            put_f64(out, g(x, y).imag());
        }
    }
}

Eigen::MatrixXcd get_grid(std::istream& in, int q) {
    Eigen::MatrixXcd g(q, q);
    for (int x = 0; x < q; ++x) {
        for (int y = 0; y < q; ++y) {
            double re = get_f64(in);
            double im = get_f64(in);
            g(x, y) = cplx(re, im);
        }
    }
    return g;
}

constexpr std::uint32_t kVersion = 1;

void save_diag_container(std::ostream& out, const char magic[5], const GroupPtr& group,
                         const Window& window, const detail::DiagMap& diag) {
    put_magic(out, magic);
    put_u32(out, kVersion);
    put_string(out, group->config_string());
    unsigned char kind = window.window_kind() == WindowKind::Box ? 0 : 1;
    put_bytes(out, &kind, 1);
    put_i32(out, window.radius());
    put_u32(out, static_cast<std::uint32_t>(diag.size()));
    for (const auto& [label, cols] : diag) put_string(out, group->d_format(label));
    for (const auto& [label, cols] : diag) {
        put_u32(out, static_cast<std::uint32_t>(cols.size()));
        for (const auto& [j, block] : cols) {
            put_string(out, group->d_format(j));
            put_grid(out, block.grid());
        }
    }
}

struct DiagContainer {
    GroupPtr group;
    Window window;
    detail::DiagMap diag;
};

DiagContainer load_diag_container(std::istream& in, const char magic[5]) {
    check_magic(in, magic);
    if (get_u32(in) != kVersion) throw std::runtime_error("unsupported file version");
    DiagContainer c;
    c.group = make_group(get_string(in));
    unsigned char kind;
    get_bytes(in, &kind, 1);
    std::int32_t radius = get_i32(in);
    c.window = Window::make(c.group, kind == 0 ? WindowKind::Box : WindowKind::WordBall, radius);
    const int q = c.group->tile_size();
    const double w = c.group->haar_weight();
    std::uint32_t n_labels = get_u32(in);
    std::vector<DElem> labels;
    labels.reserve(n_labels);
    for (std::uint32_t i = 0; i < n_labels; ++i) labels.push_back(c.group->d_parse(get_string(in)));
    for (const DElem& label : labels) {
        std::uint32_t n_cols = get_u32(in);
        auto& cols = c.diag[label];
        for (std::uint32_t jc = 0; jc < n_cols; ++jc) {
            DElem j = c.group->d_parse(get_string(in));
            cols.emplace(j, KernelBlock(get_grid(in, q), w));
        }
    }
    return c;
}

}  // namespace

void save_block(std::ostream& out, const KernelBlock& block) {
    put_magic(out, "CDKB");
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(block.q()));
    put_f64(out, block.weight());
    put_grid(out, block.grid());
}

KernelBlock load_block(std::istream& in) {
    check_magic(in, "CDKB");
    if (get_u32(in) != kVersion) throw std::runtime_error("unsupported file version");
    int q = static_cast<int>(get_u32(in));
    if (q <= 0 || q > 4096) throw std::runtime_error("corrupt file: bad grid size");
    double w = get_f64(in);
    return KernelBlock(get_grid(in, q), w);
}

void save_matrix(std::ostream& out, const CDMatrix& m) {
    save_diag_container(out, "CDMX", m.group(), m.window(), m.diagonals());
}

CDMatrix load_matrix(std::istream& in) {
    DiagContainer c = load_diag_container(in, "CDMX");
    return CDMatrix(c.group, c.window, std::move(c.diag));
}

void save_twisted(std::ostream& out, const TwistedElement& f) {
    save_diag_container(out, "CDTW", f.group(), f.window(), f.fibers());
}

TwistedElement load_twisted(std::istream& in) {
    DiagContainer c = load_diag_container(in, "CDTW");
    TwistedElement f(c.group, c.window);
    for (const auto& [h, cols] : c.diag) {
        for (const auto& [j, b] : cols) f.set_block(h, j, b);
    }
    return f;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

}  // namespace

void save_block_file(const std::string& path, const KernelBlock& block) {
    auto out = open_out(path);
    save_block(out, block);
}

KernelBlock load_block_file(const std::string& path) {
    auto in = open_in(path);
    return load_block(in);
}

void save_matrix_file(const std::string& path, const CDMatrix& m) {
    auto out = open_out(path);
    save_matrix(out, m);
}

CDMatrix load_matrix_file(const std::string& path) {
    auto in = open_in(path);
    return load_matrix(in);
}

}  // namespace cdops
