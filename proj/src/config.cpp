#include "cdops/config.hpp"

#include <fstream>
#include <sstream>

namespace cdops {

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Norms: return "norms";
        case ExperimentKind::MultiplyCheck: return "multiply-check";
        case ExperimentKind::Invert: return "invert";
        case ExperimentKind::Spectral: return "spectral";
        case ExperimentKind::Folner: return "folner";
        case ExperimentKind::Overlap: return "overlap";
        case ExperimentKind::Intertwine: return "intertwine";
    }
    return "?";
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "norms") return ExperimentKind::Norms;
    if (name == "multiply-check") return ExperimentKind::MultiplyCheck;
    if (name == "invert") return ExperimentKind::Invert;
    if (name == "spectral") return ExperimentKind::Spectral;
    if (name == "folner") return ExperimentKind::Folner;
    if (name == "overlap") return ExperimentKind::Overlap;
    if (name == "intertwine") return ExperimentKind::Intertwine;
    throw ConfigParseError("unknown experiment: " + name);
}

namespace {

double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError("not a number: '" + s + "'");
    }
}

std::int64_t parse_i64(const std::string& s) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError("not an integer: '" + s + "'");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() < n + 1) {
                throw ConfigParseError("line " + std::to_string(line_no) + ": '" + key +
                                       "' needs " + std::to_string(n) + " argument(s)");
            }
        };
        if (key == "group") {
            need(1);
            std::string g;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (i > 1) g += ' ';
                g += tok[i];
            }
            cfg.group = g;
        } else if (key == "experiment") {
            need(1);
            cfg.kind = experiment_from_name(tok[1]);
        } else if (key == "windows") {
            need(1);
            cfg.radii.clear();
            for (std::size_t i = 1; i < tok.size(); ++i) {
                cfg.radii.push_back(static_cast<int>(parse_i64(tok[i])));
            }
        } else if (key == "window-kind") {
            need(1);
            if (tok[1] == "box") {
                cfg.window_kind = WindowKind::Box;
            } else if (tok[1] == "ball") {
                cfg.window_kind = WindowKind::WordBall;
            } else {
                throw ConfigParseError("window-kind must be box or ball");
            }
            cfg.window_kind_set = true;
        } else if (key == "preset") {
            need(1);
            cfg.preset = tok[1];
        } else if (key == "diag") {
            need(2);
            DiagSpec d;
            d.label = tok[1];
            d.block_kind = tok[2];
            if (d.block_kind != "identity" && d.block_kind != "const") {
                throw ConfigParseError("diag block kind must be identity or const");
            }
            double re = tok.size() > 3 ? parse_double(tok[3]) : 1.0;
            double im = tok.size() > 4 ? parse_double(tok[4]) : 0.0;
            d.coef = cplx(re, im);
            cfg.diagonals.push_back(d);
        } else if (key == "tol") {
            need(1);
            cfg.tol = parse_double(tok[1]);
        } else if (key == "stability-threshold") {
            need(1);
            cfg.stability_threshold = parse_double(tok[1]);
        } else if (key == "eps") {
            need(1);
            cfg.eps.clear();
            for (std::size_t i = 1; i < tok.size(); ++i) cfg.eps.push_back(parse_double(tok[i]));
        } else if (key == "trials") {
            need(1);
            cfg.trials = static_cast<int>(parse_i64(tok[1]));
        } else if (key == "nmax") {
            need(1);
            cfg.n_max = static_cast<int>(parse_i64(tok[1]));
        } else if (key == "folner-cap") {
            need(1);
            cfg.folner_cap = static_cast<int>(parse_i64(tok[1]));
        } else if (key == "seed") {
            need(1);
            cfg.seed = static_cast<std::uint64_t>(parse_i64(tok[1]));
        } else if (key == "out") {
            need(1);
            cfg.out_dir = tok[1];
        } else {
            throw ConfigParseError("line " + std::to_string(line_no) + ": unknown statement '" +
                                   key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

WindowKind default_window_kind(const TiledGroup& group) {
    return group.kind() == "heisenberg" ? WindowKind::WordBall : WindowKind::Box;
}

void validate_config(ExperimentConfig& cfg) {
    GroupPtr group;
    try {
        group = make_group(cfg.group);
    } catch (const std::exception& e) {
        throw ConfigValidationError(std::string("bad group: ") + e.what());
    }
    if (!cfg.window_kind_set) cfg.window_kind = default_window_kind(*group);
    if (cfg.radii.empty()) {
        switch (cfg.kind) {
            case ExperimentKind::Invert:
                cfg.radii = group->kind() == "heisenberg" ? std::vector<int>{6, 8, 10}
                                                          : std::vector<int>{16, 32, 64};
                break;
            case ExperimentKind::Spectral:
                cfg.radii = {group->kind() == "heisenberg" ? 6 : 200};
                break;
            case ExperimentKind::Intertwine:
                // the doubled index space must stay within the dense guard
                if (group->kind() == "heisenberg") {
                    cfg.radii = {2};
                } else {
                    cfg.radii = {group->tile_size() > 1 ? 3 : 6};
                }
                break;
            default:
                cfg.radii = {6};
                break;
        }
    }
    for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
        if (cfg.radii[i] < 0) throw ConfigValidationError("window radius must be >= 0");
        if (i > 0 && cfg.radii[i] <= cfg.radii[i - 1]) {
            throw ConfigValidationError("window radii must be strictly increasing");
        }
    }
    if (cfg.tol <= 0.0) throw ConfigValidationError("tol must be positive");
    if (cfg.stability_threshold <= 0.0) {
        throw ConfigValidationError("stability-threshold must be positive");
    }
    for (double e : cfg.eps) {
        if (e <= 0.0) throw ConfigValidationError("eps values must be positive");
    }
    if (cfg.trials < 0) throw ConfigValidationError("trials must be >= 0");
    if (cfg.trials == 0) {
        cfg.trials = cfg.kind == ExperimentKind::Intertwine ? 12 : 200;
    }
    if (cfg.n_max < 1) throw ConfigValidationError("nmax must be >= 1");
    if (cfg.folner_cap < 1) throw ConfigValidationError("folner-cap must be >= 1");
    if (!cfg.preset.empty() && !cfg.diagonals.empty()) {
        throw ConfigValidationError("give either a preset or explicit diag lines, not both");
    }
    // operator must build (checks preset/group compatibility and labels)
    try {
        build_operator(cfg, group);
    } catch (const ConfigValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigValidationError(std::string("bad operator: ") + e.what());
    }
}

KernelSeries preset_operator(const std::string& name, const GroupPtr& group) {
    const int q = group->tile_size();
    const double w = group->haar_weight();
    auto require_group = [&](const std::string& kind) {
        if (group->kind() != kind) {
            throw ConfigValidationError("preset '" + name + "' needs group " + kind);
        }
    };
    if (name == "identity") return KernelSeries::identity(group);
    if (name == "geometric") {
        // 1 - 0.5 lambda_1
        require_group("Zd");
        if (group->dim() != 1) throw ConfigValidationError("preset 'geometric' needs Zd d=1");
        return KernelSeries::identity(group) -
               KernelSeries::shift(group, DElem{{1, 0, 0, 0}}, 0.5);
    }
    if (name == "rudin-shapiro") {
        // 1 - 0.3 (lambda_0 + lambda_1 + lambda_2 - lambda_3)
        require_group("Zd");
        if (group->dim() != 1) throw ConfigValidationError("preset 'rudin-shapiro' needs Zd d=1");
        KernelSeries s = KernelSeries::identity(group);
        s.add_term(DElem{{0, 0, 0, 0}}, KernelBlock::identity(q, w).scaled(-0.3));
        s.add_term(DElem{{1, 0, 0, 0}}, KernelBlock::identity(q, w).scaled(-0.3));
        s.add_term(DElem{{2, 0, 0, 0}}, KernelBlock::identity(q, w).scaled(-0.3));
        s.add_term(DElem{{3, 0, 0, 0}}, KernelBlock::identity(q, w).scaled(0.3));
        return s;
    }
    if (name == "random-walk") {
        // sum over generators of lambda_g + lambda_g^-1
        if (group->kind() != "Zd" && group->kind() != "heisenberg") {
            throw ConfigValidationError("preset 'random-walk' needs Zd or heisenberg");
        }
        KernelSeries s(group);
        for (const DElem& g : group->d_generators()) {
            s.add_term(g, KernelBlock::identity(q, w));
        }
        return s;
    }
    if (name == "heisenberg-walk") {
        // 1 - 0.2 (lambda_a + lambda_a^-1 + lambda_b + lambda_b^-1)
        require_group("heisenberg");
        KernelSeries s = KernelSeries::identity(group);
        for (const DElem& g : group->d_generators()) {
            s.add_term(g, KernelBlock::identity(q, w).scaled(-0.2));
        }
        return s;
    }
    throw ConfigValidationError("unknown preset: " + name);
}

KernelSeries build_operator(const ExperimentConfig& cfg, const GroupPtr& group) {
    if (!cfg.preset.empty()) return preset_operator(cfg.preset, group);
    if (cfg.diagonals.empty()) return KernelSeries::identity(group);
    const int q = group->tile_size();
    const double w = group->haar_weight();
    KernelSeries s(group);
    for (const DiagSpec& d : cfg.diagonals) {
        DElem label = group->d_parse(d.label);
        KernelBlock block = d.block_kind == "identity" ? KernelBlock::identity(q, w).scaled(d.coef)
                                                       : KernelBlock::constant(q, w, d.coef);
        s.add_term(label, block);
    }
    return s;
}

}  // namespace cdops
