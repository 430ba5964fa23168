#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdops/cd_matrix.hpp"

namespace cdops {

struct ConfigParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Norms, MultiplyCheck, Invert, Spectral, Folner, Overlap, Intertwine };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

struct DiagSpec {
    std::string label;       // group D element, serialized form
    std::string block_kind;  // "identity" or "const"
    cplx coef = 1.0;
};

/// Plain-text experiment description. Grammar (one statement per line,
/// '#' starts a comment):
///
///   group <kind> [d=<n>] [q=<n>] [transversal=alt]
///   experiment norms|multiply-check|invert|spectral|folner|overlap|intertwine
///   windows <r1> <r2> ...
///   window-kind box|ball
///   preset identity|geometric|rudin-shapiro|random-walk|heisenberg-walk
///   diag <label> identity|const <re> [im]
///   tol <x>          stability-threshold <x>
///   eps <e1> <e2>    trials <n>       nmax <n>
///   seed <n>         out <dir>
struct ExperimentConfig {
    std::string group = "Zd d=1";
    ExperimentKind kind = ExperimentKind::Norms;
    std::vector<int> radii;           // window radii (defaults per experiment)
    bool window_kind_set = false;     // explicit window-kind statement seen
    WindowKind window_kind = WindowKind::Box;
    std::string preset;               // named operator, or
    std::vector<DiagSpec> diagonals;  // explicit diagonal list
    double tol = 1e-8;
    double stability_threshold = 0.02;
    std::vector<double> eps = {0.2, 0.1};
    int trials = 0;  // 0 = per-experiment default
    int n_max = 32;
    int folner_cap = 256;  // largest box radius tried by the Folner search
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Checks the invariants (radii increasing, q >= 1, tolerances positive,
/// preset compatible with the group) and fills per-experiment defaults.
void validate_config(ExperimentConfig& cfg);

/// The window kind a group defaults to: word balls for the Heisenberg group
/// (boxes grow cubically along the commutator axis), boxes otherwise.
WindowKind default_window_kind(const TiledGroup& group);

/// Builds the configured operator as a translation-invariant series.
KernelSeries build_operator(const ExperimentConfig& cfg, const GroupPtr& group);

/// Named presets used by the experiments.
KernelSeries preset_operator(const std::string& name, const GroupPtr& group);

}  // namespace cdops
