#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccpb/diagnostics.hpp"
#include "ccpb/mesh.hpp"
#include "ccpb/model.hpp"
#include "ccpb/solver.hpp"

namespace ccpb {

struct SolverConfig {
    NewtonOptions newton;
    std::vector<double> ladder;  ///< empty: single solve at params.epsilon
    bool seed_with_profile = false;
};

struct OutputConfig {
    std::string dir = "out";
    std::string format = "csv";  ///< csv | json
};

/// Everything a CLI run needs, parsed from one config file.
struct RunConfig {
    ModelParams params;
    std::optional<MeshSpec> mesh;  ///< unset: layer-adapted geometric default per epsilon
    SolverConfig solver;
    ValidationOptions diagnostics;
    std::vector<double> cap_gammas{0.1, 1.0, 4.0, 10.0};
    OutputConfig output;
};

/// Parses a config file.  Files whose first non-space character is '{' are
/// read as JSON; anything else as INI-style sections of key = value lines.
/// The grammar is documented in the README.
RunConfig parse_config(const std::string& path);

/// Same, from in-memory text (used by tests).
RunConfig parse_config_text(const std::string& text);

/// Parses "START:FACTOR:COUNT" into a geometric ladder, or a comma-separated
/// list of explicit epsilons.
std::vector<double> parse_ladder(const std::string& text);

}  // namespace ccpb
