#pragma once

#include <string>

#include "ccpb/asymptotics.hpp"
#include "ccpb/diagnostics.hpp"
#include "ccpb/solver.hpp"

namespace ccpb {

/// Deterministic float formatting shared by every emitter (17 significant digits).
std::string fmt17(double v);

std::string solution_csv(const Solution& sol);
std::string solution_summary_json(const Solution& sol);

std::string validation_csv(const ValidationReport& rep);
std::string validation_json(const ValidationReport& rep);

std::string pohozaev_json(const PohozaevReport& rep);
std::string expansion_json(const ExpansionResult& res);

/// One row per gamma: limit, series terms, optional numeric estimate.
std::string capacitance_csv(const ModelParams& params, const std::vector<double>& gammas,
                            const std::vector<double>& numeric);

// gnuplot scripts referencing the data files emitted next to them
std::string profile_plot_script(const std::vector<double>& epsilons);
std::string xi_plot_script();
std::string capacitance_plot_script();

/// Writes text to dir/name, creating dir if needed; returns the full path.
std::string write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace ccpb
