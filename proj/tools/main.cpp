// Command-line front end: config parsing, subcommand dispatch, file emission.
#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccpb/asymptotics.hpp"
#include "ccpb/config.hpp"
#include "ccpb/diagnostics.hpp"
#include "ccpb/report_io.hpp"
#include "ccpb/solver.hpp"

namespace {

using namespace ccpb;

std::shared_ptr<const Mesh> make_mesh(const RunConfig& cfg) {
    const MeshSpec spec = cfg.mesh ? *cfg.mesh : MeshSpec(GeometricSpec::default_for(cfg.params));
    return std::make_shared<const Mesh>(Mesh::build(cfg.params, spec));
}

std::vector<double> ladder_or_single(const RunConfig& cfg) {
    if (!cfg.solver.ladder.empty()) return cfg.solver.ladder;
    return {cfg.params.epsilon};
}

int cmd_solve(const RunConfig& cfg) {
    Solution sol = solve_newton(cfg.params, make_mesh(cfg), cfg.solver.newton);
    if (cfg.params.eta) sol = robin_transform(sol, *cfg.params.eta);
    write_file(cfg.output.dir, "profile.csv", solution_csv(sol));
    write_file(cfg.output.dir, "summary.json", solution_summary_json(sol));
    std::cout << solution_summary_json(sol);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const std::vector<double> ladder = ladder_or_single(cfg);
    const std::vector<Solution> sols =
        solve_continuation(cfg.params, ladder, cfg.diagnostics.mesh_policy, cfg.solver.newton,
                           cfg.solver.seed_with_profile);
    std::vector<double> epsilons;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        write_file(cfg.output.dir, "profile_" + std::to_string(i) + ".csv",
                   solution_csv(sols[i]));
        write_file(cfg.output.dir, "summary_" + std::to_string(i) + ".json",
                   solution_summary_json(sols[i]));
        epsilons.push_back(sols[i].params.epsilon);
    }
    write_file(cfg.output.dir, "profiles.gp", profile_plot_script(epsilons));
    return 0;
}

int cmd_asymptotics(const RunConfig& cfg, const std::optional<double>& beta,
                    const std::optional<double>& gamma, const std::optional<double>& kappa,
                    const std::optional<double>& theta, double eps) {
    ExpansionQuery query;
    query.epsilon = eps;
    if (beta) {
        query.where = PowerQuery{*beta, gamma.value_or(1.0)};
    } else if (theta) {
        if (!gamma) throw MalformedQuery("theta query needs --gamma");
        query.where = ThetaQuery{*theta, *gamma};
    } else if (kappa) {
        query.where = InteriorQuery{*kappa};
    } else {
        throw MalformedQuery("asymptotics needs one of --beta, --theta, --kappa");
    }
    const ExpansionResult res = interior_expansion(cfg.params, query);
    const std::string text = expansion_json(res);
    write_file(cfg.output.dir, "expansion.json", text);
    std::cout << text;
    return 0;
}

int cmd_capacitance(const RunConfig& cfg, bool with_numeric) {
    std::vector<double> numeric;
    if (with_numeric) {
        Solution sol = solve_newton(cfg.params, make_mesh(cfg), cfg.solver.newton);
        const double eps2 = cfg.params.epsilon * cfg.params.epsilon;
        for (double gamma : cfg.cap_gammas) {
            const double r_lo = cfg.params.R - gamma * eps2;
            numeric.push_back((r_lo > 0.0 && r_lo < cfg.params.R)
                                  ? capacitance_numeric(sol, r_lo)
                                  : std::nan(""));
        }
    }
    const std::string table = capacitance_csv(cfg.params, cfg.cap_gammas, numeric);
    write_file(cfg.output.dir, "capacitance.csv", table);
    write_file(cfg.output.dir, "capacitance.gp", capacitance_plot_script());
    std::cout << table;
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    std::vector<double> ladder = cfg.solver.ladder;
    if (ladder.empty()) {
        // Default: nine continuation steps by factor 1/sqrt(2) from params.epsilon.
        double eps = cfg.params.epsilon;
        for (int k = 0; k < 9; ++k) {
            ladder.push_back(eps);
            eps *= std::sqrt(0.5);
        }
    }
    const ValidationReport rep = validate_report(cfg.params, ladder, cfg.diagnostics);
    write_file(cfg.output.dir, "validation.csv", validation_csv(rep));
    write_file(cfg.output.dir, "validation.json", validation_json(rep));

    // Companion data + plot scripts.
    const std::vector<Solution> sols =
        solve_continuation(cfg.params, ladder, cfg.diagnostics.mesh_policy,
                           cfg.diagnostics.newton, cfg.diagnostics.seed_with_profile);
    std::vector<double> epsilons;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        write_file(cfg.output.dir, "profile_" + std::to_string(i) + ".csv",
                   solution_csv(sols[i]));
        epsilons.push_back(sols[i].params.epsilon);
    }
    write_file(cfg.output.dir, "profiles.gp", profile_plot_script(epsilons));
    write_file(cfg.output.dir, "xi.gp", xi_plot_script());
    if (cfg.params.A != cfg.params.B)
        write_file(cfg.output.dir, "capacitance.csv",
                   capacitance_csv(cfg.params, cfg.cap_gammas, {}));
    write_file(cfg.output.dir, "capacitance.gp", capacitance_plot_script());

    std::cout << (rep.overall_pass ? "VALIDATION PASS\n" : "VALIDATION FAIL\n");
    return rep.overall_pass ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"Radial charge-conserving Poisson-Boltzmann boundary-layer laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<double> eps_override;
    std::string ladder_text;
    std::optional<double> beta, gamma, kappa, theta;
    bool with_numeric = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "config file (INI sections or JSON)");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--eps", eps_override, "override model epsilon");
        sub->add_option("--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* solve = app.add_subcommand("solve", "single self-consistent solve");
    add_common(solve, true);

    auto* sweep = app.add_subcommand("sweep", "epsilon-continuation ladder of solves");
    add_common(sweep, true);
    sweep->add_option("--ladder", ladder_text, "START:FACTOR:COUNT or comma list");

    auto* asym = app.add_subcommand("asymptotics", "evaluate closed-form expansions (no solve)");
    add_common(asym, true);
    asym->add_option("--beta", beta, "power-case layer exponent");
    asym->add_option("--gamma", gamma, "layer amplitude");
    asym->add_option("--kappa", kappa, "interior window exponent");
    asym->add_option("--theta", theta, "slowly-varying exponent Theta");

    auto* cap = app.add_subcommand("capacitance", "capacitance limits over a gamma grid");
    add_common(cap, true);
    cap->add_flag("--numeric", with_numeric, "also solve and compare numerically");

    auto* validate = app.add_subcommand("validate", "numeric-vs-asymptotics validation harness");
    add_common(validate, true);
    validate->add_option("--ladder", ladder_text, "START:FACTOR:COUNT or comma list");
    validate->add_option("--kappa", kappa, "diagnostics kappa");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 3;
    }

    RunConfig cfg = parse_config(config_path);
    if (eps_override) {
        cfg.params.epsilon = *eps_override;
        cfg.params = validate_params(cfg.params);
    }
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (!format.empty()) cfg.output.format = format;
    if (!ladder_text.empty()) cfg.solver.ladder = parse_ladder(ladder_text);
    if (kappa && validate->parsed()) cfg.diagnostics.kappa = *kappa;

    if (solve->parsed()) return cmd_solve(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (asym->parsed()) return cmd_asymptotics(cfg, beta, gamma, kappa, theta, cfg.params.epsilon);
    if (cap->parsed()) return cmd_capacitance(cfg, with_numeric);
    return cmd_validate(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NewtonDiverged& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const SingularLinearSystem& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const NonFiniteState& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        // Everything else (config, query, domain errors) is a usage problem.
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
