#include "ccpb/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ccpb {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string solution_csv(const Solution& sol) {
    std::ostringstream os;
    os << "r,U,dU_dr,rho\n";
    const Mesh& mesh = *sol.mesh;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const PointState st = evaluate_solution(sol, mesh.node(i));
        os << fmt17(mesh.node(i)) << ',' << fmt17(st.u) << ',' << fmt17(st.du) << ','
           << fmt17(st.rho) << '\n';
    }
    return os.str();
}

std::string solution_summary_json(const Solution& sol) {
    json j;
    j["epsilon"] = sol.params.epsilon;
    j["I_p"] = sol.ip;
    j["I_q"] = sol.iq;
    j["U0"] = sol.u.front();
    j["UR"] = sol.u.back();
    j["iterations"] = sol.iterations;
    j["residual_inf"] = sol.residual_inf;
    j["gauge"] = sol.gauge == Gauge::ZeroMean ? "zero_mean"
               : sol.gauge == Gauge::Robin    ? "robin"
                                              : "boundary_pinned";
    j["nodes"] = sol.mesh->size();
    return j.dump(2) + "\n";
}

namespace {
json row_json(const ValidationRow& row) {
    json j;
    j["eps"] = row.eps;
    j["U_R_num"] = row.u_r_num;
    j["U_R_pred"] = row.u_r_pred;
    j["gap"] = row.gap;
    j["I_p"] = row.ip;
    j["I_q"] = row.iq;
    j["I_p_limit"] = row.ip_limit;
    j["I_q_limit"] = row.iq_limit;
    j["energy_est"] = row.energy_est;
    j["rho_est"] = row.rho_est;
    j["exp_est"] = row.exp_est;
    j["w_energy"] = row.w_energy;
    j["w_rho"] = row.w_rho;
    j["w_exp"] = row.w_exp;
    j["cap_num"] = row.cap_num;
    j["cap_limit"] = row.cap_limit;
    j["cap_interior"] = row.cap_interior;
    j["norms"] = row.norms;
    j["pass"] = row.pass;
    return j;
}
}  // namespace

std::string validation_csv(const ValidationReport& rep) {
    std::ostringstream os;
    os << "eps,U_R_num,U_R_pred,gap,I_p,I_q,I_p_limit,I_q_limit,energy_est,rho_est,exp_est,"
          "w_energy,w_rho,w_exp,cap_num,cap_limit,cap_interior";
    for (double theta : rep.thetas) os << ",norm_theta_" << fmt17(theta);
    os << ",pass\n";
    for (const auto& row : rep.rows) {
        os << fmt17(row.eps) << ',' << fmt17(row.u_r_num) << ',' << fmt17(row.u_r_pred) << ','
           << fmt17(row.gap) << ',' << fmt17(row.ip) << ',' << fmt17(row.iq) << ','
           << fmt17(row.ip_limit) << ',' << fmt17(row.iq_limit) << ',' << fmt17(row.energy_est)
           << ',' << fmt17(row.rho_est) << ',' << fmt17(row.exp_est) << ','
           << fmt17(row.w_energy) << ',' << fmt17(row.w_rho) << ',' << fmt17(row.w_exp) << ','
           << fmt17(row.cap_num) << ',' << fmt17(row.cap_limit) << ','
           << fmt17(row.cap_interior);
        for (double n : row.norms) os << ',' << fmt17(n);
        os << ',' << (row.pass ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string validation_json(const ValidationReport& rep) {
    json j;
    j["rows"] = json::array();
    for (const auto& row : rep.rows) j["rows"].push_back(row_json(row));
    j["thetas"] = rep.thetas;
    j["slopes"] = rep.slopes;
    j["slope_targets"] = rep.slope_targets;
    j["gap_monotone"] = rep.gap_monotone;
    j["degenerate"] = rep.degenerate;
    j["overall_pass"] = rep.overall_pass;
    return j.dump(2) + "\n";
}

std::string pohozaev_json(const PohozaevReport& rep) {
    json j;
    j["lhs1"] = rep.lhs1;
    j["rhs1"] = rep.rhs1;
    j["residual1"] = rep.residual1;
    j["lhs2"] = rep.lhs2;
    j["rhs2"] = rep.rhs2;
    j["residual2"] = rep.residual2;
    j["lambda1"] = rep.lambda1;
    j["lambda2"] = rep.lambda2;
    j["kappa"] = rep.kappa;
    j["snapped_r"] = rep.snapped_r;
    j["snap_error"] = rep.snap_error;
    return j.dump(2) + "\n";
}

std::string expansion_json(const ExpansionResult& res) {
    json j;
    j["U_leading"] = res.u_leading;
    j["U_second"] = res.u_second;
    j["U_total"] = res.u_total;
    j["dU_leading"] = res.du_leading;
    j["rho_leading"] = res.rho_leading;
    j["chi1"] = res.chi1;
    j["chi2"] = res.chi2;
    if (res.bound) {
        j["bound"]["kappa"] = res.bound->kappa;
        j["bound"]["magnitude"] = res.bound->magnitude;
        j["bound"]["form"] = "C * eps^kappa * log(1/eps)";
    }
    return j.dump(2) + "\n";
}

std::string capacitance_csv(const ModelParams& params, const std::vector<double>& gammas,
                            const std::vector<double>& numeric) {
    std::ostringstream os;
    os << "gamma,exact_limit,series_c1,series_c2,combination,supremum";
    const bool with_numeric = !numeric.empty();
    if (with_numeric) os << ",numeric";
    os << '\n';
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const CapacitanceReport rep = capacitance_limit(params, gammas[i]);
        os << fmt17(gammas[i]) << ',' << fmt17(rep.exact_limit) << ',' << fmt17(rep.series_c1)
           << ',' << fmt17(rep.series_c2) << ',' << fmt17(rep.combination) << ','
           << fmt17(rep.supremum);
        if (with_numeric) os << ',' << fmt17(numeric[i]);
        os << '\n';
    }
    return os.str();
}

std::string profile_plot_script(const std::vector<double>& epsilons) {
    std::ostringstream os;
    os << "# gnuplot script: potential profiles per epsilon\n"
          "set datafile separator ','\n"
          "set xlabel 'r'\n"
          "set ylabel 'U(r)'\n"
          "set key left bottom\n"
          "plot ";
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (i) os << ", \\\n     ";
        os << "'profile_" << i << ".csv' every ::1 using 1:2 with lines title 'eps="
           << fmt17(epsilons[i]) << "'";
    }
    os << '\n';
    return os.str();
}

std::string xi_plot_script() {
    return "# gnuplot script: boundary-value convergence xi(eps) = U(R) - leading term\n"
           "set datafile separator ','\n"
           "set logscale x\n"
           "set xlabel 'eps'\n"
           "set ylabel 'U(R) - predicted'\n"
           "plot 'validation.csv' every ::1 using 1:4 with linespoints title 'gap', 0 with "
           "lines dashtype 2 title 'limit'\n";
}

std::string capacitance_plot_script() {
    return "# gnuplot script: capacitance limit vs gamma\n"
           "set datafile separator ','\n"
           "set logscale x\n"
           "set xlabel 'gamma'\n"
           "set ylabel 'capacitance'\n"
           "plot 'capacitance.csv' every ::1 using 1:2 with linespoints title 'exact limit', \\\n"
           "     'capacitance.csv' every ::1 using 1:5 with linespoints title 'series "
           "combination'\n";
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& text) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigParse("cannot write output file: " + path);
    out << text;
    return path;
}

}  // namespace ccpb
