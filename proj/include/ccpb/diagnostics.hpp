#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ccpb/solver.hpp"

namespace ccpb {

/// Both Pohozaev-type identities evaluated by quadrature on the solution mesh.
struct PohozaevReport {
    double lhs1, rhs1, residual1;  ///< identity anchored at r = R
    double lhs2, rhs2, residual2;  ///< identity anchored at r = eps^kappa
    double lambda1, lambda2;       ///< gradient-energy quadrature terms
    double kappa;
    double snapped_r;    ///< mesh node nearest to eps^kappa actually used
    double snap_error;   ///< |snapped_r - eps^kappa|
};

struct InequalityCheck {
    std::string name;
    double value;
    double lower, upper;  ///< admissible interval (+-infinity when one-sided)
    double margin;        ///< distance to the nearest violated bound (>= 0 when passing)
    bool pass;
};

struct InequalityLedger {
    std::vector<InequalityCheck> checks;
    bool all_pass;
};

enum class DeltaTarget { Rho, Energy, Exp };

struct ValidationTolerances {
    double xi = 0.15;        ///< |U(R) - predicted| at the final ladder point
    double coeff = 0.05;     ///< |I_p - limit|, |I_q - limit|
    double weight_rel = 0.05;  ///< relative error of the delta-weight quadratures
    double cap_rel = 0.05;   ///< relative error of the layer capacitance
    double slope = 0.15;     ///< norm-decay slope deviation
};

struct ValidationOptions {
    double kappa = 0.5;
    std::vector<double> thetas{1.0, 1.5};
    double cap_gamma = 4.0;  ///< capacitance probed at r_lo = R - cap_gamma eps^2
    ValidationTolerances tolerances;
    NewtonOptions newton;
    MeshPolicy mesh_policy = default_mesh_policy();
    bool seed_with_profile = false;
    unsigned workers = 0;  ///< 0: use CCPB_THREADS or 1
};

struct ValidationRow {
    double eps;
    double u_r_num, u_r_pred, gap;
    double ip, iq, ip_limit, iq_limit;
    double energy_est, rho_est, exp_est;       ///< quadratures with h = 1
    double w_energy, w_rho, w_exp;             ///< asymptotic delta weights
    double cap_num, cap_limit, cap_interior;   ///< capacitance probes (NaN if out of range)
    std::vector<double> norms;                 ///< ||eps U'||_{L^theta}, aligned with thetas
    bool pass;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;  ///< sorted by decreasing eps
    std::vector<double> thetas;
    std::vector<double> slopes;         ///< fitted norm-decay slopes (NaN if < 4 rows)
    std::vector<double> slope_targets;  ///< min{1, 2/theta - 1}
    bool gap_monotone;   ///< |gap| decreasing over the last (up to 5) rows
    bool degenerate;     ///< A == B regime
    bool overall_pass;
};

PohozaevReport pohozaev_check(const Solution& sol, double kappa);

InequalityLedger inequality_suite(const Solution& sol);

/// Plain-measure quadrature of h(r) times the selected concentrating density.
double delta_weight_estimate(const Solution& sol, const std::function<double(double)>& h,
                             DeltaTarget target);

/// Two-point capacitance estimate from the numerical fluxes.
double capacitance_numeric(const Solution& sol, double r_lo);

/// ||eps U'||_{L^theta(0,R)} with plain measure.
double grad_norm(const Solution& sol, double theta);

/// Log-log slope of the norm decay over an epsilon ladder; for theta <= 1 the
/// log(1/eps) factor is divided out before fitting.
double norm_decay_fit(const std::vector<Solution>& sols, double theta);

ValidationReport validate_report(const ModelParams& params, const std::vector<double>& eps_ladder,
                                 const ValidationOptions& opts = {});

}  // namespace ccpb
