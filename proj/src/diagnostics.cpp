#include "ccpb/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "ccpb/asymptotics.hpp"

namespace ccpb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_int(double x, int n) {
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}

struct FaceData {
    std::vector<double> mid, width, du;  // per cell: midpoint, width, (U_{i+1}-U_i)/h
};

FaceData faces(const Solution& sol) {
    const Mesh& mesh = *sol.mesh;
    FaceData f;
    const std::size_t m = mesh.cells();
    f.mid.resize(m);
    f.width.resize(m);
    f.du.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        f.width[i] = mesh.node(i + 1) - mesh.node(i);
        f.mid[i] = 0.5 * (mesh.node(i) + mesh.node(i + 1));
        f.du[i] = (sol.u[i + 1] - sol.u[i]) / f.width[i];
    }
    return f;
}

double rho_at_node(const Solution& sol, std::size_t i) {
    const ModelParams& p = sol.params;
    const double c0 = pow_int(p.R, p.N) / p.N;
    return -c0 * (p.A * std::exp(p.p * sol.u[i] - sol.log_ip) -
                  p.B * std::exp(-p.q * sol.u[i] - sol.log_iq));
}

unsigned env_workers() {
    if (const char* s = std::getenv("CCPB_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

}  // namespace

PohozaevReport pohozaev_check(const Solution& sol, double kappa) {
    if (!(kappa > 0.0) || !(kappa < 1.0))
        throw KappaOutOfRange("kappa must lie in (0, 1)");
    const ModelParams& p = sol.params;
    const Mesh& mesh = *sol.mesh;
    const FaceData f = faces(sol);
    const double eps2 = p.epsilon * p.epsilon;
    const double c0 = pow_int(p.R, p.N) / p.N;
    const double rn = pow_int(p.R, p.N);
    const double gR = p.dielectric.eval(p.R);

    PohozaevReport rep{};
    rep.kappa = kappa;

    // Gradient-energy quadratures (midpoint rule on each cell, where U' lives).
    double lam1 = 0.0;
    for (std::size_t i = 0; i < f.mid.size(); ++i) {
        const double g = p.dielectric.eval(f.mid[i]);
        const double dg = p.dielectric.deriv(f.mid[i]);
        lam1 += ((p.N - 2) * g + f.mid[i] * dg) / rn * pow_int(f.mid[i], p.N - 1) *
                f.du[i] * f.du[i] * f.width[i];
    }
    rep.lambda1 = 0.5 * eps2 * lam1;

    auto lhs_at = [&](double u_val) {
        return c0 * (p.A * std::exp(p.p * u_val - sol.log_ip) / p.p +
                     p.B * std::exp(-p.q * u_val - sol.log_iq) / p.q);
    };

    rep.lhs1 = lhs_at(sol.u.back());
    rep.rhs1 = p.R * p.R * (p.A - p.B) * (p.A - p.B) / (2.0 * p.N * p.N * eps2 * gR) +
               p.A / p.p + p.B / p.q + rep.lambda1;
    rep.residual1 = std::abs(rep.lhs1 - rep.rhs1) /
                    std::max(std::abs(rep.lhs1), std::abs(rep.rhs1));

    // Identity 2 is anchored at r = eps^kappa, snapped to the nearest node.
    const double target = std::pow(p.epsilon, kappa);
    std::size_t k = 0;
    double best = kInf;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double d = std::abs(mesh.node(i) - target);
        if (d < best) {
            best = d;
            k = i;
        }
    }
    rep.snapped_r = mesh.node(k);
    rep.snap_error = best;

    double du_k;
    if (k == 0)
        du_k = 0.0;
    else if (k >= f.du.size())
        du_k = f.du.back();
    else
        du_k = 0.5 * (f.du[k - 1] + f.du[k]);

    double lam2_int = 0.0;
    for (std::size_t i = k; i < f.mid.size(); ++i) {
        const double g = p.dielectric.eval(f.mid[i]);
        const double dg = p.dielectric.deriv(f.mid[i]);
        lam2_int += (2.0 * (p.N - 1) * g + f.mid[i] * dg) / f.mid[i] * f.du[i] * f.du[i] *
                    f.width[i];
    }
    rep.lambda2 = -0.5 * eps2 * p.dielectric.eval(rep.snapped_r) * du_k * du_k +
                  0.5 * eps2 * lam2_int;

    rep.lhs2 = lhs_at(sol.u[k]);
    rep.rhs2 = p.A / p.p + p.B / p.q + rep.lambda1 - rep.lambda2;
    rep.residual2 = std::abs(rep.lhs2 - rep.rhs2) /
                    std::max(std::abs(rep.lhs2), std::abs(rep.rhs2));
    return rep;
}

InequalityLedger inequality_suite(const Solution& sol) {
    const ModelParams& p = sol.params;
    const double c0 = pow_int(p.R, p.N) / p.N;
    const bool ab_equal = (p.A == p.B);
    const bool a_less = (p.A < p.B);
    // Analytic inequalities hold exactly in the continuum; the slack absorbs
    // quadrature and solver tolerance on the discrete solution.
    const double slack = 1e-8 * std::max(1.0, std::abs(p.A - p.B));

    InequalityLedger ledger;
    auto add = [&](std::string name, double value, double lower, double upper) {
        InequalityCheck c;
        c.name = std::move(name);
        c.value = value;
        c.lower = lower;
        c.upper = upper;
        c.pass = (value >= lower - slack) && (value <= upper + slack);
        c.margin = std::min(value - lower, upper - value);
        ledger.checks.push_back(std::move(c));
    };

    // Inverse Hoelder product ||e^U||_{L^p} ||e^{-U}||_{L^q} in the radial measure.
    const double product = std::exp(sol.log_ip / p.p + sol.log_iq / p.q);
    const double measure_pow = std::pow(c0, 1.0 / p.p + 1.0 / p.q);
    const double hoelder_factor =
        std::max(std::pow(p.B / p.A, 1.0 / p.q), std::pow(p.A / p.B, 1.0 / p.p));
    add("inverse_hoelder", product, measure_pow, measure_pow * hoelder_factor);

    // Mean bounds on the non-local integrals.
    add("mean_ip", sol.ip / c0, 1.0,
        std::max(p.A / p.B, std::pow(p.B / p.A, p.p / p.q)));
    add("mean_iq", sol.iq / c0, 1.0,
        std::max(p.B / p.A, std::pow(p.A / p.B, p.q / p.p)));

    // Sign and range of the source bracket w = -rho.
    double wmax = -kInf, wmin = kInf;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double w = -rho_at_node(sol, i);
        wmax = std::max(wmax, w);
        wmin = std::min(wmin, w);
    }
    if (ab_equal)
        add("bracket_range", wmax, -kInf, 0.0);
    else if (a_less)
        add("bracket_range", wmax, p.A - p.B, 0.0);
    else
        add("bracket_range", wmin, 0.0, p.A - p.B);

    // Extreme value of U at the origin.
    if (!ab_equal) {
        if (a_less)
            add("u0_bound", sol.u.front(), 0.0, std::log(p.B / p.A) / p.q);
        else
            add("u0_bound", sol.u.front(), -std::log(p.A / p.B) / p.p, 0.0);
    }

    // Nodal monotonicity of U and of the flux g r^{N-1} U'.
    double worst_du = a_less || ab_equal ? -kInf : kInf;
    for (std::size_t i = 0; i + 1 < sol.u.size(); ++i) {
        const double d = sol.u[i + 1] - sol.u[i];
        worst_du = (a_less || ab_equal) ? std::max(worst_du, d) : std::min(worst_du, d);
    }
    if (a_less || ab_equal)
        add("monotone_u", worst_du, -kInf, 0.0);
    else
        add("monotone_u", worst_du, 0.0, kInf);

    double worst_dv = a_less || ab_equal ? -kInf : kInf;
    for (std::size_t i = 0; i + 1 < sol.face_flux.size(); ++i) {
        const double d = sol.face_flux[i + 1] - sol.face_flux[i];
        worst_dv = (a_less || ab_equal) ? std::max(worst_dv, d) : std::min(worst_dv, d);
    }
    if (a_less || ab_equal)
        add("monotone_flux", worst_dv, -kInf, 0.0);
    else
        add("monotone_flux", worst_dv, 0.0, kInf);

    // Pointwise lower bound on the combined Boltzmann densities.
    double comb_min = kInf;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double v = p.p * p.A * std::exp(p.p * sol.u[i] - sol.log_ip) +
                         p.q * p.B * std::exp(-p.q * sol.u[i] - sol.log_iq);
        comb_min = std::min(comb_min, v);
    }
    const double lower = p.N * (p.p + p.q) * std::min(p.A, p.B) / pow_int(p.R, p.N) *
                         std::pow(p.q / p.p, (p.p - p.q) / (p.p + p.q));
    add("pointwise_lower", comb_min, lower, kInf);

    ledger.all_pass = std::all_of(ledger.checks.begin(), ledger.checks.end(),
                                  [](const InequalityCheck& c) { return c.pass; });
    return ledger;
}

double delta_weight_estimate(const Solution& sol, const std::function<double(double)>& h,
                             DeltaTarget target) {
    const ModelParams& p = sol.params;
    const Mesh& mesh = *sol.mesh;

    if (target == DeltaTarget::Energy) {
        const FaceData f = faces(sol);
        double acc = 0.0;
        for (std::size_t i = 0; i < f.mid.size(); ++i) {
            const double e = p.epsilon * f.du[i];
            acc += h(f.mid[i]) * e * e * f.width[i];
        }
        return acc;
    }

    double acc = 0.0;
    const auto& w = mesh.plain_weights();
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        double val;
        if (target == DeltaTarget::Rho) {
            val = rho_at_node(sol, i);
        } else {
            val = (p.A < p.B) ? std::expm1(-p.q * sol.u[i]) : std::expm1(p.p * sol.u[i]);
        }
        acc += w[i] * h(mesh.node(i)) * val;
    }
    return acc;
}

double capacitance_numeric(const Solution& sol, double r_lo) {
    const ModelParams& p = sol.params;
    if (!(r_lo > 0.0) || !(r_lo < p.R))
        throw OutOfDomain("capacitance probe radius must lie in (0, R)");
    const PointState st = evaluate_solution(sol, r_lo);
    const double u_r = sol.u.back();
    const double denom = u_r - st.u;
    if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(u_r)))
        throw DegenerateDenominator("potential drop across the probe interval vanishes");
    const double eps2 = p.epsilon * p.epsilon;
    const double flux = eps2 * p.dielectric.eval(r_lo) * pow_int(r_lo, p.N - 1) * st.du;
    const double num = pow_int(p.R, p.N) * (p.A - p.B) / p.N - flux;
    return std::abs(num / denom);
}

double grad_norm(const Solution& sol, double theta) {
    if (!(theta > 0.0) || !(theta < 2.0))
        throw MalformedQuery("theta must lie in (0, 2)");
    const FaceData f = faces(sol);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.mid.size(); ++i)
        acc += std::pow(std::abs(sol.params.epsilon * f.du[i]), theta) * f.width[i];
    return std::pow(acc, 1.0 / theta);
}

double norm_decay_fit(const std::vector<Solution>& sols, double theta) {
    if (sols.size() < 4)
        throw InsufficientData("norm-decay fit needs at least 4 ladder points");
    if (!(theta > 0.0) || !(theta < 2.0))
        throw MalformedQuery("theta must lie in (0, 2)");
    std::vector<double> x, y;
    for (const Solution& s : sols) {
        const double eps = s.params.epsilon;
        double v = grad_norm(s, theta);
        if (theta <= 1.0) v /= std::log(1.0 / eps);  // divide out the proven log factor
        x.push_back(std::log(eps));
        y.push_back(std::log(v));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

ValidationReport validate_report(const ModelParams& params, const std::vector<double>& eps_ladder,
                                 const ValidationOptions& opts) {
    ValidationReport rep;
    rep.thetas = opts.thetas;
    rep.degenerate = (params.A == params.B);

    const std::vector<Solution> sols = solve_continuation(
        params, eps_ladder, opts.mesh_policy, opts.newton, opts.seed_with_profile);

    const DeltaWeights weights = delta_weights(params);
    double lead = 0.0, second = 0.0;
    if (!rep.degenerate) {
        auto be = boundary_expansion(params);
        lead = be.first;
        second = be.second;
    }

    rep.rows.resize(sols.size());
    auto fill_row = [&](std::size_t k) {
        const Solution& sol = sols[k];
        const double eps = sol.params.epsilon;
        ValidationRow row;
        row.eps = eps;
        row.u_r_num = sol.u.back();
        row.u_r_pred = rep.degenerate ? 0.0 : lead * std::log(1.0 / eps) + second;
        row.gap = row.u_r_num - row.u_r_pred;
        row.ip = sol.ip;
        row.iq = sol.iq;
        const CoefficientLimits cl = coefficient_limits(params);
        row.ip_limit = cl.ip_limit;
        row.iq_limit = cl.iq_limit;
        auto one = [](double) { return 1.0; };
        row.energy_est = delta_weight_estimate(sol, one, DeltaTarget::Energy);
        row.rho_est = delta_weight_estimate(sol, one, DeltaTarget::Rho);
        row.exp_est = delta_weight_estimate(sol, one, DeltaTarget::Exp);
        row.w_energy = weights.w_energy;
        row.w_rho = weights.w_rho;
        row.w_exp = weights.w_exp;

        const double nan = std::nan("");
        row.cap_num = nan;
        row.cap_limit = nan;
        row.cap_interior = nan;
        if (!rep.degenerate) {
            row.cap_limit = capacitance_limit(params, opts.cap_gamma).exact_limit;
            const double r_lo = params.R - opts.cap_gamma * eps * eps;
            if (r_lo > 0.0 && r_lo < params.R) {
                try {
                    row.cap_num = capacitance_numeric(sol, r_lo);
                } catch (const DegenerateDenominator&) {
                }
            }
            try {
                row.cap_interior = capacitance_numeric(sol, 0.5 * params.R);
            } catch (const DegenerateDenominator&) {
            }
        }

        for (double theta : opts.thetas) row.norms.push_back(grad_norm(sol, theta));

        const ValidationTolerances& tol = opts.tolerances;
        if (rep.degenerate) {
            row.pass = std::abs(row.u_r_num) <= 10.0 * opts.newton.tol;
        } else {
            row.pass = std::abs(row.gap) <= tol.xi &&
                       std::abs(row.ip - row.ip_limit) <= tol.coeff &&
                       std::abs(row.iq - row.iq_limit) <= tol.coeff &&
                       std::abs(row.energy_est - row.w_energy) <= tol.weight_rel * row.w_energy &&
                       std::abs(row.rho_est - row.w_rho) <= tol.weight_rel * row.w_rho &&
                       std::isfinite(row.cap_num) &&
                       std::abs(row.cap_num - row.cap_limit) <= tol.cap_rel * row.cap_limit;
        }
        rep.rows[k] = std::move(row);
    };

    // Rows are independent pure readers of the solutions: fan them out.
    unsigned workers = opts.workers ? opts.workers : env_workers();
    workers = std::min<unsigned>(workers, static_cast<unsigned>(sols.size()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < sols.size(); ++k) fill_row(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < sols.size(); k = next.fetch_add(1))
                    fill_row(k);
            });
        for (auto& th : pool) th.join();
    }

    for (double theta : opts.thetas) {
        double slope = std::nan("");
        double target = std::min(1.0, 2.0 / theta - 1.0);
        if (sols.size() >= 4) slope = norm_decay_fit(sols, theta);
        rep.slopes.push_back(slope);
        rep.slope_targets.push_back(target);
    }

    // Trend check: |gap| shrinking over the last (up to 5) ladder points.
    rep.gap_monotone = true;
    const std::size_t n = rep.rows.size();
    const std::size_t span = std::min<std::size_t>(5, n);
    for (std::size_t i = n - span; i + 1 < n; ++i)
        if (!(std::abs(rep.rows[i + 1].gap) < std::abs(rep.rows[i].gap)))
            rep.gap_monotone = false;

    bool slopes_ok = true;
    for (std::size_t i = 0; i < rep.slopes.size(); ++i)
        if (std::isfinite(rep.slopes[i]) &&
            std::abs(rep.slopes[i] - rep.slope_targets[i]) > opts.tolerances.slope)
            slopes_ok = false;

    rep.overall_pass = rep.rows.back().pass && (rep.degenerate || rep.gap_monotone) && slopes_ok;
    return rep;
}

}  // namespace ccpb
