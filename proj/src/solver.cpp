#include "ccpb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccpb/asymptotics.hpp"

namespace ccpb {

namespace {

double pow_int(double x, int n) {
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}

/// Prescribed boundary flux in the conservative form: eps^2 g(R) R^{N-1} U'(R)
/// with the Neumann condition substituted, so eps^2 cancels exactly.
double boundary_flux(const ModelParams& p) {
    return pow_int(p.R, p.N) * (p.A - p.B) / p.N;
}

// --- tridiagonal + low-rank + border linear algebra ------------------------

/// LU factorization of a tridiagonal matrix (no pivoting; the assembled
/// matrices are diagonally dominant with negative diagonal).
struct TriFactor {
    std::vector<double> low;   // multipliers
    std::vector<double> piv;   // pivots
    std::vector<double> sup;

    TriFactor(const std::vector<double>& sub, const std::vector<double>& diag,
              const std::vector<double>& up)
        : low(sub.size()), piv(diag.size()), sup(up) {
        const std::size_t n = diag.size();
        piv[0] = diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(piv[i - 1]) < 1e-300)
                throw SingularLinearSystem("zero pivot in tridiagonal factor");
            low[i - 1] = sub[i - 1] / piv[i - 1];
            piv[i] = diag[i] - low[i - 1] * sup[i - 1];
        }
        if (std::abs(piv[n - 1]) < 1e-300)
            throw SingularLinearSystem("zero pivot in tridiagonal factor");
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        const std::size_t n = piv.size();
        std::vector<double> x(rhs);
        for (std::size_t i = 1; i < n; ++i) x[i] -= low[i - 1] * x[i - 1];
        x[n - 1] /= piv[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - sup[i] * x[i + 1]) / piv[i];
        return x;
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Solver for the bordered system
///   [ T + a b^T + c d^T   w ] [x ]   [y ]
///   [        w^T          0 ] [mu] = [yl]
/// via block elimination on the bordered tridiagonal part followed by a
/// rank-2 Woodbury correction for the non-local outer products.
class BorderedSolver {
public:
    BorderedSolver(const Assembly& asmbl, const std::vector<double>& w)
        : tri_(asmbl.sub, asmbl.diag, asmbl.sup), w_(w), b_(asmbl.b), d_(asmbl.d) {
        tw_ = tri_.solve(w_);
        den_ = dot(w_, tw_);
        if (std::abs(den_) < 1e-300)
            throw SingularLinearSystem("gauge border is orthogonal to the tridiagonal range");
        p1_ = base_solve(asmbl.a, 0.0);
        p2_ = base_solve(asmbl.c, 0.0);
        const double k11 = 1.0 + dot(b_, p1_.first);
        const double k12 = dot(b_, p2_.first);
        const double k21 = dot(d_, p1_.first);
        const double k22 = 1.0 + dot(d_, p2_.first);
        det_ = k11 * k22 - k12 * k21;
        if (std::abs(det_) < 1e-300)
            throw SingularLinearSystem("singular Woodbury capacitance matrix");
        k_[0] = k11; k_[1] = k12; k_[2] = k21; k_[3] = k22;
    }

    /// Solves the full bordered system; returns (x, mu).
    std::pair<std::vector<double>, double> solve(const std::vector<double>& y,
                                                 double y_lambda) const {
        auto z = base_solve(y, y_lambda);
        const double w1 = dot(b_, z.first);
        const double w2 = dot(d_, z.first);
        // 2x2 solve K s = w
        const double s1 = (k_[3] * w1 - k_[1] * w2) / det_;
        const double s2 = (k_[0] * w2 - k_[2] * w1) / det_;
        for (std::size_t i = 0; i < z.first.size(); ++i)
            z.first[i] -= s1 * p1_.first[i] + s2 * p2_.first[i];
        z.second -= s1 * p1_.second + s2 * p2_.second;
        return z;
    }

private:
    /// Solves the bordered tridiagonal system (without the outer products).
    std::pair<std::vector<double>, double> base_solve(const std::vector<double>& y,
                                                      double y_lambda) const {
        std::vector<double> t1 = tri_.solve(y);
        const double mu = (dot(w_, t1) - y_lambda) / den_;
        for (std::size_t i = 0; i < t1.size(); ++i) t1[i] -= mu * tw_[i];
        return {std::move(t1), mu};
    }

    TriFactor tri_;
    const std::vector<double>& w_;
    std::vector<double> b_, d_;
    std::vector<double> tw_;
    double den_;
    std::pair<std::vector<double>, double> p1_, p2_;
    double k_[4];
    double det_;
};

std::vector<double> face_fluxes(const ModelParams& params, const Mesh& mesh,
                                const std::vector<double>& u) {
    const std::size_t m = mesh.cells();
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = mesh.node(i + 1) - mesh.node(i);
        const double mid = 0.5 * (mesh.node(i) + mesh.node(i + 1));
        v[i] = params.dielectric.eval(mid) * pow_int(mid, params.N - 1) * (u[i + 1] - u[i]) / h;
    }
    return v;
}

double radial_mean_residual(const Mesh& mesh, const std::vector<double>& u) {
    return dot(mesh.radial_weights(), u);
}

void subtract_radial_mean(const Mesh& mesh, std::vector<double>& u) {
    double wsum = 0.0;
    for (double w : mesh.radial_weights()) wsum += w;
    const double shift = dot(mesh.radial_weights(), u) / wsum;
    for (double& x : u) x -= shift;
}

}  // namespace

std::pair<std::vector<double>, double> solve_bordered(const Assembly& assembly,
                                                      const std::vector<double>& border,
                                                      const std::vector<double>& rhs,
                                                      double rhs_border) {
    BorderedSolver lin(assembly, border);
    return lin.solve(rhs, rhs_border);
}

MeshPolicy default_mesh_policy() {
    return [](const ModelParams& params) -> MeshSpec {
        return GeometricSpec::default_for(params);
    };
}

Assembly assemble_system(const ModelParams& params, const Mesh& mesh,
                         const std::vector<double>& u) {
    if (u.size() != mesh.size())
        throw LengthMismatch("state vector length does not match mesh node count");
    for (double x : u)
        if (!std::isfinite(x)) throw NonFiniteState("non-finite potential value");

    const std::size_t n = mesh.size();
    const std::size_t m = n - 1;
    const auto& w = mesh.radial_weights();
    const double eps2 = params.epsilon * params.epsilon;
    const double c0 = pow_int(params.R, params.N) / params.N;  // |Omega| in the radial measure

    // Shifted exponential sums: E_i = e^{pU_i}/I_p and G_i = e^{-qU_i}/I_q are
    // computed entirely from differences to the extreme value, so they stay
    // finite for any layer amplitude.
    const double umax = *std::max_element(u.begin(), u.end());
    const double umin = *std::min_element(u.begin(), u.end());
    double sp = 0.0, sq = 0.0;
    std::vector<double> ep(n), gq(n);
    for (std::size_t i = 0; i < n; ++i) {
        ep[i] = std::exp(params.p * (u[i] - umax));
        gq[i] = std::exp(-params.q * (u[i] - umin));
        sp += w[i] * ep[i];
        sq += w[i] * gq[i];
    }
    if (!(sp > 0.0) || !(sq > 0.0) || !std::isfinite(sp) || !std::isfinite(sq))
        throw NonFiniteState("degenerate non-local integrals");

    Assembly out;
    out.log_ip = params.p * umax + std::log(sp);
    out.log_iq = -params.q * umin + std::log(sq);
    out.ip = std::exp(out.log_ip);
    out.iq = std::exp(out.log_iq);
    out.flux_scale = std::abs(boundary_flux(params));
    if (out.flux_scale == 0.0) out.flux_scale = c0 * (params.A + params.B);

    for (std::size_t i = 0; i < n; ++i) {
        ep[i] /= sp;  // now e^{pU_i}/I_p
        gq[i] /= sq;  // now e^{-qU_i}/I_q
    }

    // Face conductances (with eps^2 folded in).
    std::vector<double> cond(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = mesh.node(i + 1) - mesh.node(i);
        const double mid = 0.5 * (mesh.node(i) + mesh.node(i + 1));
        cond[i] = eps2 * params.dielectric.eval(mid) * pow_int(mid, params.N - 1) / h;
    }

    out.residual.assign(n, 0.0);
    out.sub.assign(m, 0.0);
    out.diag.assign(n, 0.0);
    out.sup.assign(m, 0.0);
    out.a.resize(n);
    out.b.resize(n);
    out.c.resize(n);
    out.d.resize(n);

    const double phi = boundary_flux(params);
    for (std::size_t i = 0; i < n; ++i) {
        const double source = c0 * (params.A * ep[i] - params.B * gq[i]);
        const double source_loc = c0 * (params.p * params.A * ep[i] + params.q * params.B * gq[i]);
        double f = -w[i] * source;
        double dd = -w[i] * source_loc;
        if (i < m) {  // flux out through face i+1/2
            f += cond[i] * (u[i + 1] - u[i]);
            dd -= cond[i];
            out.sup[i] = cond[i];
        } else {
            f += phi;  // prescribed boundary flux at r = R
        }
        if (i > 0) {  // flux in through face i-1/2
            f -= cond[i - 1] * (u[i] - u[i - 1]);
            dd -= cond[i - 1];
            out.sub[i - 1] = cond[i - 1];
        }
        out.residual[i] = f;
        out.diag[i] = dd;
        out.a[i] = c0 * params.p * params.A * w[i] * ep[i];
        out.b[i] = w[i] * ep[i];
        out.c[i] = c0 * params.q * params.B * w[i] * gq[i];
        out.d[i] = w[i] * gq[i];
        if (!std::isfinite(f)) throw NonFiniteState("non-finite residual entry");
    }
    return out;
}

Solution solve_newton(const ModelParams& params, std::shared_ptr<const Mesh> mesh,
                      const std::vector<double>& init, const NewtonOptions& opts) {
    const Mesh& msh = *mesh;
    std::vector<double> u(init);
    if (u.size() != msh.size())
        throw LengthMismatch("initial state length does not match mesh node count");

    Solution sol;
    sol.params = params;
    sol.mesh = mesh;
    sol.gauge = Gauge::ZeroMean;

    if (params.A == params.B) {
        // Trivial regime: the equation only admits U = const and the zero-mean
        // gauge picks U = 0 — no Newton needed.
        std::fill(u.begin(), u.end(), 0.0);
        Assembly asmbl = assemble_system(params, msh, u);
        sol.u = std::move(u);
        sol.face_flux = face_fluxes(params, msh, sol.u);
        sol.ip = asmbl.ip;
        sol.iq = asmbl.iq;
        sol.log_ip = asmbl.log_ip;
        sol.log_iq = asmbl.log_iq;
        sol.iterations = 0;
        sol.residual_inf = 0.0;
        for (double f : asmbl.residual) sol.residual_inf = std::max(sol.residual_inf, std::abs(f));
        return sol;
    }

    const auto& w = msh.radial_weights();
    double lambda = 0.0;

    auto merit = [&](const Assembly& asmbl, const std::vector<double>& state, double lam) {
        double m = std::abs(dot(w, state));  // zero-mean constraint residual
        for (std::size_t i = 0; i < asmbl.residual.size(); ++i)
            m = std::max(m, std::abs(asmbl.residual[i] + lam * w[i]));
        return m;
    };

    Assembly asmbl = assemble_system(params, msh, u);
    double cur = merit(asmbl, u, lambda);
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if (cur <= opts.tol * asmbl.flux_scale) break;

        BorderedSolver lin(asmbl, w);
        std::vector<double> rhs(msh.size());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = -(asmbl.residual[i] + lambda * w[i]);
        auto [du, dlambda] = lin.solve(rhs, -radial_mean_residual(msh, u));

        // Halving line search on the merit norm; non-finite trials rejected.
        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial(u.size());
        while (step >= opts.min_step) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + step * du[i];
            const double lam_trial = lambda + step * dlambda;
            try {
                Assembly trial_asm = assemble_system(params, msh, trial);
                const double m = merit(trial_asm, trial, lam_trial);
                if (m < cur) {
                    u.swap(trial);
                    lambda = lam_trial;
                    asmbl = std::move(trial_asm);
                    cur = m;
                    accepted = true;
                    break;
                }
            } catch (const NonFiniteState&) {
                // fall through to a shorter step
            }
            step *= 0.5;
        }
        if (!accepted) {
            std::ostringstream os;
            os << "line search stalled at eps=" << params.epsilon << ", merit=" << cur;
            throw NewtonDiverged(os.str());
        }
    }
    if (cur > opts.tol * asmbl.flux_scale) {
        std::ostringstream os;
        os << "no convergence in " << opts.max_iter << " iterations at eps=" << params.epsilon
           << ", merit=" << cur;
        throw NewtonDiverged(os.str());
    }

    sol.u = std::move(u);
    sol.face_flux = face_fluxes(params, msh, sol.u);
    sol.ip = asmbl.ip;
    sol.iq = asmbl.iq;
    sol.log_ip = asmbl.log_ip;
    sol.log_iq = asmbl.log_iq;
    sol.iterations = it;
    sol.residual_inf = cur;
    return sol;
}

Solution solve_newton(const ModelParams& params, std::shared_ptr<const Mesh> mesh,
                      const NewtonOptions& opts) {
    return solve_newton(params, mesh, std::vector<double>(mesh->size(), 0.0), opts);
}

std::vector<Solution> solve_continuation(const ModelParams& params,
                                         const std::vector<double>& eps_ladder,
                                         const MeshPolicy& policy, const NewtonOptions& opts,
                                         bool seed_with_profile) {
    if (eps_ladder.empty()) throw MalformedQuery("empty continuation ladder");
    for (std::size_t k = 1; k < eps_ladder.size(); ++k)
        if (!(eps_ladder[k] < eps_ladder[k - 1]))
            throw MalformedQuery("continuation ladder must be strictly decreasing");

    std::vector<Solution> out;
    out.reserve(eps_ladder.size());
    std::vector<double> path;

    for (double eps : eps_ladder) {
        ModelParams p = params;
        p.epsilon = eps;
        auto mesh = std::make_shared<const Mesh>(Mesh::build(p, policy(p)));

        std::vector<double> seed(mesh->size(), 0.0);
        if (out.empty()) {
            if (seed_with_profile && params.A != params.B) {
                for (std::size_t i = 0; i < mesh->size(); ++i)
                    seed[i] = layer_profile(p, mesh->node(i));
                subtract_radial_mean(*mesh, seed);
            }
        } else {
            // Transfer the previous solution by piecewise-linear interpolation
            // (monotone by construction), then re-center to the zero-mean gauge.
            const Solution& prev = out.back();
            const Mesh& pm = *prev.mesh;
            for (std::size_t i = 0; i < mesh->size(); ++i) {
                const double r = std::min(mesh->node(i), pm.R());
                const std::size_t j = pm.locate(r);
                const double h = pm.node(j + 1) - pm.node(j);
                const double t = (r - pm.node(j)) / h;
                seed[i] = (1.0 - t) * prev.u[j] + t * prev.u[j + 1];
            }
            subtract_radial_mean(*mesh, seed);
        }

        Solution sol = solve_newton(p, mesh, seed, opts);
        path.push_back(eps);
        sol.continuation_path = path;
        out.push_back(std::move(sol));
    }
    return out;
}

Solution robin_transform(const Solution& neumann, double eta) {
    if (!(eta >= 0.0)) throw NonPositiveParameter("eta must be >= 0");
    const ModelParams& p = neumann.params;
    const double gR = p.dielectric.eval(p.R);
    const double robin_value =
        eta * p.R * (p.B - p.A) / (p.epsilon * p.epsilon * p.N * gR);
    const double shift = robin_value - neumann.u.back();

    Solution out = neumann;
    for (double& x : out.u) x += shift;
    out.gauge = Gauge::Robin;
    out.params.eta = eta;
    // The non-local integrals pick up the constant shift exactly.
    out.log_ip += p.p * shift;
    out.log_iq -= p.q * shift;
    out.ip = std::exp(out.log_ip);
    out.iq = std::exp(out.log_iq);
    return out;
}

PointState evaluate_solution(const Solution& sol, double r) {
    const Mesh& mesh = *sol.mesh;
    if (r < 0.0 || r > mesh.R()) throw OutOfDomain("evaluation radius outside [0, R]");
    const std::size_t i = mesh.locate(r);
    const double h = mesh.node(i + 1) - mesh.node(i);
    const double t = (r - mesh.node(i)) / h;

    PointState st{};
    st.u = (1.0 - t) * sol.u[i] + t * sol.u[i + 1];

    if (r == 0.0) {
        st.du = 0.0;  // symmetry condition at the origin
    } else {
        const ModelParams& p = sol.params;
        st.du = sol.face_flux[i] /
                (p.dielectric.eval(r) * pow_int(r, p.N - 1));
    }

    const ModelParams& p = sol.params;
    const double c0 = pow_int(p.R, p.N) / p.N;
    st.rho = -c0 * (p.A * std::exp(p.p * st.u - sol.log_ip) -
                    p.B * std::exp(-p.q * st.u - sol.log_iq));
    return st;
}

}  // namespace ccpb
