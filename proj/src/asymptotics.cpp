#include "ccpb/asymptotics.hpp"

#include <cmath>

namespace ccpb {

namespace {

double pow_int(double x, int n) {
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}

/// All closed forms below are written for the A < B ordering.  The opposite
/// ordering is handled by swapping (A,p) <-> (B,q) and negating U, U' and rho
/// on the way out.
struct Frame {
    ModelParams p;
    double sign;

    explicit Frame(const ModelParams& params) {
        p = params;
        sign = 1.0;
        if (params.A > params.B) {
            std::swap(p.A, p.B);
            std::swap(p.p, p.q);
            sign = -1.0;
        }
    }
};

void require_distinct(const ModelParams& params) {
    if (params.A == params.B)
        throw EqualConcentrations("asymptotic expansion requires A != B");
}

double log_inv(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw MalformedQuery("evaluation epsilon must lie in (0, 1)");
    return std::log(1.0 / eps);
}

/// log applied n times to 1/eps; requires every stage to stay positive.
double iterated_log(int n, double eps) {
    double x = 1.0 / eps;
    for (int k = 0; k < n; ++k) {
        if (!(x > 0.0)) throw MalformedQuery("iterated logarithm undefined at this epsilon");
        x = std::log(x);
    }
    return x;
}

/// Simpson quadrature of g^{-1/2} on [r, R] (exact for constant profiles).
double inv_sqrt_g_integral(const ModelParams& p, double r) {
    if (p.dielectric.is_constant())
        return (p.R - r) / std::sqrt(p.dielectric.eval(p.R));
    const int n = 256;  // even
    const double h = (p.R - r) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = r + h * i;
        const double f = 1.0 / std::sqrt(p.dielectric.eval(x));
        const double coef = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += coef * f;
    }
    return acc * h / 3.0;
}

}  // namespace

CoefficientLimits coefficient_limits(const ModelParams& params, double mean) {
    const double c0 = pow_int(params.R, params.N) / params.N;
    CoefficientLimits out{};
    out.degenerate = (params.A == params.B);
    if (out.degenerate) {
        out.ip_limit = c0;
        out.iq_limit = c0;
    } else if (params.A < params.B) {
        out.ip_limit = c0;
        out.iq_limit = (params.B / params.A) * c0;
    } else {
        out.ip_limit = (params.A / params.B) * c0;
        out.iq_limit = c0;
    }
    out.ip_limit *= std::exp(params.p * mean);
    out.iq_limit *= std::exp(-params.q * mean);
    return out;
}

std::pair<double, double> boundary_expansion(const ModelParams& params) {
    require_distinct(params);
    const Frame f(params);
    const double gR = f.p.dielectric.eval(f.p.R);
    const double diff2 = (f.p.B - f.p.A) * (f.p.B - f.p.A);
    const double lead = -2.0 / f.p.q;
    const double second =
        std::log(2.0 * f.p.A * f.p.N * f.p.N * gR / (f.p.q * f.p.R * f.p.R * diff2)) / f.p.q;
    return {f.sign * lead, f.sign * second};
}

ExpansionResult interior_expansion(const ModelParams& params, const ExpansionQuery& query) {
    require_distinct(params);
    const Frame f(params);
    const ModelParams& p = f.p;
    const double L = log_inv(query.epsilon);
    const double eps = query.epsilon;
    const double gR = p.dielectric.eval(p.R);
    const double curv = 2.0 * p.N * gR / (p.R * (p.B - p.A));  // curvature term in the layer log

    ExpansionResult res;

    auto finish = [&](ExpansionResult r) {
        r.u_leading *= f.sign;
        r.u_second *= f.sign;
        r.du_leading *= f.sign;
        r.rho_leading *= f.sign;
        r.u_total = r.u_leading + r.u_second;
        return r;
    };

    if (const auto* in = std::get_if<InteriorQuery>(&query.where)) {
        if (!(in->kappa > 0.0) || !(in->kappa < 1.0))
            throw MalformedQuery("interior kappa must lie in (0, 1)");
        res.bound = BoundDescriptor{in->kappa, std::pow(eps, in->kappa) * L};
        const double nan = std::nan("");
        res.u_leading = res.u_second = res.u_total = nan;
        res.du_leading = res.rho_leading = nan;
        return res;  // bound descriptor only; no sign to apply
    }

    if (const auto* pw = std::get_if<PowerQuery>(&query.where)) {
        if (!(pw->beta > 1.0)) throw MalformedQuery("power exponent beta must exceed 1");
        if (pw->beta <= 2.0 && !(pw->gamma > 0.0))
            throw MalformedQuery("power case with beta <= 2 needs gamma > 0");
        res.chi1 = (pw->beta <= 2.0);
        res.chi2 = (pw->beta >= 2.0);
        res.u_leading = -(2.0 / p.q) * std::min(1.0, pw->beta - 1.0) * L;
        const double arg = std::sqrt(p.A / (2.0 * p.q * gR)) *
                           ((res.chi1 ? pw->gamma * p.q : 0.0) + (res.chi2 ? curv : 0.0));
        res.u_second = (2.0 / p.q) * std::log(arg);
        if (pw->beta < 2.0) {
            res.du_leading = -2.0 / (pw->gamma * p.q) * std::pow(eps, -pw->beta);
            res.rho_leading =
                2.0 * gR / (pw->gamma * pw->gamma * p.q) * std::pow(eps, -2.0 * (pw->beta - 1.0));
        } else if (pw->beta == 2.0) {
            const double den = pw->gamma * p.q + curv;
            res.du_leading = -2.0 / den * std::pow(eps, -2.0);
            res.rho_leading = 2.0 * p.q * gR / (den * den) * std::pow(eps, -2.0);
        } else {
            res.du_leading = -p.R * (p.B - p.A) / (p.N * gR) * std::pow(eps, -2.0);
            res.rho_leading = p.q * p.R * p.R * (p.B - p.A) * (p.B - p.A) /
                              (2.0 * p.N * p.N * gR) * std::pow(eps, -2.0);
        }
        return finish(res);
    }

    if (const auto* ps = std::get_if<PiSpecQuery>(&query.where)) {
        if (!(ps->beta0 > 1.0)) throw MalformedQuery("pi_spec index beta0 must exceed 1");
        if (!ps->pi) throw MalformedQuery("pi_spec needs an evaluable scale function");
        const bool fast_class =
            (ps->beta0 < 2.0) ||
            (ps->beta0 == 2.0 && ps->limit_class == PiSpecQuery::LimitClass::Infinite);
        if (fast_class) {
            const double pi_val = ps->pi(eps);
            if (!(pi_val > 0.0)) throw MalformedQuery("pi(eps) must be positive");
            res.chi1 = true;
            res.u_leading = -(2.0 / p.q) * (ps->beta0 - 1.0) * L +
                            (2.0 / p.q) * std::log(pi_val / std::pow(eps, ps->beta0));
            res.u_second = std::log(p.q * p.A / (2.0 * gR)) / p.q;
            res.du_leading = -2.0 / (p.q * pi_val);
            res.rho_leading = (2.0 * gR / p.q) * (eps / pi_val) * (eps / pi_val);
        } else {
            // Layer thinner than eps^2: same first two orders as beta > 2.
            res.chi2 = true;
            res.u_leading = -(2.0 / p.q) * L;
            res.u_second = (2.0 / p.q) * std::log(std::sqrt(p.A / (2.0 * p.q * gR)) * curv);
            res.du_leading = -p.R * (p.B - p.A) / (p.N * gR) * std::pow(eps, -2.0);
            res.rho_leading = p.q * p.R * p.R * (p.B - p.A) * (p.B - p.A) /
                              (2.0 * p.N * p.N * gR) * std::pow(eps, -2.0);
        }
        return finish(res);
    }

    if (const auto* th = std::get_if<ThetaQuery>(&query.where)) {
        if (!(th->Theta > 0.0) || !(th->Theta < 1.0))
            throw MalformedQuery("Theta must lie in (0, 1)");
        if (!(th->gamma > 0.0)) throw MalformedQuery("theta case needs gamma > 0");
        res.chi1 = true;
        res.u_leading = -(2.0 * th->gamma / p.q) * std::pow(L, 1.0 - th->Theta);
        res.u_second = std::log(p.q * p.A / (2.0 * gR)) / p.q;
        const double beta1 = 1.0 + th->gamma * std::pow(L, -th->Theta);
        res.du_leading = -(2.0 / p.q) * std::pow(eps, -beta1);
        res.rho_leading = (2.0 * gR / p.q) * std::pow(eps, -2.0 * (beta1 - 1.0));
        return finish(res);
    }

    const auto& il = std::get<IteratedLogQuery>(query.where);
    if (il.n < 2) throw MalformedQuery("iterated_log depth n must be >= 2");
    if (!(il.gamma > 0.0)) throw MalformedQuery("iterated_log needs gamma > 0");
    const double ln_n = iterated_log(il.n, eps);
    res.chi1 = true;
    res.u_leading = -(2.0 * il.gamma / p.q) * ln_n;
    res.u_second = (-2.0 * il.tau + std::log(p.q * p.A / (2.0 * gR))) / p.q;
    const double beta2 = 1.0 + (il.gamma * ln_n + il.tau) / L;
    res.du_leading = -(2.0 / p.q) * std::pow(eps, -beta2);
    res.rho_leading = (2.0 * gR / p.q) * std::pow(eps, -2.0 * (beta2 - 1.0));
    return finish(res);
}

DeltaWeights delta_weights(const ModelParams& params) {
    DeltaWeights out{};
    if (params.A == params.B) return out;  // no concentration in the trivial regime
    const Frame f(params);
    const ModelParams& p = f.p;
    const double gR = p.dielectric.eval(p.R);
    out.w_rho = p.R * (p.B - p.A) / p.N;
    out.w_energy = 2.0 * p.R * (p.B - p.A) / (p.q * p.N * gR);
    out.w_exp = p.R * (p.B - p.A) / (p.A * p.N);
    return out;
}

double layer_profile(const ModelParams& params, double r) {
    if (r < 0.0 || r > params.R) throw OutOfDomain("layer profile radius outside [0, R]");
    require_distinct(params);
    const Frame f(params);
    const ModelParams& p = f.p;
    const double gR = p.dielectric.eval(p.R);
    const double eps2 = p.epsilon * p.epsilon;
    const double psi = p.N * std::sqrt(2.0 * p.A * gR / p.q) / (p.R * (p.B - p.A)) +
                       std::sqrt(p.q * p.A / 2.0) * inv_sqrt_g_integral(p, r) / eps2;
    return f.sign * (2.0 / p.q) * (std::log(p.epsilon) + std::log(psi));
}

double gradient_closure(const ModelParams& params, double u_value, double r) {
    if (!(r > 0.0) || r > params.R)
        throw OutOfDomain("gradient closure radius outside (0, R]");
    const Frame f(params);
    const ModelParams& p = f.p;
    const double u = f.sign * u_value;
    const double g = p.dielectric.eval(r);
    return f.sign * (-std::sqrt(2.0 * p.A / (p.q * g)) * p.epsilon *
                     std::exp(-0.5 * p.q * u));
}

CapacitanceReport capacitance_limit(const ModelParams& params, double gamma) {
    if (!(gamma > 0.0)) throw NonPositiveGamma("capacitance limit needs gamma > 0");
    require_distinct(params);
    const Frame f(params);
    const ModelParams& p = f.p;
    const double gR = p.dielectric.eval(p.R);
    const double cb = pow_int(p.R, p.N) * (p.B - p.A);
    const double rg = pow_int(p.R, p.N - 1) * gR;  // surface conductance factor
    const double x = cb * gamma * p.q / (2.0 * p.N * rg);

    CapacitanceReport out{};
    out.exact_limit = cb * p.q / (2.0 * p.N * (1.0 + 1.0 / x) * std::log1p(x));
    out.series_c1 = rg / gamma;
    out.series_c2 = cb * p.q / (2.0 * p.N);
    out.combination = 1.0 / (1.0 / out.series_c1 + 1.0 / out.series_c2);
    out.supremum = out.series_c2;
    return out;
}

}  // namespace ccpb
