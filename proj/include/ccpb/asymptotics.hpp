#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "ccpb/model.hpp"

namespace ccpb {

// --- query types -----------------------------------------------------------

/// Distance r = R - eps^kappa: deep interior window where only a decay bound
/// (no explicit value) is available.
struct InteriorQuery {
    double kappa;  ///< in (0,1)
};

/// Distance r = R - gamma eps^beta (fixed power).
struct PowerQuery {
    double beta;   ///< > 1
    double gamma;  ///< >= 0; ignored when beta > 2
};

/// Distance r = R - pi(eps) with pi regularly varying of index beta0.
struct PiSpecQuery {
    double beta0;  ///< > 1
    enum class LimitClass { Zero, Infinite } limit_class;  ///< of pi(eps)/eps^{beta0}
    std::function<double(double)> pi;  ///< evaluable scale function
};

/// Distance exponent beta1(eps) = 1 + gamma (log(1/eps))^{-Theta}.
struct ThetaQuery {
    double Theta;  ///< in (0,1)
    double gamma;  ///< > 0
};

/// Distance exponent beta2(eps) = 1 + (log(1/eps))^{-1} (gamma log^{(n)}(1/eps) + tau).
struct IteratedLogQuery {
    int n;         ///< >= 2, iteration depth of the logarithm
    double gamma;  ///< > 0
    double tau;
};

struct ExpansionQuery {
    std::variant<InteriorQuery, PowerQuery, PiSpecQuery, ThetaQuery, IteratedLogQuery> where;
    double epsilon;
};

// --- result types ----------------------------------------------------------

/// Constant-free decay bound of the form C eps^kappa log(1/eps).
struct BoundDescriptor {
    double kappa;
    double magnitude;  ///< eps^kappa log(1/eps) at the query epsilon
};

struct ExpansionResult {
    double u_leading = 0.0;  ///< blow-up part of the predicted U
    double u_second = 0.0;   ///< O(1) part
    double u_total = 0.0;
    double du_leading = 0.0;   ///< predicted U'
    double rho_leading = 0.0;  ///< predicted net charge density
    bool chi1 = false, chi2 = false;  ///< which layer terms are active
    std::optional<BoundDescriptor> bound;  ///< set only for the interior case
};

struct DeltaWeights {
    double w_rho;     ///< weight of the rho concentration at r = R
    double w_energy;  ///< weight of the (eps U')^2 concentration
    double w_exp;     ///< weight of the dominant exponential concentration
};

struct CapacitanceReport {
    double exact_limit;
    double series_c1;     ///< boundary-layer term R^{N-1} g(R)/gamma
    double series_c2;     ///< charge term C^b q/(2N)
    double combination;   ///< harmonic combination (1/C1 + 1/C2)^{-1}
    double supremum;      ///< strict upper bound C^b q/(2N)
};

// --- operations ------------------------------------------------------------

struct CoefficientLimits {
    double ip_limit, iq_limit;
    bool degenerate;  ///< A == B: both limits collapse to R^N/N
};

/// Limits of the non-local integrals as eps -> 0; `mean` is an optional
/// nonzero value of the radial mean of U (multiplies the limits by
/// e^{p mean} and e^{-q mean}).
CoefficientLimits coefficient_limits(const ModelParams& params, double mean = 0.0);

/// Expansion of U(R): returns (coefficient of log(1/eps), constant term).
std::pair<double, double> boundary_expansion(const ModelParams& params);

ExpansionResult interior_expansion(const ModelParams& params, const ExpansionQuery& query);

DeltaWeights delta_weights(const ModelParams& params);

/// Closed-form layer profile prediction of U(r) near r = R.
double layer_profile(const ModelParams& params, double r);

/// First-order closure for eps^2 U'(r) given the local value of U.
double gradient_closure(const ModelParams& params, double u_value, double r);

CapacitanceReport capacitance_limit(const ModelParams& params, double gamma);

}  // namespace ccpb
