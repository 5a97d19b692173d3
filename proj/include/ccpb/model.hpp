#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ccpb/errors.hpp"

namespace ccpb {

/// Spatially varying dielectric coefficient g(r) on [0,R].  Three shapes are
/// supported: a constant, a polynomial in r, and tabulated samples joined by
/// shape-preserving C1 cubic interpolation (so positive samples imply a
/// positive interpolant between them).
class DielectricProfile {
public:
    static DielectricProfile constant(double g0);
    /// coefficients[k] multiplies r^k.
    static DielectricProfile polynomial(std::vector<double> coefficients);
    /// Samples (r_i, v_i) with r strictly increasing; interpolated with a
    /// monotone (Fritsch–Carlson) cubic Hermite spline.
    static DielectricProfile tabulated(std::vector<double> r, std::vector<double> values);

    double eval(double r) const;
    double deriv(double r) const;

    /// Extremes over [0,R] estimated by dense sampling (used for validation
    /// and for the gradient decay constant).
    double min_on(double R, int samples = 2001) const;
    double max_on(double R, int samples = 2001) const;

    bool is_constant() const;

private:
    struct Constant { double g0; };
    struct Polynomial { std::vector<double> c; };
    struct Tabulated {
        std::vector<double> r, v, slope;  // slope = C1 Hermite derivatives
        int interval(double x) const;
    };
    std::variant<Constant, Polynomial, Tabulated> shape_;
};

/// All problem parameters after validation.  Immutable by convention.
struct ModelParams {
    double A = 1.0;       ///< cation total concentration
    double B = 1.0;       ///< anion total concentration
    double p = 1.0;       ///< cation valence magnitude
    double q = 1.0;       ///< anion valence magnitude
    double epsilon = 0.1; ///< singular perturbation parameter
    double R = 1.0;       ///< ball radius
    int N = 2;            ///< space dimension (integer, >= 2)
    DielectricProfile dielectric = DielectricProfile::constant(1.0);
    std::optional<double> eta;  ///< Stern-layer parameter for the Robin problem
};

/// Parameter-level constants derived by direct substitution.
struct DerivedConstants {
    double boundary_slope;                      ///< U'(R) = R(A-B)/(eps^2 N g(R))
    std::optional<double> robin_boundary_value; ///< U(R) in the Robin problem, eta*R(B-A)/(eps^2 N g(R))
    double decay_rate;                          ///< interior exponential decay constant M~
    double total_charge;                        ///< C^b = R^N |A-B|
};

/// Checks every constraint and returns the validated bundle; throws
/// InvalidParams listing all violations otherwise.
ModelParams validate_params(const ModelParams& raw);

DerivedConstants derived_constants(const ModelParams& params);

}  // namespace ccpb
