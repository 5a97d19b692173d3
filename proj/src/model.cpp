#include "ccpb/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ccpb {

// ---------------------------------------------------------------------------
// DielectricProfile

DielectricProfile DielectricProfile::constant(double g0) {
    DielectricProfile p;
    p.shape_ = Constant{g0};
    return p;
}

DielectricProfile DielectricProfile::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    DielectricProfile p;
    p.shape_ = Polynomial{std::move(coefficients)};
    return p;
}

DielectricProfile DielectricProfile::tabulated(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size())
        throw LengthMismatch("tabulated dielectric needs equal numbers of abscissae and values");
    if (r.size() < 2)
        throw DegenerateSpec("tabulated dielectric needs at least two samples");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw DegenerateSpec("tabulated dielectric abscissae must be strictly increasing");

    // Fritsch–Carlson monotone cubic Hermite slopes: limits the derivative so
    // the interpolant never overshoots the data, keeping positive data
    // positive between samples.
    const std::size_t n = r.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m[i] = m[i + 1] = 0.0;
            continue;
        }
        const double a = m[i] / d[i], b = m[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double t = 3.0 / std::sqrt(s);
            m[i] = t * a * d[i];
            m[i + 1] = t * b * d[i];
        }
    }

    DielectricProfile p;
    p.shape_ = Tabulated{std::move(r), std::move(v), std::move(m)};
    return p;
}

int DielectricProfile::Tabulated::interval(double x) const {
    if (x <= r.front()) return 0;
    if (x >= r.back()) return static_cast<int>(r.size()) - 2;
    auto it = std::upper_bound(r.begin(), r.end(), x);
    return static_cast<int>(it - r.begin()) - 1;
}

double DielectricProfile::eval(double x) const {
    if (const auto* c = std::get_if<Constant>(&shape_)) return c->g0;
    if (const auto* poly = std::get_if<Polynomial>(&shape_)) {
        double acc = 0.0;
        for (auto it = poly->c.rbegin(); it != poly->c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    const auto& t = std::get<Tabulated>(shape_);
    const int i = t.interval(x);
    const double h = t.r[i + 1] - t.r[i];
    const double s = (x - t.r[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * t.v[i] + h10 * h * t.slope[i] + h01 * t.v[i + 1] + h11 * h * t.slope[i + 1];
}

double DielectricProfile::deriv(double x) const {
    if (std::get_if<Constant>(&shape_)) return 0.0;
    if (const auto* poly = std::get_if<Polynomial>(&shape_)) {
        double acc = 0.0;
        for (std::size_t k = poly->c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * poly->c[k];
        return acc;
    }
    const auto& t = std::get<Tabulated>(shape_);
    const int i = t.interval(x);
    const double h = t.r[i + 1] - t.r[i];
    const double s = (x - t.r[i]) / h;
    const double dh00 = 6 * s * (s - 1);
    const double dh10 = (1 - s) * (1 - 3 * s);
    const double dh01 = -dh00;
    const double dh11 = s * (3 * s - 2);
    return (dh00 * t.v[i] + dh01 * t.v[i + 1]) / h + dh10 * t.slope[i] + dh11 * t.slope[i + 1];
}

double DielectricProfile::min_on(double R, int samples) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
        lo = std::min(lo, eval(R * i / static_cast<double>(samples - 1)));
    return lo;
}

double DielectricProfile::max_on(double R, int samples) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
        hi = std::max(hi, eval(R * i / static_cast<double>(samples - 1)));
    return hi;
}

bool DielectricProfile::is_constant() const {
    return std::holds_alternative<Constant>(shape_);
}

// ---------------------------------------------------------------------------
// Parameter validation

ModelParams validate_params(const ModelParams& raw) {
    std::vector<InvalidParams::Violation> bad;
    auto positive = [&](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            std::ostringstream os;
            os << name << " must be positive and finite, got " << value;
            bad.push_back({"NonPositiveParameter", os.str()});
        }
    };
    positive(raw.A, "A");
    positive(raw.B, "B");
    positive(raw.p, "p");
    positive(raw.q, "q");
    positive(raw.epsilon, "epsilon");
    positive(raw.R, "R");
    if (raw.N < 2)
        bad.push_back({"InvalidDimension", "N must be an integer >= 2"});
    if (raw.eta && (!(*raw.eta >= 0.0) || !std::isfinite(*raw.eta)))
        bad.push_back({"NonPositiveParameter", "eta must be >= 0 and finite"});

    if (raw.R > 0.0 && std::isfinite(raw.R)) {
        const int samples = 2001;  // dense sampling of the hard invariant g > 0
        bool ok = true;
        for (int i = 0; i < samples && ok; ++i) {
            const double r = raw.R * i / static_cast<double>(samples - 1);
            const double g = raw.dielectric.eval(r);
            const double dg = raw.dielectric.deriv(r);
            if (!(g > 0.0) || !std::isfinite(g) || !std::isfinite(dg)) ok = false;
        }
        if (!ok)
            bad.push_back({"DielectricNotPositive",
                           "dielectric profile must be positive and finite on [0,R]"});
    }

    if (!bad.empty()) throw InvalidParams(std::move(bad));
    return raw;
}

DerivedConstants derived_constants(const ModelParams& params) {
    const double gR = params.dielectric.eval(params.R);
    const double eps2 = params.epsilon * params.epsilon;
    DerivedConstants out{};
    out.boundary_slope = params.R * (params.A - params.B) / (eps2 * params.N * gR);
    if (params.eta)
        out.robin_boundary_value =
            *params.eta * params.R * (params.B - params.A) / (eps2 * params.N * gR);
    // Interior gradients decay like e^{-M~ dist/eps}; the constant uses the
    // smaller concentration so it covers both orderings of A and B.
    const double gmax = params.dielectric.max_on(params.R);
    out.decay_rate = std::sqrt(std::min(params.A, params.B) * (params.p + params.q) / gmax *
                               std::pow(params.q / params.p,
                                        (params.p - params.q) / (params.p + params.q)));
    out.total_charge = std::pow(params.R, params.N) * std::abs(params.A - params.B);
    return out;
}

}  // namespace ccpb
