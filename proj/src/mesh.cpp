#include "ccpb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ccpb {

namespace {
constexpr std::size_t kNodeCap = 2'000'000;

double pow_int(double x, int n) {
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}
}  // namespace

GeometricSpec GeometricSpec::default_for(const ModelParams& params) {
    GeometricSpec spec;
    spec.h0 = params.epsilon * params.epsilon * params.R / 20.0;
    spec.ratio = 1.15;
    // Large epsilon needs no interior coarsening finer than the layer step.
    spec.cap = std::max(params.R / 200.0, spec.h0);
    return spec;
}

Mesh Mesh::build(const ModelParams& params, const MeshSpec& spec) {
    Mesh mesh;
    mesh.R_ = params.R;
    mesh.N_ = params.N;
    const double R = params.R;

    if (const auto* u = std::get_if<UniformSpec>(&spec)) {
        if (u->cells < 1) throw DegenerateSpec("uniform mesh needs at least one cell");
        if (u->cells + 1 > kNodeCap) throw MeshTooLarge("uniform node count exceeds cap");
        mesh.nodes_.resize(u->cells + 1);
        for (std::size_t i = 0; i <= u->cells; ++i)
            mesh.nodes_[i] = R * static_cast<double>(i) / static_cast<double>(u->cells);
        mesh.nodes_.back() = R;
        mesh.tag_ = "uniform";
    } else if (const auto* g = std::get_if<GeometricSpec>(&spec)) {
        if (!(g->h0 > 0.0) || g->h0 >= R)
            throw DegenerateSpec("geometric mesh needs 0 < h0 < R");
        if (!(g->ratio > 1.0) || g->ratio > 2.0)
            throw DegenerateSpec("geometric growth ratio must lie in (1, 2]");
        if (!(g->cap >= g->h0))
            throw DegenerateSpec("geometric interior cap must be >= h0");

        // Walk inward from R; the last cell absorbs the remainder so the mesh
        // ends exactly at 0 without a sliver cell.
        std::vector<double> desc{R};
        double x = R, spacing = g->h0;
        while (true) {
            const double step = std::min(spacing, g->cap);
            if (x <= 1.5 * step) {
                desc.push_back(0.0);
                break;
            }
            x -= step;
            desc.push_back(x);
            spacing *= g->ratio;
            if (desc.size() > kNodeCap) throw MeshTooLarge("geometric node count exceeds cap");
        }
        mesh.nodes_.assign(desc.rbegin(), desc.rend());
        mesh.tag_ = "geometric";
    } else {
        const auto& t = std::get<TwoZoneSpec>(spec);
        if (!(t.transition > 0.0) || !(t.transition < R))
            throw DegenerateSpec("two-zone transition must lie strictly inside (0, R)");
        if (t.bulk_cells < 1 || t.layer_cells < 1)
            throw DegenerateSpec("two-zone mesh needs at least one cell per zone");
        if (t.bulk_cells + t.layer_cells + 1 > kNodeCap)
            throw MeshTooLarge("two-zone node count exceeds cap");
        for (std::size_t i = 0; i < t.bulk_cells; ++i)
            mesh.nodes_.push_back(t.transition * static_cast<double>(i) /
                                  static_cast<double>(t.bulk_cells));
        for (std::size_t i = 0; i <= t.layer_cells; ++i)
            mesh.nodes_.push_back(t.transition + (R - t.transition) * static_cast<double>(i) /
                                                     static_cast<double>(t.layer_cells));
        mesh.nodes_.back() = R;
        mesh.tag_ = "two_zone";
    }

    mesh.compute_weights();
    return mesh;
}

void Mesh::compute_weights() {
    const std::size_t n = nodes_.size();
    w_radial_.assign(n, 0.0);
    w_plain_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = nodes_[i + 1] - nodes_[i];
        w_plain_[i] += 0.5 * h;
        w_plain_[i + 1] += 0.5 * h;
        w_radial_[i] += 0.5 * h * pow_int(nodes_[i], N_ - 1);
        w_radial_[i + 1] += 0.5 * h * pow_int(nodes_[i + 1], N_ - 1);
    }
}

std::size_t Mesh::locate(double r) const {
    if (r < 0.0 || r > R_) throw OutOfDomain("radius outside [0, R]");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    if (i == 0) return 0;
    if (i >= nodes_.size()) return nodes_.size() - 2;
    return i - 1;
}

Mesh Mesh::refined() const {
    Mesh out;
    out.R_ = R_;
    out.N_ = N_;
    out.tag_ = tag_;
    out.nodes_.reserve(2 * nodes_.size() - 1);
    if (2 * nodes_.size() - 1 > kNodeCap) throw MeshTooLarge("refined node count exceeds cap");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        out.nodes_.push_back(nodes_[i]);
        out.nodes_.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
    }
    out.nodes_.push_back(nodes_.back());
    out.compute_weights();
    return out;
}

std::string Mesh::to_csv() const {
    std::ostringstream os;
    os << "node,radial_weight,plain_weight\n";
    char buf[128];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", nodes_[i], w_radial_[i],
                      w_plain_[i]);
        os << buf;
    }
    return os.str();
}

double integrate_radial(const Mesh& mesh, const std::vector<double>& samples, Weight weight) {
    if (samples.size() != mesh.size())
        throw LengthMismatch("sample count does not match mesh node count");
    const auto& w = (weight == Weight::Radial) ? mesh.radial_weights() : mesh.plain_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) acc += w[i] * samples[i];
    return acc;
}

}  // namespace ccpb
