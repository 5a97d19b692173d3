#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ccpb/model.hpp"

namespace ccpb {

/// Mesh construction recipes.
struct UniformSpec {
    std::size_t cells = 100;
};

/// Geometric grading anchored at r = R: the cell touching R has width h0 and
/// widths grow by `ratio` moving inward until capped at `cap`; the interior is
/// then filled with cells of width <= cap down to r = 0.
struct GeometricSpec {
    double h0;
    double ratio = 1.15;
    double cap;

    /// Layer-resolving default: h0 = eps^2 R/20, ratio 1.15, cap R/200.
    static GeometricSpec default_for(const ModelParams& params);
};

/// Two uniform zones split at `transition`.
struct TwoZoneSpec {
    double transition;
    std::size_t bulk_cells;   // cells on [0, transition]
    std::size_t layer_cells;  // cells on [transition, R]
};

using MeshSpec = std::variant<UniformSpec, GeometricSpec, TwoZoneSpec>;

enum class Weight {
    Radial,  ///< integrate f(r) r^{N-1} dr
    Plain,   ///< integrate f(r) dr
};

/// Radial grid on [0,R] with precomputed trapezoidal weights for both the
/// radial measure r^{N-1}dr and the plain measure dr.  Immutable once built.
class Mesh {
public:
    static Mesh build(const ModelParams& params, const MeshSpec& spec);

    std::size_t size() const { return nodes_.size(); }          ///< node count M+1
    std::size_t cells() const { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& radial_weights() const { return w_radial_; }
    const std::vector<double>& plain_weights() const { return w_plain_; }
    double R() const { return R_; }
    int N() const { return N_; }
    const std::string& tag() const { return tag_; }

    /// Index i of the cell [r_i, r_{i+1}] containing r (clamped at the ends).
    std::size_t locate(double r) const;

    /// New mesh with every cell split in half (same tag, for refinement studies).
    Mesh refined() const;

    /// Debug dump: one "node,radial_weight,plain_weight" row per node.
    std::string to_csv() const;

private:
    Mesh() = default;
    void compute_weights();

    std::vector<double> nodes_;
    std::vector<double> w_radial_, w_plain_;
    double R_ = 1.0;
    int N_ = 2;
    std::string tag_;
};

/// Trapezoidal value of the requested integral of nodal samples.
double integrate_radial(const Mesh& mesh, const std::vector<double>& samples, Weight weight);

}  // namespace ccpb
