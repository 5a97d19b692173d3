#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "ccpb/mesh.hpp"
#include "ccpb/model.hpp"

namespace ccpb {

enum class Gauge { ZeroMean, BoundaryPinned, Robin };

/// Converged state of one solve.  Immutable once returned.
struct Solution {
    ModelParams params;
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> u;          ///< nodal potential, size M+1
    std::vector<double> face_flux;  ///< V_{i+1/2} = g r^{N-1} U' at interior faces, size M
    double ip = 0.0, iq = 0.0;      ///< non-local integrals I_p, I_q
    double log_ip = 0.0, log_iq = 0.0;  ///< overflow-safe logarithms of the same
    Gauge gauge = Gauge::ZeroMean;
    int iterations = 0;
    double residual_inf = 0.0;      ///< final residual inf-norm (absolute)
    std::vector<double> continuation_path;  ///< epsilons solved on the way here
};

/// Pointwise evaluation of a Solution.
struct PointState {
    double u;
    double du;   ///< dU/dr
    double rho;  ///< net charge density
};

/// Residual and structured Jacobian of the conservative finite-volume system.
/// The Jacobian is (tridiagonal) + a*b^T + c*d^T; the zero-mean gauge border
/// is appended by the linear solver, not stored here.
struct Assembly {
    std::vector<double> residual;        ///< F_i, size M+1
    std::vector<double> sub, diag, sup;  ///< tridiagonal part (sub/sup size M)
    std::vector<double> a, b, c, d;      ///< rank-1 pairs from d(I_p)/dU and d(I_q)/dU
    double ip, iq, log_ip, log_iq;
    double flux_scale;  ///< |R^N (A-B)/N|, the natural residual scale
};

struct NewtonOptions {
    double tol = 1e-10;   ///< on residual inf-norm relative to the boundary flux
    int max_iter = 50;
    double min_step = std::ldexp(1.0, -20);  ///< line-search floor
};

/// Maps each ladder epsilon to the mesh used at that epsilon.
using MeshPolicy = std::function<MeshSpec(const ModelParams&)>;

/// Default policy: geometric mesh with h0 proportional to eps^2.
MeshPolicy default_mesh_policy();

Assembly assemble_system(const ModelParams& params, const Mesh& mesh,
                         const std::vector<double>& u);

/// Solves the bordered Newton system
///   [ J  w ] [x ]   [rhs       ]        J = tridiagonal + a b^T + c d^T,
///   [ w^T 0] [mu] = [rhs_border],       w = gauge border (radial weights),
/// by factoring the tridiagonal part and applying a rank-3 block elimination
/// for the two non-local outer products plus the border.  Returns (x, mu).
std::pair<std::vector<double>, double> solve_bordered(const Assembly& assembly,
                                                      const std::vector<double>& border,
                                                      const std::vector<double>& rhs,
                                                      double rhs_border);

Solution solve_newton(const ModelParams& params, std::shared_ptr<const Mesh> mesh,
                      const std::vector<double>& init, const NewtonOptions& opts = {});

/// Convenience overload starting from U = 0.
Solution solve_newton(const ModelParams& params, std::shared_ptr<const Mesh> mesh,
                      const NewtonOptions& opts = {});

/// Solves along a strictly decreasing epsilon ladder, seeding each solve with
/// the previous solution interpolated onto the new mesh.  If seed_with_profile
/// is set, the first solve starts from the asymptotic layer profile instead of
/// U = 0.
std::vector<Solution> solve_continuation(const ModelParams& params,
                                         const std::vector<double>& eps_ladder,
                                         const MeshPolicy& policy = default_mesh_policy(),
                                         const NewtonOptions& opts = {},
                                         bool seed_with_profile = false);

/// Shift of a zero-mean Neumann solution to the Robin problem with parameter eta.
Solution robin_transform(const Solution& neumann, double eta);

PointState evaluate_solution(const Solution& sol, double r);

}  // namespace ccpb
