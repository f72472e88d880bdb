#pragma once

#include "dualvar/energy.hpp"
#include "dualvar/geometry.hpp"
#include "dualvar/rng.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dualvar {

struct SolveOptions {
    double grad_tol = 1e-8;
    int max_iters = 50000;
    double armijo_c = 1e-4;
    double backtrack_ratio = 0.5;
    int memory = 10;                  // quasi-newton history; 0 = plain descent
    bool sobolev = true;              // precondition by the inverse dirichlet stiffness
    bool enforce_nonnegative = false; // project v <- |v| on every trial point
    void validate() const;
};

/// objective on nodal fields; value_and_grad fills the gradient represented in
/// the quadrature inner product: sum_j W_j grad_j xi_j = d/dt value(v + t xi)
struct Objective {
    std::function<double(const Field&)> value;
    std::function<double(const Field&, Field&)> value_and_grad;
    /// optional: weighted diagonal of the objective hessian minus the
    /// dirichlet stiffness (entries may be infinite; the polish step clamps).
    /// When set, the minimizer can finish with banded Newton polish rounds
    /// that push the gradient below what energy comparisons can resolve.
    std::function<void(const Field&, Field&)> curvature_diag;
};

Objective phi_objective(const EnergyModel& em);

struct MinimizeResult {
    Field v;
    double value = 0.0;
    double grad_norm = 0.0;           // max-norm of the represented gradient, free nodes
    int iterations = 0;
    bool converged = false;
};

/// Armijo-backtracking descent with optional limited-memory quasi-Newton
/// acceleration. The last grid node is held at zero (Dirichlet side of the
/// truncation); the loop stops at grad_norm <= grad_tol or when the max-norm
/// stagnates, returns the best iterate observed, and finishes with banded
/// Newton polish rounds when the objective provides curvature (these are
/// accepted by gradient decrease, since near the minimum the energy signal
/// is below evaluation roundoff). Throws on line-search failure.
MinimizeResult minimize_objective(const RadialGrid& grid, const Objective& obj,
                                  const Field& v0, const SolveOptions& opts);

struct SolveReport {
    Field v_star;
    Field u_star;                     // transformed-back solution f(v_star)
    double phi_value = 0.0;
    double j_value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    double weak_residual = -1.0;      // -1 until a verification pass fills it
    double strong_residual = -1.0;
    std::string distinct_id;
};

/// minimize the transformed energy from v0 and recover u = f(v)
SolveReport minimize(const EnergyModel& em, const Field& v0, const SolveOptions& opts);

Field recover_u(const TransformEvaluator& tf, const Field& v);

/// nonnegative minimizer driver: certifies a single-bump subspace aligned
/// with the mass of the concave coefficient, starts from the negative-energy
/// sphere point, and runs the projected descent
SolveReport ground_state(const EnergyModel& em, const SolveOptions& opts, int cert_samples,
                         Rng& rng);

/// multi-start search over certified subspace spheres for levels 1..n_max;
/// returns distinct converged solutions sorted by energy
std::vector<SolveReport> multi_start(const EnergyModel& em, const SolveOptions& opts, int n_max,
                                     int samples_per_level, int cert_samples, Rng& rng);

/// clusters converged reports: two solutions are the same critical point when
/// their relative L2 distance (up to global sign) is <= 1e-3 or their energies
/// differ by <= 1e-8; keeps the lowest-energy representative per cluster,
/// sorted ascending, labeled S01, S02, ...
std::vector<SolveReport> cluster_reports(const EnergyModel& em, std::vector<SolveReport> reports);

} // namespace dualvar
