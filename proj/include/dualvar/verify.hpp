#pragma once

#include "dualvar/energy.hpp"
#include "dualvar/rng.hpp"
#include "dualvar/solve.hpp"
#include "dualvar/transform.hpp"

#include <string>
#include <vector>

namespace dualvar {

/// outcome of one sampled property. Margins are oriented so that
/// worst_margin >= 0 means the property held on every sample, with the
/// property's own tolerance already folded in; witness is the sample (or
/// sample index) attaining the worst margin.
struct PropertyCheck {
    std::string property;
    double worst_margin = 0.0;
    double witness = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyCheck> checks;
    bool all_pass() const;
    const PropertyCheck* first_failure() const;   // null when everything passed
};

/// Samples the transform on a symmetric deterministic grid plus random
/// points in [-t_range, t_range] and checks: odd symmetry, strict growth,
/// |f| <= |t|, f'(0) = 1, |f'| <= 1, |f f'| <= 1, |f| <= 2^{1/4}|t|^{1/2},
/// the two-branch lower bound with the self-verified constant from
/// estimate_mu revalidated on this suite's samples,
/// f^2 >= f f' t >= f^2/2, the pointwise identity
/// (1 + 2f^2) f'^2 = 1, inversion round trips, and agreement with a
/// fixed-step RK4 integration of the defining equation.
/// Requires sample_count >= 1000.
SuiteReport run_transform_properties(const TransformEvaluator& tf, int sample_count,
                                     double t_range, Rng& rng);

/// Convexity of t -> |f(t)|^s for s > 2: nonnegative second differences on
/// the stepped grid, the tangent-line inequality on 1000 random pairs, and
/// monotonicity of the derivative samples. The transform is evaluated once
/// per grid point and cached.
SuiteReport check_eta_convexity(const TransformEvaluator& tf, double s, double t_range,
                                double step, Rng& rng);

/// Sign law at critical points: a converged report must have
/// phi_value <= 1e-8 when s >= 4. For s < 4 the statement does not apply
/// and the check passes vacuously. Throws if the report is not converged.
bool check_sign_critical(const EnergyModel& em, const SolveReport& rep);

struct ResidualReport {
    double weak_residual = 0.0;
    double strong_residual = 0.0;
    int test_count = 0;
};

/// Standard family of weak-residual test functions: count mollifier bumps
/// with centers R(i - 1/2)/count and widths R/(2 count + 1), i = 1..count.
/// Supports lie inside (0, R), so every bump vanishes at the outer
/// Dirichlet node as check_weak_residual requires.
std::vector<Field> make_test_functions(const RadialGrid& grid, int count);

/// Pairs the energy gradient at v against pushed-forward test functions
/// xi = phi / f'(v) = sqrt(1 + 2 f(v)^2) phi, each pairing normalized by
/// the test function's dirichlet norm plus sup norm; reports the max.
/// Test functions must vanish at the outer boundary node.
ResidualReport check_weak_residual(const EnergyModel& em, const Field& v,
                                   const std::vector<Field>& test_functions);

/// Weighted L2 norm of the nodal defect of the untransformed equation at
/// u_star, skipping the outer 5% of node indices where the artificial
/// Dirichlet truncation pollutes the Laplacian. Throws if the report is
/// not converged.
double check_strong_residual(const EnergyModel& em, const SolveReport& rep);

/// Energy identity between the transformed and untransformed functionals on
/// random rough fields: |phi(v) - j(f(v))| <= 1e-8 (1 + |phi|). On
/// violation the worst field is written to witness_path (skipped when the
/// path is empty). Requires samples >= 10.
SuiteReport check_energy_identity(const EnergyModel& em, int samples, Rng& rng,
                                  const std::string& witness_path);

} // namespace dualvar
