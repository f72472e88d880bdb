#pragma once

#include "dualvar/energy.hpp"
#include "dualvar/rng.hpp"

#include <utility>
#include <vector>

namespace dualvar {

/// Finite-dimensional trial subspace spanned by radial bumps, each normalized
/// to e_norm 1. gram holds the pairwise Dirichlet inner products (row-major
/// n*n); for disjoint supports it is diagonal up to quadrature noise.
struct SubspaceBasis {
    int level_n = 0;
    std::vector<Field> basis_fields;
    std::vector<double> gram;
    double gram_min_eigenvalue = 0.0;
};

/// smooth compactly supported bump exp(-1/(1-x^2)), x = (r-center)/width;
/// identically zero for |x| >= 1
double mollifier_bump(double r, double center, double width);

/// e-normalized bump basis at the given centers/widths; throws if the
/// Dirichlet Gram matrix is numerically rank-deficient (smallest eigenvalue
/// <= 1e-10) or any bump vanishes on the grid
SubspaceBasis make_bump_basis(const EnergyModel& em, const std::vector<double>& centers,
                              const std::vector<double>& widths);

///// equispaced construction: centers R(i-1/2)/n, widths R/(2n+1), supports
/// pairwise disjoint and inside (0, R); invalid-parameter when n > M/8
SubspaceBasis build_subspace(const EnergyModel& em, int n);

Field combine(const SubspaceBasis& basis, const std::vector<double>& coeffs);

/// coefficient direction rescaled so the combination has e_norm rho
Field sphere_point(const EnergyModel& em, const SubspaceBasis& basis,
                   const std::vector<double>& dir, double rho);

/// sup-norm/e-norm equivalence constant on the subspace: max |v|_inf over
/// sampled unit-sphere points (coordinate spikes included), then refined by
/// seeded hill climbing; requires samples >= 100
double equivalence_constant(const EnergyModel& em, const SubspaceBasis& basis,
                            int samples, Rng& rng);

/// (A, B): sampled extrema over the unit e-sphere of the weighted integrals
/// int k |v|^q (minimized) and int h |v|^s (maximized, then inflated 5% for
/// one-sided safety). Throws degenerate-subspace when A <= 1e-14.
std::pair<double, double> compute_A_B(const EnergyModel& em, const SubspaceBasis& basis,
                                      int samples, Rng& rng);

/// theta(rho) = rho^2/2 - (A/(2^q q)) rho^q + (B/s) rho^s
double theta_of_rho(double rho, double A, double B, double q, double s);

/// argmin of theta over (0, delta/vartheta]; the returned rho satisfies
/// theta(rho) < 0 (guaranteed by q < 2) and vartheta*rho <= delta
double find_rho(double A, double B, double vartheta, double delta, double q, double s);

struct SphereCheck {
    int samples = 0;
    double max_phi = 0.0;
    double theta = 0.0;
    bool all_negative = false;
    double worst_chain_slack = 0.0;   // min over samples of (upper bound - phi)
};

/// samples the e-sphere of radius rho in the subspace, evaluates the energy at
/// each point, and re-derives the upper-bound chain
///   phi(v) <= ||v||_D^2/2 - (1/(2^q q)) int k|v|^q + (1/s) int h|v|^s
/// nodewise. Throws geometry-violation if any sampled phi >= 0.
SphereCheck verify_sphere_negative(const EnergyModel& em, const SubspaceBasis& basis,
                                   double rho, double theta, int samples, Rng& rng);

struct GeometryCertificate {
    int n = 0;
    double vartheta = 0.0;
    double A = 0.0;
    double B = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    double max_phi_sampled = 0.0;
    int sphere_samples = 0;
};

/// full certificate for one subspace level: equivalence constant, (A, B),
/// radius with negative theta, and the sphere sweep
GeometryCertificate certify_level(const EnergyModel& em, const SubspaceBasis& basis,
                                  double delta, int samples, Rng& rng);

/// discrete embedding constant ell with ||v||_{2N/(N-2)} <= ell ||v||_D over a
/// mixed sample ensemble, inflated 5% and validated on fresh samples
double embedding_constant(const EnergyModel& em, int samples, Rng& rng);

struct RayCheckReport {
    int directions = 0;
    bool monotone_ok = false;
    bool final_positive_ok = false;
    bool lower_bound_ok = false;
    double min_final_phi = 0.0;
    double ell = 0.0;
    double k_weight_norm = 0.0;       // |k|_{q0} against grid quadrature
};

/// evaluates phi along t*w for each direction and the coercivity lower bound
///   phi(t w) >= t^2 ||w||_D^2 / 2 - (ell^q/q) |k|_{q0} (t ||w||_D)^q
/// t_schedule must be increasing with max >= 1e4
RayCheckReport coercivity_ray_check(const EnergyModel& em, const std::vector<Field>& directions,
                                    const std::vector<double>& t_schedule, double ell);

} // namespace dualvar
