#pragma once

#include "dualvar/grid.hpp"
#include "dualvar/problem.hpp"
#include "dualvar/transform.hpp"

#include <utility>
#include <vector>

namespace dualvar {

struct EnergyBreakdown {
    double dirichlet = 0.0;   //  (1/2) int |grad v|^2
    double concave = 0.0;     //  (1/q) int k |f(v)|^q
    double convex = 0.0;      //  (1/s) int h |f(v)|^s
    double total = 0.0;       //  dirichlet - concave + convex
};

/// Discrete transformed energy
///   Phi(v) = 1/2 int |grad v|^2 - 1/q int k |f(v)|^q + 1/s int h |f(v)|^s
/// on a radial grid, together with its exact discrete gradient and the
/// untransformed functional J. Reaction integrals use the nodal quadrature;
/// the Dirichlet term integrates squared cell difference quotients against
/// the exact cell masses (the conservative form: coercive on odd-even
/// oscillation, which the centered nodal derivative cannot see). grad_phi is
/// the exact gradient of this discrete Phi represented in the quadrature
/// inner product:
///   sum_j W_j grad_phi(v)_j xi_j  =  d/dt Phi(v + t xi) at t = 0
/// for every discrete direction xi.
///
/// J evaluates its quasilinear term through the antiderivative F of the
/// transform: (1/2) int |D F(u)|^2, which coincides with int (1+2u^2)|Du|^2 /2
/// in the continuum and makes the discrete identity Phi(v) = J(f(v)) hold to
/// inversion tolerance even for rough fields.
class EnergyModel {
  public:
    EnergyModel(const ProblemSpec& spec, const RadialGrid& grid, const TransformEvaluator& tf);

    /// low-level constructor with explicit nodal weights (tests use this to
    /// exercise k == 0 or custom profiles without a ProblemSpec)
    EnergyModel(const RadialGrid& grid, const TransformEvaluator& tf,
                std::vector<double> k_nodes, std::vector<double> h_nodes,
                double q, double s);

    EnergyBreakdown phi(const Field& v) const;
    Field grad_phi(const Field& v) const;

    /// fused evaluation sharing the transform inversions; returns phi.total
    double phi_and_grad(const Field& v, Field& grad_out) const;

    /// nodal second derivative of the reaction part of phi with respect to
    /// v_j, times the quadrature weight: together with the dirichlet
    /// stiffness this is the full (banded) hessian of phi. Entries diverge to
    /// -infinity where v = 0 because the concave power has unbounded
    /// curvature there; callers must clamp before factoring.
    void reaction_curvature_diag(const Field& v, Field& out) const;

    /// untransformed energy of u
    double j_energy(const Field& u) const;

    /// sqrt( int |grad v|^2 )
    double d_norm(const Field& v) const;

    /// d_norm(v) + ( int h |v|^{s/2} )^{2/s}; the addend is exactly zero when
    /// h vanishes identically, so the norm then reduces to d_norm bitwise
    double e_norm(const Field& v) const;

    /// ( int k |f(v)|^q , int h |f(v)|^s )
    std::pair<double, double> weighted_terms(const Field& v) const;

    /// int coeff |v|^p against the grid quadrature
    double weighted_power(const Field& v, const std::vector<double>& coeff, double p) const;

    /// ( int |v|^p )^{1/p}
    double lp_norm(const Field& v, double p) const;

    const RadialGrid& grid() const { return *grid_; }
    const TransformEvaluator& transform() const { return *tf_; }
    const std::vector<double>& k_nodes() const { return k_; }
    const std::vector<double>& h_nodes() const { return h_; }
    double q() const { return q_; }
    double s() const { return s_; }
    bool h_is_zero() const { return h_zero_; }

  private:
    const RadialGrid* grid_;
    const TransformEvaluator* tf_;
    std::vector<double> k_, h_;
    double q_, s_;
    bool h_zero_;

    void init_flags();
    double dirichlet_half_square(const Field& v) const;
};

} // namespace dualvar
