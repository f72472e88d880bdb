#pragma once

#include <string>
#include <vector>

namespace dualvar {

/// Radial coefficient profile for the nonlinearity weights k and h.
/// gaussian:  amplitude * exp(-decay * r^2)
/// algebraic: amplitude * (1 + r^2)^(-decay)
struct CoefficientFamily {
    enum class Kind { gaussian, algebraic };
    Kind kind = Kind::gaussian;
    double amplitude = 1.0;
    double decay = 1.0;

    double eval(double r) const;
    std::string kind_name() const;
};

CoefficientFamily::Kind coefficient_kind_from_name(const std::string& name);

/// Critical Sobolev-type exponent bookkeeping: q0(p, N) = 2N / (2N - p(N-2)).
/// Throws std::domain_error when the denominator is not positive
/// (p >= 2N/(N-2)).
double compute_q0(double p, int N);

/// Holder conjugate p / (p - 1), p > 1.
double conjugate_exponent(double p);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;     // positive distance to the failure boundary
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass = false;
};

/// Parameters of the equation on R^N:
///   -Laplace(u) - u Laplace(u^2) = k(x) |u|^{q-2} u - h(x) |u|^{s-2} u
/// with 1 < q < 2 < s, radial weights k, h >= 0, k not identically zero.
struct ProblemSpec {
    int N = 3;
    double q = 1.5;
    double s = 14.0;
    CoefficientFamily k{};   // concave-power weight, must be nontrivial
    CoefficientFamily h{};   // convex-power weight, may vanish identically

    /// throws std::invalid_argument on any violated structural constraint
    void validate() const;

    /// 2N / (N - 2)
    double critical_exponent() const;

    /// true when s exceeds twice the critical exponent, the regime in which
    /// the convex term outgrows what Sobolev embeddings control directly
    bool supercritical() const { return s > 2.0 * critical_exponent(); }

    /// Integrability and sign conditions on (q, s, k, h). gaussian weights
    /// always decay fast enough; an algebraic weight with exponent beta is
    /// q0-integrable iff 2 beta q0 > N and integrable iff 2 beta > N.
    HypothesisReport check_hypotheses() const;
};

} // namespace dualvar
