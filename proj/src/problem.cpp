#include "dualvar/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace dualvar {

double CoefficientFamily::eval(double r) const {
    switch (kind) {
    case Kind::gaussian:  return amplitude * std::exp(-decay * r * r);
    case Kind::algebraic: return amplitude * std::pow(1.0 + r * r, -decay);
    }
    throw std::logic_error("coefficient family: unknown kind");
}

std::string CoefficientFamily::kind_name() const {
    return kind == Kind::gaussian ? "gaussian" : "algebraic";
}

CoefficientFamily::Kind coefficient_kind_from_name(const std::string& name) {
    if (name == "gaussian") return CoefficientFamily::Kind::gaussian;
    if (name == "algebraic") return CoefficientFamily::Kind::algebraic;
    throw std::invalid_argument("coefficient family: unknown kind '" + name + "'");
}

double compute_q0(double p, int N) {
    if (N < 3) throw std::domain_error("compute_q0: N >= 3 required");
    const double den = 2.0 * N - p * (N - 2);
    if (!(den > 0.0))
        throw std::domain_error("compute_q0: exponent p = " + std::to_string(p) +
                                " is at or beyond the critical value 2N/(N-2)");
    return 2.0 * N / den;
}

double conjugate_exponent(double p) {
    if (!(p > 1.0)) throw std::domain_error("conjugate_exponent: p > 1 required");
    return p / (p - 1.0);
}

double ProblemSpec::critical_exponent() const {
    return 2.0 * N / (N - 2.0);
}

void ProblemSpec::validate() const {
    if (N < 3) throw std::invalid_argument("problem: N >= 3 required");
    if (!(q > 1.0 && q < 2.0)) throw std::invalid_argument("problem: q must lie in (1, 2)");
    if (!(s > 2.0)) throw std::invalid_argument("problem: s must exceed 2");
    if (!(k.decay > 0.0) || !(h.decay > 0.0))
        throw std::invalid_argument("problem: coefficient decay rates must be positive");
    if (k.amplitude < 0.0 || h.amplitude < 0.0)
        throw std::invalid_argument("problem: coefficient amplitudes must be nonnegative");
    if (k.amplitude == 0.0)
        throw std::invalid_argument("problem: k must not vanish identically");
}

HypothesisReport ProblemSpec::check_hypotheses() const {
    validate();
    HypothesisReport rep;
    const double q0 = compute_q0(q, N);

    auto add = [&](const std::string& name, bool pass, double margin, const std::string& detail) {
        rep.checks.push_back({name, pass, margin, detail});
    };

    // exponent window and growth regime
    add("exponent_window", q > 1.0 && q < 2.0 && s > 2.0, std::min({q - 1.0, 2.0 - q, s - 2.0}),
        "1 < q < 2 < s");
    // informational regime flag, excluded from all_pass: either regime is valid
    add("supercritical_flag", supercritical(), s - 2.0 * critical_exponent(),
        supercritical() ? "s exceeds twice the critical exponent"
                        : "s within twice the critical exponent");

    // k: q0-integrable, bounded, nonnegative, nontrivial
    bool k_int = k.kind == CoefficientFamily::Kind::gaussian || 2.0 * k.decay * q0 > N;
    double k_margin = k.kind == CoefficientFamily::Kind::gaussian
                          ? k.decay
                          : 2.0 * k.decay * q0 - N;
    add("k_q0_integrable", k_int, k_margin,
        k.kind_name() + " decay " + std::to_string(k.decay) + ", q0 = " + std::to_string(q0));
    add("k_bounded", true, k.amplitude, "profile maximum equals the amplitude");
    add("k_nonnegative_nontrivial", k.amplitude > 0.0, k.amplitude, "amplitude > 0");

    // h: integrable, bounded, nonnegative (h == 0 is allowed)
    bool h_int = h.kind == CoefficientFamily::Kind::gaussian || h.amplitude == 0.0 ||
                 2.0 * h.decay > N;
    double h_margin = h.kind == CoefficientFamily::Kind::gaussian || h.amplitude == 0.0
                          ? std::max(h.decay, 1.0)
                          : 2.0 * h.decay - N;
    add("h_integrable", h_int, h_margin,
        h.kind_name() + " decay " + std::to_string(h.decay) + ", amplitude " +
            std::to_string(h.amplitude));
    add("h_bounded", true, std::max(h.amplitude, 1.0), "profile maximum equals the amplitude");
    add("h_nonnegative", h.amplitude >= 0.0, h.amplitude, "amplitude >= 0");

    rep.all_pass = true;
    for (const auto& c : rep.checks)
        if (c.name != "supercritical_flag" && !c.pass) rep.all_pass = false;
    return rep;
}

} // namespace dualvar
