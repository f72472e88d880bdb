#include "dualvar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dualvar {

bool SuiteReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const PropertyCheck* SuiteReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

namespace {

// running minimum of a margin together with the sample attaining it
struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    double witness = 0.0;
    void feed(double m, double w) {
        if (m < margin) {
            margin = m;
            witness = w;
        }
    }
    PropertyCheck done(const char* name) const {
        PropertyCheck c;
        c.property = name;
        c.worst_margin = margin;
        c.witness = witness;
        c.pass = margin >= 0.0;
        return c;
    }
};

} // namespace

SuiteReport run_transform_properties(const TransformEvaluator& tf, int sample_count,
                                     double t_range, Rng& rng) {
    if (sample_count < 1000)
        throw std::invalid_argument("run_transform_properties: sample_count must be >= 1000");
    if (!(t_range > 0.0))
        throw std::invalid_argument("run_transform_properties: t_range must be positive");

    const int n = sample_count;
    std::vector<double> all;
    all.reserve(2 * n);
    for (int i = 0; i < n; ++i)
        all.push_back(t_range * (2.0 * i / (n - 1) - 1.0));
    for (int i = 0; i < n; ++i)
        all.push_back(rng.uniform_in(-t_range, t_range));

    const std::vector<double> f_all = tf.eval_f_batch(all);
    std::vector<double> neg(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) neg[i] = -all[i];
    const std::vector<double> f_neg = tf.eval_f_batch(neg);

    const double mu = tf.estimate_mu(std::max(2.0, t_range));

    Worst odd, bound_t, sqrt_bound, fp_bound, ffp_bound, mu_lin, mu_sqrt,
        prod_hi, prod_lo, ode_ident, round_trip;

    for (std::size_t i = 0; i < all.size(); ++i) {
        const double t = all[i];
        const double f = f_all[i];
        const double af = std::abs(f);
        const double at = std::abs(t);
        const double fp = 1.0 / std::sqrt(1.0 + 2.0 * f * f);
        const double scale = std::max(1.0, at);

        odd.feed(1e-12 * scale - std::abs(f_neg[i] + f), t);
        bound_t.feed(at - af + 1e-12, t);
        sqrt_bound.feed(std::pow(2.0, 0.25) * std::sqrt(at) - af + 1e-12, t);
        fp_bound.feed(1.0 - std::abs(fp), t);
        ffp_bound.feed(1.0 - std::abs(f * fp), t);
        if (at <= 1.0) mu_lin.feed(af - mu * at + 1e-12, t);
        if (at >= 1.0) mu_sqrt.feed(af - mu * std::sqrt(at) + 1e-12, t);
        prod_hi.feed(f * f - f * fp * t + 1e-12, t);
        prod_lo.feed(f * fp * t - 0.5 * f * f + 1e-12, t);
        ode_ident.feed(1e-12 - std::abs((1.0 + 2.0 * f * f) * fp * fp - 1.0), t);
        round_trip.feed(1e-12 * scale - std::abs(TransformEvaluator::antiderivative(f) - t), t);
    }

    // strict growth on the merged sorted samples; pairs closer than 1e-9
    // carry no resolvable increment and are skipped
    Worst growth;
    {
        std::vector<double> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        const std::vector<double> fs = tf.eval_f_batch(sorted);
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i] - sorted[i - 1] < 1e-9) continue;
            growth.feed(fs[i] - fs[i - 1], sorted[i]);
        }
    }

    Worst fp_zero;
    fp_zero.feed(1e-12 - std::abs(tf.eval_f_prime(0.0) - 1.0), 0.0);

    // cross-validate the Newton inversion against a fixed-step RK4 sweep
    Worst ode_agree;
    {
        const double t_max = std::min(t_range, 100.0);
        std::vector<double> cps(65);
        for (int i = 0; i < 65; ++i) cps[i] = t_max * i / 64.0;
        const std::vector<double> rk = tf.ode_oracle_trace(t_max, 1e-3, cps);
        for (int i = 0; i < 65; ++i)
            ode_agree.feed(1e-8 - std::abs(rk[i] - tf.eval_f(cps[i])), cps[i]);
    }

    SuiteReport rep;
    rep.suite = "transform_properties";
    rep.checks.push_back(odd.done("odd_symmetry"));
    rep.checks.push_back(growth.done("strict_growth"));
    rep.checks.push_back(bound_t.done("bound_by_t"));
    rep.checks.push_back(sqrt_bound.done("sqrt_growth_bound"));
    rep.checks.push_back(fp_zero.done("unit_slope_at_zero"));
    rep.checks.push_back(fp_bound.done("derivative_bound"));
    rep.checks.push_back(ffp_bound.done("product_derivative_bound"));
    rep.checks.push_back(mu_lin.done("lower_bound_linear_branch"));
    rep.checks.push_back(mu_sqrt.done("lower_bound_sqrt_branch"));
    rep.checks.push_back(prod_hi.done("ffprime_t_upper"));
    rep.checks.push_back(prod_lo.done("ffprime_t_lower"));
    rep.checks.push_back(ode_ident.done("defining_identity"));
    rep.checks.push_back(round_trip.done("inversion_round_trip"));
    rep.checks.push_back(ode_agree.done("rk4_agreement"));
    return rep;
}

SuiteReport check_eta_convexity(const TransformEvaluator& tf, double s, double t_range,
                                double step, Rng& rng) {
    if (!(s > 2.0))
        throw std::invalid_argument("check_eta_convexity: s must exceed 2");
    if (!(t_range > 0.0) || !(step > 0.0))
        throw std::invalid_argument("check_eta_convexity: t_range and step must be positive");

    const int n = static_cast<int>(std::floor(2.0 * t_range / step + 0.5)) + 1;
    std::vector<double> ts(n);
    for (int i = 0; i < n; ++i) ts[i] = -t_range + i * step;
    const std::vector<double> fs = tf.eval_f_batch(ts);

    std::vector<double> eta(n), deta(n);
    for (int i = 0; i < n; ++i) {
        const double af = std::abs(fs[i]);
        const double fp = 1.0 / std::sqrt(1.0 + 2.0 * fs[i] * fs[i]);
        eta[i] = std::pow(af, s);
        deta[i] = s * std::pow(af, s - 2.0) * fs[i] * fp;
    }

    Worst second_diff, deriv_mono, tangent;
    for (int i = 1; i + 1 < n; ++i)
        second_diff.feed(eta[i + 1] - 2.0 * eta[i] + eta[i - 1] + 1e-8, ts[i]);
    for (int i = 1; i < n; ++i)
        deriv_mono.feed(deta[i] - deta[i - 1] + 1e-10, ts[i]);

    // tangent-line inequality on random pairs: the value at a stays below
    // the value at b plus the tangent correction at a
    for (int p = 0; p < 1000; ++p) {
        const double a = rng.uniform_in(-t_range, t_range);
        const double b = rng.uniform_in(-t_range, t_range);
        const double fa = tf.eval_f(a);
        const double fb = tf.eval_f(b);
        const double fpa = 1.0 / std::sqrt(1.0 + 2.0 * fa * fa);
        const double lhs = std::pow(std::abs(fa), s);
        const double rhs = std::pow(std::abs(fb), s) +
                           s * std::pow(std::abs(fa), s - 2.0) * fa * fpa * (a - b);
        tangent.feed(rhs - lhs + 1e-10, a);
    }

    SuiteReport rep;
    rep.suite = "eta_convexity";
    rep.checks.push_back(second_diff.done("second_differences"));
    rep.checks.push_back(deriv_mono.done("derivative_monotone"));
    rep.checks.push_back(tangent.done("tangent_inequality"));
    return rep;
}

bool check_sign_critical(const EnergyModel& em, const SolveReport& rep) {
    if (!rep.converged)
        throw std::invalid_argument("check_sign_critical: report did not converge");
    if (em.s() < 4.0) return true;
    return rep.phi_value <= 1e-8;
}

std::vector<Field> make_test_functions(const RadialGrid& grid, int count) {
    if (count < 1) throw std::invalid_argument("make_test_functions: count must be >= 1");
    std::vector<Field> out;
    out.reserve(count);
    for (int i = 1; i <= count; ++i) {
        const double c = grid.R() * (i - 0.5) / count;
        const double w = grid.R() / (2.0 * count + 1.0);
        Field phi(grid.M());
        for (int j = 0; j < grid.M(); ++j) phi[j] = mollifier_bump(grid.nodes()[j], c, w);
        out.push_back(std::move(phi));
    }
    return out;
}

ResidualReport check_weak_residual(const EnergyModel& em, const Field& v,
                                   const std::vector<Field>& test_functions) {
    const RadialGrid& g = em.grid();
    g.check_field(v, "check_weak_residual");
    const int M = g.M();
    const auto& W = g.quad_weights();

    const Field grad = em.grad_phi(v);
    const std::vector<double> fv = em.transform().eval_f_batch(v.values);
    std::vector<double> amp(M);
    for (int j = 0; j < M; ++j) amp[j] = std::sqrt(1.0 + 2.0 * fv[j] * fv[j]);

    ResidualReport rep;
    rep.test_count = static_cast<int>(test_functions.size());
    for (const Field& phi : test_functions) {
        g.check_field(phi, "check_weak_residual test function");
        if (phi[M - 1] != 0.0)
            throw std::invalid_argument(
                "check_weak_residual: test function must vanish at r = R");
        double pairing = 0.0;
        double sup = 0.0;
        for (int j = 0; j < M; ++j) {
            pairing += W[j] * grad[j] * amp[j] * phi[j];
            sup = std::max(sup, std::abs(phi[j]));
        }
        const double denom = em.d_norm(phi) + sup;
        if (denom == 0.0) continue;
        rep.weak_residual = std::max(rep.weak_residual, std::abs(pairing) / denom);
    }
    return rep;
}

double check_strong_residual(const EnergyModel& em, const SolveReport& rep) {
    if (!rep.converged)
        throw std::invalid_argument("check_strong_residual: report did not converge");
    const RadialGrid& g = em.grid();
    g.check_field(rep.u_star, "check_strong_residual");
    const int M = g.M();
    const Field& u = rep.u_star;

    Field u2(M);
    for (int j = 0; j < M; ++j) u2[j] = u[j] * u[j];
    const Field lap_u = g.laplacian_radial(u);
    const Field lap_u2 = g.laplacian_radial(u2);

    const auto& k = em.k_nodes();
    const auto& h = em.h_nodes();
    const auto& W = g.quad_weights();
    const double q = em.q();
    const double s = em.s();

    // the outer 5% of nodes sit inside the shoulder of the artificial
    // Dirichlet cut where the truncated Laplacian is not the equation's
    const int last = M - 1 - std::max(1, static_cast<int>(std::ceil(0.05 * M)));
    double acc = 0.0;
    for (int j = 0; j <= last; ++j) {
        const double au = std::abs(u[j]);
        const double sgn = (u[j] > 0.0) ? 1.0 : ((u[j] < 0.0) ? -1.0 : 0.0);
        const double defect = -lap_u[j] - u[j] * lap_u2[j] -
                              k[j] * std::pow(au, q - 1.0) * sgn +
                              h[j] * std::pow(au, s - 1.0) * sgn;
        acc += W[j] * defect * defect;
    }
    return std::sqrt(acc);
}

SuiteReport check_energy_identity(const EnergyModel& em, int samples, Rng& rng,
                                  const std::string& witness_path) {
    if (samples < 10)
        throw std::invalid_argument("check_energy_identity: need at least 10 samples");
    const RadialGrid& g = em.grid();
    const int M = g.M();

    Worst worst;
    Field worst_field;
    for (int sidx = 0; sidx < samples; ++sidx) {
        Field v(M);
        for (int j = 0; j + 1 < M; ++j) v[j] = rng.uniform_in(-2.0, 2.0);
        const double phi = em.phi(v).total;
        const Field u = recover_u(em.transform(), v);
        const double jval = em.j_energy(u);
        const double margin = 1e-8 * (1.0 + std::abs(phi)) - std::abs(phi - jval);
        if (margin < worst.margin) worst_field = v;
        worst.feed(margin, static_cast<double>(sidx));
    }

    SuiteReport rep;
    rep.suite = "energy_identity";
    PropertyCheck c = worst.done("phi_matches_j");
    if (!c.pass && !witness_path.empty()) write_field_csv(witness_path, g, worst_field);
    rep.checks.push_back(c);
    return rep;
}

} // namespace dualvar
