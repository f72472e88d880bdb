#include "dualvar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualvar {

double TransformEvaluator::antiderivative(double u) {
    const double inv_2sqrt2 = 0.35355339059327376220; // 1/(2 sqrt 2)
    return 0.5 * u * std::sqrt(1.0 + 2.0 * u * u) + inv_2sqrt2 * std::asinh(u * std::sqrt(2.0));
}

double TransformEvaluator::eval_f(double t) const {
    if (t == 0.0) return t; // preserves signed zero
    const double at = std::abs(t);
    const double quarter_root_2 = 1.18920711500272106672; // 2^{1/4}
    double hi = std::min(at, quarter_root_2 * std::sqrt(at));
    double lo = 0.0;
    double x = hi;
    double r = antiderivative(x) - at;
    // F carries relative roundoff, so the absolute tolerance gets a floor of a
    // few ulp of t; below [-100, 100] the floor never exceeds newton_tol.
    const double tol_eff = std::max(newton_tol, 8.0 * 2.220446049250313e-16 * at);
    int it = 0;
    while (std::abs(r) > tol_eff && it++ < max_newton_iters) {
        if (r > 0.0) hi = std::min(hi, x);
        else lo = std::max(lo, x);
        double step = r / std::sqrt(1.0 + 2.0 * x * x);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi); // bisection fallback
        if (xn == x) break; // stagnated at roundoff
        x = xn;
        r = antiderivative(x) - at;
    }
    if (std::abs(r) > tol_eff)
        throw std::runtime_error("transform: inversion of F stalled at t = " + std::to_string(t) +
                                 " (residual " + std::to_string(r) + ")");
    return t > 0.0 ? x : -x;
}

double TransformEvaluator::eval_f_prime(double t) const {
    const double ft = eval_f(t);
    return 1.0 / std::sqrt(1.0 + 2.0 * ft * ft);
}

std::vector<double> TransformEvaluator::eval_f_batch(const std::vector<double>& t) const {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        try {
            out[i] = eval_f(t[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("transform: batch element " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

namespace {

// shared sampling pattern for the mu estimate: log-spaced fill of (lo, hi]
// with a deterministic offset so the verification pass hits fresh points
void log_samples(double lo, double hi, int count, double offset, std::vector<double>& out) {
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i) {
        double s = (i + offset) / count;
        out.push_back(std::exp(la + s * (lb - la)));
    }
    out.push_back(hi);
}

} // namespace

double TransformEvaluator::estimate_mu(double t_max) const {
    if (!(t_max > 1.0)) throw std::invalid_argument("transform: estimate_mu needs t_max > 1");
    const double margin = 1e-8;

    auto branch_min = [&](double offset) {
        std::vector<double> ts;
        log_samples(1e-12, 1.0, 4000, offset, ts);
        double m = 2.0;
        for (double t : ts) m = std::min(m, eval_f(t) / t);
        ts.clear();
        log_samples(1.0, t_max, 4000, offset, ts);
        for (double t : ts) m = std::min(m, eval_f(t) / std::sqrt(t));
        return m;
    };

    const double mu = branch_min(0.0) - margin;
    if (!(mu > 0.0 && mu < 1.0))
        throw std::runtime_error("transform: mu estimate out of (0,1)");

    // independent verification on a shifted sample
    std::vector<double> ts;
    log_samples(1e-12, 1.0, 10000, 0.37, ts);
    for (double t : ts)
        if (eval_f(t) < mu * t)
            throw std::runtime_error("transform: mu verification failed on the linear branch at t = " +
                                     std::to_string(t));
    ts.clear();
    log_samples(1.0, t_max, 10000, 0.37, ts);
    for (double t : ts)
        if (eval_f(t) < mu * std::sqrt(t))
            throw std::runtime_error("transform: mu verification failed on the sqrt branch at t = " +
                                     std::to_string(t));
    return mu;
}

double TransformEvaluator::estimate_delta() const {
    // crossing of f(t) = t/2: f(t)/t decreases from 1, so the root is unique.
    double lo = 1.0, hi = 16.0;
    if (eval_f(hi) > 0.5 * hi) {
        while (eval_f(hi) > 0.5 * hi) { lo = hi; hi *= 2.0; }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (eval_f(mid) >= 0.5 * mid ? lo : hi) = mid;
    }
    double delta = std::min(0.5 * (lo + hi), 1.0 - 1e-6);

    // dense re-verification of t/2 <= f(t) <= t on (0, delta]
    for (int i = 1; i <= 5000; ++i) {
        double t = delta * i / 5000.0;
        double ft = eval_f(t);
        if (ft < 0.5 * t - 1e-12 || ft > t + 1e-12)
            throw std::runtime_error("transform: delta verification failed at t = " + std::to_string(t));
    }
    return delta;
}

double TransformEvaluator::ode_oracle(double t, double step) const {
    std::vector<double> cp{std::abs(t)};
    double v = ode_oracle_trace(std::abs(t), step, cp).front();
    return t >= 0.0 ? v : -v;
}

std::vector<double> TransformEvaluator::ode_oracle_trace(double t_max, double step,
                                                         const std::vector<double>& checkpoints) const {
    if (!(step > 0.0)) throw std::invalid_argument("transform: ode_oracle needs step > 0");
    auto rhs = [](double f) { return 1.0 / std::sqrt(1.0 + 2.0 * f * f); };
    auto rk4 = [&](double f, double h) {
        double k1 = rhs(f);
        double k2 = rhs(f + 0.5 * h * k1);
        double k3 = rhs(f + 0.5 * h * k2);
        double k4 = rhs(f + h * k3);
        return f + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    std::vector<double> out;
    out.reserve(checkpoints.size());
    double t = 0.0, f = 0.0;
    for (double target : checkpoints) {
        if (target < t - 1e-15 || target > t_max + 1e-15)
            throw std::invalid_argument("transform: ode checkpoints must be nondecreasing and <= t_max");
        while (t + step <= target) {
            f = rk4(f, step);
            t += step;
        }
        double rem = target - t;
        out.push_back(rem > 0.0 ? rk4(f, rem) : f);
        if (rem > 0.0) { f = out.back(); t = target; }
    }
    return out;
}

} // namespace dualvar
