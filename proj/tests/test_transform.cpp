#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualvar/rng.hpp"
#include "dualvar/transform.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using dualvar::TransformEvaluator;

// Reference values computed to 20+ digits with an independent
// multiprecision tool from the closed form of the inverse transform.
namespace ref {
const double F_half = 0.53899368271107530659;
const double F_one = 1.27127389852281551931;
const double F_ten = 72.069359079739141281;
const double f_half = 0.46782165907056833845;
const double f_one = 0.83442474148327925271;
const double f_two = 1.37279081213772653204;
const double f_ten = 3.56844227344943647832;
const double f_hundred = 11.8074935831039322005;
const double fprime_five = 0.28051423312729884767;
} // namespace ref

TEST_CASE("antiderivative matches closed form and quadrature") {
    CHECK(TransformEvaluator::antiderivative(0.0) == 0.0);
    CHECK(TransformEvaluator::antiderivative(0.5) == doctest::Approx(ref::F_half).epsilon(1e-14));
    CHECK(TransformEvaluator::antiderivative(1.0) == doctest::Approx(ref::F_one).epsilon(1e-14));
    CHECK(TransformEvaluator::antiderivative(10.0) == doctest::Approx(ref::F_ten).epsilon(1e-14));

    // independent quadrature of the defining integrand
    auto integrand = [](double s) { return std::sqrt(1.0 + 2.0 * s * s); };
    const double q1 = oracle::integrate(integrand, 0.0, 1.0);
    CHECK(std::abs(TransformEvaluator::antiderivative(1.0) - q1) < 1e-10);
    const double q3 = oracle::integrate(integrand, 0.0, 3.0);
    CHECK(std::abs(TransformEvaluator::antiderivative(3.0) - q3) < 1e-10);

    // odd symmetry
    for (double u : {0.25, 1.0, 7.5, 40.0})
        CHECK(TransformEvaluator::antiderivative(-u) == -TransformEvaluator::antiderivative(u));
}

TEST_CASE("eval_f spot values and round trip") {
    TransformEvaluator tf;
    CHECK(tf.eval_f(0.0) == 0.0);
    CHECK(tf.eval_f(0.5) == doctest::Approx(ref::f_half).epsilon(1e-12));
    CHECK(tf.eval_f(1.0) == doctest::Approx(ref::f_one).epsilon(1e-12));
    CHECK(tf.eval_f(2.0) == doctest::Approx(ref::f_two).epsilon(1e-12));
    CHECK(tf.eval_f(10.0) == doctest::Approx(ref::f_ten).epsilon(1e-12));
    CHECK(tf.eval_f(100.0) == doctest::Approx(ref::f_hundred).epsilon(1e-12));

    dualvar::Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform_in(-100.0, 100.0);
        const double ft = tf.eval_f(t);
        CHECK(std::abs(TransformEvaluator::antiderivative(ft) - t) <= tf.newton_tol);
        CHECK(tf.eval_f(-t) == -ft); // odd by construction
    }
    // tiny and huge arguments stay finite and consistent
    CHECK(tf.eval_f(1e-15) == doctest::Approx(1e-15).epsilon(1e-12));
    const double big = tf.eval_f(1e6);
    CHECK(std::abs(TransformEvaluator::antiderivative(big) - 1e6) <= 1e-8);
}

TEST_CASE("eval_f is strictly increasing and obeys growth bounds") {
    TransformEvaluator tf;
    dualvar::Rng rng(77);
    std::vector<double> ts;
    for (int i = 0; i < 1500; ++i) ts.push_back(rng.uniform_in(-100.0, 100.0));
    std::sort(ts.begin(), ts.end());
    double prev = tf.eval_f(ts.front());
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double cur = tf.eval_f(ts[i]);
        CHECK(cur > prev);
        prev = cur;
    }
    const double quarter_root_2 = std::pow(2.0, 0.25);
    for (double t : ts) {
        const double af = std::abs(tf.eval_f(t));
        CHECK(af <= std::abs(t) + 1e-10);
        CHECK(af <= quarter_root_2 * std::sqrt(std::abs(t)) + 1e-10);
    }
}

TEST_CASE("eval_f_prime: value at zero, bound, symmetry, finite differences") {
    TransformEvaluator tf;
    CHECK(tf.eval_f_prime(0.0) == 1.0);
    CHECK(tf.eval_f_prime(5.0) == doctest::Approx(ref::fprime_five).epsilon(1e-12));
    for (double t : {0.1, 1.0, 3.0, 20.0, 90.0}) {
        CHECK(tf.eval_f_prime(t) <= 1.0);
        CHECK(tf.eval_f_prime(t) > 0.0);
        CHECK(tf.eval_f_prime(-t) == doctest::Approx(tf.eval_f_prime(t)).epsilon(1e-14));
        const double eps = 1e-6;
        const double fd = (tf.eval_f(t + eps) - tf.eval_f(t - eps)) / (2.0 * eps);
        CHECK(tf.eval_f_prime(t) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("defining identity (1 + 2 f^2) f'^2 = 1") {
    TransformEvaluator tf;
    dualvar::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform_in(-100.0, 100.0);
        const double f = tf.eval_f(t);
        const double fp = tf.eval_f_prime(t);
        CHECK(std::abs((1.0 + 2.0 * f * f) * fp * fp - 1.0) <= 1e-12);
    }
}

TEST_CASE("batch evaluation") {
    TransformEvaluator tf;
    CHECK(tf.eval_f_batch({}).empty());
    std::vector<double> ts{0.0, 1.0, -1.0, 42.0};
    auto out = tf.eval_f_batch(ts);
    REQUIRE(out.size() == 4);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(out[i] == tf.eval_f(ts[i]));
}

TEST_CASE("ode oracle agrees with the Newton inversion") {
    TransformEvaluator tf;
    CHECK(tf.ode_oracle(0.0, 1e-3) == 0.0);
    CHECK(std::abs(tf.ode_oracle(1.0, 1e-5) - tf.eval_f(1.0)) <= 1e-8);
    CHECK(std::abs(tf.ode_oracle(-1.0, 1e-5) + tf.eval_f(1.0)) <= 1e-8);
    CHECK(std::abs(tf.ode_oracle(10.0, 1e-4) - tf.eval_f(10.0)) <= 1e-8);

    // trace across [0, 20] at modest step stays within 1e-8 of eval_f
    std::vector<double> cps;
    for (int i = 1; i <= 40; ++i) cps.push_back(0.5 * i);
    auto trace = tf.ode_oracle_trace(20.0, 1e-3, cps);
    for (std::size_t i = 0; i < cps.size(); ++i)
        CHECK(std::abs(trace[i] - tf.eval_f(cps[i])) <= 1e-8);
}

TEST_CASE("ode oracle converges at fourth order") {
    TransformEvaluator tf;
    const double t = 2.0;
    const double exact = tf.eval_f(t); // inversion is machine-accurate here
    const double e1 = std::abs(tf.ode_oracle(t, 0.2) - exact);
    const double e2 = std::abs(tf.ode_oracle(t, 0.1) - exact);
    REQUIRE(e1 > 1e-13); // above roundoff so the ratio is meaningful
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 26.0);
}

TEST_CASE("mu estimate: lower growth constant") {
    TransformEvaluator tf;
    const double mu = tf.estimate_mu();
    CHECK(mu > 0.0);
    CHECK(mu < 1.0);
    // minimum of both ratio branches sits at t = 1
    CHECK(mu <= ref::f_one);
    CHECK(mu >= ref::f_one - 1e-6);
    // ratio f(t)/t tends to 1 at the origin
    CHECK(tf.eval_f(1e-8) / 1e-8 == doctest::Approx(1.0).epsilon(1e-8));
    // spot-verify both inequalities on fresh random points
    dualvar::Rng rng(123);
    for (int i = 0; i < 3000; ++i) {
        const double t1 = rng.uniform_in(1e-9, 1.0);
        CHECK(tf.eval_f(t1) >= mu * t1);
        const double t2 = rng.uniform_in(1.0, 1e6);
        CHECK(tf.eval_f(t2) >= mu * std::sqrt(t2));
    }
}

TEST_CASE("delta estimate: two-sided sandwich radius") {
    TransformEvaluator tf;
    const double delta = tf.estimate_delta();
    CHECK(delta < 1.0);
    CHECK(delta == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
    dualvar::Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform_in(0.0, delta);
        const double ft = tf.eval_f(t);
        CHECK(ft >= 0.5 * t - 1e-12);
        CHECK(ft <= t + 1e-12);
    }
    // the sandwich genuinely fails well beyond the crossing near 4.62
    CHECK(tf.eval_f(6.0) < 0.5 * 6.0);
}
