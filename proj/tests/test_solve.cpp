#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualvar/solve.hpp"

#include <cmath>
#include <vector>

using namespace dualvar;

namespace {

ProblemSpec algebraic_spec() {
    ProblemSpec spec;
    spec.k = CoefficientFamily{CoefficientFamily::Kind::algebraic, 1.0, 1.2};
    spec.h = CoefficientFamily{CoefficientFamily::Kind::algebraic, 1.0, 2.0};
    return spec;
}

// quadratic test objective 1/2 sum W_j (v_j - target_j)^2 with known minimum;
// its hessian in representer coordinates is the identity, so the diagonal
// metric is the exact inverse hessian
Objective quadratic_objective(const RadialGrid& g, const Field& target) {
    Objective obj;
    obj.value = [&g, target](const Field& v) {
        double acc = 0.0;
        for (int j = 0; j < g.M(); ++j) {
            const double d = v[j] - target[j];
            acc += 0.5 * g.quad_weights()[j] * d * d;
        }
        return acc;
    };
    obj.value_and_grad = [&g, target, value = obj.value](const Field& v, Field& grad) {
        grad = Field(g.M());
        for (int j = 0; j < g.M(); ++j) grad[j] = v[j] - target[j];
        return value(v);
    };
    return obj;
}

// dirichlet quadratic: half the sum over cells of the squared difference
// quotient of v - target against the cell masses; the sobolev metric is its
// exact inverse hessian on the pinned subspace
Objective dirichlet_objective(const RadialGrid& g, const Field& target) {
    Objective obj;
    obj.value = [&g, target](const Field& v) {
        double acc = 0.0;
        for (int i = 0; i + 1 < g.M(); ++i) {
            const double hh = g.nodes()[i + 1] - g.nodes()[i];
            const double slope = ((v[i + 1] - target[i + 1]) - (v[i] - target[i])) / hh;
            acc += 0.5 * g.cell_weights()[i] * slope * slope;
        }
        return acc;
    };
    obj.value_and_grad = [&g, target, value = obj.value](const Field& v, Field& grad) {
        Field raw(g.M());
        for (int i = 0; i + 1 < g.M(); ++i) {
            const double hh = g.nodes()[i + 1] - g.nodes()[i];
            const double slope = ((v[i + 1] - target[i + 1]) - (v[i] - target[i])) / hh;
            const double flux = g.cell_weights()[i] * slope / hh;
            raw[i] -= flux;
            raw[i + 1] += flux;
        }
        grad = Field(g.M());
        for (int j = 0; j < g.M(); ++j) grad[j] = raw[j] / g.quad_weights()[j];
        return value(v);
    };
    return obj;
}

} // namespace

TEST_CASE("options validation") {
    SolveOptions o;
    CHECK_NOTHROW(o.validate());
    SolveOptions bad = o;
    bad.grad_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.armijo_c = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.backtrack_ratio = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.memory = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("quadratic objectives: each metric solves its matched quadratic in a few steps") {
    RadialGrid g(10.0, 120, 3, 1.01);
    Rng rng(3);
    Field target(g.M());
    for (int j = 0; j < g.M(); ++j)
        target[j] = std::sin(0.8 * g.nodes()[j]) * std::exp(-0.1 * g.nodes()[j]);
    target[g.M() - 1] = 0.0;
    Field v0(g.M());
    for (int j = 0; j < g.M(); ++j) v0[j] = rng.uniform_in(-1.0, 1.0);
    v0[g.M() - 1] = 0.0;

    for (int memory : {0, 10}) {
        SolveOptions opts;
        opts.memory = memory;

        opts.sobolev = false;
        MinimizeResult res = minimize_objective(g, quadratic_objective(g, target), v0, opts);
        CHECK(res.converged);
        CHECK(res.grad_norm <= opts.grad_tol);
        CHECK(res.iterations <= 20);
        double worst = 0.0;
        for (int j = 0; j < g.M(); ++j) worst = std::max(worst, std::abs(res.v[j] - target[j]));
        CHECK(worst < 1e-7);
        CHECK(res.v[g.M() - 1] == 0.0);

        opts.sobolev = true;
        res = minimize_objective(g, dirichlet_objective(g, target), v0, opts);
        CHECK(res.converged);
        CHECK(res.grad_norm <= opts.grad_tol);
        CHECK(res.iterations <= 20);
        worst = 0.0;
        for (int j = 0; j < g.M(); ++j) worst = std::max(worst, std::abs(res.v[j] - target[j]));
        CHECK(worst < 1e-7);
        CHECK(res.v[g.M() - 1] == 0.0);
    }
}

TEST_CASE("inconsistent gradient trips the line-search failure error") {
    RadialGrid g(5.0, 60, 3);
    Field target(g.M());
    for (int j = 0; j < g.M() - 1; ++j) target[j] = 1.0;
    Objective obj = quadratic_objective(g, target);
    Objective lying;
    lying.value = obj.value;
    lying.value_and_grad = [obj](const Field& v, Field& grad) {
        const double val = obj.value_and_grad(v, grad);
        for (double& x : grad) x = -x;   // points uphill on purpose
        return val;
    };
    Field v0(g.M(), 0.0);
    SolveOptions opts;
    opts.sobolev = false;
    CHECK_THROWS_AS(minimize_objective(g, lying, v0, opts), std::runtime_error);
}

TEST_CASE("zero start is already critical") {
    RadialGrid g(20.0, 200, 3, 1.01);
    TransformEvaluator tf;
    EnergyModel em(ProblemSpec{}, g, tf);
    SolveReport rep = minimize(em, Field(g.M()), SolveOptions{});
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.phi_value == 0.0);
    CHECK(rep.grad_norm == 0.0);
    for (int j = 0; j < g.M(); ++j) CHECK(rep.v_star[j] == 0.0);
    for (int j = 0; j < g.M(); ++j) CHECK(rep.u_star[j] == 0.0);
}

TEST_CASE("descent from a certified sphere point stays negative and is monotone") {
    RadialGrid g(20.0, 250, 3, 1.01);
    TransformEvaluator tf;
    EnergyModel em(algebraic_spec(), g, tf);
    Rng rng(17);
    SubspaceBasis basis = build_subspace(em, 1);
    GeometryCertificate cert = certify_level(em, basis, tf.estimate_delta(), 150, rng);
    Field v0 = sphere_point(em, basis, {1.0}, cert.rho);
    CHECK(em.phi(v0).total < 0.0);

    // record the accepted-iterate energies through a wrapped objective
    std::vector<double> accepted;
    Objective obj = phi_objective(em);
    Objective tracking;
    tracking.value = obj.value;
    tracking.value_and_grad = [obj, &accepted](const Field& v, Field& grad) {
        const double val = obj.value_and_grad(v, grad);
        accepted.push_back(val);
        return val;
    };
    SolveOptions opts;
    MinimizeResult res = minimize_objective(g, tracking, v0, opts);
    CHECK(res.converged);
    CHECK(res.value < 0.0);
    CHECK(res.grad_norm <= opts.grad_tol);
    REQUIRE(accepted.size() >= 2);
    // roundoff slack covers the final Newton polish rounds, which hold the
    // value fixed to machine precision while reducing the gradient
    for (std::size_t i = 1; i < accepted.size(); ++i)
        CHECK(accepted[i] <= accepted[i - 1] + 1e-12 * (1.0 + std::abs(accepted[i - 1])));
}

TEST_CASE("recover_u: sign, parity and growth caps") {
    TransformEvaluator tf;
    Field v(7);
    v[0] = 0.0;
    v[1] = 0.5;
    v[2] = -0.5;
    v[3] = 2.0;
    v[4] = -2.0;
    v[5] = 9.0;
    v[6] = -9.0;
    Field u = recover_u(tf, v);
    CHECK(u[0] == 0.0);
    CHECK(u[1] > 0.0);
    CHECK(u[2] == -u[1]);
    CHECK(u[5] > 0.0);
    CHECK(u[6] == -u[5]);
    double vmax = 0.0, umax = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        vmax = std::max(vmax, std::abs(v[j]));
        umax = std::max(umax, std::abs(u[j]));
    }
    CHECK(umax <= std::min(vmax, std::pow(2.0, 0.25) * std::sqrt(vmax)) * (1.0 + 1e-12));
}

TEST_CASE("ground state on the default problem: nonnegative with negative energy") {
    RadialGrid g(20.0, 300, 3, 1.01);
    TransformEvaluator tf;
    EnergyModel em(ProblemSpec{}, g, tf);
    Rng rng(23);
    SolveOptions opts;
    SolveReport rep = ground_state(em, opts, 150, rng);
    CHECK(rep.converged);
    CHECK(rep.grad_norm <= opts.grad_tol);
    CHECK(rep.phi_value < 0.0);
    CHECK(rep.j_value < 0.0);
    for (int j = 0; j < g.M(); ++j) CHECK(rep.v_star[j] >= 0.0);
    for (int j = 0; j < g.M(); ++j) CHECK(rep.u_star[j] >= 0.0);
    CHECK(std::abs(rep.phi_value - rep.j_value) <= 1e-6 * (1.0 + std::abs(rep.phi_value)));
    // sign law for s = 14 >= 4
    CHECK(rep.phi_value <= 1e-8);
    // transformed-back solution matches the nodewise transform
    for (int j = 0; j < g.M(); ++j)
        CHECK(rep.u_star[j] == doctest::Approx(tf.eval_f(rep.v_star[j])).epsilon(1e-12));
}

TEST_CASE("cluster_reports: sign pairs merge, distinct energies stay apart") {
    RadialGrid g(10.0, 80, 3);
    TransformEvaluator tf;
    EnergyModel em(ProblemSpec{}, g, tf);

    auto mk = [&](double amp, double width, double phi) {
        SolveReport r;
        r.v_star = Field(g.M());
        for (int j = 0; j < g.M(); ++j)
            r.v_star[j] = amp * std::exp(-width * g.nodes()[j] * g.nodes()[j]);
        r.v_star[g.M() - 1] = 0.0;
        r.phi_value = phi;
        r.converged = true;
        return r;
    };
    SolveReport a = mk(1.0, 1.0, -0.50);
    SolveReport a_neg = mk(-1.0, 1.0, -0.50);
    SolveReport a_jitter = mk(1.0 + 1e-5, 1.0, -0.499999999);   // within both thresholds
    SolveReport b = mk(0.4, 0.2, -0.20);
    SolveReport c = mk(2.0, 3.0, -0.05);

    std::vector<SolveReport> out =
        cluster_reports(em, {b, a, c, a_neg, a_jitter});
    REQUIRE(out.size() == 3);
    CHECK(out[0].phi_value == doctest::Approx(-0.50));
    CHECK(out[1].phi_value == doctest::Approx(-0.20));
    CHECK(out[2].phi_value == doctest::Approx(-0.05));
    CHECK(out[0].distinct_id == "S01");
    CHECK(out[1].distinct_id == "S02");
    CHECK(out[2].distinct_id == "S03");
}

TEST_CASE("multi_start returns distinct negative-energy critical points") {
    RadialGrid g(20.0, 250, 3, 1.01);
    TransformEvaluator tf;
    EnergyModel em(algebraic_spec(), g, tf);
    Rng rng(29);
    SolveOptions opts;
    std::vector<SolveReport> sols = multi_start(em, opts, 2, 3, 150, rng);
    CHECK(!sols.empty());
    for (std::size_t i = 0; i < sols.size(); ++i) {
        CHECK(sols[i].converged);
        CHECK(sols[i].phi_value < 0.0);
        CHECK(sols[i].grad_norm <= opts.grad_tol);
        CHECK(sols[i].phi_value <= 1e-8);
        if (i > 0) CHECK(sols[i].phi_value >= sols[i - 1].phi_value);
    }
    for (std::size_t i = 1; i < sols.size(); ++i) {
        const double gap = std::abs(sols[i].phi_value - sols[i - 1].phi_value);
        CHECK(gap > 1e-8);
    }
}
