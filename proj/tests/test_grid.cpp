#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualvar/grid.hpp"
#include "dualvar/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dualvar;

namespace {
const double pi = 3.14159265358979323846;

Field sample(const RadialGrid& g, double (*fn)(double)) {
    Field f(g.M());
    for (int j = 0; j < g.M(); ++j) f[j] = fn(g.nodes()[j]);
    return f;
}
} // namespace

TEST_CASE("construction and validation") {
    RadialGrid g(20.0, 400, 3);
    CHECK(g.M() == 400);
    CHECK(g.nodes().front() > 0.0);
    CHECK(g.nodes().back() == 20.0);
    for (int j = 1; j < g.M(); ++j) CHECK(g.nodes()[j] > g.nodes()[j - 1]);
    CHECK(g.sphere_area() == doctest::Approx(4.0 * pi).epsilon(1e-14));

    RadialGrid g4(1.0, 100, 4);
    CHECK(g4.sphere_area() == doctest::Approx(19.73920880217871724).epsilon(1e-14));
    RadialGrid g5(1.0, 100, 5);
    CHECK(g5.sphere_area() == doctest::Approx(26.31894506957162298).epsilon(1e-14));

    CHECK_THROWS(RadialGrid(0.0, 100, 3));
    CHECK_THROWS(RadialGrid(-1.0, 100, 3));
    CHECK_THROWS(RadialGrid(1.0, 4, 3));
    CHECK_THROWS(RadialGrid(1.0, 100, 2));
    CHECK_THROWS(RadialGrid(1.0, 100, 3, 0.5));
}

TEST_CASE("geometric stretch produces the stated spacing ratio") {
    const double ratio = 1.03;
    RadialGrid g(10.0, 120, 3, ratio);
    CHECK(g.nodes().back() == 10.0);
    for (int j = 2; j < g.M() - 1; ++j) {
        const double h_prev = g.nodes()[j - 1] - g.nodes()[j - 2];
        const double h_cur = g.nodes()[j] - g.nodes()[j - 1];
        CHECK(h_cur / h_prev == doctest::Approx(ratio).epsilon(1e-9));
    }
}

TEST_CASE("quadrature weights sum to the ball volume") {
    for (double stretch : {1.0, 1.01, 1.05}) {
        RadialGrid g(20.0, 400, 3, stretch);
        double sum = 0.0;
        for (double w : g.quad_weights()) sum += w;
        const double vol = 4.0 * pi / 3.0 * std::pow(20.0, 3);
        CHECK(std::abs(sum - vol) <= 1e-10 * vol);
        for (double w : g.quad_weights()) CHECK(w > 0.0);
    }
    RadialGrid g4(1.5, 200, 4);
    double sum4 = 0.0;
    for (double w : g4.quad_weights()) sum4 += w;
    const double vol4 = 19.73920880217871724 / 4.0 * std::pow(1.5, 4);
    CHECK(std::abs(sum4 - vol4) <= 1e-10 * vol4);
}

TEST_CASE("integrate: monomial and gaussian against closed forms") {
    auto r2_err = [](int M) {
        RadialGrid g(1.0, M, 3);
        Field f = sample(g, [](double r) { return r * r; });
        return std::abs(g.integrate(f) - 4.0 * pi / 5.0);
    };
    const double e100 = r2_err(100), e200 = r2_err(200);
    CHECK(e100 < 2e-3);
    CHECK(e100 / e200 > 3.2);   // second-order convergence
    CHECK(e100 / e200 < 4.8);

    auto gau_val = [](int M) {
        RadialGrid g(12.0, M, 3);
        Field gau = sample(g, [](double r) { return std::exp(-2.0 * r * r); });
        return g.integrate(gau);
    };
    const double exact = 1.96870124321530247;
    const double ge1 = std::abs(gau_val(400) - exact);
    const double ge2 = std::abs(gau_val(800) - exact);
    CHECK(ge1 < 5e-3);
    CHECK(ge1 / ge2 > 3.2);
    CHECK(ge1 / ge2 < 4.8);
}

TEST_CASE("deriv: exact on affine and quadratic nodal data") {
    RadialGrid g(5.0, 150, 3, 1.01);
    Field c(g.M(), 3.25);
    Field dc = g.deriv(c);
    for (int j = 0; j < g.M(); ++j) CHECK(std::abs(dc[j]) <= 1e-12);

    Field lin = sample(g, [](double r) { return 2.0 - 0.75 * r; });
    Field dl = g.deriv(lin);
    for (int j = 0; j < g.M(); ++j) CHECK(dl[j] == doctest::Approx(-0.75).epsilon(1e-11));

    Field quad = sample(g, [](double r) { return r * r; });
    Field dq = g.deriv(quad);
    for (int j = 0; j < g.M(); ++j)
        CHECK(dq[j] == doctest::Approx(2.0 * g.nodes()[j]).epsilon(1e-10));
}

TEST_CASE("deriv: second-order convergence on a smooth profile") {
    auto err = [](int M) {
        RadialGrid g(6.0, M, 3);
        Field f = sample(g, [](double r) { return std::sin(r); });
        Field df = g.deriv(f);
        double worst = 0.0;
        for (int j = 1; j + 1 < g.M(); ++j)
            worst = std::max(worst, std::abs(df[j] - std::cos(g.nodes()[j])));
        return worst;
    };
    const double e1 = err(100), e2 = err(200);
    CHECK(e1 / e2 > 3.6);
    CHECK(e1 / e2 < 4.4);
}

TEST_CASE("radial laplacian: polynomial exactness and the regularity row") {
    RadialGrid g(5.0, 150, 3);
    Field c(g.M(), 1.0);
    Field lc = g.laplacian_radial(c);
    for (int j = 0; j < g.M(); ++j) CHECK(std::abs(lc[j]) <= 1e-10);

    // r^2 has radial laplacian 2N everywhere, including the first node where
    // the mirrored ghost stencil applies
    for (int N : {3, 4, 5}) {
        RadialGrid gn(5.0, 150, N);
        Field q = sample(gn, [](double r) { return r * r; });
        Field lq = gn.laplacian_radial(q);
        for (int j = 0; j < gn.M(); ++j)
            CHECK(lq[j] == doctest::Approx(2.0 * N).epsilon(1e-9));
    }
}

TEST_CASE("radial laplacian: gaussian profile, second-order convergence") {
    auto err = [](int M) {
        RadialGrid g(8.0, M, 3);
        Field f = sample(g, [](double r) { return std::exp(-r * r); });
        Field lf = g.laplacian_radial(f);
        double worst = 0.0;
        for (int j = 0; j < g.M() - M / 20; ++j) {
            const double r = g.nodes()[j];
            const double exact = (4.0 * r * r - 6.0) * std::exp(-r * r);
            worst = std::max(worst, std::abs(lf[j] - exact));
        }
        return worst;
    };
    const double e1 = err(200), e2 = err(400);
    CHECK(e1 < 5e-2);
    CHECK(e1 / e2 > 3.3);
    CHECK(e1 / e2 < 4.7);
}

TEST_CASE("dirichlet integrand: integrate(deriv^2) against the closed form") {
    // int |d/dr exp(-r^2)|^2 dV over R^3 = (3/2) pi sqrt(pi/2)
    const double exact = 5.90610372964590740;
    auto value = [](int M) {
        RadialGrid g(12.0, M, 3);
        Field f = sample(g, [](double r) { return std::exp(-r * r); });
        Field df = g.deriv(f);
        Field df2(g.M());
        for (int j = 0; j < g.M(); ++j) df2[j] = df[j] * df[j];
        return g.integrate(df2);
    };
    const double e1 = std::abs(value(200) - exact), e2 = std::abs(value(400) - exact);
    CHECK(e1 < 5e-3);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("field size checking and csv output") {
    RadialGrid g(1.0, 16, 3);
    Field wrong(10);
    CHECK_THROWS(g.integrate(wrong));
    CHECK_THROWS(g.deriv(wrong));
    CHECK_THROWS(g.laplacian_radial(wrong));

    Field f(16);
    for (int j = 0; j < 16; ++j) f[j] = j * 0.5;
    const char* path = "grid_csv_test.csv";
    write_field_csv(path, g, f);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,value");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 16);
    in.close();
    std::remove(path);
}
