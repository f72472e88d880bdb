#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualvar/linalg.hpp"
#include "dualvar/rng.hpp"

#include <cmath>
#include <vector>

using namespace dualvar;

namespace {

// dense reference multiply of the packed symmetric band
std::vector<double> band_mul(const BandedSPD& A, const std::vector<double>& x) {
    const int n = A.size(), bw = A.bandwidth();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - bw); j <= i; ++j) {
            y[i] += A.at(i, j) * x[j];
            if (i != j) y[j] += A.at(i, j) * x[i];
        }
    return y;
}

} // namespace

TEST_CASE("banded ldlt: tridiagonal laplacian solve") {
    const int n = 12;
    BandedSPD A(n, 1);
    for (int i = 0; i < n; ++i) {
        A.at(i, i) = 2.0;
        if (i > 0) A.at(i, i - 1) = -1.0;
    }
    BandedSPD A_copy = A;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = std::sin(0.7 * i + 0.2);
    A.factor();
    std::vector<double> x;
    A.solve(b, x);
    std::vector<double> r = band_mul(A_copy, x);
    for (int i = 0; i < n; ++i) CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("banded ldlt: random spd with bandwidth 2") {
    Rng rng(7);
    const int n = 60, bw = 2;
    BandedSPD A(n, bw);
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - bw); j < i; ++j) A.at(i, j) = rng.uniform_in(-1.0, 1.0);
        A.at(i, i) = 5.0 + rng.uniform();   // diagonally dominant, hence spd
    }
    BandedSPD A_copy = A;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.normal();
    A.factor();
    std::vector<double> x;
    A.solve(b, x);
    std::vector<double> r = band_mul(A_copy, x);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(r[i] - b[i]));
    CHECK(worst < 1e-11);
}

TEST_CASE("banded ldlt: rejects indefinite input and misuse") {
    BandedSPD A(3, 1);
    A.at(0, 0) = 1.0;
    A.at(1, 0) = 3.0;    // schur complement at row 1 goes negative
    A.at(1, 1) = 1.0;
    A.at(2, 2) = 1.0;
    CHECK_THROWS(A.factor());

    BandedSPD B(3, 1);
    std::vector<double> rhs(3, 1.0), x;
    CHECK_THROWS(B.solve(rhs, x));   // solve before factor
    CHECK_THROWS(BandedSPD(0, 0));
    CHECK_THROWS(B.at(0, 2));        // outside the band
    B.add_symmetric(2, 1, 0.5);
    CHECK(B.at(2, 1) == 0.5);
}

TEST_CASE("jacobi eigenvalues: closed forms and trace invariants") {
    std::vector<double> a2 = {2.0, 1.0, 1.0, 2.0};
    std::vector<double> ev2 = symmetric_eigenvalues(a2, 2);
    CHECK(ev2[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev2[1] == doctest::Approx(3.0).epsilon(1e-13));

    std::vector<double> diag = {4.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 7.0};
    std::vector<double> evd = symmetric_eigenvalues(diag, 3);
    CHECK(evd[0] == doctest::Approx(-2.0));
    CHECK(evd[1] == doctest::Approx(4.0));
    CHECK(evd[2] == doctest::Approx(7.0));

    Rng rng(99);
    const int n = 8;
    std::vector<double> a(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = rng.uniform_in(-2.0, 2.0);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    double tr = 0.0, tr2 = 0.0;
    for (int i = 0; i < n; ++i) tr += a[i * n + i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr2 += a[i * n + j] * a[j * n + i];
    std::vector<double> ev = symmetric_eigenvalues(a, n);
    double sum = 0.0, sum2 = 0.0;
    for (double e : ev) {
        sum += e;
        sum2 += e * e;
    }
    CHECK(sum == doctest::Approx(tr).epsilon(1e-11));
    CHECK(sum2 == doctest::Approx(tr2).epsilon(1e-11));
    for (int i = 1; i < n; ++i) CHECK(ev[i] >= ev[i - 1]);
}
