#include "dualvar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualvar {

BandedSPD::BandedSPD(int n, int bw) : n_(n), bw_(bw) {
    if (n < 1 || bw < 0 || bw >= n)
        throw std::invalid_argument("BandedSPD: bad dimensions");
    band_.assign(static_cast<std::size_t>(n) * (bw + 1), 0.0);
}

double& BandedSPD::at(int i, int j) {
    if (j > i || j < i - bw_ || i < 0 || i >= n_)
        throw std::out_of_range("BandedSPD::at outside band");
    return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)];
}

double BandedSPD::at(int i, int j) const {
    if (j > i || j < i - bw_ || i < 0 || i >= n_)
        throw std::out_of_range("BandedSPD::at outside band");
    return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)];
}

void BandedSPD::add_symmetric(int i, int j, double value) {
    if (i < j) std::swap(i, j);
    at(i, j) += value;
}

void BandedSPD::factor() {
    // in place: band_ ends up holding L (unit diagonal implicit) and D on the
    // diagonal slots
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - bw_);
        double d = at(i, i);
        for (int k = lo; k < i; ++k) {
            const double lik = at(i, k);
            d -= lik * lik * at(k, k);
        }
        if (!(d > 0.0))
            throw std::runtime_error("BandedSPD::factor: matrix is not positive definite");
        at(i, i) = d;
        for (int j = i + 1; j <= std::min(n_ - 1, i + bw_); ++j) {
            double v = at(j, i);
            const int klo = std::max(lo, j - bw_);
            for (int k = klo; k < i; ++k) v -= at(j, k) * at(i, k) * at(k, k);
            at(j, i) = v / d;
        }
    }
    factored_ = true;
}

void BandedSPD::solve(const std::vector<double>& rhs, std::vector<double>& x) const {
    if (!factored_) throw std::logic_error("BandedSPD::solve before factor");
    if (static_cast<int>(rhs.size()) != n_)
        throw std::invalid_argument("BandedSPD::solve: size mismatch");
    x = rhs;
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - bw_);
        for (int k = lo; k < i; ++k) x[i] -= at(i, k) * x[k];
    }
    for (int i = 0; i < n_; ++i) x[i] /= at(i, i);
    for (int i = n_ - 1; i >= 0; --i) {
        const int hi = std::min(n_ - 1, i + bw_);
        for (int k = i + 1; k <= hi; ++k) x[i] -= at(k, i) * x[k];
    }
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    if (n < 1 || static_cast<int>(a.size()) != n * n)
        throw std::invalid_argument("symmetric_eigenvalues: bad size");
    auto idx = [n](int i, int j) { return i * n + j; };

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[idx(i, i)]));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) scale = std::max(scale, std::abs(a[idx(i, j)]));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[idx(i, j)] * a[idx(i, j)];
        if (std::sqrt(off) < 1e-15 * scale * n) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[idx(p, q)];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[idx(k, p)], akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[idx(p, k)], aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[idx(i, i)];
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace dualvar
