#include "dualvar/geometry.hpp"

#include "dualvar/linalg.hpp"
#include "dualvar/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualvar {

double mollifier_bump(double r, double center, double width) {
    const double x = (r - center) / width;
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

SubspaceBasis make_bump_basis(const EnergyModel& em, const std::vector<double>& centers,
                              const std::vector<double>& widths) {
    if (centers.empty() || centers.size() != widths.size())
        throw std::invalid_argument("make_bump_basis: centers/widths mismatch");
    const RadialGrid& g = em.grid();
    const int n = static_cast<int>(centers.size());

    SubspaceBasis basis;
    basis.level_n = n;
    for (int i = 0; i < n; ++i) {
        Field b(g.M());
        for (int j = 0; j < g.M(); ++j) b[j] = mollifier_bump(g.nodes()[j], centers[i], widths[i]);
        b[g.M() - 1] = 0.0;
        const double nrm = em.e_norm(b);
        if (!(nrm > 0.0))
            throw std::runtime_error("make_bump_basis: bump " + std::to_string(i) +
                                     " vanishes on the grid");
        for (int j = 0; j < g.M(); ++j) b[j] /= nrm;
        basis.basis_fields.push_back(std::move(b));
    }

    // Dirichlet Gram matrix of the normalized bumps, in the same cell form
    // the energy uses
    const auto& cw = g.cell_weights();
    const auto& rr = g.nodes();
    basis.gram.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const Field& bi = basis.basis_fields[i];
            const Field& bj = basis.basis_fields[j];
            double acc = 0.0;
            for (int m = 0; m + 1 < g.M(); ++m) {
                const double hh = rr[m + 1] - rr[m];
                acc += cw[m] * ((bi[m + 1] - bi[m]) / hh) * ((bj[m + 1] - bj[m]) / hh);
            }
            basis.gram[i * n + j] = acc;
            basis.gram[j * n + i] = acc;
        }
    std::vector<double> ev = symmetric_eigenvalues(basis.gram, n);
    basis.gram_min_eigenvalue = ev.front();
    if (!(basis.gram_min_eigenvalue > 1e-10))
        throw std::runtime_error("make_bump_basis: gram matrix is numerically singular");
    return basis;
}

SubspaceBasis build_subspace(const EnergyModel& em, int n) {
    const RadialGrid& g = em.grid();
    if (n < 1) throw std::invalid_argument("build_subspace: n must be >= 1");
    if (n > g.M() / 8)
        throw std::invalid_argument("build_subspace: n exceeds M/8, bumps unresolvable");
    std::vector<double> centers(n), widths(n);
    for (int i = 1; i <= n; ++i) {
        centers[i - 1] = g.R() * (i - 0.5) / n;
        widths[i - 1] = g.R() / (2.0 * n + 1.0);
    }
    return make_bump_basis(em, centers, widths);
}

Field combine(const SubspaceBasis& basis, const std::vector<double>& coeffs) {
    if (coeffs.size() != basis.basis_fields.size())
        throw std::invalid_argument("combine: coefficient count mismatch");
    Field out(basis.basis_fields.front().size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Field& b = basis.basis_fields[i];
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs[i] * b[j];
    }
    return out;
}

Field sphere_point(const EnergyModel& em, const SubspaceBasis& basis,
                   const std::vector<double>& dir, double rho) {
    Field v = combine(basis, dir);
    const double nrm = em.e_norm(v);
    if (!(nrm > 0.0)) throw std::invalid_argument("sphere_point: zero direction");
    const double scale = rho / nrm;
    for (double& x : v) x *= scale;
    return v;
}

namespace {

std::vector<double> random_direction(int n, Rng& rng) {
    std::vector<double> dir(n);
    double nrm = 0.0;
    while (nrm == 0.0) {
        for (double& d : dir) d = rng.normal();
        nrm = 0.0;
        for (double d : dir) nrm += d * d;
        nrm = std::sqrt(nrm);
    }
    for (double& d : dir) d /= nrm;
    return dir;
}

/// seeded stochastic hill climb over coefficient directions on the sphere;
/// returns the best objective value found (sign = +1 maximize, -1 minimize)
template <class Eval>
double refine_extremum(const EnergyModel& em, const SubspaceBasis& basis,
                       std::vector<double> dir, double best, double sign, const Eval& eval,
                       Rng& rng, int iters) {
    const int n = static_cast<int>(dir.size());
    for (int it = 0; it < iters; ++it) {
        const double scale = 0.35 * std::pow(0.985, it);
        std::vector<double> trial = dir;
        for (int i = 0; i < n; ++i) trial[i] += scale * rng.normal();
        double nrm = 0.0;
        for (double d : trial) nrm += d * d;
        if (nrm == 0.0) continue;
        nrm = std::sqrt(nrm);
        for (double& d : trial) d /= nrm;
        const double val = eval(sphere_point(em, basis, trial, 1.0));
        if (sign * (val - best) > 0.0) {
            best = val;
            dir = std::move(trial);
        }
    }
    return best;
}

double sup_norm(const Field& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

double equivalence_constant(const EnergyModel& em, const SubspaceBasis& basis,
                            int samples, Rng& rng) {
    if (samples < 100) throw std::invalid_argument("equivalence_constant: samples < 100");
    const int n = basis.level_n;
    auto eval = [](const Field& v) { return sup_norm(v); };

    double best = 0.0;
    std::vector<double> best_dir(n, 0.0);
    // coordinate spikes first: for disjoint supports the extremum sits on one
    for (int i = 0; i < n; ++i) {
        std::vector<double> dir(n, 0.0);
        dir[i] = 1.0;
        const double val = eval(sphere_point(em, basis, dir, 1.0));
        if (val > best) {
            best = val;
            best_dir = dir;
        }
    }
    for (int smp = 0; smp < samples; ++smp) {
        std::vector<double> dir = random_direction(n, rng);
        const double val = eval(sphere_point(em, basis, dir, 1.0));
        if (val > best) {
            best = val;
            best_dir = dir;
        }
    }
    return refine_extremum(em, basis, best_dir, best, +1.0, eval, rng, 300);
}

std::pair<double, double> compute_A_B(const EnergyModel& em, const SubspaceBasis& basis,
                                      int samples, Rng& rng) {
    if (samples < 100) throw std::invalid_argument("compute_A_B: samples < 100");
    const int n = basis.level_n;
    auto eval_a = [&em](const Field& v) {
        return em.weighted_power(v, em.k_nodes(), em.q());
    };
    auto eval_b = [&em](const Field& v) {
        return em.weighted_power(v, em.h_nodes(), em.s());
    };

    double a_best = 0.0, b_best = 0.0;
    std::vector<double> a_dir(n, 0.0), b_dir(n, 0.0);
    bool first = true;
    for (int i = 0; i < n; ++i) {
        std::vector<double> dir(n, 0.0);
        dir[i] = 1.0;
        const Field v = sphere_point(em, basis, dir, 1.0);
        const double va = eval_a(v), vb = eval_b(v);
        if (first || va < a_best) {
            a_best = va;
            a_dir = dir;
        }
        if (first || vb > b_best) {
            b_best = vb;
            b_dir = dir;
        }
        first = false;
    }
    for (int smp = 0; smp < samples; ++smp) {
        std::vector<double> dir = random_direction(n, rng);
        const Field v = sphere_point(em, basis, dir, 1.0);
        const double va = eval_a(v), vb = eval_b(v);
        if (va < a_best) {
            a_best = va;
            a_dir = dir;
        }
        if (vb > b_best) {
            b_best = vb;
            b_dir = dir;
        }
    }
    double A = refine_extremum(em, basis, a_dir, a_best, -1.0, eval_a, rng, 300);
    double B = em.h_is_zero() ? 0.0
                              : refine_extremum(em, basis, b_dir, b_best, +1.0, eval_b, rng, 300);
    if (!(A > 1e-14))
        throw std::runtime_error(
            "degenerate subspace: sphere minimum of the concave weight is <= 1e-14 "
            "(trial bumps miss the support of the concave coefficient)");
    if (!em.h_is_zero()) B *= 1.05;   // sampled sup underestimates: inflate one-sided
    return {A, B};
}

double theta_of_rho(double rho, double A, double B, double q, double s) {
    return 0.5 * rho * rho - A / (std::pow(2.0, q) * q) * std::pow(rho, q) +
           B / s * std::pow(rho, s);
}

double find_rho(double A, double B, double vartheta, double delta, double q, double s) {
    if (!(A > 0.0) || B < 0.0 || !(vartheta > 0.0) || !(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("find_rho: bad inputs");
    const double hi = delta / vartheta;
    // unconstrained stationary scale when B = 0, used to anchor the bracket
    const double rho_hat = std::pow(A / std::pow(2.0, q), 1.0 / (2.0 - q));
    const double lo = 1e-6 * std::min(rho_hat, hi);

    // theta is decreasing-then-increasing on (0, inf): golden-section search
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = theta_of_rho(c, A, B, q, s), fd = theta_of_rho(d, A, B, q, s);
    for (int it = 0; it < 200; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = theta_of_rho(c, A, B, q, s);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = theta_of_rho(d, A, B, q, s);
        }
    }
    double rho = 0.5 * (a + b);
    double th = theta_of_rho(rho, A, B, q, s);
    // the constrained minimum may sit at the cap
    if (theta_of_rho(hi, A, B, q, s) < th) {
        rho = hi;
        th = theta_of_rho(hi, A, B, q, s);
    }
    if (!(th < 0.0))
        throw std::runtime_error("find_rho: negative theta unattainable (unexpected for q < 2)");
    return rho;
}

SphereCheck verify_sphere_negative(const EnergyModel& em, const SubspaceBasis& basis,
                                   double rho, double theta, int samples, Rng& rng) {
    if (samples < 100) throw std::invalid_argument("verify_sphere_negative: samples < 100");
    const double q = em.q(), s = em.s();
    SphereCheck out;
    out.samples = samples;
    out.theta = theta;
    out.all_negative = true;
    bool first = true;
    for (int smp = 0; smp < samples; ++smp) {
        const std::vector<double> dir = random_direction(basis.level_n, rng);
        const Field v = sphere_point(em, basis, dir, rho);
        const double phi = em.phi(v).total;
        const double dn = em.d_norm(v);
        const double upper = 0.5 * dn * dn -
                             em.weighted_power(v, em.k_nodes(), q) / (std::pow(2.0, q) * q) +
                             em.weighted_power(v, em.h_nodes(), s) / s;
        const double slack = upper - phi;
        if (first || phi > out.max_phi) out.max_phi = phi;
        if (first || slack < out.worst_chain_slack) out.worst_chain_slack = slack;
        first = false;
        if (!(phi < 0.0)) {
            out.all_negative = false;
            throw std::runtime_error("geometry violation: sampled sphere point has phi = " +
                                     std::to_string(phi) + " >= 0 at level " +
                                     std::to_string(basis.level_n));
        }
    }
    return out;
}

GeometryCertificate certify_level(const EnergyModel& em, const SubspaceBasis& basis,
                                  double delta, int samples, Rng& rng) {
    GeometryCertificate cert;
    cert.n = basis.level_n;
    cert.vartheta = equivalence_constant(em, basis, samples, rng);
    auto [A, B] = compute_A_B(em, basis, samples, rng);
    cert.A = A;
    cert.B = B;
    cert.rho = find_rho(A, B, cert.vartheta, delta, em.q(), em.s());
    cert.theta = theta_of_rho(cert.rho, A, B, em.q(), em.s());
    const SphereCheck sc = verify_sphere_negative(em, basis, cert.rho, cert.theta, samples, rng);
    cert.max_phi_sampled = sc.max_phi;
    cert.sphere_samples = sc.samples;
    return cert;
}

namespace {

Field embedding_sample(const EnergyModel& em, int kind, Rng& rng) {
    const RadialGrid& g = em.grid();
    const double R = g.R();
    Field v(g.M());
    if (kind == 0) {
        // gaussian shifted to vanish at R (log-uniform width sweep)
        const double w = std::pow(10.0, rng.uniform_in(-2.0, 1.0));
        const double tail = std::exp(-w * R * R);
        for (int j = 0; j < g.M(); ++j) v[j] = std::exp(-w * g.nodes()[j] * g.nodes()[j]) - tail;
    } else if (kind == 1) {
        const double c = rng.uniform_in(0.05 * R, 0.9 * R);
        const double wmax = 0.9 * std::min(c, R - c);
        const double w = rng.uniform_in(std::min(0.02 * R, 0.5 * wmax), wmax);
        for (int j = 0; j < g.M(); ++j) v[j] = mollifier_bump(g.nodes()[j], c, w);
    } else {
        for (int j = 0; j < g.M(); ++j) v[j] = rng.uniform_in(-1.0, 1.0);
    }
    v[g.M() - 1] = 0.0;
    return v;
}

} // namespace

double embedding_constant(const EnergyModel& em, int samples, Rng& rng) {
    if (samples < 30) throw std::invalid_argument("embedding_constant: samples < 30");
    const int N = em.grid().dim();
    const double p_star = 2.0 * N / (N - 2.0);
    auto ratio = [&](const Field& v) {
        const double dn = em.d_norm(v);
        if (!(dn > 0.0)) return 0.0;
        return em.lp_norm(v, p_star) / dn;
    };
    double worst = 0.0;
    for (int smp = 0; smp < samples; ++smp)
        worst = std::max(worst, ratio(embedding_sample(em, smp % 3, rng)));
    if (!(worst > 0.0)) throw std::runtime_error("embedding_constant: all samples degenerate");
    const double ell = 1.05 * worst;
    for (int smp = 0; smp < samples; ++smp) {
        if (ratio(embedding_sample(em, smp % 3, rng)) > ell)
            throw std::runtime_error(
                "embedding_constant: fresh sample exceeded the inflated bound");
    }
    return ell;
}

RayCheckReport coercivity_ray_check(const EnergyModel& em, const std::vector<Field>& directions,
                                    const std::vector<double>& t_schedule, double ell) {
    if (directions.empty()) throw std::invalid_argument("coercivity_ray_check: no directions");
    if (t_schedule.empty() || t_schedule.back() < 1e4)
        throw std::invalid_argument("coercivity_ray_check: schedule must reach 1e4");
    for (std::size_t i = 1; i < t_schedule.size(); ++i)
        if (t_schedule[i] <= t_schedule[i - 1])
            throw std::invalid_argument("coercivity_ray_check: schedule must increase");

    const RadialGrid& g = em.grid();
    const int N = g.dim();
    const double q = em.q();
    const double q0 = compute_q0(q, N);
    double k_pow = 0.0;
    for (int j = 0; j < g.M(); ++j)
        k_pow += g.quad_weights()[j] * std::pow(em.k_nodes()[j], q0);
    const double k_norm = std::pow(k_pow, 1.0 / q0);

    RayCheckReport rep;
    rep.directions = static_cast<int>(directions.size());
    rep.monotone_ok = true;
    rep.final_positive_ok = true;
    rep.lower_bound_ok = true;
    rep.ell = ell;
    rep.k_weight_norm = k_norm;
    bool first = true;

    for (const Field& w_raw : directions) {
        const double nrm = em.e_norm(w_raw);
        if (!(nrm > 0.0)) throw std::invalid_argument("coercivity_ray_check: zero direction");
        Field w(w_raw.size());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = w_raw[j] / nrm;
        const double dnw = em.d_norm(w);

        double prev = 0.0;
        bool have_prev = false;
        double phi_t = 0.0;
        for (double t : t_schedule) {
            Field tw(w.size());
            for (std::size_t j = 0; j < w.size(); ++j) tw[j] = t * w[j];
            phi_t = em.phi(tw).total;
            if (t >= 100.0) {
                if (have_prev && !(phi_t > prev)) rep.monotone_ok = false;
                prev = phi_t;
                have_prev = true;
            }
            const double td = t * dnw;
            const double bound =
                0.5 * td * td - std::pow(ell, q) / q * k_norm * std::pow(td, q);
            if (phi_t + 1e-9 * (1.0 + std::abs(phi_t)) < bound) rep.lower_bound_ok = false;
        }
        if (!(phi_t > 0.0)) rep.final_positive_ok = false;
        if (first || phi_t < rep.min_final_phi) rep.min_final_phi = phi_t;
        first = false;
    }
    return rep;
}

} // namespace dualvar
