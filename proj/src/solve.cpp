#include "dualvar/solve.hpp"

#include "dualvar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <memory>
#include <stdexcept>

namespace dualvar {

void SolveOptions::validate() const {
    if (!(grad_tol > 0.0)) throw std::invalid_argument("SolveOptions: grad_tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("SolveOptions: max_iters must be >= 1");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
        throw std::invalid_argument("SolveOptions: armijo_c must lie in (0,1)");
    if (!(backtrack_ratio > 0.0 && backtrack_ratio < 1.0))
        throw std::invalid_argument("SolveOptions: backtrack_ratio must lie in (0,1)");
    if (memory < 0) throw std::invalid_argument("SolveOptions: memory must be >= 0");
}

Objective phi_objective(const EnergyModel& em) {
    Objective obj;
    obj.value = [&em](const Field& v) { return em.phi(v).total; };
    obj.value_and_grad = [&em](const Field& v, Field& grad) {
        return em.phi_and_grad(v, grad);
    };
    obj.curvature_diag = [&em](const Field& v, Field& out) {
        em.reaction_curvature_diag(v, out);
    };
    return obj;
}

namespace {

/// tridiagonal stiffness of the cell-difference dirichlet energy with the
/// boundary node pinned (unit row M-1, couplings to it dropped)
BandedSPD pinned_stiffness(const RadialGrid& g) {
    const int M = g.M();
    BandedSPD S(M, 1);
    const auto& c = g.cell_weights();
    const auto& r = g.nodes();
    for (int i = 0; i + 1 < M; ++i) {
        const double hh = r[i + 1] - r[i];
        const double t = c[i] / (hh * hh);
        S.at(i, i) += t;
        if (i + 1 < M - 1) {
            S.at(i + 1, i + 1) += t;
            S.at(i + 1, i) -= t;
        }
    }
    S.at(M - 1, M - 1) = 1.0;
    return S;
}

/// descent metric: either the pinned dirichlet stiffness (solved by banded
/// LDL^T) or the diagonal quadrature weights
class DescentMetric {
  public:
    DescentMetric(const RadialGrid& g, bool sobolev) : grid_(&g), sobolev_(sobolev) {
        if (!sobolev_) return;
        stiffness_ = std::make_unique<BandedSPD>(pinned_stiffness(g));
        stiffness_->factor();
    }

    // out = H0 * raw (inverse metric applied to a raw euclidean gradient)
    void apply(const std::vector<double>& raw, std::vector<double>& out) const {
        if (sobolev_) {
            stiffness_->solve(raw, out);
        } else {
            const auto& W = grid_->quad_weights();
            out.resize(raw.size());
            for (std::size_t j = 0; j < raw.size(); ++j) out[j] = raw[j] / W[j];
        }
        out[grid_->M() - 1] = 0.0;
    }

  private:
    const RadialGrid* grid_;
    bool sobolev_;
    std::unique_ptr<BandedSPD> stiffness_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

struct Pair {
    std::vector<double> s, y;
    double sy;
};

/// two-loop recursion with H0 = metric inverse, scaled by the latest curvature
std::vector<double> lbfgs_direction(const std::deque<Pair>& hist, const DescentMetric& metric,
                                    const std::vector<double>& raw) {
    std::vector<double> q = raw;
    std::vector<double> alpha(hist.size());
    for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
        alpha[i] = dot(hist[i].s, q) / hist[i].sy;
        for (std::size_t m = 0; m < q.size(); ++m) q[m] -= alpha[i] * hist[i].y[m];
    }
    std::vector<double> r;
    metric.apply(q, r);
    if (!hist.empty()) {
        std::vector<double> h0y;
        metric.apply(hist.back().y, h0y);
        const double yh0y = dot(hist.back().y, h0y);
        if (yh0y > 0.0) {
            const double gamma = hist.back().sy / yh0y;
            for (double& x : r) x *= gamma;
        }
    }
    for (std::size_t i = 0; i < hist.size(); ++i) {
        const double beta = dot(hist[i].y, r) / hist[i].sy;
        for (std::size_t m = 0; m < r.size(); ++m) r[m] += (alpha[i] - beta) * hist[i].s[m];
    }
    for (double& x : r) x = -x;
    return r;
}

/// banded Newton finishing rounds near stationarity: solve (stiffness +
/// clamped curvature diagonal) delta = raw gradient and accept while the
/// max-norm at least halves and the value stays put to roundoff. Backtracking
/// cannot resolve this region because the remaining energy decrease is far
/// below evaluation noise, but the gradient itself is still accurate.
void polish_newton(const RadialGrid& grid, const Objective& obj, const SolveOptions& opts,
                   Field& x, double& fx, Field& g, double& gmax) {
    if (!obj.curvature_diag) return;
    if (!(gmax > 0.0) || gmax > 1e3 * opts.grad_tol) return;
    const int M = grid.M();
    const auto& W = grid.quad_weights();

    for (int round = 0; round < 8; ++round) {
        Field curv(M);
        obj.curvature_diag(x, curv);
        BandedSPD H = pinned_stiffness(grid);
        for (int j = 0; j < M - 1; ++j) {
            const double sjj = H.at(j, j);
            double c = curv[j];
            if (std::isnan(c)) c = 0.0;
            c = std::min(std::max(c, -0.5 * sjj), 1e12 * sjj);
            H.at(j, j) = sjj + c;
        }
        try {
            H.factor();
        } catch (const std::runtime_error&) {
            return;   // local model not positive definite, leave x as is
        }
        std::vector<double> raw(M, 0.0);
        for (int j = 0; j < M - 1; ++j) raw[j] = W[j] * g[j];
        std::vector<double> delta;
        H.solve(raw, delta);
        Field x_try = x;
        for (int j = 0; j < M - 1; ++j) {
            double t = x[j] - delta[j];
            if (opts.enforce_nonnegative && t < 0.0) t = 0.0;
            x_try[j] = t;
        }
        Field g_try(M);
        const double f_try = obj.value_and_grad(x_try, g_try);
        double gmax_try = 0.0;
        for (int j = 0; j < M - 1; ++j) gmax_try = std::max(gmax_try, std::abs(g_try[j]));
        if (!std::isfinite(f_try) || gmax_try > 0.5 * gmax ||
            f_try > fx + 1e-12 * (1.0 + std::abs(fx)))
            return;
        x = x_try;
        fx = f_try;
        g = g_try;
        gmax = gmax_try;
        if (gmax == 0.0) return;
    }
}

} // namespace

MinimizeResult minimize_objective(const RadialGrid& grid, const Objective& obj,
                                  const Field& v0, const SolveOptions& opts) {
    opts.validate();
    grid.check_field(v0, "minimize");
    const int M = grid.M();
    const auto& W = grid.quad_weights();

    Field x = v0;
    x[M - 1] = 0.0;
    if (opts.enforce_nonnegative)
        for (double& t : x) t = std::abs(t);

    const DescentMetric metric(grid, opts.sobolev);
    std::deque<Pair> hist;

    Field g(M);
    double fx = obj.value_and_grad(x, g);
    if (!std::isfinite(fx)) throw std::invalid_argument("minimize: objective not finite at v0");

    auto free_max = [&](const Field& grad) {
        double m = 0.0;
        for (int j = 0; j < M - 1; ++j) m = std::max(m, std::abs(grad[j]));
        return m;
    };

    MinimizeResult res;
    double gmax = free_max(g);

    // the max-norm does not decrease monotonically, so remember the best
    // iterate; near the minimum the energy signal of the remaining gradient
    // sits below evaluation roundoff and the iteration can only random-walk,
    // which the stagnation counter cuts short
    double best_gmax = std::numeric_limits<double>::infinity();
    double best_fx = 0.0;
    Field best_x(M);
    Field best_g(M);
    double stall_ref = std::numeric_limits<double>::infinity();
    int stall = 0;

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        if (gmax <= opts.grad_tol) break;

        std::vector<double> raw(M, 0.0);
        for (int j = 0; j < M - 1; ++j) raw[j] = W[j] * g[j];

        std::vector<double> d;
        if (opts.memory > 0 && !hist.empty()) {
            d = lbfgs_direction(hist, metric, raw);
        } else {
            metric.apply(raw, d);
            for (double& t : d) t = -t;
        }

        double gTd = dot(raw, d);
        if (!(gTd < 0.0)) {
            hist.clear();
            metric.apply(raw, d);
            for (double& t : d) t = -t;
            gTd = dot(raw, d);
            if (!(gTd < 0.0)) break;   // gradient numerically zero
        }

        double alpha = 1.0;
        bool accepted = false;
        Field trial(M);
        double ft = 0.0;
        while (alpha >= 1e-16) {
            for (int j = 0; j < M; ++j) {
                double t = x[j] + alpha * d[j];
                if (opts.enforce_nonnegative) t = std::abs(t);
                trial[j] = t;
            }
            trial[M - 1] = 0.0;
            ft = obj.value(trial);
            if (std::isfinite(ft) && ft <= fx + opts.armijo_c * alpha * gTd) {
                accepted = true;
                break;
            }
            alpha *= opts.backtrack_ratio;
        }
        if (!accepted)
            throw std::runtime_error("line search failure: no admissible step above 1e-16 at "
                                     "gradient max-norm " +
                                     std::to_string(gmax));

        Pair pr;
        pr.s.resize(M);
        for (int j = 0; j < M; ++j) pr.s[j] = trial[j] - x[j];
        x = trial;
        Field g_new(M);
        fx = obj.value_and_grad(x, g_new);
        pr.y.resize(M);
        for (int j = 0; j < M - 1; ++j) pr.y[j] = W[j] * (g_new[j] - g[j]);
        pr.y[M - 1] = 0.0;
        g = g_new;
        gmax = free_max(g);

        if (opts.memory > 0) {
            pr.sy = dot(pr.s, pr.y);
            double sn = std::sqrt(dot(pr.s, pr.s)), yn = std::sqrt(dot(pr.y, pr.y));
            if (pr.sy > 1e-10 * sn * yn) {
                hist.push_back(std::move(pr));
                if (static_cast<int>(hist.size()) > opts.memory) hist.pop_front();
            }
        }

        if (gmax < best_gmax) {
            best_gmax = gmax;
            best_fx = fx;
            best_x = x;
            best_g = g;
        }
        if (gmax < 0.9 * stall_ref) {
            stall_ref = gmax;
            stall = 0;
        } else if (++stall >= 400) {
            ++it;
            break;
        }
    }

    if (best_gmax < gmax) {
        x = best_x;
        fx = best_fx;
        g = best_g;
        gmax = best_gmax;
    }

    polish_newton(grid, obj, opts, x, fx, g, gmax);

    res.v = x;
    res.value = fx;
    res.grad_norm = gmax;
    res.iterations = it;
    res.converged = gmax <= opts.grad_tol;
    return res;
}

SolveReport minimize(const EnergyModel& em, const Field& v0, const SolveOptions& opts) {
    const MinimizeResult r = minimize_objective(em.grid(), phi_objective(em), v0, opts);
    SolveReport rep;
    rep.v_star = r.v;
    rep.u_star = recover_u(em.transform(), r.v);
    rep.phi_value = r.value;
    rep.j_value = em.j_energy(rep.u_star);
    rep.grad_norm = r.grad_norm;
    rep.iterations = r.iterations;
    rep.converged = r.converged;
    return rep;
}

Field recover_u(const TransformEvaluator& tf, const Field& v) {
    Field u(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) u[j] = tf.eval_f(v[j]);
    return u;
}

SolveReport ground_state(const EnergyModel& em, const SolveOptions& opts, int cert_samples,
                         Rng& rng) {
    const RadialGrid& g = em.grid();
    const int N = g.dim();

    // single trial bump centered where the concave coefficient carries its
    // radial mass, so the subspace certificate cannot degenerate
    int jmax = 0;
    double best = -1.0;
    for (int j = 0; j < g.M(); ++j) {
        const double mass = em.k_nodes()[j] * std::pow(g.nodes()[j], N - 1);
        if (mass > best) {
            best = mass;
            jmax = j;
        }
    }
    const double center = g.nodes()[jmax];
    const double width = std::min(0.9 * center, g.R() / 4.0);
    const SubspaceBasis basis = make_bump_basis(em, {center}, {width});

    const double delta = em.transform().estimate_delta();
    const GeometryCertificate cert = certify_level(em, basis, delta, cert_samples, rng);

    Field v0 = sphere_point(em, basis, {1.0}, cert.rho);
    for (double& t : v0) t = std::abs(t);

    SolveOptions gs_opts = opts;
    gs_opts.enforce_nonnegative = true;
    return minimize(em, v0, gs_opts);
}

std::vector<SolveReport> multi_start(const EnergyModel& em, const SolveOptions& opts, int n_max,
                                     int samples_per_level, int cert_samples, Rng& rng) {
    if (n_max < 1) throw std::invalid_argument("multi_start: n_max must be >= 1");
    if (samples_per_level < 1)
        throw std::invalid_argument("multi_start: samples_per_level must be >= 1");
    const double delta = em.transform().estimate_delta();

    std::vector<SolveReport> converged;
    for (int n = 1; n <= n_max; ++n) {
        const SubspaceBasis basis = build_subspace(em, n);
        const GeometryCertificate cert = certify_level(em, basis, delta, cert_samples, rng);
        for (int smp = 0; smp < samples_per_level; ++smp) {
            std::vector<double> dir(n);
            double nrm = 0.0;
            for (double& c : dir) {
                c = rng.normal();
                nrm += c * c;
            }
            if (nrm == 0.0) continue;
            nrm = std::sqrt(nrm);
            for (double& c : dir) c /= nrm;
            const Field v0 = sphere_point(em, basis, dir, cert.rho);
            SolveReport rep = minimize(em, v0, opts);
            if (rep.converged) converged.push_back(std::move(rep));
        }
    }
    return cluster_reports(em, std::move(converged));
}

std::vector<SolveReport> cluster_reports(const EnergyModel& em,
                                         std::vector<SolveReport> reports) {
    const int n = static_cast<int>(reports.size());
    if (n == 0) return reports;

    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    auto rel_l2_same = [&](const Field& a, const Field& b) {
        Field diff(a.size()), sum(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            diff[j] = a[j] - b[j];
            sum[j] = a[j] + b[j];
        }
        const double scale =
            std::max({em.lp_norm(a, 2.0), em.lp_norm(b, 2.0), 1e-30});
        const double dist = std::min(em.lp_norm(diff, 2.0), em.lp_norm(sum, 2.0));
        return dist <= 1e-3 * scale;
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool close_energy =
                std::abs(reports[i].phi_value - reports[j].phi_value) <= 1e-8;
            if (close_energy || rel_l2_same(reports[i].v_star, reports[j].v_star))
                parent[find(i)] = find(j);
        }

    std::vector<int> best_of_root(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (best_of_root[r] < 0 || reports[i].phi_value < reports[best_of_root[r]].phi_value)
            best_of_root[r] = i;
    }
    std::vector<SolveReport> out;
    for (int i = 0; i < n; ++i)
        if (best_of_root[find(i)] == i) out.push_back(std::move(reports[i]));
    std::sort(out.begin(), out.end(),
              [](const SolveReport& a, const SolveReport& b) { return a.phi_value < b.phi_value; });
    for (std::size_t i = 0; i < out.size(); ++i) {
        char label[16];
        std::snprintf(label, sizeof(label), "S%02d", static_cast<int>(i) + 1);
        out[i].distinct_id = label;
    }
    return out;
}

} // namespace dualvar
