#include "dualvar/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace dualvar {

EnergyModel::EnergyModel(const ProblemSpec& spec, const RadialGrid& grid,
                         const TransformEvaluator& tf)
    : grid_(&grid), tf_(&tf), q_(spec.q), s_(spec.s) {
    spec.validate();
    if (spec.N != grid.dim())
        throw std::invalid_argument("energy: problem dimension does not match the grid");
    k_.resize(grid.M());
    h_.resize(grid.M());
    for (int j = 0; j < grid.M(); ++j) {
        k_[j] = spec.k.eval(grid.nodes()[j]);
        h_[j] = spec.h.eval(grid.nodes()[j]);
    }
    init_flags();
}

EnergyModel::EnergyModel(const RadialGrid& grid, const TransformEvaluator& tf,
                         std::vector<double> k_nodes, std::vector<double> h_nodes,
                         double q, double s)
    : grid_(&grid), tf_(&tf), k_(std::move(k_nodes)), h_(std::move(h_nodes)), q_(q), s_(s) {
    if (k_.size() != static_cast<std::size_t>(grid.M()) ||
        h_.size() != static_cast<std::size_t>(grid.M()))
        throw std::invalid_argument("energy: coefficient arrays must match grid M");
    if (!(q > 1.0) || !(s > 2.0))
        throw std::invalid_argument("energy: exponents out of range (need q > 1, s > 2)");
    init_flags();
}

void EnergyModel::init_flags() {
    h_zero_ = true;
    for (double x : h_)
        if (x != 0.0) { h_zero_ = false; break; }
}

double EnergyModel::dirichlet_half_square(const Field& v) const {
    const auto& c = grid_->cell_weights();
    const auto& r = grid_->nodes();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double slope = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
        acc += 0.5 * c[i] * slope * slope;
    }
    return acc;
}

EnergyBreakdown EnergyModel::phi(const Field& v) const {
    grid_->check_field(v, "phi");
    const auto& w = grid_->quad_weights();

    EnergyBreakdown out;
    out.dirichlet = dirichlet_half_square(v);
    for (int j = 0; j < grid_->M(); ++j) {
        const double af = std::abs(tf_->eval_f(v[j]));
        if (k_[j] != 0.0) out.concave += w[j] * k_[j] * std::pow(af, q_) / q_;
        if (h_[j] != 0.0) out.convex += w[j] * h_[j] * std::pow(af, s_) / s_;
    }
    out.total = out.dirichlet - out.concave + out.convex;
    return out;
}

Field EnergyModel::grad_phi(const Field& v) const {
    Field g;
    phi_and_grad(v, g);
    return g;
}

double EnergyModel::phi_and_grad(const Field& v, Field& grad_out) const {
    grid_->check_field(v, "phi_and_grad");
    const int M = grid_->M();
    const auto& w = grid_->quad_weights();
    const auto& c = grid_->cell_weights();
    const auto& r = grid_->nodes();

    // raw partial derivatives d phi / d v_j, converted to the quadrature
    // representer at the end
    std::vector<double> raw(M, 0.0);
    double dirichlet = 0.0, concave = 0.0, convex = 0.0;

    for (int i = 0; i + 1 < M; ++i) {
        const double hh = r[i + 1] - r[i];
        const double slope = (v[i + 1] - v[i]) / hh;
        dirichlet += 0.5 * c[i] * slope * slope;
        const double flux = c[i] * slope / hh;
        raw[i] -= flux;
        raw[i + 1] += flux;
    }
    for (int j = 0; j < M; ++j) {
        if (k_[j] == 0.0 && h_[j] == 0.0) continue;
        const double f = tf_->eval_f(v[j]);
        const double af = std::abs(f);
        const double sgn = f >= 0.0 ? 1.0 : -1.0;
        const double fp = 1.0 / std::sqrt(1.0 + 2.0 * f * f);
        if (k_[j] != 0.0) {
            concave += w[j] * k_[j] * std::pow(af, q_) / q_;
            raw[j] -= w[j] * k_[j] * std::pow(af, q_ - 1.0) * sgn * fp;
        }
        if (h_[j] != 0.0) {
            convex += w[j] * h_[j] * std::pow(af, s_) / s_;
            raw[j] += w[j] * h_[j] * std::pow(af, s_ - 1.0) * sgn * fp;
        }
    }

    grad_out = Field(M);
    for (int j = 0; j < M; ++j) grad_out[j] = raw[j] / w[j];
    return dirichlet - concave + convex;
}

void EnergyModel::reaction_curvature_diag(const Field& v, Field& out) const {
    grid_->check_field(v, "reaction_curvature_diag");
    const int M = grid_->M();
    const auto& w = grid_->quad_weights();
    out = Field(M);
    for (int j = 0; j < M; ++j) {
        if (k_[j] == 0.0 && h_[j] == 0.0) continue;
        const double f = tf_->eval_f(v[j]);
        const double af = std::abs(f);
        const double fp2 = 1.0 / (1.0 + 2.0 * f * f);   // (f')^2
        double c = 0.0;
        // d^2/dv^2 |f(v)|^p = (p-1)|f|^{p-2} (f')^2 - 2 |f|^p (f')^4
        if (k_[j] != 0.0)
            c -= k_[j] * ((q_ - 1.0) * std::pow(af, q_ - 2.0) * fp2 -
                          2.0 * std::pow(af, q_) * fp2 * fp2);
        if (h_[j] != 0.0)
            c += h_[j] * ((s_ - 1.0) * std::pow(af, s_ - 2.0) * fp2 -
                          2.0 * std::pow(af, s_) * fp2 * fp2);
        out[j] = w[j] * c;
    }
}

double EnergyModel::j_energy(const Field& u) const {
    grid_->check_field(u, "j_energy");
    const int M = grid_->M();
    const auto& w = grid_->quad_weights();

    Field Fu(M);
    for (int j = 0; j < M; ++j) Fu[j] = TransformEvaluator::antiderivative(u[j]);

    double concave = 0.0, convex = 0.0;
    for (int j = 0; j < M; ++j) {
        const double au = std::abs(u[j]);
        if (k_[j] != 0.0) concave += w[j] * k_[j] * std::pow(au, q_) / q_;
        if (h_[j] != 0.0) convex += w[j] * h_[j] * std::pow(au, s_) / s_;
    }
    return dirichlet_half_square(Fu) - concave + convex;
}

double EnergyModel::d_norm(const Field& v) const {
    grid_->check_field(v, "d_norm");
    return std::sqrt(2.0 * dirichlet_half_square(v));
}

double EnergyModel::e_norm(const Field& v) const {
    const double dn = d_norm(v);
    if (h_zero_) return dn;
    const auto& w = grid_->quad_weights();
    double acc = 0.0;
    for (int j = 0; j < grid_->M(); ++j)
        if (h_[j] != 0.0) acc += w[j] * h_[j] * std::pow(std::abs(v[j]), 0.5 * s_);
    if (acc == 0.0) return dn;
    return dn + std::pow(acc, 2.0 / s_);
}

std::pair<double, double> EnergyModel::weighted_terms(const Field& v) const {
    grid_->check_field(v, "weighted_terms");
    const auto& w = grid_->quad_weights();
    double kk = 0.0, hh = 0.0;
    for (int j = 0; j < grid_->M(); ++j) {
        if (k_[j] == 0.0 && h_[j] == 0.0) continue;
        const double af = std::abs(tf_->eval_f(v[j]));
        if (k_[j] != 0.0) kk += w[j] * k_[j] * std::pow(af, q_);
        if (h_[j] != 0.0) hh += w[j] * h_[j] * std::pow(af, s_);
    }
    return {kk, hh};
}

double EnergyModel::weighted_power(const Field& v, const std::vector<double>& coeff,
                                   double p) const {
    grid_->check_field(v, "weighted_power");
    if (coeff.size() != v.size())
        throw std::invalid_argument("weighted_power: coefficient array size mismatch");
    const auto& w = grid_->quad_weights();
    double acc = 0.0;
    for (int j = 0; j < grid_->M(); ++j)
        if (coeff[j] != 0.0) acc += w[j] * coeff[j] * std::pow(std::abs(v[j]), p);
    return acc;
}

double EnergyModel::lp_norm(const Field& v, double p) const {
    grid_->check_field(v, "lp_norm");
    const auto& w = grid_->quad_weights();
    double acc = 0.0;
    for (int j = 0; j < grid_->M(); ++j) acc += w[j] * std::pow(std::abs(v[j]), p);
    return std::pow(acc, 1.0 / p);
}

} // namespace dualvar
