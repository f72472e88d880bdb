#include "dualvar/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dualvar {

namespace {

// Coefficients of d/dx of the parabola through (xa,fa),(xb,fb),(xc,fc),
// evaluated at x. Exact for quadratics by construction.
std::array<double, 3> parabola_deriv(double xa, double xb, double xc, double x) {
    return {(2.0 * x - xb - xc) / ((xa - xb) * (xa - xc)),
            (2.0 * x - xa - xc) / ((xb - xa) * (xb - xc)),
            (2.0 * x - xa - xb) / ((xc - xa) * (xc - xb))};
}

// Second derivative (curvature) of the same parabola; independent of x.
std::array<double, 3> parabola_second(double xa, double xb, double xc) {
    return {2.0 / ((xa - xb) * (xa - xc)),
            2.0 / ((xb - xa) * (xb - xc)),
            2.0 / ((xc - xa) * (xc - xb))};
}

} // namespace

RadialGrid::RadialGrid(double R, int M, int N, double stretch)
    : R_(R), M_(M), N_(N), stretch_(stretch) {
    if (!(R > 0.0)) throw std::invalid_argument("grid: R must be positive");
    if (M < 8) throw std::invalid_argument("grid: M >= 8 required");
    if (N < 3) throw std::invalid_argument("grid: N >= 3 required");
    if (!(stretch >= 1.0)) throw std::invalid_argument("grid: stretch >= 1 required");

    sphere_area_ = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);

    // nodes: spacings h_1, h_1*stretch, ..., scaled so that r_M = R exactly
    nodes_.resize(M);
    double h1 = stretch == 1.0 ? R / M
                               : R * (stretch - 1.0) / (std::pow(stretch, M) - 1.0);
    double r = 0.0, h = h1;
    for (int j = 0; j < M; ++j) {
        r += h;
        nodes_[j] = r;
        h *= stretch;
    }
    nodes_[M - 1] = R; // pin the endpoint against accumulation drift

    // quadrature: piecewise-linear interpolant integrated exactly against
    // r^{N-1}; constant extension of the first nodal value on [0, r_1]
    weights_.assign(M, 0.0);
    weights_[0] = std::pow(nodes_[0], N) / N;
    for (int j = 0; j + 1 < M; ++j) {
        const double ra = nodes_[j], rb = nodes_[j + 1];
        const double p0 = (std::pow(rb, N) - std::pow(ra, N)) / N;
        const double p1 = (std::pow(rb, N + 1) - std::pow(ra, N + 1)) / (N + 1);
        const double hh = rb - ra;
        weights_[j] += (rb * p0 - p1) / hh;
        weights_[j + 1] += (p1 - ra * p0) / hh;
    }
    for (double& w : weights_) w *= sphere_area_;

    cells_.resize(M - 1);
    for (int j = 0; j + 1 < M; ++j)
        cells_[j] = sphere_area_ * (std::pow(nodes_[j + 1], N) - std::pow(nodes_[j], N)) / N;

    // first-derivative rows: one-sided parabolas at the ends
    deriv_.resize(M);
    deriv_[0] = {{0, 1, 2},
                 parabola_deriv(nodes_[0], nodes_[1], nodes_[2], nodes_[0])};
    for (int j = 1; j + 1 < M; ++j)
        deriv_[j] = {{j - 1, j, j + 1},
                     parabola_deriv(nodes_[j - 1], nodes_[j], nodes_[j + 1], nodes_[j])};
    deriv_[M - 1] = {{M - 3, M - 2, M - 1},
                     parabola_deriv(nodes_[M - 3], nodes_[M - 2], nodes_[M - 1], nodes_[M - 1])};

    // radial Laplacian rows: v'' + (N-1)/r v'. At the first node the parabola
    // runs through the mirrored ghost point (-r_1, v_1), which encodes the
    // even-reflection regularity convention v'(0) = 0.
    lap_.resize(M);
    {
        const double xa = -nodes_[0], xb = nodes_[0], xc = nodes_[1];
        auto d2 = parabola_second(xa, xb, xc);
        auto d1 = parabola_deriv(xa, xb, xc, xb);
        const double c = (N_ - 1.0) / nodes_[0];
        // ghost column folds onto column 0
        lap_[0] = {{0, 1, 1}, {d2[0] + d2[1] + c * (d1[0] + d1[1]), d2[2] + c * d1[2], 0.0}};
    }
    for (int j = 1; j + 1 < M; ++j) {
        auto d2 = parabola_second(nodes_[j - 1], nodes_[j], nodes_[j + 1]);
        auto d1 = parabola_deriv(nodes_[j - 1], nodes_[j], nodes_[j + 1], nodes_[j]);
        const double c = (N_ - 1.0) / nodes_[j];
        lap_[j] = {{j - 1, j, j + 1}, {d2[0] + c * d1[0], d2[1] + c * d1[1], d2[2] + c * d1[2]}};
    }
    {
        auto d2 = parabola_second(nodes_[M - 3], nodes_[M - 2], nodes_[M - 1]);
        auto d1 = parabola_deriv(nodes_[M - 3], nodes_[M - 2], nodes_[M - 1], nodes_[M - 1]);
        const double c = (N_ - 1.0) / nodes_[M - 1];
        lap_[M - 1] = {{M - 3, M - 2, M - 1},
                       {d2[0] + c * d1[0], d2[1] + c * d1[1], d2[2] + c * d1[2]}};
    }
}

void RadialGrid::check_field(const Field& f, const char* where) const {
    if (f.size() != static_cast<std::size_t>(M_))
        throw std::invalid_argument(std::string(where) + ": field length " +
                                    std::to_string(f.size()) + " does not match grid M = " +
                                    std::to_string(M_));
}

double RadialGrid::integrate(const Field& f) const {
    check_field(f, "integrate");
    double acc = 0.0;
    for (int j = 0; j < M_; ++j) acc += weights_[j] * f[j];
    return acc;
}

Field RadialGrid::deriv(const Field& f) const {
    check_field(f, "deriv");
    Field out(M_);
    for (int j = 0; j < M_; ++j) {
        const Stencil3& s = deriv_[j];
        out[j] = s.w[0] * f[s.cols[0]] + s.w[1] * f[s.cols[1]] + s.w[2] * f[s.cols[2]];
    }
    return out;
}

Field RadialGrid::laplacian_radial(const Field& f) const {
    check_field(f, "laplacian_radial");
    Field out(M_);
    for (int j = 0; j < M_; ++j) {
        const Stencil3& s = lap_[j];
        out[j] = s.w[0] * f[s.cols[0]] + s.w[1] * f[s.cols[1]] + s.w[2] * f[s.cols[2]];
    }
    return out;
}

void write_field_csv(const std::string& path, const RadialGrid& grid, const Field& f) {
    grid.check_field(f, "write_field_csv");
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(fp, "r,value\n");
    for (int j = 0; j < grid.M(); ++j)
        std::fprintf(fp, "%.17g,%.17g\n", grid.nodes()[j], f[j]);
    std::fclose(fp);
}

} // namespace dualvar
