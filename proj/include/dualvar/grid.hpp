#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace dualvar {

/// Nodal values of a radial function on a RadialGrid. values[j] lives at
/// grid node j; admissible fields vanish at the last node (r = R).
struct Field {
    std::vector<double> values;

    Field() = default;
    explicit Field(std::size_t m, double fill = 0.0) : values(m, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double* data() { return values.data(); }
    const double* data() const { return values.data(); }
    auto begin() { return values.begin(); }
    auto end() { return values.end(); }
    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }
};

/// Three-point difference stencil attached to one node.
struct Stencil3 {
    std::array<int, 3> cols;
    std::array<double, 3> w;
};

/// Discretization of (0, R] for radial functions on R^N, N >= 3.
///
/// Nodes r_1 < ... < r_M = R with r_1 > 0 and geometrically stretched
/// spacing (ratio `stretch`; 1 = uniform). Quadrature against the radial
/// volume measure omega_{N-1} r^{N-1} dr interpolates the field piecewise
/// linearly and integrates the interpolant against r^{N-1} exactly per cell
/// (constant extension on [0, r_1], consistent with even reflection at the
/// origin). The weights therefore sum to omega_{N-1} R^N / N up to rounding,
/// and the rule is second order for smooth fields.
///
/// First derivatives use second-order three-point stencils, one-sided at both
/// ends; they are exact on affine functions away from the ends. The radial
/// Laplacian v'' + (N-1)/r v' applies the even-reflection convention at the
/// origin (ghost node at -r_1 carrying v_1) and a one-sided stencil at r = R.
class RadialGrid {
  public:
    RadialGrid(double R, int M, int N, double stretch = 1.0);

    double R() const { return R_; }
    int M() const { return M_; }
    int dim() const { return N_; }
    double stretch() const { return stretch_; }
    double sphere_area() const { return sphere_area_; }   // omega_{N-1}

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& quad_weights() const { return weights_; }
    const std::vector<Stencil3>& deriv_stencils() const { return deriv_; }

    /// exact integrals of omega_{N-1} r^{N-1} over the cells [r_j, r_{j+1}],
    /// length M-1. Energies built from cell difference quotients use these;
    /// unlike the centered nodal derivative, the cell form is coercive on
    /// odd-even oscillation, so minimizers cannot hide a sawtooth in it.
    const std::vector<double>& cell_weights() const { return cells_; }

    /// integral of the field against omega_{N-1} r^{N-1} dr over (0, R]
    double integrate(const Field& f) const;

    /// nodal first derivative df/dr
    Field deriv(const Field& f) const;

    /// nodal radial Laplacian f'' + (N-1)/r f'
    Field laplacian_radial(const Field& f) const;

    void check_field(const Field& f, const char* where) const;

  private:
    double R_;
    int M_;
    int N_;
    double stretch_;
    double sphere_area_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> cells_;
    std::vector<Stencil3> deriv_;     // rows of the first-derivative matrix
    std::vector<Stencil3> lap_;       // rows of the radial Laplacian
};

/// Two-column CSV (header "r,value") of a field on its grid.
void write_field_csv(const std::string& path, const RadialGrid& grid, const Field& f);

} // namespace dualvar
