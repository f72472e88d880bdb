#pragma once

#include <vector>

namespace dualvar {

/// Symmetric positive definite banded matrix with half-bandwidth `bw`,
/// packed by rows: entry(i, j) for i-bw <= j <= i lives at band[i*(bw+1) + (j-i+bw)].
/// factor() computes an in-place LDL^T decomposition; solve() then applies it.
class BandedSPD {
  public:
    BandedSPD(int n, int bw);

    double& at(int i, int j);          // j in [i-bw, i], lower triangle
    double at(int i, int j) const;

    void add_symmetric(int i, int j, double value);   // adds to (i,j) and (j,i)

    void factor();                     // throws if a pivot is not positive
    void solve(const std::vector<double>& rhs, std::vector<double>& x) const;

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

  private:
    int n_, bw_;
    bool factored_ = false;
    std::vector<double> band_;
};

/// Eigenvalues of a dense symmetric matrix (row-major n*n) by cyclic Jacobi
/// rotations. Intended for small matrices (subspace Gram matrices); returns
/// the eigenvalues in ascending order.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

} // namespace dualvar
