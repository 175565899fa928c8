#pragma once

#include <cstddef>
#include <vector>

namespace nsp {

/// Tridiagonal system. lower[0] and upper[n-1] are only used by cyclic solves,
/// where they hold the corner couplings.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
    bool cyclic = false;
};

/// Gaussian elimination with partial pivoting on the band; cyclic systems go
/// through Sherman-Morrison. Throws NumericalFailure on a vanishing pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// Banded matrix in LAPACK-style storage with room for the fill-in produced by
/// row interchanges.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return n_; }
    double& at(std::size_t row, std::size_t col);
    double get(std::size_t row, std::size_t col) const;
    void set_zero();

    /// Solves A x = b in place of b. The matrix is overwritten by its factors.
    void solve_in_place(std::vector<double>& b);

private:
    std::size_t n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
    double& raw(std::size_t row, std::size_t col) { return ab_[col * ldab_ + (kl_ + ku_ + row - col)]; }
};

}  // namespace nsp
