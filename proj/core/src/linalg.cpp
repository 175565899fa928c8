#include "nsp/linalg.hpp"

#include "nsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsp {

namespace {

constexpr double kTiny = 64.0 * std::numeric_limits<double>::epsilon();

// Row-interchanging tridiagonal elimination (same scheme as LAPACK gtsv).
std::vector<double> solve_open(std::vector<double> dl, std::vector<double> d, std::vector<double> du,
                               std::vector<double> b)
{
    const std::size_t n = d.size();
    double scale = 0.0;
    for (double v : d) scale = std::max(scale, std::abs(v));
    for (double v : dl) scale = std::max(scale, std::abs(v));
    for (double v : du) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw NumericalFailure("tridiagonal solve: zero matrix");
    const double pivot_floor = kTiny * scale;

    if (n == 1) {
        if (std::abs(d[0]) <= pivot_floor) throw NumericalFailure("tridiagonal solve: singular pivot");
        return {b[0] / d[0]};
    }
    // dl[i] couples row i+1 to column i; after elimination it stores the second
    // superdiagonal created by interchanges.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (std::abs(d[i]) <= pivot_floor) throw NumericalFailure("tridiagonal solve: singular pivot");
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            const double tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (std::abs(d[n - 1]) <= pivot_floor) throw NumericalFailure("tridiagonal solve: singular pivot");
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
    return b;
}

}  // namespace

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys)
{
    const std::size_t n = sys.diag.size();
    if (n == 0) throw InvalidArgument("tridiagonal solve: empty system");
    if (sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n)
        throw InvalidArgument("tridiagonal solve: lower, diag, upper and rhs must have equal length");

    if (!sys.cyclic) {
        std::vector<double> dl(sys.lower.begin() + 1, sys.lower.end());
        std::vector<double> du(sys.upper.begin(), sys.upper.end() - 1);
        return solve_open(std::move(dl), sys.diag, std::move(du), sys.rhs);
    }
    if (n < 3) throw InvalidArgument("cyclic tridiagonal solve needs at least three unknowns");

    // Sherman-Morrison: A = T + u v^T with u = (gamma, 0, ..., alpha), v = (1, 0, ..., beta/gamma).
    const double beta = sys.lower[0];
    const double alpha = sys.upper[n - 1];
    const double gamma = sys.diag[0] == 0.0 ? 1.0 : -sys.diag[0];
    std::vector<double> d = sys.diag;
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    std::vector<double> dl(sys.lower.begin() + 1, sys.lower.end());
    std::vector<double> du(sys.upper.begin(), sys.upper.end() - 1);
    std::vector<double> y = solve_open(dl, d, du, sys.rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> z = solve_open(std::move(dl), std::move(d), std::move(du), std::move(u));
    const double vy = y[0] + beta / gamma * y[n - 1];
    const double vz = z[0] + beta / gamma * z[n - 1];
    const double denom = 1.0 + vz;
    if (std::abs(denom) <= kTiny) throw NumericalFailure("cyclic tridiagonal solve: singular correction");
    const double f = vy / denom;
    for (std::size_t i = 0; i < n; ++i) y[i] -= f * z[i];
    return y;
}

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(n * (2 * kl + ku + 1), 0.0)
{
    if (n == 0) throw InvalidArgument("BandedMatrix: empty matrix");
}

double& BandedMatrix::at(std::size_t row, std::size_t col)
{
    if (row >= n_ || col >= n_ || row > col + kl_ || col > row + ku_)
        throw InvalidArgument("BandedMatrix: entry outside the band");
    return raw(row, col);
}

double BandedMatrix::get(std::size_t row, std::size_t col) const
{
    if (row >= n_ || col >= n_ || row > col + kl_ || col > row + ku_) return 0.0;
    return ab_[col * ldab_ + (kl_ + ku_ + row - col)];
}

void BandedMatrix::set_zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

void BandedMatrix::solve_in_place(std::vector<double>& b)
{
    if (b.size() != n_) throw InvalidArgument("BandedMatrix: rhs size mismatch");
    const std::size_t kuf = kl_ + ku_;
    double scale = 0.0;
    for (double v : ab_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw NumericalFailure("banded solve: zero matrix");
    const double pivot_floor = kTiny * scale * 1e-4;

    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t km = std::min(kl_, n_ - 1 - j);
        std::size_t p = j;
        double best = std::abs(raw(j, j));
        for (std::size_t i = 1; i <= km; ++i) {
            const double v = std::abs(raw(j + i, j));
            if (v > best) {
                best = v;
                p = j + i;
            }
        }
        if (best <= pivot_floor) throw NumericalFailure("banded solve: singular pivot");
        const std::size_t ju = std::min(j + kuf, n_ - 1);
        if (p != j) {
            for (std::size_t c = j; c <= ju; ++c) std::swap(raw(j, c), raw(p, c));
            std::swap(b[j], b[p]);
        }
        const double piv = raw(j, j);
        for (std::size_t i = 1; i <= km; ++i) {
            const double l = raw(j + i, j) / piv;
            if (l == 0.0) continue;
            raw(j + i, j) = 0.0;
            for (std::size_t c = j + 1; c <= ju; ++c) raw(j + i, c) -= l * raw(j, c);
            b[j + i] -= l * b[j];
        }
    }
    for (std::size_t j = n_; j-- > 0;) {
        b[j] /= raw(j, j);
        const std::size_t lo = j > kuf ? j - kuf : 0;
        for (std::size_t i = lo; i < j; ++i) b[i] -= raw(i, j) * b[j];
    }
}

}  // namespace nsp
