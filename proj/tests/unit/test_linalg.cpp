#include "doctest.h"

#include "nsp/error.hpp"
#include "nsp/linalg.hpp"
#include "nsp/regression.hpp"

#include <cmath>
#include <random>
#include <vector>

using nsp::TridiagonalSystem;

namespace {

std::vector<double> dense(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(a[i][c]) > std::abs(a[p][c])) p = i;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t i = c + 1; i < n; ++i) {
            const double f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Random system; weak diagonal so that pivoting actually happens.
void check_against_dense(std::size_t n, bool cyclic, double diag_shift, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagonalSystem s;
    s.cyclic = cyclic;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        s.lower.push_back(u(rng));
        s.upper.push_back(u(rng));
        s.diag.push_back(diag_shift + u(rng));
        s.rhs.push_back(u(rng));
    }
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = s.diag[i];
        if (i > 0) a[i][i - 1] = s.lower[i];
        if (i + 1 < n) a[i][i + 1] = s.upper[i];
    }
    if (cyclic) {
        a[0][n - 1] += s.lower[0];
        a[n - 1][0] += s.upper[n - 1];
    }
    const auto x = nsp::solve_tridiagonal(s);
    const auto y = dense(a, s.rhs);
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - y[i]) <= 1e-10 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("tridiagonal solve matches dense elimination")
{
    for (unsigned seed = 1; seed <= 5; ++seed) {
        check_against_dense(30, false, 3.0, seed);
        check_against_dense(30, false, 0.2, seed);
        check_against_dense(25, true, 3.0, seed);
    }
}

TEST_CASE("tridiagonal solve rejects a singular system")
{
    TridiagonalSystem s{{0, 0}, {0, 0}, {0, 0}, {1, 1}, false};
    CHECK_THROWS_AS(nsp::solve_tridiagonal(s), nsp::NumericalFailure);
}

TEST_CASE("least squares recovers an exact line")
{
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(2.5 - 0.75 * i);
    }
    const auto f = nsp::fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0));
}
