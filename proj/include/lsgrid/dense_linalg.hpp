#pragma once

// Minimal dense LU with partial pivoting for the resolvent solves in the
// phase-type code. Matrices are row-major and small (tens of states), so
// plain O(n^3) is fine.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "lsgrid/errors.hpp"

namespace lsgrid::detail {

struct LuFactors {
    std::size_t n = 0;
    std::vector<double> lu;         // L strictly below the diagonal, U on and above
    std::vector<std::size_t> perm;  // row permutation applied to the input
};

inline LuFactors lu_factor(std::vector<double> m, std::size_t n) {
    LuFactors f{n, std::move(m), {}};
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(f.lu[col * n + col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double v = std::fabs(f.lu[row * n + col]);
            if (v > best) {
                best = v;
                pivot = row;
            }
        }
        if (best == 0.0) throw numeric_error("lu factorization: matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu[col * n + j], f.lu[pivot * n + j]);
            std::swap(f.perm[col], f.perm[pivot]);
        }
        const double d = f.lu[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = f.lu[row * n + col] / d;
            f.lu[row * n + col] = factor;
            if (factor == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) {
                f.lu[row * n + j] -= factor * f.lu[col * n + j];
            }
        }
    }
    return f;
}

// Solves A x = b in place (b becomes x).
inline void lu_solve(const LuFactors& f, std::vector<double>& b) {
    const std::size_t n = f.n;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu[i * n + j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu[i * n + j] * x[j];
        x[i] = s / f.lu[i * n + i];
    }
    b = std::move(x);
}

}  // namespace lsgrid::detail
