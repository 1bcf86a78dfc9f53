#ifndef CRNORM_LINSOLVE_HPP
#define CRNORM_LINSOLVE_HPP

#include "crnorm/scalar.hpp"

#include <optional>
#include <vector>

namespace crnorm {

using Matrix = std::vector<std::vector<Scalar>>;

// Row echelon elimination over the Scalar field. Pivots are exact non-zero
// tests on the exact backend and scale-relative tests on float.
struct Elimination {
    Matrix m;                 // reduced matrix
    std::vector<int> pivot_cols;
    int rank = 0;
};

inline Elimination eliminate(Matrix a, const Real& scale = Real(1)) {
    Elimination out;
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        Real best(0);
        for (int i = r; i < rows; ++i) {
            if (a[i][c].is_zero(scale)) continue;
            Real mag = a[i][c].abs_approx();
            if (piv < 0 || mag > best) { piv = i; best = mag; }
            if (a[i][c].is_exact()) { piv = i; break; }
        }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        Scalar inv = Scalar(1) / a[r][c];
        for (int j = c; j < cols; ++j) a[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            if (a[i][c].is_zero(scale)) continue;
            Scalar f = a[i][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.m = std::move(a);
    out.rank = r;
    return out;
}

inline int matrix_rank(const Matrix& a, const Real& scale = Real(1)) {
    return eliminate(a, scale).rank;
}

// Solve A x = b. Returns nullopt when inconsistent. When underdetermined the
// free variables are set to zero (deterministic).
inline std::optional<std::vector<Scalar>> solve_linear(const Matrix& a,
                                                       const std::vector<Scalar>& b,
                                                       const Real& scale = Real(1)) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    Matrix aug = a;
    for (int i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    Elimination e = eliminate(std::move(aug), scale);
    for (int i = e.rank; i < rows; ++i)
        if (!e.m[i][cols].is_zero(scale)) return std::nullopt;
    std::vector<Scalar> x(cols, Scalar(0));
    for (int i = 0; i < e.rank; ++i) {
        int pc = e.pivot_cols[i];
        Scalar v = e.m[i][cols];
        for (int j = pc + 1; j < cols; ++j)
            if (!x[j].is_exact_zero() || !e.m[i][j].is_exact_zero())
                v -= e.m[i][j] * x[j];
        x[pc] = v;
    }
    return x;
}

// Solve insisting on a unique solution (square full-rank after constraints).
inline std::optional<std::vector<Scalar>> solve_unique(const Matrix& a,
                                                       const std::vector<Scalar>& b,
                                                       const Real& scale = Real(1)) {
    int cols = a.empty() ? 0 : static_cast<int>(a[0].size());
    Matrix aug = a;
    for (size_t i = 0; i < a.size(); ++i) aug[i].push_back(b[i]);
    Elimination e = eliminate(std::move(aug), scale);
    if (e.rank != cols) return std::nullopt;
    for (size_t i = e.rank; i < a.size(); ++i)
        if (!e.m[i][cols].is_zero(scale)) return std::nullopt;
    std::vector<Scalar> x(cols, Scalar(0));
    for (int i = e.rank - 1; i >= 0; --i) {
        int pc = e.pivot_cols[i];
        Scalar v = e.m[i][cols];
        for (int j = pc + 1; j < cols; ++j) v -= e.m[i][j] * x[j];
        x[pc] = v;
    }
    return x;
}

} // namespace crnorm

#endif
