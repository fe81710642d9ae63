// Tiny dense solves for the coefficient systems (2x2 and 3x3) with partial
// pivoting and an infinity-norm condition estimate from the explicit
// inverse.  Internal to the library.

#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace qclock::detail {

template <int N>
using Mat = std::array<std::array<double, N>, N>;
template <int N>
using Vec = std::array<double, N>;

template <int N>
double inf_norm(const Mat<N>& a) {
    double best = 0.0;
    for (int i = 0; i < N; ++i) {
        double row = 0.0;
        for (int j = 0; j < N; ++j) row += std::abs(a[i][j]);
        best = std::max(best, row);
    }
    return best;
}

// Gaussian elimination with partial pivoting; returns false on exact
// singularity.
template <int N>
bool eliminate(Mat<N> a, Vec<N> b, Vec<N>& x) {
    for (int col = 0; col < N; ++col) {
        int pivot = col;
        for (int i = col + 1; i < N; ++i)
            if (std::abs(a[i][col]) > std::abs(a[pivot][col])) pivot = i;
        if (a[pivot][col] == 0.0) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (int i = col + 1; i < N; ++i) {
            const double f = a[i][col] / a[col][col];
            for (int j = col; j < N; ++j) a[i][j] -= f * a[col][j];
            b[i] -= f * b[col];
        }
    }
    for (int i = N - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < N; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return true;
}

// Solve with two steps of iterative refinement, with the residual
// accumulated in compensated (two-sum) arithmetic; keeps the achieved
// residual near eps * |b| even for the ill-conditioned near-degenerate
// coefficient systems.
template <int N>
bool solve_inplace(const Mat<N>& a, const Vec<N>& b, Vec<N>& x) {
    if (!eliminate<N>(a, b, x)) return false;
    for (int pass = 0; pass < 2; ++pass) {
        Vec<N> r{};
        for (int i = 0; i < N; ++i) {
            double sum = 0.0, comp = 0.0;
            for (int j = 0; j < N; ++j) {
                // two-product via fma, two-sum accumulation
                const double prod = -a[i][j] * x[j];
                const double err = std::fma(-a[i][j], x[j], -prod);
                double t = sum + prod;
                comp += std::abs(sum) >= std::abs(prod) ? (sum - t) + prod : (prod - t) + sum;
                sum = t;
                comp += err;
            }
            double t = sum + b[i];
            comp += std::abs(sum) >= std::abs(b[i]) ? (sum - t) + b[i] : (b[i] - t) + sum;
            r[i] = t + comp;
        }
        Vec<N> dx{};
        if (!eliminate<N>(a, r, dx)) break;
        for (int i = 0; i < N; ++i) x[i] += dx[i];
    }
    return true;
}

inline bool invert(const Mat<2>& a, Mat<2>& inv) {
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (det == 0.0) return false;
    inv[0][0] = a[1][1] / det;
    inv[0][1] = -a[0][1] / det;
    inv[1][0] = -a[1][0] / det;
    inv[1][1] = a[0][0] / det;
    return true;
}

inline bool invert(const Mat<3>& a, Mat<3>& inv) {
    const double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    const double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    const double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    const double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
    if (det == 0.0) return false;
    inv[0][0] = c00 / det;
    inv[1][0] = c01 / det;
    inv[2][0] = c02 / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return true;
}

// Infinity-norm condition number; infinity if singular.
template <int N>
double condition(const Mat<N>& a) {
    Mat<N> inv{};
    if (!invert(a, inv)) return std::numeric_limits<double>::infinity();
    return inf_norm<N>(a) * inf_norm<N>(inv);
}

}  // namespace qclock::detail
