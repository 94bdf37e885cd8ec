#include "ccfilter/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ccfilter {

std::vector<Complex> lu_solve(Matrix<Complex> a, std::vector<Complex> b) {
    const int n = a.rows();
    if (n != a.cols() || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("lu_solve: dimension mismatch");
    if (n == 0) return {};

    double max_entry = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) max_entry = std::max(max_entry, std::abs(a(r, c)));
    const double pivot_floor = 1e-13 * std::max(max_entry, std::numeric_limits<double>::min());

    // perm[k] = original index of the row currently stored at position k.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (int k = 0; k < n; ++k) {
        int best = k;
        double best_mag = std::abs(a(k, k));
        for (int r = k + 1; r < n; ++r) {
            const double mag = std::abs(a(r, k));
            if (mag > best_mag) {
                best = r;
                best_mag = mag;
            }
        }
        if (best_mag < pivot_floor)
            throw SingularSystemError(perm[best],
                                      "pivot " + std::to_string(best_mag) + " below floor at column " +
                                          std::to_string(k));
        if (best != k) {
            for (int c = 0; c < n; ++c) std::swap(a(k, c), a(best, c));
            std::swap(b[k], b[best]);
            std::swap(perm[k], perm[best]);
        }
        const Complex pivot = a(k, k);
        for (int r = k + 1; r < n; ++r) {
            const Complex factor = a(r, k) / pivot;
            if (factor == Complex(0.0, 0.0)) continue;
            a(r, k) = factor;
            for (int c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
            b[r] -= factor * b[k];
        }
    }

    std::vector<Complex> x(n);
    for (int k = n - 1; k >= 0; --k) {
        Complex sum = b[k];
        for (int c = k + 1; c < n; ++c) sum -= a(k, c) * x[c];
        x[k] = sum / a(k, k);
    }
    return x;
}

LeastSquares solve_least_squares(Matrix<double> a, std::vector<double> b) {
    const int m = a.rows();
    const int n = a.cols();
    if (static_cast<int>(b.size()) != m)
        throw std::invalid_argument("solve_least_squares: dimension mismatch");
    if (m < n) throw std::invalid_argument("solve_least_squares: underdetermined system");

    std::vector<double> col_scale(n, 1.0);
    for (int c = 0; c < n; ++c) {
        double peak = 0.0;
        for (int r = 0; r < m; ++r) peak = std::max(peak, std::abs(a(r, c)));
        if (peak > 0.0) {
            col_scale[c] = peak;
            for (int r = 0; r < m; ++r) a(r, c) /= peak;
        }
    }

    // Householder QR, applying each reflector to the trailing columns and b.
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int r = k; r < m; ++r) norm = std::hypot(norm, a(r, k));
        if (norm == 0.0) continue; // exactly dependent column; R_kk stays 0
        if (a(k, k) > 0.0) norm = -norm;
        std::vector<double> v(m - k);
        v[0] = a(k, k) - norm;
        for (int r = k + 1; r < m; ++r) v[r - k] = a(r, k);
        const double vtv = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
        a(k, k) = norm;
        for (int r = k + 1; r < m; ++r) a(r, k) = 0.0;
        if (vtv == 0.0) continue;
        for (int c = k + 1; c < n; ++c) {
            double dot = 0.0;
            for (int r = k; r < m; ++r) dot += v[r - k] * a(r, c);
            const double coef = 2.0 * dot / vtv;
            for (int r = k; r < m; ++r) a(r, c) -= coef * v[r - k];
        }
        double dot = 0.0;
        for (int r = k; r < m; ++r) dot += v[r - k] * b[r];
        const double coef = 2.0 * dot / vtv;
        for (int r = k; r < m; ++r) b[r] -= coef * v[r - k];
    }

    double rmax = 0.0;
    double rmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double mag = std::abs(a(k, k));
        rmax = std::max(rmax, mag);
        rmin = std::min(rmin, mag);
    }

    LeastSquares out;
    out.condition = (rmin > 0.0) ? rmax / rmin : std::numeric_limits<double>::infinity();
    out.solution.assign(n, 0.0);
    if (rmin > 0.0) {
        for (int k = n - 1; k >= 0; --k) {
            double sum = b[k];
            for (int c = k + 1; c < n; ++c) sum -= a(k, c) * out.solution[c];
            out.solution[k] = sum / a(k, k);
        }
        for (int c = 0; c < n; ++c) out.solution[c] /= col_scale[c];
    }
    return out;
}

} // namespace ccfilter
