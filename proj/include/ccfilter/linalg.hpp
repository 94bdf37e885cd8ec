#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccfilter {

using Complex = std::complex<double>;

/// Dense row-major matrix, sized for small nodal systems and rational fits.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

/// Raised when Gaussian elimination cannot find a usable pivot. pivot_row is
/// the original (pre-permutation) row index whose pivot collapsed, so the
/// caller can name the equation that went degenerate.
struct SingularSystemError : std::runtime_error {
    int pivot_row;
    SingularSystemError(int row, const std::string& what)
        : std::runtime_error(what), pivot_row(row) {}
};

/// Solve A x = b by LU decomposition with partial pivoting. A and b are taken
/// by value; the factorization works in place on the copies. A pivot below
/// 1e-13 of the largest initial |entry| raises SingularSystemError.
std::vector<Complex> lu_solve(Matrix<Complex> a, std::vector<Complex> b);

struct LeastSquares {
    std::vector<double> solution;
    /// max|R_ii| / min|R_ii| from the QR factorization, a cheap conditioning
    /// probe (after column equilibration).
    double condition = 0.0;
};

/// Minimize ||A x - b||_2 for rows >= cols via Householder QR. Columns are
/// scaled to unit infinity norm first and the solution is unscaled on the
/// way out, so condition reflects the equilibrated system.
LeastSquares solve_least_squares(Matrix<double> a, std::vector<double> b);

} // namespace ccfilter
