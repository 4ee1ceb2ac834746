#ifndef ARSPEC_DENSE_HPP
#define ARSPEC_DENSE_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace arspec {

// Minimal dense row-major matrix.  Used by the panel estimator and by test
// oracles; all heavy spectral work stays on the tridiagonal representation.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    bool is_symmetric(double tol = 1e-12) const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    assert(x.cols() == y.rows());
    Matrix out(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const double xv = x(i, k);
            if (xv == 0.0) continue;
            for (int j = 0; j < y.cols(); ++j) out(i, j) += xv * y(k, j);
        }
    return out;
}

} // namespace arspec

#endif
