#include "arspec/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "arspec/errors.hpp"

namespace arspec {

namespace {

constexpr double kEps = 1e-9;

class Tableau {
public:
    Tableau(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c)
        : m_(A.rows()), nv_(A.cols()) {
        n_art_ = 0;
        for (double bi : b)
            if (bi < 0.0) ++n_art_;
        ncols_ = nv_ + m_ + n_art_; // vars, slacks, artificials
        t_.assign(static_cast<std::size_t>(m_ + 1) * (ncols_ + 1), 0.0);
        basis_.resize(m_);
        int art = 0;
        for (int i = 0; i < m_; ++i) {
            const double sgn = b[i] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < nv_; ++j) at(i, j) = sgn * A(i, j);
            at(i, nv_ + i) = sgn; // slack (surplus when the row was flipped)
            rhs(i) = sgn * b[i];
            if (b[i] < 0.0) {
                at(i, nv_ + m_ + art) = 1.0;
                basis_[i] = nv_ + m_ + art;
                ++art;
            } else {
                basis_[i] = nv_ + i;
            }
        }
        c_ = c;
    }

    // returns false when infeasible
    bool solve() {
        if (n_art_ > 0) {
            // phase 1: minimize sum of artificials
            for (int j = 0; j <= ncols_; ++j) obj(j) = 0.0;
            for (int j = nv_ + m_; j < ncols_; ++j) obj(j) = 1.0;
            price_out();
            iterate(/*allow_art=*/true);
            if (rhs(m_) < -kEps * 10.0) return false; // phase-1 objective is -obj row rhs
            // drive basic artificials out where possible
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] < nv_ + m_) continue;
                int enter = -1;
                for (int j = 0; j < nv_ + m_; ++j)
                    if (std::abs(at(i, j)) > kEps) {
                        enter = j;
                        break;
                    }
                if (enter >= 0) pivot(i, enter);
            }
        }
        // phase 2
        for (int j = 0; j <= ncols_; ++j) obj(j) = 0.0;
        for (int j = 0; j < nv_; ++j) obj(j) = c_[j];
        price_out();
        iterate(/*allow_art=*/false);
        return true;
    }

    std::vector<double> primal() const {
        std::vector<double> x(nv_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < nv_) x[basis_[i]] = rhs(i);
        return x;
    }

    double objective_value() const { return -rhs(m_); }

private:
    double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (ncols_ + 1) + j]; }
    double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * (ncols_ + 1) + j]; }
    double& rhs(int i) { return at(i, ncols_); }
    double rhs(int i) const { return at(i, ncols_); }
    double& obj(int j) { return at(m_, j); }
    double obj(int j) const { return at(m_, j); }

    void price_out() {
        for (int i = 0; i < m_; ++i) {
            const double cb = obj(basis_[i]);
            if (cb == 0.0) continue;
            for (int j = 0; j <= ncols_; ++j) at(m_, j) -= cb * at(i, j);
        }
    }

    void pivot(int row, int col) {
        const double p = at(row, col);
        const double inv = 1.0 / p;
        for (int j = 0; j <= ncols_; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (int i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j <= ncols_; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        basis_[row] = col;
    }

    void iterate(bool allow_art) {
        const int limit = allow_art ? ncols_ : nv_ + m_;
        const long max_iter = 200L * (m_ + ncols_);
        long degenerate_run = 0;
        for (long it = 0; it < max_iter; ++it) {
            const bool bland = degenerate_run > 2L * m_;
            int enter = -1;
            double best = -kEps;
            for (int j = 0; j < limit; ++j) {
                const double cj = obj(j);
                if (cj < -kEps) {
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (cj < best) {
                        best = cj;
                        enter = j;
                    }
                }
            }
            if (enter < 0) return; // optimal
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a > kEps) {
                    const double ratio = rhs(i) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) throw numerical_error("simplex: unbounded LP");
            degenerate_run = best_ratio < 1e-12 ? degenerate_run + 1 : 0;
            pivot(leave, enter);
        }
        throw numerical_error("simplex: iteration limit reached");
    }

    int m_, nv_, n_art_, ncols_;
    std::vector<double> t_;
    std::vector<int> basis_;
    std::vector<double> c_;
};

} // namespace

SimplexResult solve_inequality_lp(const Matrix& A, const std::vector<double>& b,
                                  const std::vector<double>& c) {
    if (static_cast<int>(b.size()) != A.rows() || static_cast<int>(c.size()) != A.cols())
        throw std::invalid_argument("solve_inequality_lp: dimension mismatch");
    Tableau tab(A, b, c);
    SimplexResult res;
    res.feasible = tab.solve();
    if (res.feasible) {
        res.x = tab.primal();
        res.objective = tab.objective_value();
    }
    return res;
}

} // namespace arspec
