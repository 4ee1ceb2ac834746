#ifndef ARSPEC_SIMPLEX_HPP
#define ARSPEC_SIMPLEX_HPP

#include <vector>

#include "arspec/dense.hpp"

namespace arspec {

struct SimplexResult {
    bool feasible = false;
    std::vector<double> x;
    double objective = 0.0;
};

// Minimize c^T x subject to A x <= b, x >= 0 (b entries may be negative).
// Dense two-phase simplex; artificial variables only for negative-rhs rows.
// Dantzig pricing with a Bland fallback against cycling.
SimplexResult solve_inequality_lp(const Matrix& A, const std::vector<double>& b,
                                  const std::vector<double>& c);

} // namespace arspec

#endif
