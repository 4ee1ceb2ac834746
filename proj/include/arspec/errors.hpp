#ifndef ARSPEC_ERRORS_HPP
#define ARSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arspec {

// Thrown when an iterative routine fails to converge or a matrix turns out
// not to have the numerical properties the caller promised.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a bracketing configuration is degenerate: some x_j coincides
// with a support endpoint.  Callers may perturb eps by ~1e-9 and retry.
class degenerate_configuration_error : public numerical_error {
public:
    explicit degenerate_configuration_error(const std::string& what) : numerical_error(what) {}
};

// Thrown by the panel estimator when a column LP is infeasible.  Carries the
// offending (0-based) column index.
class estimation_failure : public numerical_error {
public:
    estimation_failure(const std::string& what, int column)
        : numerical_error(what), column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

} // namespace arspec

#endif
