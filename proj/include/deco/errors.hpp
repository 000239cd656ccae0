#ifndef DECO_ERRORS_HPP
#define DECO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace deco {

/// Adaptive quadrature could not reach the requested tolerance within the
/// evaluation budget.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double achieved, std::size_t evals)
        : std::runtime_error(what), achieved_error(achieved), evaluations(evals) {}
    double achieved_error;
    std::size_t evaluations;
};

/// Requested amplitudes exceed what the Fock cutoff can represent faithfully.
class truncation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A norm inequality that is a theorem failed numerically: implementation bug.
class bound_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Low-frequency classification could not be decided from the given samples.
class inconclusive_classification : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace deco

#endif
