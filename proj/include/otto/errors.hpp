#pragma once

#include <stdexcept>
#include <string>

namespace otto {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The observable triple cannot be mapped back to Lagrange multipliers.
class SingularStateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The adaptive integrator could not meet the requested tolerance.
class IntegratorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The one-cycle map has spectral radius >= 1, so no attracting limit cycle exists.
class NonContractiveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
    if (!condition) throw DomainError(what);
}

}  // namespace detail
}  // namespace otto
