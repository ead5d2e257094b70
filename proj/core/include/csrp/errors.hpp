#ifndef CSRP_ERRORS_HPP
#define CSRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csrp {

// Error taxonomy shared by the library and the CLI exit codes:
//   parse_error -> 2, validation_error/contract_error -> 3,
//   capacity_error -> 4, numeric_error -> 5.

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Violation of an operation precondition (e.g. multiplication element not
// homogeneous of the required degree, truncation too small for the
// interaction). Usually indicates an inconsistent configuration.
struct contract_error : std::logic_error {
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// Documented combinatorial limits (monomial degree caps, quadrature dimension).
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csrp

#endif
