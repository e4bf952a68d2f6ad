#pragma once

#include <stdexcept>
#include <string>

namespace isoharm {

// Configuration that the library recognizes but does not handle
// (e.g. an isoparametric degree outside {3,4,6} in the classifier).
class unsupported_error : public std::domain_error {
public:
    explicit unsupported_error(const std::string& what) : std::domain_error(what) {}
};

// A computed quantity failed a numerical re-verification gate.
class verification_error : public std::runtime_error {
public:
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

// A finite-difference computation hit an ill-conditioned regime
// (degenerate metric, step too small for the working precision).
class discretization_error : public std::runtime_error {
public:
    explicit discretization_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace isoharm
