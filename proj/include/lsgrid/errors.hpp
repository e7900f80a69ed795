#pragma once

#include <stdexcept>
#include <string>

namespace lsgrid {

// Raised when an iterative scheme cannot deliver its accuracy within budget:
// truncation cap reached, positivity lost, quadrature refusing to converge.
// Bad inputs use std::invalid_argument (malformed spec) or std::domain_error
// (argument outside a function's domain) instead.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace lsgrid
