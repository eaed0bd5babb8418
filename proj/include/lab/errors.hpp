#pragma once

#include <stdexcept>
#include <string>

namespace lab {

// Error taxonomy shared by all modules.  The CLI maps these onto exit codes:
// domain/usage -> 2, precision exhaustion -> 3, verification failure -> 1.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter lies outside the documented domain of an operation.
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// The requested decision cannot be made at the precision ceiling.
struct precision_error : error {
    explicit precision_error(const std::string& msg) : error(msg) {}
};

// Evaluation at (or indistinguishably near) a pole.
struct pole_error : error {
    explicit pole_error(const std::string& msg) : error(msg) {}
};

// More than one candidate matches where exactly one was expected.
struct ambiguity_error : error {
    explicit ambiguity_error(const std::string& msg) : error(msg) {}
};

// A covering certificate could not be completed; carries the offending part.
struct certificate_error : error {
    certificate_error(const std::string& msg, int part) : error(msg), part_index(part) {}
    int part_index;
};

}  // namespace lab
