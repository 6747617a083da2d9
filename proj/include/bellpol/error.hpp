#pragma once

#include <stdexcept>
#include <string>

namespace bellpol {

enum class Errc {
    ok = 0,
    invalid_argument = 1,
    precondition = 2,
    domain = 3,
    degenerate_analyzer = 4,
    convergence = 5,
    range = 6,
    low_visibility = 7,
    ill_conditioned = 8,
    io = 9,
};

// All library failures are reported through this exception. The code maps
// 1:1 onto the C API error codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bellpol
