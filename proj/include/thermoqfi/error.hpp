#pragma once

#include <stdexcept>
#include <string>

namespace thermoqfi {

// Error categories. The CLI maps these to exit codes (parse_error -> 2,
// everything else -> 3); tests use them to distinguish rejection reasons.
enum class errc {
    invalid_argument,      // parameter out of range, size guard tripped
    non_hermitian,         // matrix fails the Hermiticity tolerance
    dimension_mismatch,    // operands of different dimension
    rank_deficient_state,  // a population at or below the representable floor
    degenerate_extremal,   // extremal eigenvalue not unique where required
    degenerate_ground,     // ground state not unique where required
    singular_measurement,  // zero-probability outcome with nonzero derivative
    zero_variance,         // vanishing estimator variance
    regime_misuse,         // asymptotic formula evaluated outside its regime
    parse_error,           // config or operator file problem
};

const char* errc_name(errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace thermoqfi
