#include "thermoqfi/error.hpp"

namespace thermoqfi {

const char* errc_name(errc c) noexcept {
    switch (c) {
        case errc::invalid_argument: return "invalid_argument";
        case errc::non_hermitian: return "non_hermitian";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::rank_deficient_state: return "rank_deficient_state";
        case errc::degenerate_extremal: return "degenerate_extremal";
        case errc::degenerate_ground: return "degenerate_ground";
        case errc::singular_measurement: return "singular_measurement";
        case errc::zero_variance: return "zero_variance";
        case errc::regime_misuse: return "regime_misuse";
        case errc::parse_error: return "parse_error";
    }
    return "unknown";
}

} // namespace thermoqfi
