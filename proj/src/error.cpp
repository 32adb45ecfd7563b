#include "seer/error.hpp"

namespace seer {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_length: return "invalid_length";
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::degenerate_result: return "degenerate_result";
        case Errc::lifecycle: return "lifecycle";
        case Errc::entropy: return "entropy";
        case Errc::not_seer_file: return "not_seer_file";
        case Errc::corrupt_footer: return "corrupt_footer";
        case Errc::io: return "io";
        case Errc::audit: return "audit";
    }
    return "unknown";
}

}  // namespace seer
