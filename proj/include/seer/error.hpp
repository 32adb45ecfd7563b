#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seer {

enum class Errc {
    invalid_length,
    invalid_argument,
    degenerate_result,
    lifecycle,
    entropy,
    not_seer_file,
    corrupt_footer,
    io,
    audit,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace seer
