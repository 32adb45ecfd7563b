#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace seer {

enum class Verdict { destroyed, suspect, not_destroyed };

std::string_view to_string(Verdict verdict) noexcept;

struct AuditThresholds {
    double min_entropy_bits = 7.9;
    double chi_square_alpha = 0.001;
    // Entropy and chi-square are advisory below this payload size.
    std::size_t statistical_min_size = 65536;
    std::size_t residue_window = 16;
    std::size_t header_window = 64;
};

struct AuditVerdict {
    std::filesystem::path path;
    bool footer_ok = false;
    std::optional<std::string> footer_error;
    bool header_changed = false;
    double entropy_bits_per_octet = 0.0;
    double chi_square_p = 1.0;
    bool statistics_enforced = false;
    std::optional<std::uint64_t> residue_hits;
    Verdict verdict = Verdict::not_destroyed;
};

nlohmann::json to_json(const AuditVerdict& verdict);

/// Read-only feasibility audit of one file.
///
/// Verdict rules:
///   not_destroyed  footer missing/invalid, or any plaintext residue found
///   suspect        footer valid but the header still carries a known
///                  signature (or matches the reference), or, for payloads
///                  of at least statistical_min_size, entropy falls below
///                  the threshold or chi-square rejects uniformity
///   destroyed      otherwise
/// Throws Error(audit) if the file cannot be read.
AuditVerdict audit_file(const std::filesystem::path& path,
                        std::optional<std::span<const std::uint8_t>> reference = std::nullopt,
                        const AuditThresholds& thresholds = {});

/// Number of distinct offsets in `haystack` at which some window-length
/// substring of `needle` occurs. Throws Error(invalid_argument) if
/// window < 8.
std::uint64_t scan_residue(std::span<const std::uint8_t> haystack,
                           std::span<const std::uint8_t> needle, std::size_t window = 16);

/// Shannon entropy of the octet histogram, in bits per octet.
double shannon_entropy(std::span<const std::uint8_t> data);

/// Upper-tail p-value of the chi-square goodness-of-fit statistic against
/// the uniform octet distribution (255 degrees of freedom).
double chi_square_uniform_p(std::span<const std::uint8_t> data);

/// Name of the known file-format signature `data` starts with, if any.
std::optional<std::string_view> detect_signature(std::span<const std::uint8_t> data);

}  // namespace seer
