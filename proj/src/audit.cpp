#include "seer/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "seer/error.hpp"
#include "seer/footer.hpp"

namespace seer {

namespace {

struct Signature {
    std::string_view name;
    std::string_view bytes;
};

using namespace std::string_view_literals;

constexpr std::array<Signature, 9> signatures = {{
    {"jpeg", "\xFF\xD8\xFF"sv},
    {"png", "\x89PNG\r\n\x1A\n"sv},
    {"pdf", "%PDF-"sv},
    {"elf", "\x7F" "ELF"sv},
    {"pe", "MZ"sv},
    {"zip", "PK\x03\x04"sv},
    {"gif", "GIF8"sv},
    {"gzip", "\x1F\x8B"sv},
    {"seer", "SEERDSTR"sv},
}};

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::audit, "cannot open " + path.string() + " for audit");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::audit, "cannot read " + path.string());
    return data;
}

struct WindowHash {
    std::size_t operator()(std::string_view v) const noexcept {
        // FNV-1a
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : v) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

std::string_view as_view(std::span<const std::uint8_t> s) {
    return {reinterpret_cast<const char*>(s.data()), s.size()};
}

}  // namespace

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::destroyed: return "Destroyed";
        case Verdict::suspect: return "Suspect";
        case Verdict::not_destroyed: return "NotDestroyed";
    }
    return "Unknown";
}

nlohmann::json to_json(const AuditVerdict& v) {
    nlohmann::json j;
    j["path"] = v.path.string();
    j["footer_ok"] = v.footer_ok;
    j["footer_error"] = v.footer_error ? nlohmann::json(*v.footer_error) : nlohmann::json(nullptr);
    j["header_changed"] = v.header_changed;
    j["entropy_bits_per_octet"] = v.entropy_bits_per_octet;
    j["chi_square_p"] = v.chi_square_p;
    j["residue_hits"] = v.residue_hits ? nlohmann::json(*v.residue_hits) : nlohmann::json(nullptr);
    j["verdict"] = std::string(to_string(v.verdict));
    return j;
}

std::optional<std::string_view> detect_signature(std::span<const std::uint8_t> data) {
    const std::string_view view = as_view(data);
    for (const auto& sig : signatures) {
        if (view.starts_with(sig.bytes)) return sig.name;
    }
    return std::nullopt;
}

double shannon_entropy(std::span<const std::uint8_t> data) {
    if (data.empty()) return 0.0;
    std::array<std::uint64_t, 256> counts{};
    for (auto b : data) ++counts[b];
    const double n = static_cast<double>(data.size());
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double chi_square_uniform_p(std::span<const std::uint8_t> data) {
    if (data.empty()) return 1.0;
    std::array<std::uint64_t, 256> counts{};
    for (auto b : data) ++counts[b];
    const double expected = static_cast<double>(data.size()) / 256.0;
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return boost::math::gamma_q(255.0 / 2.0, stat / 2.0);
}

std::uint64_t scan_residue(std::span<const std::uint8_t> haystack,
                           std::span<const std::uint8_t> needle, std::size_t window) {
    if (window < 8) throw Error(Errc::invalid_argument, "residue window must be at least 8");
    if (needle.size() < window || haystack.size() < window) return 0;

    std::unordered_set<std::string_view, WindowHash> windows;
    windows.reserve(needle.size() - window + 1);
    for (std::size_t i = 0; i + window <= needle.size(); ++i) {
        windows.insert(as_view(needle.subspan(i, window)));
    }
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i + window <= haystack.size(); ++i) {
        if (windows.contains(as_view(haystack.subspan(i, window)))) ++hits;
    }
    return hits;
}

AuditVerdict audit_file(const std::filesystem::path& path,
                        std::optional<std::span<const std::uint8_t>> reference,
                        const AuditThresholds& thresholds) {
    AuditVerdict v;
    v.path = path;
    const std::vector<std::uint8_t> data = read_all(path);

    std::span<const std::uint8_t> payload(data);
    try {
        read_footer(path);
        v.footer_ok = true;
        payload = payload.first(data.size() - ErasureFooter::size);
    } catch (const Error& e) {
        v.footer_error = std::string(to_string(e.code())) + ": " + e.what();
    }

    const auto header = payload.first(std::min(thresholds.header_window, payload.size()));
    const auto signature = detect_signature(header);
    if (header.empty()) {
        v.header_changed = true;
    } else if (reference) {
        const auto ref_header = reference->first(std::min(thresholds.header_window, reference->size()));
        const bool same_prefix = header.size() == ref_header.size() &&
                                 std::equal(header.begin(), header.end(), ref_header.begin());
        const bool signature_kept = signature && detect_signature(ref_header) == signature;
        v.header_changed = !same_prefix && !signature_kept;
    } else {
        v.header_changed = !signature;
    }

    v.entropy_bits_per_octet = shannon_entropy(payload);
    v.chi_square_p = chi_square_uniform_p(payload);
    v.statistics_enforced = payload.size() >= thresholds.statistical_min_size;
    if (reference) v.residue_hits = scan_residue(payload, *reference, thresholds.residue_window);

    if (!v.footer_ok || (v.residue_hits && *v.residue_hits > 0)) {
        v.verdict = Verdict::not_destroyed;
    } else if (!v.header_changed ||
               (v.statistics_enforced && (v.entropy_bits_per_octet < thresholds.min_entropy_bits ||
                                          v.chi_square_p < thresholds.chi_square_alpha))) {
        v.verdict = Verdict::suspect;
    } else {
        v.verdict = Verdict::destroyed;
    }
    return v;
}

}  // namespace seer
