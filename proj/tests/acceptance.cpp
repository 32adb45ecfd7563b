// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "seer/audit.hpp"
#include "seer/bench.hpp"
#include "seer/engine.hpp"
#include "seer/error.hpp"
#include "seer/footer.hpp"
#include "seer/hex.hpp"
#include "seer/sha256.hpp"
#include "seer/sosemanuk.hpp"
#include "seer/x25519.hpp"
#include "test_util.hpp"

using namespace seer;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failing check and keeps a short summary.
class Checker {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && outcome_.pass) {
            outcome_.pass = false;
            outcome_.detail = "failed: " + what;
        }
    }
    void note(const std::string& text) {
        if (outcome_.pass) outcome_.detail = text;
    }
    Outcome result() const { return outcome_; }

private:
    Outcome outcome_;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

PublicPoint point(const std::string& hex) {
    const auto v = from_hex(hex);
    PublicPoint p{};
    std::copy(v.begin(), v.end(), p.begin());
    return p;
}

ErasureConfig quick_config() {
    ErasureConfig c;
    c.fsync = false;
    return c;
}

Outcome cipher_conformance() {
    Checker c;
    const auto start = Clock::now();
    std::ifstream in(std::string(SEER_TEST_DATA) + "/sosemanuk_vectors.txt");
    std::string key, iv, stream;
    std::size_t offset = 0, count = 0, matched = 0;
    bool key16 = false, key32 = false;
    while (in >> key >> iv >> offset >> stream) {
        ++count;
        const auto k = from_hex(key);
        key16 = key16 || k.size() == 16;
        key32 = key32 || k.size() == 32;
        Sosemanuk cipher(CipherKey::from_bytes(k), CipherIV::from_bytes(from_hex(iv)));
        if (offset) cipher.keystream(offset);
        const auto expected = from_hex(stream);
        if (cipher.keystream(expected.size()) == expected) ++matched;
    }
    const double t = seconds_since(start);
    c.require(count >= 8, "fewer than 8 vectors");
    c.require(key16 && key32, "corpus lacks 16- or 32-octet keys");
    c.require(matched == count, std::to_string(count - matched) + " vectors mismatched");
    c.require(t < 1.0, "runtime " + fmt("%.3f s", t));
    c.note(std::to_string(matched) + "/" + std::to_string(count) + " vectors, " + fmt("%.3f s", t));
    return c.result();
}

Outcome curve_conformance() {
    Checker c;
    const auto start = Clock::now();
    const auto v1 = scalar_mult(
        PrivateScalar::clamp(from_hex("a546e36bf0527c9d3b16154b82465edd62144c0ac1fc5a18506a2244ba449ac4")),
        point("e6db6867583030db3594c1a424b15f7c726624ec26b3353b10a903a6d0ab1c4c"));
    c.require(to_hex(v1) == "c3da55379de9c6908e94ea4df28d084f32eccf03491c71f754b4075577a28552", "vector 1");
    const auto v2 = scalar_mult(
        PrivateScalar::clamp(from_hex("4b66e9d4d1b4673c5ad22691957d6af5c11b6421e0ea01d42ca4169e7918ba0d")),
        point("e5210f12786811d3f4b7959d0538ae2c31dbe7106fc03c3efc4cd549c715a493"));
    c.require(to_hex(v2) == "95cbde9476e8907d7aade45cb4b873f88b595a68799fa152e6f8f7647aac7957", "vector 2");

    PublicPoint k = base_point, u = base_point;
    for (int i = 0; i < 1000; ++i) {
        const PublicPoint next = scalar_mult(PrivateScalar::clamp(k), u);
        u = k;
        k = next;
    }
    c.require(to_hex(k) == "684cf59ba83309552800ef566f2f4d3c1c3887c49360e3875f2eb94d99532c51",
              "1000-iteration value");
    const double t = seconds_since(start);
    c.require(t < 30.0, "runtime " + fmt("%.2f s", t));
    c.note("2 one-shot vectors and 1000 iterations, " + fmt("%.3f s", t));
    return c.result();
}

Outcome hash_conformance() {
    Checker c;
    c.require(to_hex(sha256(std::string_view(""))) ==
                  "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855",
              "empty string");
    c.require(to_hex(sha256(std::string_view("abc"))) ==
                  "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad",
              "abc");
    const std::string million(1000000, 'a');
    c.require(to_hex(sha256(std::string_view(million))) ==
                  "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0",
              "million a");

    std::mt19937_64 rng(1003);
    int agreed = 0;
    const int trials = 512;
    for (int i = 0; i < trials; ++i) {
        const auto data = testutil::random_bytes(rng, rng() % 20000);
        Digest32 ref{};
        unsigned len = 0;
        EVP_Digest(data.data(), data.size(), ref.data(), &len, EVP_sha256(), nullptr);
        if (sha256(data) == ref) ++agreed;
    }
    c.require(agreed == trials, std::to_string(trials - agreed) + " random inputs disagree with libcrypto");
    c.note("3 standard vectors, " + std::to_string(agreed) + " random lengths match libcrypto");
    return c.result();
}

Outcome dh_symmetry() {
    Checker c;
    std::mt19937_64 rng(1004);
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = PrivateScalar::clamp(testutil::random_array<32>(rng));
        const auto b = PrivateScalar::clamp(testutil::random_array<32>(rng));
        if (scalar_mult(a, base_point_mult(b)) == scalar_mult(b, base_point_mult(a))) ++ok;
    }
    c.require(ok == 1000, std::to_string(1000 - ok) + " asymmetric trials");
    c.note(std::to_string(ok) + "/1000 trials symmetric");
    return c.result();
}

struct Retained {
    std::vector<std::uint8_t> key;
    std::array<std::uint8_t, 16> iv{};
    PublicPoint u_publ{};
    SessionSnapshot after_destroy;
    bool proof_verified = false;
};

EngineHooks retain(Retained& r) {
    EngineHooks hooks;
    hooks.after_derive = [&r](const SessionKeys& keys, const CipherIV& iv) {
        r.key = keys.snapshot(unsafe_test_mode).cipher_key;
        std::copy(iv.bytes().begin(), iv.bytes().end(), r.iv.begin());
        r.u_publ = keys.u_publ();
    };
    hooks.after_destroy = [&r](const SessionKeys& keys, const DestructionProof& proof) {
        r.after_destroy = keys.snapshot(unsafe_test_mode);
        r.proof_verified = proof.verified;
    };
    return hooks;
}

Outcome roundtrip_oracle() {
    Checker c;
    testutil::TempDir dir("accept-roundtrip");
    auto entropy = EntropySource::deterministic(unsafe_test_mode, 1005);
    const std::array<std::uint64_t, 5> sizes = {0, 1, 1024, 65536, 1 << 20};
    const std::array<ContentClass, 3> classes = {ContentClass::text, ContentClass::image_like,
                                                 ContentClass::binary};
    int ok = 0;
    for (int i = 0; i < 200; ++i) {
        const auto size = sizes[i % sizes.size()];
        const auto cls = classes[(i / sizes.size()) % classes.size()];
        const auto original = corpus_file_content(cls, 1005, static_cast<std::uint64_t>(i), size);
        const fs::path p = dir / ("f" + std::to_string(i));
        testutil::write_file(p, original);

        Retained r;
        const EngineHooks hooks = retain(r);
        if (destroy_file(p, quick_config(), entropy, &hooks).status != ErasureStatus::destroyed) {
            c.require(false, p.string() + " not destroyed");
            continue;
        }
        try {
            const ErasureFooter f = read_footer(p);
            auto data = testutil::read_file(p);
            data.resize(f.original_length);
            Sosemanuk(CipherKey::from_bytes(r.key), CipherIV::from_bytes(r.iv)).apply(data);
            const bool match = data == original && f.u_publ == r.u_publ && f.iv == r.iv;
            c.require(match, p.string() + " did not round-trip");
            if (match) ++ok;
        } catch (const Error& e) {
            c.require(false, e.what());
        }
        fs::remove(p);
    }
    c.note(std::to_string(ok) + "/200 files decrypt bit-exactly, footers parse, u_publ matches");
    return c.result();
}

Outcome zeroization() {
    Checker c;
    testutil::TempDir dir("accept-zero");
    auto entropy = EntropySource::system();
    std::mt19937_64 rng(1006);
    int clean = 0;
    for (int i = 0; i < 50; ++i) {
        const fs::path p = dir / ("z" + std::to_string(i));
        testutil::write_file(p, testutil::random_bytes(rng, rng() % 100000));
        Retained r;
        const EngineHooks hooks = retain(r);
        const ErasureReport rep = destroy_file(p, ErasureConfig{}, entropy, &hooks);
        const auto& s = r.after_destroy;
        const bool zero = rep.status == ErasureStatus::destroyed && rep.session_destroyed && r.proof_verified &&
                          is_all_zero(s.u_priv) && is_all_zero(s.m_priv) && is_all_zero(s.sm_key) &&
                          s.cipher_key.size() == 32 && is_all_zero(s.cipher_key);
        c.require(zero, p.string() + ": secret buffer not zero after destroy");
        if (zero) ++clean;
    }
    c.note(std::to_string(clean) + "/50 sessions all-zero after destroy (" SEER_BUILD_PROFILE " build)");
    return c.result();
}

Outcome irrecoverability() {
    Checker c;
    testutil::TempDir dir("accept-irrec");
    auto entropy = EntropySource::deterministic(unsafe_test_mode, 1007);
    std::mt19937_64 rng(1007);
    std::size_t large = 0;
    std::uint64_t hits = 0;
    double min_entropy = 8.0, min_p = 1.0;
    for (int i = 0; i < 100; ++i) {
        // Half below the statistics threshold, half above.
        const std::size_t size = i % 2 ? 1024 + rng() % (64 * 1024 - 1024) : 65536 + rng() % (256 * 1024);
        const auto plain = corpus_file_content(static_cast<ContentClass>(i % 3), 1007, static_cast<std::uint64_t>(i), size);
        const fs::path p = dir / ("p" + std::to_string(i));
        testutil::write_file(p, plain);
        if (destroy_file(p, quick_config(), entropy).status != ErasureStatus::destroyed) {
            c.require(false, p.string() + " not destroyed");
            continue;
        }
        auto out = testutil::read_file(p);
        out.resize(size);
        hits += scan_residue(out, plain, 16);
        if (size >= 65536) {
            ++large;
            const double h = shannon_entropy(out);
            const double pv = chi_square_uniform_p(out);
            min_entropy = std::min(min_entropy, h);
            min_p = std::min(min_p, pv);
            c.require(h >= 7.9, p.string() + fmt(" entropy %.4f", h));
            c.require(pv >= 0.001, p.string() + fmt(" chi-square p %.5f", pv));
        }
        fs::remove(p);
    }
    c.require(hits == 0, std::to_string(hits) + " plaintext windows found");
    c.note("0 residue windows in 100 outputs; " + std::to_string(large) + " outputs >= 64 KiB, min entropy " +
           fmt("%.4f", min_entropy) + ", min chi-square p " + fmt("%.4f", min_p));
    return c.result();
}

Outcome efficiency_shape() {
    Checker c;
    testutil::TempDir dir("accept-bench");
    std::ostringstream info;

    // (a) write-volume law
    const std::uint64_t count = 16, size = 16384, payload = count * size;
    auto spec = [&](BenchMethod m, std::uint64_t n, std::uint64_t s) {
        BenchSpec b;
        b.method = m;
        b.file_count = n;
        b.file_size = s;
        b.content_class = ContentClass::text;
        return b;
    };
    const auto seer_w = run_bench(spec(BenchMethod::seer, count, size), dir.path());
    const auto single_w = run_bench(spec(BenchMethod::single_pass, count, size), dir.path());
    const auto dod_w = run_bench(spec(BenchMethod::dod3_pass, count, size), dir.path());
    const auto gut_w = run_bench(spec(BenchMethod::gutmann35, count, size), dir.path());
    c.require(seer_w.payload_passes_written == payload &&
                  seer_w.bytes_written == payload + count * ErasureFooter::size,
              "Seer write volume");
    c.require(single_w.bytes_written == payload, "SinglePass write volume");
    c.require(dod_w.bytes_written == 3 * payload, "Dod3Pass write volume");
    c.require(gut_w.bytes_written == 35 * payload, "Gutmann35 write volume");
    info << "writes x payload: Seer " << seer_w.payload_passes_written / payload << " (+footers), DoD "
         << dod_w.bytes_written / payload << ", Gutmann " << gut_w.bytes_written / payload;

    // (b) median speedup over three-pass overwrite on a 64 MiB corpus
    BenchSpec big = spec(BenchMethod::seer, 64, 1 << 20);
    big.content_class = ContentClass::binary;
    big.repetitions = 5;
    const auto seer_t = run_bench(big, dir.path());
    big.method = BenchMethod::dod3_pass;
    const auto dod_t = run_bench(big, dir.path());
    const double speedup = dod_t.total_seconds / seer_t.total_seconds;
    c.require(seer_t.valid && dod_t.valid, "64 MiB benchmark run invalid");
    c.require(speedup >= 2.5, fmt("speedup %.2fx < 2.5x", speedup));
    info << "; 64 MiB x5 medians Seer " << fmt("%.3f s", seer_t.total_seconds) << ", DoD "
         << fmt("%.3f s", dod_t.total_seconds) << " (" << fmt("%.2fx", speedup) << ")";

    // (c) per-file time for 1 KB files near the published 1.87 ms
    std::vector<BenchResult> table;
    for (std::uint64_t n : {100u, 1000u, 10000u}) {
        BenchSpec s = spec(BenchMethod::seer, n, 1024);
        table.push_back(run_bench(s, dir.path()));
    }
    const double mean_ms = table[1].mean_ms_per_file;
    c.require(mean_ms >= 1.87 / 50 && mean_ms <= 1.87 * 50, fmt("mean %.4f ms/file outside 50x band", mean_ms));
    info << "; 1 KB text: " << fmt("%.4f", table[0].total_seconds) << " / " << fmt("%.4f", table[1].total_seconds)
         << " / " << fmt("%.4f", table[2].total_seconds) << " s for 100/1000/10000 files, "
         << fmt("%.4f ms/file", mean_ms);
    c.note(info.str());
    return c.result();
}

Outcome footer_format() {
    Checker c;
    std::mt19937_64 rng(1009);
    auto random_footer = [&] {
        ErasureFooter f;
        f.original_length = rng();
        f.salt = testutil::random_array<32>(rng);
        f.iv = testutil::random_array<16>(rng);
        f.u_publ = testutil::random_array<32>(rng);
        return f;
    };
    int identical = 0;
    for (int i = 0; i < 10000; ++i) {
        const ErasureFooter f = random_footer();
        if (ErasureFooter::parse(f.serialize()) == f) ++identical;
    }
    c.require(identical == 10000, "serialize/parse identity broken");
    int detected = 0;
    for (int i = 0; i < 1000; ++i) {
        auto bytes = random_footer().serialize();
        bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        try {
            ErasureFooter::parse(bytes);
        } catch (const Error& e) {
            if (e.code() == Errc::corrupt_footer || e.code() == Errc::not_seer_file) ++detected;
        }
    }
    c.require(detected == 1000, std::to_string(1000 - detected) + " corruptions undetected");
    c.note(std::to_string(identical) + " identities, " + std::to_string(detected) + "/1000 corruptions detected");
    return c.result();
}

Outcome end_to_end() {
    Checker c;
    testutil::TempDir dir("accept-e2e");
    const std::array<ContentClass, 3> classes = {ContentClass::text, ContentClass::image_like,
                                                 ContentClass::binary};
    for (auto cls : classes) {
        BenchSpec s;
        s.file_count = 100;
        s.file_size = 1024;
        s.content_class = cls;
        s.seed = 1010;
        make_corpus(s, dir / std::string(to_string(cls)));
    }
    auto entropy = EntropySource::system();
    ErasureConfig config;
    config.recursive = true;
    config.threads = 4;
    const auto reports = destroy_tree(dir.path(), config, entropy);
    std::size_t destroyed = 0, audited = 0;
    for (const auto& r : reports) {
        if (r.status != ErasureStatus::destroyed) continue;
        ++destroyed;
        if (audit_file(r.path).verdict == Verdict::destroyed) ++audited;
    }
    c.require(reports.size() == 300, std::to_string(reports.size()) + " reports");
    c.require(destroyed == 300, std::to_string(destroyed) + " Destroyed reports");
    c.require(audited == 300, std::to_string(audited) + " Destroyed verdicts");
    c.note(std::to_string(destroyed) + " Destroyed reports, " + std::to_string(audited) + " Destroyed verdicts");
    return c.result();
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"cipher conformance", cipher_conformance},
        {"curve conformance", curve_conformance},
        {"hash conformance", hash_conformance},
        {"DH symmetry", dh_symmetry},
        {"roundtrip oracle", roundtrip_oracle},
        {"zeroization", zeroization},
        {"irrecoverability proxy", irrecoverability},
        {"efficiency shape", efficiency_shape},
        {"footer format", footer_format},
        {"end-to-end", end_to_end},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %-24s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
    }

    const long live = SessionKeys::live_count();
    std::printf("%s    live sessions at exit: %ld\n", live == 0 ? "PASS" : "FAIL", live);
    if (live != 0) ++failed;
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
