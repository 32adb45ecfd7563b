#include "seer/entropy.hpp"

#include <sys/random.h>

#include <cerrno>
#include <chrono>
#include <memory>
#include <random>
#include <utility>

#include "seer/error.hpp"
#include "seer/secure_memory.hpp"
#include "seer/sha256.hpp"

namespace seer {

namespace {

bool os_random(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        ssize_t n = ::getrandom(out.data() + done, out.size() - done, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        done += static_cast<std::size_t>(n);
    }
    return true;
}

// Seed material for the software generator. Prefers the CPU's hardware
// generator; libstdc++ throws for tokens the platform does not support.
std::array<std::uint8_t, 32> software_seed() {
    std::unique_ptr<std::random_device> dev;
    for (const char* token : {"rdseed", "rdrand", "default"}) {
        try {
            dev = std::make_unique<std::random_device>(token);
            break;
        } catch (const std::exception&) {
        }
    }
    if (!dev) throw Error(Errc::entropy, "no hardware or platform random device available");

    std::array<std::uint8_t, 64> material{};
    for (std::size_t i = 0; i < 48; i += 4) {
        const std::uint32_t v = (*dev)();
        for (int b = 0; b < 4; ++b) material[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    const auto now = std::chrono::high_resolution_clock::now().time_since_epoch().count();
    for (int b = 0; b < 8; ++b) material[48 + b] = static_cast<std::uint8_t>(now >> (8 * b));
    const auto addr = reinterpret_cast<std::uintptr_t>(&material);
    for (int b = 0; b < 8; ++b) material[56 + b] = static_cast<std::uint8_t>(addr >> (8 * b));

    Digest32 seed = sha256(material);
    secure_zero(material);
    return seed;
}

void put_u64(Sha256& h, std::uint64_t v) {
    std::array<std::uint8_t, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    h.update(b);
}

EntropySource::Source drbg_source(std::array<std::uint8_t, 32> seed) {
    auto drbg = std::make_shared<HashDrbg>(seed);
    secure_zero(seed);
    return [drbg](std::span<std::uint8_t> out) {
        drbg->generate(out);
        return true;
    };
}

}  // namespace

HashDrbg::HashDrbg(std::span<const std::uint8_t, 32> seed) noexcept {
    for (std::size_t i = 0; i < 32; ++i) seed_[i] = seed[i];
}

HashDrbg::~HashDrbg() { secure_zero(seed_); }

HashDrbg::HashDrbg(HashDrbg&& other) noexcept : seed_(other.seed_), counter_(other.counter_) {
    secure_zero(other.seed_);
}

void HashDrbg::generate(std::span<std::uint8_t> out) noexcept {
    std::size_t done = 0;
    while (done < out.size()) {
        Sha256 h;
        h.update(seed_);
        put_u64(h, counter_++);
        Digest32 block = h.finish();
        const std::size_t take = std::min<std::size_t>(block.size(), out.size() - done);
        for (std::size_t i = 0; i < take; ++i) out[done + i] = block[i];
        done += take;
        secure_zero(block);
    }
}

EntropySource EntropySource::system() {
    return EntropySource(os_random, drbg_source(software_seed()));
}

EntropySource EntropySource::deterministic(UnsafeTestMode, std::uint64_t seed) {
    auto seed_for = [seed](std::uint8_t label) {
        std::array<std::uint8_t, 9> material{};
        for (int b = 0; b < 8; ++b) material[b] = static_cast<std::uint8_t>(seed >> (8 * b));
        material[8] = label;
        return sha256(material);
    };
    return EntropySource(drbg_source(seed_for(1)), drbg_source(seed_for(2)));
}

EntropySource::EntropySource(Source primary, Source secondary)
    : primary_(std::move(primary)), secondary_(std::move(secondary)) {}

EntropySource::EntropySource(EntropySource&& other) noexcept
    : primary_(std::move(other.primary_)),
      secondary_(std::move(other.secondary_)),
      counter_(other.counter_) {}

void EntropySource::fill(std::span<std::uint8_t> out) {
    std::lock_guard lock(mutex_);
    std::array<std::uint8_t, 64> inputs{};
    std::size_t done = 0;
    while (done < out.size()) {
        auto first = std::span(inputs).first<32>();
        auto second = std::span(inputs).last<32>();
        if (!primary_ || !primary_(first)) {
            secure_zero(inputs);
            throw Error(Errc::entropy, "primary entropy source failed");
        }
        if (!secondary_ || !secondary_(second)) {
            secure_zero(inputs);
            throw Error(Errc::entropy, "secondary entropy source failed");
        }
        Sha256 h;
        h.update(inputs);
        put_u64(h, counter_++);
        Digest32 block = h.finish();
        const std::size_t take = std::min<std::size_t>(block.size(), out.size() - done);
        for (std::size_t i = 0; i < take; ++i) out[done + i] = block[i];
        done += take;
        secure_zero(block);
    }
    secure_zero(inputs);
}

}  // namespace seer
