#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace adapt {

// Random streams are std::mt19937_64 with hand-written variate transforms.
// Seeds are derived hierarchically with SplitMix64; each role (instance,
// truth, solver, mc, ...) owns an independent stream.

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derive a child seed from a parent and a sequence of integer tags.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags);

/// Stable 64-bit FNV-1a hash for role names used as derivation tags.
std::uint64_t tag_of(std::string_view name);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via the Marsaglia polar method.
    double standard_normal();

    double normal(double mean, double sd) { return mean + sd * standard_normal(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace adapt
