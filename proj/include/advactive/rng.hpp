#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace advactive {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a named stream ("data", "split", "coin", "random") under a base seed.
/// Each stream is independent of the others, so drawing from one never shifts another.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream);

/// trial_seed = mix64(mix64(master) ^ (index + 1) * golden ratio constant)
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

inline Engine make_engine(std::uint64_t base, std::string_view stream) {
    return Engine(derive_seed(base, stream));
}

}  // namespace advactive
