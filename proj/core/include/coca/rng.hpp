#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coca {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

// One master seed fans out into independent named streams (train/data/eval/diag)
// so each command stage is reproducible on its own.
std::mt19937_64 seeded_stream(std::uint64_t seed, std::string_view name);

// Hand-rolled draws on top of mt19937_64: identical sequences on every
// platform, unlike std::*_distribution.
double uniform_real(std::mt19937_64& rng);                       // [0, 1)
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);  // [0, n)
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);  // [lo, hi]
double normal(std::mt19937_64& rng);                             // N(0, 1), Box-Muller

}  // namespace coca
