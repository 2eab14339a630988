#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mtafp {

// FNV-1a, 64-bit. Used for cache keys, ontology pinning, and the mock
// predictors' sequence probes. Stable across platforms by construction.
constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0) {
    std::uint64_t h = kFnvOffsetBasis ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

} // namespace mtafp
