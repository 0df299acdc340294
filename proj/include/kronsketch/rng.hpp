#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kronsketch {

// SplitMix64 finalizer. Used as the mixing step of the seed-derivation
// scheme; good avalanche, cheap, and stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over a tag string, used to bind a seed to a purpose ("exp1.input",
// "kfjlt.diag", ...) so that unrelated consumers of the same master seed
// never see correlated streams.
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed splitting rule: mix the master seed with a purpose tag and up to
// three integer coordinates (e.g. kind, J, trial). Every derived stream in
// the library and the benchmark harness comes from this one function, which
// makes runs reproducible independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(master ^ hash_tag(tag));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace kronsketch
