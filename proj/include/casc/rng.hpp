#pragma once

#include <cstdint>
#include <random>

namespace casc {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a root seed and up to three
/// structural indices (subcommand, replication, period, restart, ...).
/// Parallel loops seed one engine per slot from this, so results do not
/// depend on thread count or scheduling.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(root ^ 0x6a09e667f3bcc908ULL);
    s = splitmix64(s ^ splitmix64(a ^ 0xbb67ae8584caa73bULL));
    s = splitmix64(s ^ splitmix64(b ^ 0x3c6ef372fe94f82bULL));
    s = splitmix64(s ^ splitmix64(c ^ 0xa54ff53a5f1d36f1ULL));
    return s;
}

inline std::mt19937_64 make_engine(std::uint64_t root, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    return std::mt19937_64(derive_seed(root, a, b, c));
}

}  // namespace casc
