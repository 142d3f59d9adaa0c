#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace liferec {

// Seeded random stream. Distribution code is hand-rolled on top of the raw
// 64-bit output so draws are identical across standard library
// implementations; everything downstream of a seed is reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is below 2^-32 for the n used here.
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    int bit() { return static_cast<int>(next() >> 63); }

private:
    std::mt19937_64 gen_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Derives an independent stream seed from a run seed, a purpose tag and up to
// three indices. All randomness in a run flows from the single run seed
// through this; streams never depend on how many draws other streams made.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = detail::splitmix64(seed);
    for (char ch : purpose) h = detail::splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(ch)));
    h = detail::splitmix64(h ^ a);
    h = detail::splitmix64(h ^ b);
    h = detail::splitmix64(h ^ c);
    return h;
}

}  // namespace liferec
