#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sdr {

/// Seeded random stream. Streams are addressed by (seed, stream, index) so
/// that probe i of a check draws the same numbers however probes are
/// scheduled across workers.
class Rng {
public:
    explicit Rng(std::uint64_t state) : engine_(state) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a, used to derive stream ids from identity names.
inline std::uint64_t stream_id(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index));
}

inline Rng make_stream(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
    return make_stream(seed, stream_id(stream), index);
}

}  // namespace sdr
