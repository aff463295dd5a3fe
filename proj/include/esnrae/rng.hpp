#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace esnrae {

/// Seeded random source bound to a named sub-stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; conversions to uniform reals, bounded integers and normals are
/// implemented here rather than through std::*_distribution so that a given
/// (seed, stream) pair yields the same values with every standard library.
class SeededRng {
public:
    SeededRng(std::uint64_t seed, std::string_view stream);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::string& stream() const noexcept { return stream_; }

    /// Independent child stream "<stream>/<name>" under the same seed.
    [[nodiscard]] SeededRng substream(std::string_view name) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform in [low, high).
    double uniform(double low, double high);
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal via Box–Muller.
    double normal();

private:
    std::uint64_t seed_;
    std::string stream_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace esnrae
