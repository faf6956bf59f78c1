#pragma once

#include <cstdint>
#include <functional>

namespace qrisk {

/// Counter-based random stream keyed by (seed, stream). Streams with the same
/// key are identical regardless of construction order or thread, which makes
/// parallel maps over stream indices reproducible.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();

    /// Uniform on (0, 1].
    double next_uniform_pos();

    /// Standard normal deviate (Box-Muller, spare cached per stream).
    double next_gaussian();

    /// Gamma(shape, scale=1) deviate, shape > 0 (Marsaglia-Tsang).
    double next_gamma(double shape);

    /// Chi-square deviate with df > 0 degrees of freedom.
    double next_chi_square(double df);

    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t next_index(std::uint64_t n);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Deterministic parallel map: body(i) for i in [0, count) partitioned over
/// `workers` threads. body(i) must only write to state owned by index i.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace qrisk
