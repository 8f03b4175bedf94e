#pragma once

#include <cstdint>

namespace coxcap {

// Counter-style stream splitting on top of xoshiro256**.
//
// Every stream is identified by a 64-bit key. derive(tag, index) hashes
// (key, tag, index) into a child key, so sub-streams depend only on the
// parent key and the (tag, index) pair -- never on how many variates the
// parent has produced. This makes per-centre / per-replica / per-node
// generation order-independent and safely parallel.
//
// All samplers are hand-rolled from raw uniforms: the standard library's
// distribution classes are implementation-defined, which would break the
// bit-reproducibility contract across toolchains.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key);

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53 random bits.
    double uniform();
    // Uniform double in [a, b).
    double uniform(double a, double b);

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    // Exact Poisson sampler: Knuth product-of-uniforms for small means,
    // Hormann's PTRS transformed rejection for large means.
    std::uint64_t poisson(double mean);

    // Child stream for (tag, index); deterministic and order-independent.
    RngStream derive(std::uint64_t tag, std::uint64_t index) const;

  private:
    std::uint64_t key_ = 0;
    std::uint64_t state_[4] = {0, 0, 0, 0};
};

// Stream tags used across the library. Values are part of the
// reproducibility contract: changing them changes every sampled topology.
namespace stream_tag {
inline constexpr std::uint64_t centres = 1;
inline constexpr std::uint64_t cluster = 2;
inline constexpr std::uint64_t thinning = 3;
inline constexpr std::uint64_t flows = 4;
inline constexpr std::uint64_t sweep = 5;
inline constexpr std::uint64_t layer = 6;
inline constexpr std::uint64_t replica = 7;
inline constexpr std::uint64_t area_mc = 8;
inline constexpr std::uint64_t delivery = 9;
}  // namespace stream_tag

}  // namespace coxcap
