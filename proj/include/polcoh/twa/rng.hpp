/**
 *  @file   rng.hpp
 *  @brief  Per-trajectory random streams derived from (seed, index).
 */

#ifndef POLCOH_TWA_RNG_HPP
#define POLCOH_TWA_RNG_HPP

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace polcoh {

/// Standard-normal source whose sequence is a pure function of (seed, stream, tag).
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t tag = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), tag};
        engine_.seed(seq);
    }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    // Boost's ziggurat sampler: several times faster than the libstdc++ polar method.
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace polcoh

#endif  // POLCOH_TWA_RNG_HPP
