#pragma once

#include <cstdint>
#include <random>

namespace gapforge {

// The single PRNG used for all generated randomness. Every random artifact
// (instances, graphs, test samples) is derived from one explicit seed through
// this wrapper; draws use plain modulo reduction so byte-identical output per
// seed does not depend on the standard library's distribution internals.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform-ish draw in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    // Bernoulli draw with probability p, via the top 53 bits.
    bool chance(double p) {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return u < p;
    }

    static constexpr const char* name() { return "mt19937_64"; }

  private:
    std::mt19937_64 gen_;
};

} // namespace gapforge
