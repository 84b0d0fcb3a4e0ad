#include <doctest.h>

#include <cmath>

#include "gapforge/presets.hpp"
#include "oracles.hpp"

using namespace gapforge;
using reductions::PresetSize;

TEST_CASE("preset size parsing") {
    CHECK(PresetSize::parse("1000000").exact == 1000000);
    const auto big = PresetSize::parse("2^1024");
    CHECK_FALSE(big.exact.has_value());
    CHECK(big.log2n == doctest::Approx(1024.0));
    CHECK_THROWS_AS(PresetSize::parse("1"), std::invalid_argument);
}

TEST_CASE("w2 preset at n = 10^6, k = 4, c0 = 2") {
    const auto p = reductions::preset_w2(PresetSize::from_value(1000000), 4, 2);
    CHECK(p.r == 4);
    CHECK(p.m == 1024); // k^5
    CHECK(p.c == 8);    // 4*c0
    // ceil(n^{1/4}) = 32, so sigma = next prime >= max(1024, 32).
    CHECK(p.sigma == oracles::trial_division_next_prime(1024));
    CHECK(p.sigma == 1031);
    CHECK(p.epsilon == Rational(1, 2));
    CHECK(p.delta == Rational(255, 256)); // 1 - 1/k^4
    CHECK(p.h_squared == Rational(256, 1));
    CHECK(p.completeness_weight == 2048); // 2m
    CHECK(p.soundness_floor == 4096);     // 2*c0*m
    CHECK(p.soundness_floor == 2 * 2 * static_cast<std::int64_t>(p.m));
    CHECK_FALSE(p.degenerate);
    // sigma^r >= n and sigma >= m must hold by construction.
    CHECK(p.sigma >= p.m);
    long double sigma_pow = 1;
    for (std::uint64_t i = 0; i < p.r; ++i) sigma_pow *= p.sigma;
    CHECK(sigma_pow >= 1000000.0L);
}

TEST_CASE("w2 preset flags the c0 = 1 boundary as degenerate") {
    const auto p = reductions::preset_w2(PresetSize::from_value(1000000), 2, 1);
    CHECK(p.m == 32);
    CHECK(p.c == 4);
    CHECK(p.completeness_weight == 64);
    CHECK(p.soundness_floor == 64);
    CHECK(p.degenerate);
}

TEST_CASE("w2 preset guards") {
    CHECK_THROWS_AS(reductions::preset_w2(PresetSize::from_value(1000000), 3, 2),
                    std::invalid_argument); // k < 2*c0
    CHECK_THROWS_AS(reductions::preset_w2(PresetSize::from_log2(1024), 3, 1),
                    std::overflow_error); // n^{1/3} = 2^341 overflows
}

TEST_CASE("w1 preset floors the displayed formulas at base-2 logs") {
    const auto p = reductions::preset_w1(PresetSize::from_log2(1024), 3);
    // log n/log log n = 1024/10 = 102.4.
    CHECK(p.r == 102);
    CHECK(p.m == static_cast<std::uint64_t>(std::floor(102.4 * 102.4 * 102.4)));
    CHECK(p.m == 1073741);
    CHECK(p.c == 34); // floor(1024/(3*10))
    CHECK(p.sigma == oracles::trial_division_next_prime(p.m));
    CHECK(p.sigma >= p.m);
    CHECK(p.delta == Rational(static_cast<std::int64_t>(p.m - p.r),
                              static_cast<std::int64_t>(p.m)));
    CHECK(p.h_squared == Rational(static_cast<std::int64_t>(p.m),
                                  static_cast<std::int64_t>(p.r)));
    CHECK(p.completeness_weight == 2 * static_cast<std::int64_t>(p.m));
    CHECK_FALSE(p.degenerate);
    // floor(m*h/k) with h = sqrt(m/r): verify against long-double arithmetic.
    const long double h = std::sqrt(static_cast<long double>(p.m) / p.r);
    const auto approx_a = static_cast<std::int64_t>(p.m * h / p.k);
    const std::int64_t floor_b = static_cast<std::int64_t>(p.m) * static_cast<std::int64_t>(p.c) / 2;
    CHECK(p.soundness_floor <= std::min(approx_a + 1, floor_b));
    CHECK(p.soundness_floor >= std::min(approx_a - 1, floor_b));
}

TEST_CASE("w1 preset refuses below the size guard") {
    CHECK_THROWS_AS(reductions::preset_w1(PresetSize::from_log2(32), 3), std::invalid_argument);
    // floor(log n/log log n) = 102 >= max(2k, 100) fails for k = 52.
    CHECK_THROWS_AS(reductions::preset_w1(PresetSize::from_log2(1024), 52),
                    std::invalid_argument);
}

TEST_CASE("derand preset reproduces the concatenation identities at n = 2^64") {
    const auto p = reductions::preset_derand(PresetSize::from_log2(64), 3);
    CHECK(p.r == 2);
    CHECK(p.m == 4096);    // log^2 n
    CHECK(p.big_r == 2);   // floor(64 / (4*6))
    CHECK(p.big_m == 5461); // floor(64^3 / (8*6))
    CHECK(p.sigma == oracles::trial_division_next_prime(4096));
    CHECK(p.sigma == 4099);
    CHECK(p.sigma_prime == p.sigma * p.sigma); // |Sigma'| = |Sigma|^r exactly
    CHECK(p.big_r <= p.big_m);
    CHECK(p.big_m <= p.sigma_prime);
    CHECK(p.delta_outer == Rational(4094, 4096));
    CHECK(p.delta_inner == Rational(5459, 5461));
    CHECK(p.delta == p.delta_outer * p.delta_inner);
    // Product distance >= 1 - 4/log^2 n.
    const double product = p.delta.to_double();
    CHECK(product >= 1.0 - 4.0 / (64.0 * 64.0));
    // m*M against log^5 n/(8 log log n): floors only shave m + M + 2 off.
    const double formula = std::pow(64.0, 5) / (8.0 * 6.0);
    const double mm = static_cast<double>(p.m) * static_cast<double>(p.big_m);
    CHECK(mm <= formula);
    CHECK(mm >= formula - static_cast<double>(p.m) - static_cast<double>(p.big_m) - 2.0);
    // |Sigma|^{rR} vs n: the slack comes from flooring R (< r*log2 sigma bits)
    // plus rounding sigma to a prime (< rR bits).
    const double slack = std::abs(p.log2_a_side - 64.0);
    CHECK(slack <= 2.0 * std::log2(static_cast<double>(p.sigma)) +
                       static_cast<double>(p.r * p.big_r) + 2.0);
    CHECK(p.completeness_weight == 2 * static_cast<std::int64_t>(p.m) *
                                       static_cast<std::int64_t>(p.big_m));
}

TEST_CASE("derand preset at n = 2^1024 keeps every constraint") {
    const auto p = reductions::preset_derand(PresetSize::from_log2(1024), 3);
    CHECK(p.m == 1024 * 1024);
    CHECK(p.big_r == 25);       // floor(1024/40)
    CHECK(p.big_m == 13421772); // floor(1024^3/80)
    CHECK(p.big_r <= p.big_m);
    CHECK(p.big_m <= p.sigma_prime);
    CHECK(p.delta.to_double() >= 1.0 - 4.0 / (1024.0 * 1024.0));
    CHECK_FALSE(p.degenerate);
}

TEST_CASE("derand preset refuses tiny n") {
    CHECK_THROWS_AS(reductions::preset_derand(PresetSize::from_log2(8), 2),
                    std::invalid_argument); // R = floor(8/12) = 0
}
