#include "gapforge/presets.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gapforge/ecc.hpp"

namespace gapforge::reductions {

PresetSize PresetSize::from_value(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return PresetSize{std::log2(static_cast<double>(n)), n};
}

PresetSize PresetSize::from_log2(double e) {
    if (!(e >= 1.0) || !std::isfinite(e)) throw std::invalid_argument("log2(n) must be >= 1");
    return PresetSize{e, std::nullopt};
}

PresetSize PresetSize::parse(const std::string& text) {
    if (text.rfind("2^", 0) == 0) {
        const double e = std::stod(text.substr(2));
        return from_log2(e);
    }
    return from_value(std::stoull(text));
}

namespace {

std::uint64_t pow_u64_checked(std::uint64_t base, std::uint64_t exp, const char* what) {
    unsigned __int128 v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        v *= base;
        if (v > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error(std::string(what) + " exceeds the 64-bit range");
    }
    return static_cast<std::uint64_t>(v);
}

// ceil(n^{1/k}) for an exact n, by integer root.
std::uint64_t ceil_kth_root(std::uint64_t n, std::uint64_t k) {
    const auto pow_of = [&](std::uint64_t b) {
        unsigned __int128 v = 1;
        for (std::uint64_t i = 0; i < k; ++i) {
            v *= b;
            if (v > n) break;
        }
        return v;
    };
    auto root = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / k)));
    if (root < 1) root = 1;
    while (root > 1 && pow_of(root) > n) --root;
    while (pow_of(root + 1) <= n) ++root;
    return pow_of(root) == n ? root : root + 1;
}

// floor(min{m*sqrt(h_squared)/k, (1-eps)*m*c}) with 128-bit intermediates.
std::int64_t soundness_floor_of(std::uint64_t m, std::uint64_t k, std::uint64_t c,
                                const Rational& epsilon, const Rational& h_squared) {
    const auto num = static_cast<unsigned __int128>(h_squared.num);
    const auto den = static_cast<unsigned __int128>(h_squared.den);
    const unsigned __int128 target = static_cast<unsigned __int128>(m) * m * num;
    const unsigned __int128 scale = den * k * k;
    std::uint64_t s = floor_sqrt_u128(target / scale);
    while (static_cast<unsigned __int128>(s) * s * scale > target) --s;
    while (static_cast<unsigned __int128>(s + 1) * (s + 1) * scale <= target) ++s;
    const Rational one_minus_eps = Rational(1, 1) - epsilon;
    const unsigned __int128 b_num = static_cast<unsigned __int128>(one_minus_eps.num) * m * c;
    const auto floor_b = static_cast<std::uint64_t>(b_num / one_minus_eps.den);
    return static_cast<std::int64_t>(std::min<std::uint64_t>(s, floor_b));
}

} // namespace

PipelineParams preset_w2(const PresetSize& n, std::uint64_t k, std::uint64_t c0) {
    if (c0 < 1) throw std::invalid_argument("c0 must be >= 1");
    if (k < 2 * c0)
        throw std::invalid_argument("violated: k >= 2*c0 (k = " + std::to_string(k) +
                                    ", c0 = " + std::to_string(c0) + ")");
    PipelineParams p;
    p.preset = "w2";
    p.log2_n = n.log2n;
    p.k = k;
    p.r = k;
    p.m = pow_u64_checked(k, 5, "m = k^5");
    p.c = 4 * c0;
    p.epsilon = Rational(1, 2);

    std::uint64_t root;
    if (n.exact) {
        root = ceil_kth_root(*n.exact, k);
    } else {
        if (n.log2n / static_cast<double>(k) > 62.0)
            throw std::overflow_error("violated: ceil(n^{1/k}) fits in 64 bits (log2 n = " +
                                      std::to_string(n.log2n) + ", k = " + std::to_string(k) + ")");
        root = static_cast<std::uint64_t>(std::ceil(std::exp2(n.log2n / static_cast<double>(k))));
        p.notes.push_back("sigma root computed from log2(n); exact n not available");
    }
    p.sigma = ecc::next_prime(std::max(p.m, root));

    const std::int64_t k4 = static_cast<std::int64_t>(pow_u64_checked(k, 4, "k^4"));
    p.delta = Rational(k4 - 1, k4); // 1 - r/m = 1 - 1/k^4
    p.h_squared = Rational(k4, 1);  // h = k^2
    p.completeness_weight = static_cast<std::int64_t>(2 * p.m);
    p.soundness_floor = soundness_floor_of(p.m, k, p.c, p.epsilon, p.h_squared);
    p.degenerate = p.soundness_floor <= p.completeness_weight;
    p.log2_a_side = static_cast<double>(p.r) * std::log2(static_cast<double>(p.sigma));
    p.notes.push_back("h = k^2 exactly; soundness = min{k^6, 2*c0*m}");
    return p;
}

PipelineParams preset_w1(const PresetSize& n, std::uint64_t k, std::uint64_t min_ratio_floor) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const double big_l = n.log2n;
    const double lam = std::log2(big_l);
    if (!(lam > 0)) throw std::invalid_argument("n too small: log2 log2 n <= 0");
    const double x = big_l / lam;
    const auto ratio = static_cast<std::uint64_t>(std::floor(x));
    const std::uint64_t guard = std::max<std::uint64_t>(2 * k, min_ratio_floor);
    if (ratio < guard)
        throw std::invalid_argument(
            "violated: floor(log n/log log n) >= max(2k, " + std::to_string(min_ratio_floor) +
            ") (got " + std::to_string(ratio) + " < " + std::to_string(guard) + ")");
    if (x > 2.0e6) throw std::overflow_error("m = (log n/log log n)^3 exceeds the 64-bit range");

    PipelineParams p;
    p.preset = "w1";
    p.log2_n = big_l;
    p.k = k;
    p.r = ratio;
    p.m = static_cast<std::uint64_t>(std::floor(x * x * x));
    p.c = static_cast<std::uint64_t>(std::floor(big_l / (static_cast<double>(k) * lam)));
    p.sigma = ecc::next_prime(p.m); // |Sigma| = m, bumped to the next prime
    p.epsilon = Rational(1, 2);
    p.delta = Rational(static_cast<std::int64_t>(p.m - p.r), static_cast<std::int64_t>(p.m));
    p.h_squared = Rational(static_cast<std::int64_t>(p.m), static_cast<std::int64_t>(p.r));
    p.completeness_weight = static_cast<std::int64_t>(2 * p.m);
    p.soundness_floor = soundness_floor_of(p.m, k, p.c, p.epsilon, p.h_squared);
    p.degenerate = p.soundness_floor <= p.completeness_weight;
    p.log2_a_side = static_cast<double>(p.r) * std::log2(static_cast<double>(p.sigma));
    p.notes.push_back("base-2 logarithms, floored; sigma = next prime >= m");
    return p;
}

PipelineParams preset_derand(const PresetSize& n, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const double big_l = n.log2n;
    const double lam = std::log2(big_l);
    if (!(lam > 0)) throw std::invalid_argument("n too small: log2 log2 n <= 0");

    PipelineParams p;
    p.preset = "derand";
    p.log2_n = big_l;
    p.k = k;
    p.r = 2;
    if (big_l * big_l > 2.0e9) throw std::overflow_error("|Sigma| = log^2 n exceeds the guard range");
    p.m = static_cast<std::uint64_t>(std::floor(big_l * big_l));
    if (p.m < p.r) throw std::invalid_argument("violated: r <= m (n too small)");
    p.big_r = static_cast<std::uint64_t>(std::floor(big_l / (4.0 * lam)));
    if (p.big_r < 1)
        throw std::invalid_argument("violated: R = log n/(4 log log n) >= 1 (n too small)");
    p.big_m = static_cast<std::uint64_t>(std::floor(big_l * big_l * big_l / (8.0 * lam)));
    p.sigma = ecc::next_prime(p.m);
    p.sigma_prime = pow_u64_checked(p.sigma, 2, "|Sigma'| = sigma^2");
    if (!(p.big_r <= p.big_m && p.big_m <= p.sigma_prime))
        throw std::invalid_argument("violated: R <= M <= |Sigma'| after rounding");
    p.c = static_cast<std::uint64_t>(std::floor(big_l / (static_cast<double>(k) * lam)));
    p.epsilon = Rational(1, 2);

    p.delta_outer = Rational(static_cast<std::int64_t>(p.m - p.r), static_cast<std::int64_t>(p.m));
    p.delta_inner = Rational(static_cast<std::int64_t>(p.big_m - p.big_r),
                             static_cast<std::int64_t>(p.big_m));
    p.delta = p.delta_outer * p.delta_inner;
    p.h_squared = Rational(1, 1) / (Rational(1, 1) - p.delta); // 2*eps = 1

    const unsigned __int128 block = static_cast<unsigned __int128>(p.m) * p.big_m;
    if (block > std::numeric_limits<std::int64_t>::max() / 2)
        throw std::overflow_error("m*M exceeds the 64-bit range");
    const auto mm = static_cast<std::uint64_t>(block);
    p.completeness_weight = static_cast<std::int64_t>(2 * mm);
    p.soundness_floor = soundness_floor_of(mm, k, p.c, p.epsilon, p.h_squared);
    p.degenerate = p.soundness_floor <= p.completeness_weight;
    p.log2_a_side = static_cast<double>(p.r) * static_cast<double>(p.big_r) *
                    std::log2(static_cast<double>(p.sigma));
    p.notes.push_back("composed block count m*M = " + std::to_string(mm) +
                      "; nominal h = log n/2 ~ " + std::to_string(big_l / 2));
    p.notes.push_back("|Sigma|^{rR} has log2 = " + std::to_string(p.log2_a_side) +
                      " vs log2 n = " + std::to_string(big_l));
    return p;
}

} // namespace gapforge::reductions
