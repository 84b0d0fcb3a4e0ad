#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapforge/rational.hpp"

namespace gapforge::reductions {

// Instance size for the preset calculators. Sizes like 2^1024 are far beyond
// 64 bits, so the canonical representation is log2(n); an exact value is kept
// when the input was a plain integer.
struct PresetSize {
    double log2n = 0.0;
    std::optional<std::uint64_t> exact;

    static PresetSize from_value(std::uint64_t n);
    static PresetSize from_log2(double e);
    static PresetSize parse(const std::string& text); // "1000000" or "2^1024"
};

// One record housing every tunable symbol of a reduction run, plus the
// derived gap thresholds. The presets are calculators: their outputs are
// checked arithmetically, never executed end to end at full scale.
struct PipelineParams {
    std::string preset; // "w2" | "w1" | "derand"
    double log2_n = 0.0;
    std::uint64_t k = 0;

    std::uint64_t r = 0;
    std::uint64_t m = 0;
    std::uint64_t c = 0;
    std::uint64_t sigma = 0; // |Sigma|, prime
    Rational epsilon{1, 2};

    // Derandomized preset only.
    std::uint64_t sigma_prime = 0; // |Sigma'| = sigma^2
    std::uint64_t big_r = 0;       // R
    std::uint64_t big_m = 0;       // M
    Rational delta_outer{0, 1};    // 1 - r/m
    Rational delta_inner{0, 1};    // 1 - R/M

    Rational delta{0, 1};     // code distance bound used for the graph
    Rational h_squared{0, 1}; // 2*eps/(1-delta)

    std::int64_t completeness_weight = 0; // 2m (2mM for derand)
    std::int64_t soundness_floor = 0;     // floor(min{m*h/k, (1-eps)*m*c})
    bool degenerate = false;              // no actual gap between the thresholds

    double log2_a_side = 0.0; // log2 of the A-part size |Sigma|^r (resp. |Sigma|^{rR})
    std::vector<std::string> notes;
};

// Constant-ratio preset: r=k, m=k^5, c=4*c0, sigma = least prime >= max(m, ceil(n^{1/k})).
PipelineParams preset_w2(const PresetSize& n, std::uint64_t k, std::uint64_t c0);

// Log-ratio preset: r = floor(log n/log log n), m = floor((log n/log log n)^3),
// c = floor(log n/(k log log n)). Guard: floor(log n/log log n) >= max(2k, min_ratio_floor).
PipelineParams preset_w1(const PresetSize& n, std::uint64_t k, std::uint64_t min_ratio_floor = 100);

// Derandomized preset built on a concatenated pair of RS codes.
PipelineParams preset_derand(const PresetSize& n, std::uint64_t k);

} // namespace gapforge::reductions
