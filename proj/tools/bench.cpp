// Benchmark comparing the OpenMP kernels against the serial reference
// implementations kept for testing: all-pairs code distance, the
// covering-property sweep, and the threshold-soundness sweep. The distance
// and covering rows measure pure threading; the soundness reference also
// skips the kernel's per-part tabulation, so its gap includes that. Results
// must agree exactly.

#include <chrono>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "gapforge/ecc.hpp"
#include "gapforge/threshold.hpp"

namespace gf = gapforge;

namespace {

double seconds_of(const std::chrono::steady_clock::duration& d) {
    return std::chrono::duration_cast<std::chrono::duration<double>>(d).count();
}

template <typename Fn>
double timed(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds_of(std::chrono::steady_clock::now() - start);
}

void row(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-22s reference %8.3fs   kernel %8.3fs   speedup %5.2fx   %s\n", name, serial,
                parallel, parallel > 0 ? serial / parallel : 0.0, agree ? "match" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapforge kernel benchmark: serial reference vs OpenMP"};
    std::uint64_t p = 67, r = 2, m = 32;
    std::uint64_t cover_p = 11, cover_r = 2, cover_k = 3;
    std::uint64_t sweep_p = 3, sweep_r = 1, sweep_m = 3, sweep_k = 3, sweep_x = 3;
    app.add_option("--p", p, "distance benchmark: field size");
    app.add_option("--r", r, "distance benchmark: message length");
    app.add_option("--m", m, "distance benchmark: block length");
    app.add_option("--cover-p", cover_p);
    app.add_option("--cover-r", cover_r);
    app.add_option("--cover-k", cover_k);
    app.add_option("--sweep-x", sweep_x, "soundness benchmark: max |X|");
    CLI11_PARSE(app, argc, argv);

    int failures = 0;

    {
        const auto book = gf::ecc::enumerate_codebook(gf::ecc::CodeSpec::reed_solomon(p, r, m),
                                                      {1000000});
        std::printf("distance: %zu codewords of length %zu\n", book.codewords.size(),
                    book.block_length);
        gf::ecc::DistanceResult serial_res, parallel_res;
        const double ts = timed([&] { serial_res = gf::ecc::min_relative_distance_serial(book, {1000000}); });
        const double tp = timed([&] { parallel_res = gf::ecc::min_relative_distance(book, {1000000}); });
        const bool agree = serial_res.distance == parallel_res.distance &&
                           serial_res.arg_i == parallel_res.arg_i &&
                           serial_res.arg_j == parallel_res.arg_j;
        row("min_relative_distance", ts, tp, agree);
        failures += !agree;
    }

    {
        const auto book = std::make_shared<const gf::ecc::Codebook>(gf::ecc::enumerate_codebook(
            gf::ecc::CodeSpec::reed_solomon(cover_p, cover_r, cover_p - 1), {1000000}));
        const auto graph =
            gf::threshold::ThresholdGraph::build(book, cover_k, gf::Rational(1, 2), {10000000});
        std::printf("covering: n=%llu k=%llu m=%llu\n",
                    static_cast<unsigned long long>(graph.params().part_size_a),
                    static_cast<unsigned long long>(graph.params().parts_a),
                    static_cast<unsigned long long>(graph.params().parts_b));
        gf::threshold::CoveringReport serial_res, parallel_res;
        const gf::threshold::SweepBudget budget{4000000000ULL};
        const double ts = timed([&] { serial_res = gf::threshold::check_covering_property_serial(graph, budget); });
        const double tp = timed([&] { parallel_res = gf::threshold::check_covering_property(graph, budget); });
        const bool agree = serial_res.holds == parallel_res.holds &&
                           serial_res.tuples_checked == parallel_res.tuples_checked;
        row("covering_property", ts, tp, agree);
        failures += !agree;
    }

    {
        const auto book = std::make_shared<const gf::ecc::Codebook>(gf::ecc::enumerate_codebook(
            gf::ecc::CodeSpec::reed_solomon(sweep_p, sweep_r, sweep_m), {1000000}));
        const auto graph =
            gf::threshold::ThresholdGraph::build(book, sweep_k, gf::Rational(1, 2), {10000000});
        std::printf("soundness sweep: |X| <= %llu over t^m = %llu^%llu b-choices\n",
                    static_cast<unsigned long long>(sweep_x),
                    static_cast<unsigned long long>(graph.params().part_size_b),
                    static_cast<unsigned long long>(graph.params().parts_b));
        gf::threshold::SoundnessSweepReport serial_res, parallel_res;
        const gf::threshold::SweepBudget budget{4000000000ULL};
        const double ts = timed([&] { serial_res = gf::threshold::sweep_threshold_soundness_serial(graph, sweep_x, budget); });
        const double tp = timed([&] { parallel_res = gf::threshold::sweep_threshold_soundness(graph, sweep_x, budget); });
        const bool agree = serial_res.holds == parallel_res.holds &&
                           serial_res.x_subsets_checked == parallel_res.x_subsets_checked;
        row("soundness_sweep", ts, tp, agree);
        failures += !agree;
    }

    return failures == 0 ? 0 : 1;
}
