#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gapforge/rational.hpp"

namespace gapforge::ecc {

using Symbol = std::uint64_t;

bool is_prime(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n); // least prime >= n

// Residues modulo a prime p. Operands must already be reduced to 0..p-1.
class PrimeField {
  public:
    explicit PrimeField(std::uint64_t p);

    std::uint64_t modulus() const { return p_; }

    Symbol add(Symbol a, Symbol b) const;
    Symbol sub(Symbol a, Symbol b) const;
    Symbol mul(Symbol a, Symbol b) const;
    Symbol neg(Symbol a) const;
    Symbol pow(Symbol base, std::uint64_t exp) const;
    Symbol inv(Symbol a) const; // throws on a == 0

  private:
    std::uint64_t p_;
};

// Reed-Solomon code parameters: messages of length r are the coefficients of
// a degree < r polynomial, codewords its evaluations at m distinct points.
struct CodeSpec {
    PrimeField field;
    std::size_t message_length; // r
    std::size_t block_length;   // m
    std::vector<Symbol> eval_points;

    CodeSpec(PrimeField f, std::size_t r, std::size_t m, std::vector<Symbol> points);

    // Evaluation points default to 0,1,...,m-1 so every run is reproducible.
    static CodeSpec reed_solomon(std::uint64_t p, std::size_t r, std::size_t m);

    Rational declared_distance() const; // 1 - r/m
};

std::vector<Symbol> rs_encode(const CodeSpec& spec, std::span<const Symbol> message);

// A fully materialized code: all codewords, equal length, pairwise distinct,
// over the alphabet 0..alphabet_size-1, with the distance the construction
// guarantees attached.
struct Codebook {
    std::uint64_t alphabet_size = 0;
    std::size_t block_length = 0;
    std::vector<std::vector<Symbol>> codewords;
    Rational declared_min_distance{1, 1};
};

Codebook make_codebook(std::uint64_t alphabet_size, std::vector<std::vector<Symbol>> codewords,
                       Rational declared_min_distance);

struct EnumBudget {
    std::uint64_t max_codewords = 100000;
};

// All p^r codewords in lexicographic message order (first symbol most
// significant). Refuses past the budget.
Codebook enumerate_codebook(const CodeSpec& spec, const EnumBudget& budget = {});

// Concatenation per the outer/inner convention: `inner` is the code over the
// large alphabet Sigma' = Sigma^r and is applied to the message first; each
// of its output symbols is then re-encoded by `outer` (over Sigma). The inner
// code is given as a codebook in message-rank order, so rank doubles as the
// encoding map. Message length R*r over Sigma, output length M*m.
std::vector<Symbol> concat_encode(const CodeSpec& outer, const Codebook& inner,
                                  std::span<const Symbol> message);

// Materializes the concatenated code; declared distance is the product of the
// component declared distances.
Codebook concat_codebook(const CodeSpec& outer, const Codebook& inner,
                         const EnumBudget& budget = {});

struct DistanceResult {
    Rational distance{1, 1};           // min pairwise relative Hamming distance
    std::uint64_t min_disagreements = 0;
    std::size_t arg_i = 0, arg_j = 0;  // lexicographically least achieving pair
};

// Exact minimum pairwise relative distance by brute force over all pairs.
// No sampling fallback: past the budget this refuses outright. The parallel
// entry point and the serial reference return identical results; the min is
// taken over the totally ordered (disagreements, i, j) triple, so the answer
// does not depend on the schedule.
DistanceResult min_relative_distance(const Codebook& book, const EnumBudget& budget = {});
DistanceResult min_relative_distance_serial(const Codebook& book, const EnumBudget& budget = {});

} // namespace gapforge::ecc
