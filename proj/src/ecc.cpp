#include "gapforge/ecc.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "gapforge/errors.hpp"

namespace gapforge::ecc {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    if (n <= 2) return 2;
    if (n == std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error("next_prime: argument too large");
    std::uint64_t c = n | 1;
    while (!is_prime(c)) c += 2;
    return c;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

Symbol PrimeField::add(Symbol a, Symbol b) const {
    Symbol s = a + b;
    if (s >= p_) s -= p_;
    return s;
}

Symbol PrimeField::sub(Symbol a, Symbol b) const { return a >= b ? a - b : a + p_ - b; }

Symbol PrimeField::mul(Symbol a, Symbol b) const { return mulmod(a, b, p_); }

Symbol PrimeField::neg(Symbol a) const { return a == 0 ? 0 : p_ - a; }

Symbol PrimeField::pow(Symbol base, std::uint64_t exp) const { return powmod(base, exp, p_); }

Symbol PrimeField::inv(Symbol a) const {
    if (a == 0) throw std::invalid_argument("inverse of zero");
    return powmod(a, p_ - 2, p_);
}

CodeSpec::CodeSpec(PrimeField f, std::size_t r, std::size_t m, std::vector<Symbol> points)
    : field(f), message_length(r), block_length(m), eval_points(std::move(points)) {
    if (r < 1 || r > m || m > field.modulus())
        throw std::invalid_argument("require 1 <= r <= m <= p");
    if (eval_points.size() != m) throw std::invalid_argument("need m evaluation points");
    std::set<Symbol> seen;
    for (Symbol x : eval_points) {
        if (x >= field.modulus()) throw std::invalid_argument("evaluation point not in field");
        if (!seen.insert(x).second) throw std::invalid_argument("evaluation points must be distinct");
    }
}

CodeSpec CodeSpec::reed_solomon(std::uint64_t p, std::size_t r, std::size_t m) {
    std::vector<Symbol> points(m);
    for (std::size_t i = 0; i < m; ++i) points[i] = i;
    return CodeSpec(PrimeField(p), r, m, std::move(points));
}

Rational CodeSpec::declared_distance() const {
    return Rational(static_cast<std::int64_t>(block_length - message_length),
                    static_cast<std::int64_t>(block_length));
}

std::vector<Symbol> rs_encode(const CodeSpec& spec, std::span<const Symbol> message) {
    if (message.size() != spec.message_length)
        throw std::invalid_argument("message length " + std::to_string(message.size()) +
                                    " != r = " + std::to_string(spec.message_length));
    for (Symbol a : message)
        if (a >= spec.field.modulus()) throw std::invalid_argument("message symbol not in field");
    std::vector<Symbol> out(spec.block_length);
    for (std::size_t j = 0; j < spec.block_length; ++j) {
        // Horner evaluation of a_1 + a_2 x + ... + a_r x^{r-1} at f_j.
        const Symbol x = spec.eval_points[j];
        Symbol acc = 0;
        for (std::size_t i = message.size(); i-- > 0;)
            acc = spec.field.add(spec.field.mul(acc, x), message[i]);
        out[j] = acc;
    }
    return out;
}

Codebook make_codebook(std::uint64_t alphabet_size, std::vector<std::vector<Symbol>> codewords,
                       Rational declared_min_distance) {
    Codebook book;
    book.alphabet_size = alphabet_size;
    book.codewords = std::move(codewords);
    book.declared_min_distance = declared_min_distance;
    if (book.codewords.empty()) throw std::invalid_argument("codebook is empty");
    book.block_length = book.codewords.front().size();
    if (book.block_length == 0) throw std::invalid_argument("zero block length");
    if (declared_min_distance <= Rational(0, 1) || declared_min_distance > Rational(1, 1))
        throw std::invalid_argument("declared distance must lie in (0,1]");
    std::set<std::vector<Symbol>> seen;
    for (const auto& w : book.codewords) {
        if (w.size() != book.block_length) throw std::invalid_argument("ragged codeword lengths");
        for (Symbol s : w)
            if (s >= alphabet_size) throw std::invalid_argument("codeword symbol out of alphabet");
        if (!seen.insert(w).second) throw std::invalid_argument("duplicate codeword");
    }
    return book;
}

Codebook enumerate_codebook(const CodeSpec& spec, const EnumBudget& budget) {
    const std::uint64_t p = spec.field.modulus();
    unsigned __int128 count = 1;
    for (std::size_t i = 0; i < spec.message_length; ++i) {
        count *= p;
        if (count > budget.max_codewords)
            throw BudgetError("codebook size p^r exceeds budget of " +
                              std::to_string(budget.max_codewords) + " codewords");
    }
    const auto total = static_cast<std::uint64_t>(count);
    Codebook book;
    book.alphabet_size = p;
    book.block_length = spec.block_length;
    // 1 - r/m degenerates to 0 at r = m; distinct words always differ in at
    // least one of the m coordinates, so 1/m is a sound fallback guarantee.
    book.declared_min_distance =
        std::max(spec.declared_distance(), Rational(1, static_cast<std::int64_t>(spec.block_length)));
    book.codewords.reserve(total);
    std::vector<Symbol> message(spec.message_length, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        // Lexicographic by message, first symbol most significant.
        std::uint64_t v = idx;
        for (std::size_t i = spec.message_length; i-- > 0;) {
            message[i] = v % p;
            v /= p;
        }
        book.codewords.push_back(rs_encode(spec, message));
    }
    return book;
}

namespace {

// Inner alphabet size |Sigma|^r with overflow guard.
std::uint64_t pow_checked(std::uint64_t base, std::size_t exp) {
    unsigned __int128 v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        v *= base;
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("alphabet power overflows 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

// Number of inner message symbols R with |Sigma'|^R == codeword count.
std::size_t inner_message_length(const Codebook& inner) {
    const std::uint64_t q = inner.alphabet_size;
    unsigned __int128 v = 1;
    std::size_t big_r = 0;
    while (v < inner.codewords.size()) {
        v *= q;
        ++big_r;
    }
    if (v != inner.codewords.size() || big_r == 0)
        throw std::invalid_argument("inner codebook size is not |Sigma'|^R for an integer R >= 1");
    return big_r;
}

std::vector<Symbol> encode_inner_symbol(const CodeSpec& outer, std::uint64_t symbol) {
    const std::uint64_t p = outer.field.modulus();
    std::vector<Symbol> msg(outer.message_length);
    for (std::size_t i = outer.message_length; i-- > 0;) {
        msg[i] = symbol % p;
        symbol /= p;
    }
    return rs_encode(outer, msg);
}

} // namespace

std::vector<Symbol> concat_encode(const CodeSpec& outer, const Codebook& inner,
                                  std::span<const Symbol> message) {
    const std::uint64_t p = outer.field.modulus();
    const std::uint64_t sigma_prime = pow_checked(p, outer.message_length);
    if (inner.alphabet_size != sigma_prime)
        throw std::invalid_argument("alphabet mismatch: inner alphabet " +
                                    std::to_string(inner.alphabet_size) + " != |Sigma|^r = " +
                                    std::to_string(sigma_prime));
    const std::size_t big_r = inner_message_length(inner);
    if (message.size() != big_r * outer.message_length)
        throw std::invalid_argument("message length must be R*r = " +
                                    std::to_string(big_r * outer.message_length));
    // Pack each r-block into one Sigma' symbol (first Sigma-symbol most
    // significant, matching the enumeration order), then rank the R-tuple.
    std::uint64_t rank = 0;
    for (std::size_t b = 0; b < big_r; ++b) {
        std::uint64_t sym = 0;
        for (std::size_t i = 0; i < outer.message_length; ++i) {
            const Symbol s = message[b * outer.message_length + i];
            if (s >= p) throw std::invalid_argument("message symbol not in field");
            sym = sym * p + s;
        }
        rank = rank * sigma_prime + sym;
    }
    const std::vector<Symbol>& u = inner.codewords[rank];
    std::vector<Symbol> out;
    out.reserve(u.size() * outer.block_length);
    for (Symbol ui : u) {
        const std::vector<Symbol> enc = encode_inner_symbol(outer, ui);
        out.insert(out.end(), enc.begin(), enc.end());
    }
    return out;
}

Codebook concat_codebook(const CodeSpec& outer, const Codebook& inner, const EnumBudget& budget) {
    const std::uint64_t sigma_prime = pow_checked(outer.field.modulus(), outer.message_length);
    if (inner.alphabet_size != sigma_prime)
        throw std::invalid_argument("alphabet mismatch: inner alphabet " +
                                    std::to_string(inner.alphabet_size) + " != |Sigma|^r = " +
                                    std::to_string(sigma_prime));
    if (inner.codewords.size() > budget.max_codewords)
        throw BudgetError("concatenated codebook exceeds budget");
    Codebook book;
    book.alphabet_size = outer.field.modulus();
    book.block_length = inner.block_length * outer.block_length;
    book.declared_min_distance = outer.declared_distance() * inner.declared_min_distance;
    book.codewords.reserve(inner.codewords.size());
    for (const auto& u : inner.codewords) {
        std::vector<Symbol> word;
        word.reserve(book.block_length);
        for (Symbol ui : u) {
            const std::vector<Symbol> enc = encode_inner_symbol(outer, ui);
            word.insert(word.end(), enc.begin(), enc.end());
        }
        book.codewords.push_back(std::move(word));
    }
    return book;
}

namespace {

std::uint64_t disagreements(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

struct Best {
    std::uint64_t d = std::numeric_limits<std::uint64_t>::max();
    std::size_t i = 0, j = 0;
    bool better_than(const Best& o) const {
        if (d != o.d) return d < o.d;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

void check_distance_preconditions(const Codebook& book, const EnumBudget& budget) {
    if (book.codewords.size() < 2)
        throw std::invalid_argument("distance needs at least two codewords");
    if (book.codewords.size() > budget.max_codewords)
        throw BudgetError("codebook of " + std::to_string(book.codewords.size()) +
                          " codewords exceeds distance budget of " +
                          std::to_string(budget.max_codewords) + "; refusing (no sampling fallback)");
}

DistanceResult result_from(const Best& best, std::size_t block_length) {
    DistanceResult r;
    r.min_disagreements = best.d;
    r.arg_i = best.i;
    r.arg_j = best.j;
    r.distance = Rational(static_cast<std::int64_t>(best.d), static_cast<std::int64_t>(block_length));
    return r;
}

} // namespace

DistanceResult min_relative_distance_serial(const Codebook& book, const EnumBudget& budget) {
    check_distance_preconditions(book, budget);
    const std::size_t n = book.codewords.size();
    Best best;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Best cand{disagreements(book.codewords[i], book.codewords[j]), i, j};
            if (cand.better_than(best)) best = cand;
        }
    }
    return result_from(best, book.block_length);
}

DistanceResult min_relative_distance(const Codebook& book, const EnumBudget& budget) {
    check_distance_preconditions(book, budget);
    const std::size_t n = book.codewords.size();
    Best best;
#pragma omp parallel
    {
        Best local;
#pragma omp for schedule(dynamic, 16) nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
                Best cand{disagreements(book.codewords[i], book.codewords[j]),
                          static_cast<std::size_t>(i), j};
                if (cand.better_than(local)) local = cand;
            }
        }
#pragma omp critical
        {
            if (local.better_than(best)) best = local;
        }
    }
    return result_from(best, book.block_length);
}

} // namespace gapforge::ecc
