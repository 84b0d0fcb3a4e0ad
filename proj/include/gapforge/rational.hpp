#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gapforge {

// Exact rational arithmetic on 64-bit numerator/denominator.
// Comparisons cross-multiply in 128 bits, so they never overflow; the
// arithmetic operators throw if a normalized result leaves the int64 range.
// Thresholds (epsilon*m, h^2) are compared through this type so that
// boundary cases are decided exactly, never by floating point.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // always > 0

    Rational() = default;

    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static Rational of(std::int64_t n) { return Rational(n, 1); }

    bool is_zero() const { return num == 0; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // Largest integer <= num/den.
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }

    // Smallest integer >= num/den.
    std::int64_t ceil() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num > 0) ++q;
        return q;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                         static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                         static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num) * b.num,
                         static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
        return from_wide(static_cast<__int128>(a.num) * b.den,
                         static_cast<__int128>(a.den) * b.num);
    }

  private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
        constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }
};

// floor(sqrt(v)) for unsigned 128-bit v, exact.
inline std::uint64_t floor_sqrt_u128(unsigned __int128 v) {
    if (v == 0) return 0;
    auto s = static_cast<std::uint64_t>(std::max(0.0L, std::sqrt(static_cast<long double>(v))));
    while (static_cast<unsigned __int128>(s) * s > v) --s;
    while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= v) ++s;
    return s;
}

// Largest integer s >= 0 with s^2 <= q; q must be nonnegative.
inline std::int64_t floor_sqrt(const Rational& q) {
    if (q.num < 0) throw std::invalid_argument("floor_sqrt: negative argument");
    // s^2 <= num/den  <=>  s^2 * den <= num
    std::uint64_t s = floor_sqrt_u128(static_cast<unsigned __int128>(q.num) / q.den);
    while (static_cast<unsigned __int128>(s) * s * q.den > static_cast<unsigned __int128>(q.num)) --s;
    while (static_cast<unsigned __int128>(s + 1) * (s + 1) * q.den <= static_cast<unsigned __int128>(q.num)) ++s;
    return static_cast<std::int64_t>(s);
}

} // namespace gapforge
