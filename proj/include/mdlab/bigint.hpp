#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "mdlab/errors.hpp"

namespace mdlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ~256-bit binary float for the few places where exact rationals are
// overkill but double is not enough (log comparisons, beta powers,
// polynomial phase anchors).
using Real256 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<78>>;

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const BigRat& v) { return v.convert_to<double>(); }

// Unevaluated boost expression templates (e.g. q*q) resolve through their
// declared result type.
template <class Tag, class A1, class A2, class A3, class A4>
inline double to_double(const boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>& e) {
    using R = typename boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>::result_type;
    return R(e).template convert_to<double>();
}

inline std::size_t bit_size(const BigInt& v) {
    return v.is_zero() ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

inline BigInt pow(BigInt base, unsigned exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

// Floor of v (rational) as integer.
inline BigInt floor_rat(const BigRat& v) {
    BigInt n = boost::multiprecision::numerator(v);
    BigInt d = boost::multiprecision::denominator(v);  // always > 0
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

// v - floor(v), exact, in [0, 1).
inline BigRat frac_rat(const BigRat& v) { return v - BigRat(floor_rat(v)); }

// Nearest-integer distance of an exact rational, in [0, 1/2].
inline BigRat nearest_int_dist(const BigRat& v) {
    BigRat f = frac_rat(v);
    BigRat g = 1 - f;
    return f <= g ? f : g;
}

// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw domain_error("isqrt of negative value");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt r = isqrt(n);
    return r * r == n;
}

// Smallest a >= 0 with a^k >= n  (ceil of the k-th root), n >= 0, k >= 1.
inline BigInt ceil_nth_root(const BigInt& n, unsigned k) {
    if (n <= 0) return 0;
    if (k == 1) return n;
    // Newton iteration for floor root, then adjust.
    std::size_t bits = bit_size(n);
    BigInt x = BigInt(1) << (bits / k + 1);
    while (true) {
        BigInt xk1 = pow(x, k - 1);
        BigInt next = ((k - 1) * x + n / xk1) / k;
        if (next >= x) break;
        x = next;
    }
    while (pow(x, k) > n) --x;       // x = floor root
    if (pow(x, k) < n) ++x;          // ceil
    return x;
}

// log2 of a positive big integer, accurate to ~1e-12 (double mantissa from
// the top bits plus the exponent).
inline double log2_approx(const BigInt& v) {
    if (v <= 0) throw domain_error("log2 of non-positive value");
    std::size_t bits = bit_size(v);
    if (bits <= 62) return std::log2(v.convert_to<double>());
    BigInt top = v >> (bits - 62);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 62);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

// num/den as double without canonicalizing (cpp_rational's gcd is
// prohibitive for the 10^5-bit denominators of deep convergent tables).
// Both operands are truncated to 62 bits with a tracked exponent; the
// result is correct to ~2^-60 relative and saturates to 0/inf gracefully.
inline double div_to_double(const BigInt& num, const BigInt& den) {
    if (num.is_zero()) return 0.0;
    if (den.is_zero()) throw domain_error("div_to_double: zero denominator");
    bool neg = (num < 0) != (den < 0);
    BigInt n = boost::multiprecision::abs(num);
    BigInt d = boost::multiprecision::abs(den);
    long ns = static_cast<long>(bit_size(n)) - 62;
    long ds = static_cast<long>(bit_size(d)) - 62;
    if (ns > 0) n >>= ns; else ns = 0;
    if (ds > 0) d >>= ds; else ds = 0;
    double v = std::ldexp(n.convert_to<double>() / d.convert_to<double>(),
                          static_cast<int>(ns - ds));  // ldexp saturates to 0/inf itself
    return neg ? -v : v;
}

// Exact dyadic decomposition of a double: x = num / 2^shift.
inline std::pair<BigInt, BigInt> dyadic_pair(double x) {
    if (x == 0.0) return {BigInt(0), BigInt(1)};
    int e;
    double m = std::frexp(x, &e);
    auto M = static_cast<long long>(std::ldexp(m, 53));
    int s = 53 - e;
    if (s >= 0) return {BigInt(M), BigInt(1) << s};
    return {BigInt(M) << (-s), BigInt(1)};
}

}  // namespace mdlab
