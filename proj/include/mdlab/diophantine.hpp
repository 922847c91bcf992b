#pragma once

// Exact continued-fraction machinery: partial quotients, big-integer
// convergents l_k/q_k, certified nearest-integer distances ||n*alpha||, and
// the two resonance-sum estimators.
//
// alpha is always represented by its convergent table; floating-point
// values are derived from a convergent together with a rigorous error
// bound |alpha - l_m/q_m| < 1/(q_m q_{m+1}).

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mdlab/bigint.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

// ---------------------------------------------------------------------------
// Irrational specifications
// ---------------------------------------------------------------------------

// alpha = (p + sqrt(d)) / q, normalized into [0,1) at construction.
struct QuadraticSurd {
    BigInt p;
    BigInt q;
    BigInt d;
};

// alpha given by a finite list of partial quotients a_1..a_L.  The number
// denoted is exactly the rational l_L/q_L; distances computed against it
// carry error bound zero.
struct ExplicitQuotients {
    std::vector<BigInt> quotients;
};

// a_{k+1} = ceil(q_k^s) for a positive rational exponent s.
struct LiouvilleRule {
    unsigned num = 5;  // s = num/den
    unsigned den = 1;
};

// a_{k+1} = max(1, round(e^{q_k}/q_k)); realizes q_{m+1} ~ e^{q_m}.
struct FurstenbergRule {};

using IrrationalSpec = std::variant<QuadraticSurd, ExplicitQuotients, LiouvilleRule, FurstenbergRule>;

// ---------------------------------------------------------------------------
// Convergent table
// ---------------------------------------------------------------------------

struct ConvergentRow {
    BigInt a;  // partial quotient a_k (a_0 = 0)
    BigInt l;  // numerator of the k-th convergent
    BigInt q;  // denominator of the k-th convergent
};

// Rows k = 0..depth with q_0 = 1, l_0 = 0 and
//   q_{k+1} = a_{k+1} q_k + q_{k-1},   l_{k+1} = a_{k+1} l_k + l_{k-1}.
// q_k is strictly increasing for k >= 1 (q_0 = q_1 = 1 happens when a_1 = 1).
struct ConvergentTable {
    std::vector<ConvergentRow> rows;   // rows[k] = (a_k, l_k, q_k)
    bool depth_limited = false;        // rule expansion stopped at the bit cap
    bool exact_rational = false;       // ExplicitQuotients: alpha == l_last/q_last

    int depth() const { return static_cast<int>(rows.size()) - 1; }
    const BigInt& a(int k) const { return rows.at(k).a; }
    const BigInt& l(int k) const { return rows.at(k).l; }
    const BigInt& q(int k) const { return rows.at(k).q; }
    BigRat convergent(int k) const { return BigRat(rows.at(k).l, rows.at(k).q); }
};

inline constexpr std::size_t kDefaultBitCap = 1'000'000;  // cap on bits of q_k

namespace detail {

// floor((P + sqrt(D)) / Q) for D >= 0 non-square, Q != 0; exact.
inline BigInt floor_surd(const BigInt& P, const BigInt& D, const BigInt& Q) {
    BigInt s = isqrt(D);
    if (Q > 0) {
        // floor((P + floor(sqrt(D)))/Q) == floor((P + sqrt(D))/Q) for Q > 0.
        BigInt num = P + s;
        BigInt f = num / Q;
        if (num < 0 && f * Q != num) --f;
        return f;
    }
    // floor(x/Q) = -floor(x/|Q|) - 1 when x/|Q| is irrational.
    BigInt num = P + s;
    BigInt absQ = -Q;
    BigInt f = num / absQ;
    if (num < 0 && f * absQ != num) --f;
    return -f - 1;
}

struct SurdState {
    BigInt P, D, Q;  // alpha_i = (P + sqrt(D)) / Q with Q | (D - P^2)
};

inline SurdState surd_init(const QuadraticSurd& s) {
    if (s.q == 0) throw domain_error("quadratic surd: q must be nonzero");
    if (s.d <= 0) throw domain_error("quadratic surd: d must be positive");
    if (is_perfect_square(s.d)) throw domain_error("quadratic surd: d is a perfect square");
    // Scale so that Q | (D - P^2).
    BigInt absq = s.q < 0 ? BigInt(-s.q) : s.q;
    SurdState st{s.p * absq, s.d * absq * absq, s.q * absq};
    // Normalize alpha into [0, 1) and consume the a_0 = 0 step, so the next
    // quotient emitted is a_1.
    BigInt a0 = floor_surd(st.P, st.D, st.Q);
    st.P -= a0 * st.Q;
    BigInt P1 = -st.P;
    BigInt Q1 = (st.D - P1 * P1) / st.Q;
    st.P = P1;
    st.Q = Q1;
    return st;
}

inline BigInt surd_next_quotient(SurdState& st) {
    BigInt a = floor_surd(st.P, st.D, st.Q);
    BigInt P1 = a * st.Q - st.P;
    BigInt Q1 = (st.D - P1 * P1) / st.Q;
    st.P = P1;
    st.Q = Q1;
    return a;
}

}  // namespace detail

// Expand the continued fraction of `spec` to `depth` partial quotients.
// The result has rows k = 0..depth (q_0 = 1 included).  Rule-generated
// expansions stop early, with depth_limited set, once the next q_k would
// exceed `bit_cap` bits.
inline ConvergentTable expand(const IrrationalSpec& spec, int depth,
                              std::size_t bit_cap = kDefaultBitCap) {
    if (depth < 1) throw domain_error("expand: depth must be >= 1");
    ConvergentTable t;
    t.rows.push_back({BigInt(0), BigInt(0), BigInt(1)});  // k = 0
    BigInt l_prev = 1, q_prev = 0;                        // k = -1 sentinels

    auto push = [&](const BigInt& a, int k) {
        if (a < 1) {
            std::ostringstream os;
            os << "expand: partial quotient a_" << k << " = " << a << " is not >= 1";
            throw domain_error(os.str());
        }
        const ConvergentRow& last = t.rows.back();
        BigInt l = a * last.l + l_prev;
        BigInt q = a * last.q + q_prev;
        l_prev = last.l;
        q_prev = last.q;
        t.rows.push_back({a, l, q});
    };

    if (const auto* surd = std::get_if<QuadraticSurd>(&spec)) {
        auto st = detail::surd_init(*surd);
        for (int k = 1; k <= depth; ++k) push(detail::surd_next_quotient(st), k);
    } else if (const auto* ex = std::get_if<ExplicitQuotients>(&spec)) {
        if (ex->quotients.empty()) throw domain_error("expand: empty quotient list");
        int n = std::min<int>(depth, static_cast<int>(ex->quotients.size()));
        for (int k = 1; k <= n; ++k) push(ex->quotients[k - 1], k);
        t.exact_rational = true;
        if (n < depth) t.depth_limited = true;
    } else if (const auto* liou = std::get_if<LiouvilleRule>(&spec)) {
        if (liou->num == 0 || liou->den == 0)
            throw domain_error("expand: liouville exponent must be positive");
        for (int k = 1; k <= depth; ++k) {
            const BigInt& qk = t.rows.back().q;
            // a = ceil(q^{num/den}); stop if q_{k} would blow past the cap.
            std::size_t abits = bit_size(qk) * liou->num / liou->den + 2;
            if (abits + bit_size(qk) > bit_cap) {
                t.depth_limited = true;
                break;
            }
            BigInt a = ceil_nth_root(mdlab::pow(qk, liou->num), liou->den);
            if (a < 1) a = 1;
            push(a, k);
        }
    } else if (std::get_if<FurstenbergRule>(&spec)) {
        for (int k = 1; k <= depth; ++k) {
            const BigInt& qk = t.rows.back().q;
            // bits(e^{q_k}/q_k) ~ q_k * log2(e); stop before the cap.
            double abits = to_double(qk) * 1.4426950408889634 - log2_approx(qk == 0 ? BigInt(1) : qk);
            if (!(abits + static_cast<double>(bit_size(qk)) < static_cast<double>(bit_cap))) {
                t.depth_limited = true;
                break;
            }
            if (qk > 170)
                throw precision_error("furstenberg rule: q_k too large for fixed-precision exp");
            Real256 w = boost::multiprecision::exp(Real256(qk)) / Real256(qk) + Real256(0.5);
            BigInt a = w.convert_to<BigInt>();  // trunc == floor for positive values
            if (a < 1) a = 1;
            push(a, k);
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Certified distances
// ---------------------------------------------------------------------------

// ||n*alpha|| as an exact rational evaluated at convergent m, with a rigorous
// enclosure: the true distance lies in [value - error, value + error].
// Numerator/denominator pairs are kept raw (never canonicalized): the
// denominators of deep tables run to 10^5 bits and a gcd there dominates
// everything else.  All comparisons cross-multiply.
struct CertifiedDistance {
    BigInt num, den;          // value = num/den in [0, 1/2]
    BigInt err_num, err_den;  // error bound err_num/err_den; 0/1 when exact

    double value_d() const { return div_to_double(num, den); }
    double error_d() const { return div_to_double(err_num, err_den); }
    bool exact() const { return err_num.is_zero(); }
    bool is_zero() const { return num.is_zero() && exact(); }

    // value - error > a/b, exact.
    bool lower_above(const BigInt& a, const BigInt& b) const {
        return num * err_den * b - err_num * den * b > a * den * err_den;
    }
    // value + error < a/b, exact.
    bool upper_below(const BigInt& a, const BigInt& b) const {
        return num * err_den * b + err_num * den * b < a * den * err_den;
    }
    bool upper_below(double threshold) const {
        auto [tn, td] = dyadic_pair(threshold);
        return upper_below(tn, td);
    }
    // error <= tol * value (relative certification), exact.
    bool relative_error_below(const BigInt& tol_num, const BigInt& tol_den) const {
        return err_num * den * tol_den <= tol_num * num * err_den;
    }
};

// Fractional part of n*alpha with the same enclosure semantics.
struct CertifiedFrac {
    BigInt num, den;          // frac(n l_m/q_m) = num/den in [0, 1)
    BigInt err_num, err_den;

    double value_d() const { return div_to_double(num, den); }
    double error_d() const { return div_to_double(err_num, err_den); }
    bool exact() const { return err_num.is_zero(); }

    // Signed representative in (-1/2, 1/2]: e(phase_d()) == e(frac) but a
    // value just under 1 keeps its (possibly denormal-small) distance to the
    // wrap instead of rounding to 1.0.
    double phase_d() const {
        if (2 * num <= den) return div_to_double(num, den);
        return -div_to_double(den - num, den);
    }
};

namespace detail {

// |alpha - l_m/q_m| scaled by n, as a raw fraction (num, den).
// |alpha - l_m/q_m| < 1/(q_m q_{m+1}); zero for an exact rational table at
// the last row.  At the last row of a truncated expansion q_{m+1} is
// unknown, but alpha still lies strictly between l_m/q_m and the mediant
// (l_m+l_{m-1})/(q_m+q_{m-1}), giving 1/(q_m (q_m + q_{m-1})).
inline std::pair<BigInt, BigInt> convergent_error_bound(const ConvergentTable& t, int m,
                                                        const BigInt& n_abs) {
    if (t.exact_rational && m == t.depth()) return {BigInt(0), BigInt(1)};
    if (m + 1 <= t.depth()) return {n_abs, t.q(m) * t.q(m + 1)};
    if (m == t.depth() && m >= 1) return {n_abs, t.q(m) * (t.q(m) + t.q(m - 1))};
    throw precision_error("convergent error bound needs row m+1");
}

// error bound <= tol (tol as raw fraction), exact cross comparison.
inline bool error_bound_within(const ConvergentTable& t, int m, const BigInt& n_abs,
                               const BigInt& tol_num, const BigInt& tol_den) {
    auto [en, ed] = convergent_error_bound(t, m, n_abs);
    return en * tol_den <= tol_num * ed;
}

}  // namespace detail

inline CertifiedFrac frac_mul(const ConvergentTable& t, const BigInt& n, int m) {
    if (m < 0 || m > t.depth()) throw domain_error("frac_mul: precision index out of range");
    BigInt n_abs = n < 0 ? BigInt(-n) : n;
    auto [en, ed] = detail::convergent_error_bound(t, m, n_abs);
    BigInt r = (n * t.l(m)) % t.q(m);
    if (r < 0) r += t.q(m);
    return {r, t.q(m), en, ed};
}

// ||n * alpha|| via convergent m.  Requires q_m > |n| so the convergent
// pins down which integer is nearest (per the classical error bound); the
// requirement is vacuous for an exact-rational alpha at full depth.
inline CertifiedDistance nearest_distance(const ConvergentTable& t, const BigInt& n, int m) {
    if (n == 0) return {BigInt(0), BigInt(1), BigInt(0), BigInt(1)};
    if (m < 0 || m > t.depth()) throw domain_error("nearest_distance: precision index out of range");
    BigInt n_abs = n < 0 ? BigInt(-n) : n;
    if (!(t.exact_rational && m == t.depth()) && t.q(m) <= n_abs) {
        std::ostringstream os;
        os << "nearest_distance: q_m (m=" << m << ") must exceed |n|; need a deeper table";
        throw precision_error(os.str());
    }
    CertifiedFrac f = frac_mul(t, n, m);
    BigInt g = f.den - f.num;
    return {f.num <= g ? f.num : g, f.den, f.err_num, f.err_den};
}

// ---------------------------------------------------------------------------
// Alpha: a certified real handle backed by a convergent table
// ---------------------------------------------------------------------------

// Wraps an IrrationalSpec and deepens its table on demand until distance
// certifications succeed.  The underlying tables are immutable values; the
// handle itself is a cache and is not safe for concurrent mutation (corpus
// code expands to the needed depth up front before sharing).
class Alpha {
  public:
    explicit Alpha(IrrationalSpec spec, int initial_depth = 32,
                   std::size_t bit_cap = kDefaultBitCap)
        : spec_(std::move(spec)), bit_cap_(bit_cap) {
        table_ = expand(spec_, initial_depth, bit_cap_);
    }

    const ConvergentTable& table() const { return table_; }
    const IrrationalSpec& spec() const { return spec_; }
    bool exact_rational() const { return table_.exact_rational; }

    double value() const { return to_double(table_.convergent(best_m())); }

    // Exact value when alpha is a finite-quotient rational.
    BigRat rational_value() const {
        if (!table_.exact_rational)
            throw domain_error("rational_value: alpha is not an exact rational");
        return table_.convergent(table_.depth());
    }

    // frac(n*alpha) certified to absolute error <= tol (default 2^-75).
    CertifiedFrac frac_mul(const BigInt& n, const BigRat& tol = default_tol()) const {
        BigInt tn = boost::multiprecision::numerator(tol);
        BigInt td = boost::multiprecision::denominator(tol);
        BigInt n_abs = n < 0 ? BigInt(-n) : n;
        if (!certified_cached(n_abs, tn, td)) {
            ensure([&](const ConvergentTable& t) {
                int m = t.depth() - (t.exact_rational ? 0 : 1);
                if (m < 0) return false;
                return detail::error_bound_within(t, m, n_abs, tn, td);
            });
        }
        int m = table_.depth() - (table_.exact_rational ? 0 : 1);
        return mdlab::frac_mul(table_, n, m);
    }

    // ||n*alpha|| certified to absolute error <= tol.
    CertifiedDistance dist(const BigInt& n, const BigRat& tol = default_tol()) const {
        if (n == 0) return {BigInt(0), BigInt(1), BigInt(0), BigInt(1)};
        BigInt tn = boost::multiprecision::numerator(tol);
        BigInt td = boost::multiprecision::denominator(tol);
        BigInt n_abs = n < 0 ? BigInt(-n) : n;
        int m0 = table_.depth() - (table_.exact_rational ? 0 : 1);
        bool range_ok = table_.exact_rational || (m0 >= 0 && table_.q(m0) > n_abs);
        if (!(range_ok && certified_cached(n_abs, tn, td))) {
            ensure([&](const ConvergentTable& t) {
                int m = t.depth() - (t.exact_rational ? 0 : 1);
                if (m < 0) return false;
                if (!t.exact_rational && t.q(m) <= n_abs) return false;
                return detail::error_bound_within(t, m, n_abs, tn, td);
            });
        }
        int m = table_.depth() - (table_.exact_rational ? 0 : 1);
        return nearest_distance(table_, n, m);
    }

    // Best-effort variants: fall back to the deepest available enclosure
    // (mediant bound at the last row) instead of throwing when the table
    // cannot be extended.  Callers must check .error themselves.
    CertifiedFrac frac_mul_best(const BigInt& n, const BigRat& tol = default_tol()) const {
        try {
            return frac_mul(n, tol);
        } catch (const Error&) {
            return mdlab::frac_mul(table_, n, table_.depth());
        }
    }
    CertifiedDistance dist_best(const BigInt& n, const BigRat& tol = default_tol()) const {
        if (n == 0) return {BigInt(0), BigInt(1), BigInt(0), BigInt(1)};
        try {
            return dist(n, tol);
        } catch (const Error&) {
            CertifiedFrac f = mdlab::frac_mul(table_, n, table_.depth());
            BigInt g = f.den - f.num;
            return {f.num <= g ? f.num : g, f.den, f.err_num, f.err_den};
        }
    }

    // Deepen until pred(table) holds; throws a precision error when the
    // spec cannot be expanded further (bit cap or finite quotient list).
    void ensure(const std::function<bool(const ConvergentTable&)>& pred) const {
        if (pred(table_)) return;
        int target = std::max(8, 2 * table_.depth());
        while (true) {
            ConvergentTable bigger = expand(spec_, target, bit_cap_);
            bool exhausted = bigger.depth_limited || bigger.depth() < target;
            bool ok = pred(bigger);
            table_ = std::move(bigger);
            if (ok) return;
            if (exhausted)
                throw precision_error(
                    "alpha: table cannot be extended far enough to certify the request");
            target *= 2;
        }
    }

    static BigRat default_tol() { return BigRat(1, BigInt(1) << 75); }

  private:
    int best_m() const { return table_.depth() - (table_.exact_rational ? 0 : 1); }

    // err(n) <= tol holds iff n_abs * td <= tn * D with D the certification
    // denominator of the current table; D is an expensive product for deep
    // tables, so it is cached per table generation.
    bool certified_cached(const BigInt& n_abs, const BigInt& tn, const BigInt& td) const {
        int m = best_m();
        if (m < 0) return false;
        if (table_.exact_rational) return true;  // error identically zero
        if (cert_cache_depth_ != table_.depth()) {
            auto [en, ed] = detail::convergent_error_bound(table_, m, BigInt(1));
            cert_den_ = ed;
            cert_cache_depth_ = table_.depth();
        }
        return n_abs * td <= tn * cert_den_;
    }

    IrrationalSpec spec_;
    std::size_t bit_cap_;
    mutable ConvergentTable table_;
    mutable BigInt cert_den_{0};
    mutable int cert_cache_depth_ = -1;
};

// Certified zero-tolerance check of (P2): 1/(2 q_{k+1}) < ||q_k alpha|| < 1/q_{k+1}.
// The distance enclosure is tightened (auto-extending the table) until it
// separates strictly from both endpoints, so the comparison is exact.
inline bool p2_certified(const Alpha& alpha, int k) {
    const ConvergentTable& t0 = alpha.table();
    if (k < 1 || k + 1 > t0.depth()) throw domain_error("p2_certified: k out of range");
    BigInt qk = t0.q(k);
    BigInt qk1 = t0.q(k + 1);
    BigRat tol = BigRat(1, 32 * qk1 * qk1);  // well under the (P2) gap scale
    CertifiedDistance d = alpha.dist(qk, tol);
    for (int attempt = 0; attempt < 8; ++attempt) {
        bool above_lo = d.lower_above(1, 2 * qk1);
        bool below_hi = d.upper_below(BigInt(1), qk1);
        if (above_lo && below_hi) return true;
        if (d.exact()) return above_lo && below_hi;
        if (!d.upper_below(1, 2 * qk1) && !above_lo) {
            // enclosure straddles the lower endpoint; tighten and retry
        } else if (!below_hi && d.lower_above(BigInt(1), qk1)) {
            return false;  // certified outside
        } else if (!above_lo && d.upper_below(1, 2 * qk1)) {
            return false;
        }
        tol /= 1024;
        d = alpha.dist(qk, tol);
    }
    throw precision_error("p2_certified: could not separate the enclosure from the endpoints");
}

// ---------------------------------------------------------------------------
// Lemma-style sum estimators
// ---------------------------------------------------------------------------

struct ResonanceSum {
    double sum = 0.0;        // sum over 0 < |q| < q_k of 1/||q alpha||^2
    double ratio = 0.0;      // sum / q_k^2
    double rel_err = 0.0;    // worst certified relative error among terms
};

// Lemma-4.1 ratio: (sum over 0<|q|<q_k of 1/||q alpha||^2) / q_k^2.
// Every ||q alpha|| is certified to relative error < 1e-6 via a convergent
// deep enough that q/(q_m q_{m+1}) < 1e-6 / (2 q_k).
inline ResonanceSum resonance_sum(const ConvergentTable& t, int k,
                                  std::uint64_t enumeration_budget = 100'000'000) {
    if (k < 2 || k > t.depth()) throw domain_error("resonance_sum: k out of range");
    const BigInt& qk = t.q(k);
    if (qk > enumeration_budget)
        throw resource_error("resonance_sum: q_k exceeds the enumeration budget");

    // min ||q alpha|| over 0<q<q_k is ||q_{k-1} alpha|| > 1/(2 q_k), so a
    // uniform certification needs q_m q_{m+1} > 2e6 * q_k^2.  q_m >= q_k
    // keeps every residue q*l_m mod q_m nonzero.
    BigInt need = 2'000'000 * qk * qk;
    int m = -1;
    for (int i = 1; i + 1 <= t.depth(); ++i) {
        if (t.q(i) >= qk && t.q(i) * t.q(i + 1) > need) {
            m = i;
            break;
        }
    }
    if (m < 0 && t.exact_rational && t.q(t.depth()) >= qk) m = t.depth();
    if (m < 0)
        throw precision_error("resonance_sum: table too shallow to certify distances; extend it");

    const BigInt& qm = t.q(m);
    const BigInt lm_mod = ((t.l(m) % qm) + qm) % qm;
    double qm_d = to_double(qm);
    double err_unit = (t.exact_rational && m == t.depth())
                          ? 0.0
                          : 1.0 / (qm_d * to_double(t.q(m + 1)));  // error per unit q

    std::uint64_t qk_u = qk.convert_to<std::uint64_t>();
    KahanSum acc;
    double worst_rel = 0.0;
    if (qm < (BigInt(1) << 62)) {
        std::uint64_t qm_u = qm.convert_to<std::uint64_t>();
        std::uint64_t lm_u = lm_mod.convert_to<std::uint64_t>();
        std::uint64_t r = 0;
        for (std::uint64_t q = 1; q < qk_u; ++q) {
            r += lm_u;
            if (r >= qm_u) r -= qm_u;
            std::uint64_t d = std::min(r, qm_u - r);
            double dist = static_cast<double>(d) / qm_d;
            double rel = err_unit * static_cast<double>(q) / dist;
            worst_rel = std::max(worst_rel, rel);
            acc.add(2.0 / (dist * dist));  // q and -q
        }
    } else {
        BigInt r = 0;
        for (std::uint64_t q = 1; q < qk_u; ++q) {
            r += lm_mod;
            if (r >= qm) r -= qm;
            BigInt d = std::min(r, BigInt(qm - r));
            double dist = to_double(d) / qm_d;
            double rel = err_unit * static_cast<double>(q) / dist;
            worst_rel = std::max(worst_rel, rel);
            acc.add(2.0 / (dist * dist));
        }
    }
    if (worst_rel >= 1e-6)
        throw precision_error("resonance_sum: certification failed (relative error >= 1e-6)");
    double qk_d = to_double(qk);
    return {acc.value(), acc.value() / (qk_d * qk_d), worst_rel};
}

struct TailMinSum {
    double sum = 0.0;         // sum over the (possibly truncated) range
    double comparison = 0.0;  // c / q_k, Lemma 4.2's right-hand side
    bool partial = false;     // range truncated at the term cap
    std::uint64_t terms = 0;  // number of |q| values visited (positive side)
};

// Lemma-4.2 sum: sum over q_k <= |q| < q_{k+1} of (1/q^2) min(1/||q alpha||^2, c^2),
// truncated to `cap` values of q.  Terms where the certified distance interval
// stays below 1/c are clamped to c^2/q^2 exactly, so deep-resonance terms need
// no relative certification.
inline TailMinSum tail_min_sum(const ConvergentTable& t, int k, const BigInt& c,
                               std::uint64_t cap = 10'000'000) {
    if (k < 1 || k + 1 > t.depth()) throw domain_error("tail_min_sum: k out of range");
    if (c < 1 || c > t.q(k)) throw domain_error("tail_min_sum: c must satisfy 1 <= c <= q_k");
    const BigInt& qk = t.q(k);
    const BigInt& qk1 = t.q(k + 1);
    if (bit_size(qk) > 233)  // ~1e70; 1/q^2 would lose all double precision
        throw resource_error("tail_min_sum: q_k too large for double-precision terms");

    BigInt range = qk1 - qk;
    bool partial = false;
    if (range > cap) {
        range = cap;
        partial = true;
    }
    std::uint64_t count = range.convert_to<std::uint64_t>();

    // Certification depth: terms with dist < 1/c are clamped to c^2 exactly,
    // so only distances >= ~1/c need relative certification:
    // err * c = q c / (q_m q_{m+1}) < 1e-6 suffices.
    BigInt qmax = qk + range;
    int m = -1;
    for (int i = 1; i + 1 <= t.depth(); ++i) {
        if (t.q(i) > qmax && t.q(i) * t.q(i + 1) > 2'000'000 * qmax * c) {
            m = i;
            break;
        }
    }
    if (m < 0 && t.exact_rational && t.q(t.depth()) > qmax) m = t.depth();
    if (m < 0)
        throw precision_error("tail_min_sum: table too shallow to certify distances; extend it");

    const BigInt& qm = t.q(m);
    BigInt lm_mod = ((t.l(m) % qm) + qm) % qm;
    auto [eun, eud] = detail::convergent_error_bound(t, m, BigInt(1));
    double c_d = to_double(c);
    double c2 = c_d * c_d;
    double inv_c = 1.0 / c_d;
    double qm_d = to_double(qm);
    double err_unit_d = div_to_double(eun, eud);

    KahanSum acc;
    BigInt r0 = (qk * lm_mod) % qm;
    BigInt r = r0;
    BigInt q = qk;
    for (std::uint64_t i = 0; i < count; ++i) {
        BigInt d = std::min(r, BigInt(qm - r));
        double dist = to_double(d) / qm_d;
        double err = err_unit_d * to_double(q);
        double q_d = to_double(q);
        double term;
        if (dist + err <= inv_c) {
            term = c2 / (q_d * q_d);  // clamp certified
        } else if (dist - err >= inv_c) {
            if (err / dist >= 1e-6)
                throw precision_error("tail_min_sum: certification failed for q = " + q.str());
            term = 1.0 / (dist * dist * q_d * q_d);
        } else {
            // Interval straddles the clamp threshold; both branches agree to
            // within the interval width here, take the min of the two reads.
            term = std::min(c2, 1.0 / (dist * dist)) / (q_d * q_d);
        }
        acc.add(2.0 * term);  // q and -q
        r += lm_mod;
        if (r >= qm) r -= qm;
        ++q;
    }
    double comparison = c_d / to_double(qk);
    return {acc.value(), comparison, partial, count};
}

// ---------------------------------------------------------------------------
// Spec-string parsing shared by the CLI and the corpus
// ---------------------------------------------------------------------------

// Accepted forms: "surd:p,q,d", "quotients:a1,a2,...", "rule:liouville:s",
// "rule:furstenberg".  For rational alpha use "quotients:..." of l/q.
inline IrrationalSpec parse_alpha_spec(const std::string& s) {
    auto split = [](const std::string& str, char sep) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : str) {
            if (ch == sep) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        out.push_back(cur);
        return out;
    };
    if (s.rfind("surd:", 0) == 0) {
        auto parts = split(s.substr(5), ',');
        if (parts.size() != 3) throw config_error("alpha spec: surd:p,q,d expects 3 integers");
        return QuadraticSurd{BigInt(parts[0]), BigInt(parts[1]), BigInt(parts[2])};
    }
    if (s.rfind("quotients:", 0) == 0) {
        auto parts = split(s.substr(10), ',');
        ExplicitQuotients ex;
        for (auto& p : parts) ex.quotients.emplace_back(p);
        return ex;
    }
    if (s.rfind("rule:liouville:", 0) == 0) {
        std::string expo = s.substr(15);
        // Accept an integer or a decimal like "2.5" (interpreted exactly).
        auto dot = expo.find('.');
        unsigned num = 0, den = 1;
        if (dot == std::string::npos) {
            num = static_cast<unsigned>(std::stoul(expo));
        } else {
            std::string frac_part = expo.substr(dot + 1);
            num = static_cast<unsigned>(std::stoul(expo.substr(0, dot) + frac_part));
            for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
            unsigned g = std::gcd(num, den);
            num /= g;
            den /= g;
        }
        if (num == 0) throw config_error("alpha spec: liouville exponent must be positive");
        return LiouvilleRule{num, den};
    }
    if (s == "rule:furstenberg") return FurstenbergRule{};
    throw config_error("alpha spec: unrecognized form '" + s + "'");
}

inline std::string alpha_spec_to_string(const IrrationalSpec& spec) {
    if (const auto* surd = std::get_if<QuadraticSurd>(&spec))
        return "surd:" + surd->p.str() + "," + surd->q.str() + "," + surd->d.str();
    if (const auto* ex = std::get_if<ExplicitQuotients>(&spec)) {
        std::string out = "quotients:";
        for (std::size_t i = 0; i < ex->quotients.size(); ++i) {
            if (i) out += ",";
            out += ex->quotients[i].str();
        }
        return out;
    }
    if (const auto* liou = std::get_if<LiouvilleRule>(&spec)) {
        std::string out = "rule:liouville:" + std::to_string(liou->num);
        if (liou->den != 1) out += "/" + std::to_string(liou->den);
        return out;
    }
    return "rule:furstenberg";
}

}  // namespace mdlab
