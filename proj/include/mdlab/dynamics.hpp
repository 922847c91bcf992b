#pragma once

// The truncated infinite-torus phase space and the maps on it: the skew
// products T (linear fiber phases) and Q (geometric fiber phases), the
// rotation S~, the skew model S (h_1 in place of h), the conjugations
// pi~/pi, the metric d and the Bowen average d-bar_n.

#include <cstdint>
#include <memory>
#include <vector>

#include "mdlab/cocycle.hpp"
#include "mdlab/diophantine.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/fourier.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

inline constexpr int kDefaultTruncation = 40;  // tail weight 2^-40/2 ~ 4.5e-13

struct TorusPoint {
    std::vector<double> coords;  // values in [0,1); coords[0] is x_1

    int truncation() const { return static_cast<int>(coords.size()); }

    static TorusPoint zero(int K) {
        TorusPoint p;
        p.coords.assign(K, 0.0);
        return p;
    }

    void normalize() {
        for (double& c : coords) c = frac(c);
    }
};

enum class Variant {
    TLinear,    // fiber k shifts by h(x_1 + (k-2) beta)
    QGeometric, // fiber k shifts by h(x_1 + beta^{k-2})
    Rotation,   // fiber k shifts by the constant h^(0)
    SModel,     // TLinear with h_1 in place of h
};

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::TLinear: return "T";
        case Variant::QGeometric: return "Q";
        case Variant::Rotation: return "rot";
        case Variant::SModel: return "S";
    }
    return "?";
}

// Immutable description of one skew product; fiber phase offsets are
// certified at construction (frac((k-2) beta), or frac(beta^{k-2}) for Q,
// reduced to absolute error < 1e-15 for every k <= K).
class SkewProductSpec {
  public:
    SkewProductSpec(Variant variant, Alpha alpha, Alpha beta, FourierSeries h, int truncation)
        : variant_(variant),
          alpha_(std::move(alpha)),
          beta_(std::move(beta)),
          h_(std::move(h)),
          K_(truncation) {
        if (K_ < 2) throw domain_error("skew product: truncation K must be >= 2");
        fiber_offset_.assign(K_ + 1, 0.0);
        for (int k = 2; k <= K_; ++k) fiber_offset_[k] = compute_offset(k);
    }

    Variant variant() const { return variant_; }
    const Alpha& alpha() const { return alpha_; }
    const Alpha& beta() const { return beta_; }
    const FourierSeries& h() const { return h_; }
    int truncation() const { return K_; }

    // phase offset of fiber k (k >= 2): (k-2) beta or beta^{k-2}, mod 1.
    double fiber_offset(int k) const { return fiber_offset_.at(k); }

  private:
    double compute_offset(int k) const {
        if (variant_ == Variant::Rotation) return 0.0;
        if (variant_ == Variant::QGeometric) {
            // frac(beta^{k-2}) from an exact rational power of a convergent;
            // the beta-table is deepened until the propagated error sits
            // below 1e-15.
            int j = k - 2;
            if (j == 0) return 0.0;
            beta_.ensure([&](const ConvergentTable& t) {
                int m = t.depth() - (t.exact_rational ? 0 : 1);
                if (m < 1) return false;
                auto [en, ed] = detail::convergent_error_bound(t, m, BigInt(1));
                double eps = div_to_double(en, ed);
                double b = std::max(1.0, to_double(t.convergent(m)) + eps);
                double deriv = j * std::pow(b, j - 1);
                return eps * deriv < 1e-15;
            });
            const ConvergentTable& t = beta_.table();
            int m = t.depth() - (t.exact_rational ? 0 : 1);
            BigRat b = t.convergent(m);
            BigRat p = 1;
            for (int i = 0; i < j; ++i) p *= b;
            return to_double(frac_rat(p));
        }
        // linear phases (k-2) beta
        CertifiedFrac f = beta_.frac_mul(BigInt(k - 2));
        return f.value_d();
    }

    Variant variant_;
    Alpha alpha_;
    Alpha beta_;
    FourierSeries h_;
    int K_;
    std::vector<double> fiber_offset_;
};

inline void check_shapes(const SkewProductSpec& spec, const TorusPoint& x) {
    if (x.truncation() != spec.truncation())
        throw domain_error("torus point truncation does not match the spec");
}

// One application of the variant's formula; coordinates reduced mod 1.
inline TorusPoint step(const SkewProductSpec& spec, const TorusPoint& x) {
    check_shapes(spec, x);
    TorusPoint y = x;
    double a = spec.alpha().value();
    y.coords[0] = frac(x.coords[0] + a);
    if (spec.variant() == Variant::Rotation) {
        double c0 = spec.h().c0();
        for (int k = 2; k <= spec.truncation(); ++k)
            y.coords[k - 1] = frac(x.coords[k - 1] + c0);
        return y;
    }
    for (int k = 2; k <= spec.truncation(); ++k) {
        double t = frac(x.coords[0] + spec.fiber_offset(k));
        y.coords[k - 1] = frac(x.coords[k - 1] + spec.h().eval(t));
    }
    return y;
}

// T^n by closed-form cocycle sums: y_1 = x_1 + n alpha (certified) and
// y_k = x_k + S_{h,n}(x_1 + offset_k), each in O(#modes).
inline TorusPoint power(const SkewProductSpec& spec, const TorusPoint& x, const BigInt& n) {
    check_shapes(spec, x);
    if (n < 0) throw domain_error("power: n must be >= 0");
    if (n == 0) return x;
    TorusPoint y = x;
    CertifiedFrac na = spec.alpha().frac_mul_best(n);
    y.coords[0] = frac(x.coords[0] + na.phase_d());
    if (spec.variant() == Variant::Rotation) {
        BigRat c0 = CocycleEvaluator::dyadic(spec.h().c0());
        double shift = to_double(frac_rat(BigRat(n) * c0));
        for (int k = 2; k <= spec.truncation(); ++k)
            y.coords[k - 1] = frac(x.coords[k - 1] + shift);
        return y;
    }
    CocycleEvaluator ev(spec.h(), spec.alpha());
    double nc0 = ev.frac_n_c0(n);
    std::vector<Complex> g = ev.geometric_factors(n);
    for (int k = 2; k <= spec.truncation(); ++k) {
        double t = frac(x.coords[0] + spec.fiber_offset(k));
        y.coords[k - 1] = frac(x.coords[k - 1] + nc0 + ev.fluct_with_factors(t, g));
    }
    return y;
}

// d(x,y) = sum_k 2^{-k} ||x_k - y_k|| truncated at K, plus the tail bound
// 2^{-K} * (1/2) that the truncation discards.
struct MetricValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

inline MetricValue metric(const TorusPoint& x, const TorusPoint& y) {
    if (x.truncation() != y.truncation())
        throw domain_error("metric: truncation mismatch");
    double acc = 0.0;
    double w = 0.5;
    for (int k = 1; k <= x.truncation(); ++k) {
        acc += w * torus_dist01(x.coords[k - 1], y.coords[k - 1]);
        w *= 0.5;
    }
    return {acc, w};  // after the loop w = 2^{-K-1} = 2^{-K} * (1/2)
}

// d-bar_n(x,y) = (1/n) sum_{j<n} d(T^j x, T^j y), sequential stepping with
// power() re-anchoring every 4096 iterates to keep drift bounded.
inline double bowen_metric(const SkewProductSpec& spec, const TorusPoint& x, const TorusPoint& y,
                           std::uint64_t n) {
    if (n < 1) throw domain_error("bowen_metric: n must be >= 1");
    KahanSum acc;
    TorusPoint xj = x, yj = y;
    for (std::uint64_t j = 0; j < n; ++j) {
        if (j > 0 && j % 4096 == 0) {
            xj = power(spec, x, BigInt(j));
            yj = power(spec, y, BigInt(j));
        }
        acc.add(metric(xj, yj).value);
        xj = step(spec, xj);
        yj = step(spec, yj);
    }
    return acc.value() / static_cast<double>(n);
}

// The fiber shift pi of sections 7.1/7.2:
//   pi(x)   = (x_1, x_2 - psi(x_1), ..., x_k - psi(x_1 + (k-2) beta), ...)
// sign = -1 applies pi, +1 applies pi^{-1}.
inline TorusPoint apply_pi(const SkewProductSpec& spec, const FourierSeries& psi,
                           const TorusPoint& x, int sign) {
    check_shapes(spec, x);
    TorusPoint y = x;
    for (int k = 2; k <= spec.truncation(); ++k) {
        double t = frac(x.coords[0] + spec.fiber_offset(k));
        y.coords[k - 1] = frac(x.coords[k - 1] + sign * psi.eval(t));
    }
    return y;
}

// d( pi^{-1}(inner(pi(x))), outer(x) ): the pointwise conjugation defect.
inline double conjugate_check(const SkewProductSpec& outer, const SkewProductSpec& inner,
                              const FourierSeries& psi, const TorusPoint& x) {
    TorusPoint lhs = apply_pi(outer, psi, x, -1);
    lhs = step(inner, lhs);
    lhs = apply_pi(outer, psi, lhs, +1);
    TorusPoint rhs = step(outer, x);
    return metric(lhs, rhs).value;
}

// Observable f(x) = e(<b, x>) with finitely supported integer b.
struct Observable {
    std::vector<int> b;  // b[0] multiplies x_1

    double phase(const TorusPoint& x) const {
        if (static_cast<int>(b.size()) > x.truncation())
            throw domain_error("observable support exceeds the point truncation");
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) acc += b[i] * x.coords[i];
        return acc;
    }
    Complex eval(const TorusPoint& x) const { return e_of(frac(phase(x))); }
};

// Deterministic sampler on the truncated torus (Lebesgue product).
inline TorusPoint random_point(std::mt19937_64& rng, int K, int nonzero_coords = -1) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    TorusPoint p = TorusPoint::zero(K);
    int n = nonzero_coords < 0 ? K : std::min(nonzero_coords, K);
    for (int i = 0; i < n; ++i) p.coords[i] = uni(rng);
    return p;
}

}  // namespace mdlab
