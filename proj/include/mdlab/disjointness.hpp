#pragma once

// Mobius-weighted Birkhoff averages along skew-product orbits, the
// rational-alpha residue-class reduction, the Davenport polynomial-phase
// probe, and the Birkhoff-irregularity demonstration for Furstenberg flows.
//
// Orbit phases advance incrementally (one rotation per mode per step) and
// re-anchor to the exact closed form every 10^4 steps, so N = 10^7 costs
// 10^7 rotations, not 10^7 map iterations per fiber.

#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/cocycle.hpp"
#include "mdlab/dynamics.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/mobius.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

inline constexpr std::uint64_t kReanchorStride = 10'000;

struct DecayCheckpoint {
    std::uint64_t n = 0;
    Complex partial_average{0.0, 0.0};
    double modulus = 0.0;             // |partial_average|
    double modulus_over_n_log2 = 0.0; // |sum| / (N / log^2 N)
};

struct DecayTrace {
    std::vector<DecayCheckpoint> checkpoints;
    double max_anchor_drift = 0.0;  // worst incremental-vs-closed-form gap seen
};

namespace detail {

// Incremental phase state for <b, T^n x0> along one orbit.
class OrbitPhase {
  public:
    OrbitPhase(const SkewProductSpec& spec, const Observable& b, const TorusPoint& x0)
        : spec_(&spec), b_(&b), x0_(x0), ev_(spec.h(), spec.alpha()) {
        if (static_cast<int>(b.b.size()) > spec.truncation())
            throw domain_error("observable support exceeds the spec truncation");
        const auto& modes = spec.h().modes();
        alpha_d_ = spec.alpha().value();
        for (std::size_t k = 1; k < b_->b.size(); ++k) {
            if (b_->b[k] == 0) continue;
            Fiber f;
            f.k = static_cast<int>(k) + 1;
            f.coeff = b_->b[k];
            f.t0 = frac(x0.coords[0] + spec.fiber_offset(f.k));
            f.cocycle_mod1 = 0.0;
            for (const auto& md : modes) f.phasors.push_back(e_of(frac_qt(md.m, f.t0)));
            fibers_.push_back(std::move(f));
        }
        const auto& rots = ev_.unit_rotations();
        for (std::size_t i = 0; i < modes.size(); ++i)
            rot_.push_back(ev_.mode_exact_resonant(i) ? Complex(1.0, 0.0) : rots[i]);
        const_phase_ = 0.0;
        for (std::size_t k = 0; k < b_->b.size(); ++k)
            const_phase_ += b_->b[k] * x0.coords[k];
        n_ = 0;
        b1_n_alpha_ = 0.0;
    }

    // phase of <b, T^{n+1} x0> after advancing one step.
    double advance() {
        const auto& modes = spec_->h().modes();
        double c0 = spec_->h().c0();
        for (auto& f : fibers_) {
            double hval = c0;
            for (std::size_t i = 0; i < modes.size(); ++i) {
                hval += 2.0 * (modes[i].c.real() * f.phasors[i].real() -
                               modes[i].c.imag() * f.phasors[i].imag());
                f.phasors[i] *= rot_[i];
            }
            f.cocycle_mod1 = frac(f.cocycle_mod1 + hval);
        }
        ++n_;
        int b1 = b_->b.empty() ? 0 : b_->b[0];
        b1_n_alpha_ = frac(b1_n_alpha_ + b1 * alpha_d_);
        if (n_ % kReanchorStride == 0) reanchor();
        double phase = const_phase_ + b1_n_alpha_;
        for (const auto& f : fibers_) phase += f.coeff * f.cocycle_mod1;
        return phase;
    }

    std::uint64_t n() const { return n_; }
    double max_drift() const { return max_drift_; }

    void reanchor() {
        BigInt n(n_);
        std::vector<Complex> g = ev_.geometric_factors(n);
        double nc0 = ev_.frac_n_c0(n);
        for (auto& f : fibers_) {
            double exact = frac(nc0 + ev_.fluct_with_factors(f.t0, g));
            max_drift_ = std::max(max_drift_, nearest_dist(f.cocycle_mod1 - exact));
            f.cocycle_mod1 = exact;
            double tn = frac(f.t0 + spec_->alpha().frac_mul_best(n).phase_d());
            const auto& modes = spec_->h().modes();
            for (std::size_t i = 0; i < modes.size(); ++i)
                f.phasors[i] = e_of(frac_qt(modes[i].m, tn));
        }
        int b1 = b_->b.empty() ? 0 : b_->b[0];
        if (b1 != 0) {
            double exact = frac_qt(b1, spec_->alpha().frac_mul_best(n).value_d());
            max_drift_ = std::max(max_drift_, nearest_dist(b1_n_alpha_ - exact));
            b1_n_alpha_ = exact;
        }
    }

  private:
    struct Fiber {
        int k = 2;
        int coeff = 0;
        double t0 = 0.0;
        double cocycle_mod1 = 0.0;       // S_{h,n}(t0) mod 1
        std::vector<Complex> phasors;    // e(q (t0 + n alpha)) per mode
    };

    const SkewProductSpec* spec_;
    const Observable* b_;
    TorusPoint x0_;
    CocycleEvaluator ev_;
    std::vector<Fiber> fibers_;
    std::vector<Complex> rot_;
    double alpha_d_ = 0.0;
    double const_phase_ = 0.0;
    double b1_n_alpha_ = 0.0;
    std::uint64_t n_ = 0;
    double max_drift_ = 0.0;
};

inline double modulus_over_n_log2(double modulus_sum, std::uint64_t n) {
    if (n < 3) return 0.0;
    double ln = std::log(static_cast<double>(n));
    return modulus_sum / (static_cast<double>(n) / (ln * ln));
}

}  // namespace detail

// Running averages (1/N) sum_{n<=N} mu(n) e(<b, T^n x0>) at the checkpoints.
inline DecayTrace mobius_average(const SkewProductSpec& spec, const Observable& b,
                                 const TorusPoint& x0, const MobiusTable& table,
                                 std::vector<std::uint64_t> checkpoints) {
    std::sort(checkpoints.begin(), checkpoints.end());
    if (checkpoints.empty()) throw domain_error("mobius_average: no checkpoints");
    std::uint64_t maxn = checkpoints.back();
    if (maxn > table.limit())
        throw domain_error("mobius_average: checkpoint beyond the sieve limit");

    detail::OrbitPhase orbit(spec, b, x0);
    KahanSum re, im;
    DecayTrace trace;
    std::size_t ci = 0;
    for (std::uint64_t n = 1; n <= maxn; ++n) {
        double phase = orbit.advance();
        int mu = table.mu(n);
        if (mu != 0) {
            Complex t = e_of(frac(phase));
            re.add(mu * t.real());
            im.add(mu * t.imag());
        }
        while (ci < checkpoints.size() && checkpoints[ci] == n) {
            Complex sum(re.value(), im.value());
            DecayCheckpoint cp;
            cp.n = n;
            cp.partial_average = sum / static_cast<double>(n);
            cp.modulus = std::abs(cp.partial_average);
            cp.modulus_over_n_log2 = detail::modulus_over_n_log2(std::abs(sum), n);
            trace.checkpoints.push_back(cp);
            ++ci;
        }
    }
    trace.max_anchor_drift = orbit.max_drift();
    return trace;
}

struct RationalAlphaSum {
    Complex total{0.0, 0.0};
    std::vector<double> residue_moduli;          // |S_r| per residue class
    std::vector<std::vector<double>> gamma1;     // gamma1[r][fiber-slot]
    std::vector<std::vector<double>> gamma2;
    std::vector<int> fiber_ks;                   // which k each slot refers to
};

// The section-6 reduction for alpha = l/q: split n into residue classes mod
// q; inside a class the cocycle phase is gamma1^(r) (n-r+q)/q + gamma2^(r)
// (n-r)/q, linear in n.  Exact identity with the direct orbit sum.
inline RationalAlphaSum rational_alpha_sum(const SkewProductSpec& spec, const Observable& b,
                                           const TorusPoint& x0, const MobiusTable& table,
                                           std::uint64_t N) {
    if (!spec.alpha().exact_rational())
        throw domain_error("rational_alpha_sum: alpha must be an exact rational");
    BigRat lq = spec.alpha().rational_value();
    BigInt l_big = boost::multiprecision::numerator(lq);
    BigInt q_big = boost::multiprecision::denominator(lq);
    auto q = q_big.convert_to<std::uint64_t>();
    double alpha_d = to_double(lq);
    if (N > table.limit()) throw domain_error("rational_alpha_sum: N beyond the sieve limit");

    RationalAlphaSum out;
    const FourierSeries& h = spec.h();
    int b1 = b.b.empty() ? 0 : b.b[0];
    for (std::size_t k = 1; k < b.b.size(); ++k)
        if (b.b[k] != 0) out.fiber_ks.push_back(static_cast<int>(k) + 1);

    // gamma tables per residue and fiber
    out.gamma1.assign(q, std::vector<double>(out.fiber_ks.size(), 0.0));
    out.gamma2.assign(q, std::vector<double>(out.fiber_ks.size(), 0.0));
    std::vector<double> period_sum(out.fiber_ks.size(), 0.0);  // S_{h,q}(t_k)
    for (std::size_t s = 0; s < out.fiber_ks.size(); ++s) {
        double t0 = frac(x0.coords[0] + spec.fiber_offset(out.fiber_ks[s]));
        std::vector<double> hv(q);
        for (std::uint64_t j = 0; j < q; ++j)
            hv[j] = h.eval(frac(t0 + j * alpha_d));
        for (std::uint64_t r = 0; r < q; ++r) {
            double g1 = 0.0, g2 = 0.0;
            for (std::uint64_t j = 0; j < r; ++j) g1 += hv[j];
            for (std::uint64_t j = r; j < q; ++j) g2 += hv[j];
            out.gamma1[r][s] = g1;
            out.gamma2[r][s] = g2;
        }
        period_sum[s] = out.gamma1[0][s] + out.gamma2[0][s];
    }

    double const_phase = 0.0;
    for (std::size_t k = 0; k < b.b.size(); ++k) const_phase += b.b[k] * x0.coords[k];

    Complex total{0.0, 0.0};
    for (std::uint64_t r = 0; r < q; ++r) {
        // theta = sum_k b_k S_{h,q}(t_k); slope of the per-class linear phase
        double theta = 0.0, offset = const_phase + b1 * frac(r * alpha_d);
        for (std::size_t s = 0; s < out.fiber_ks.size(); ++s) {
            int coeff = b.b[out.fiber_ks[s] - 1];
            theta += coeff * period_sum[s];
            offset += coeff * out.gamma1[r][s];
        }
        auto part = weighted_exp_sum(
            table,
            [&](std::uint64_t n) {
                double m = static_cast<double>((n - r) / q);
                return offset + m * theta;
            },
            N, std::make_pair(r, q));
        out.residue_moduli.push_back(std::abs(part.value));
        total += part.value;
    }
    out.total = total;
    return out;
}

// Partial sums of mu(n) e(P(n)) over a residue class, with the polynomial
// phase advanced by exact finite differences mod 1 (re-anchored from
// 256-bit evaluation every 10^5 terms).
inline DecayTrace davenport_decay_probe(const std::vector<double>& theta_high_to_low,
                                        std::uint64_t residue_a, std::uint64_t residue_q,
                                        const MobiusTable& table,
                                        std::vector<std::uint64_t> checkpoints) {
    if (theta_high_to_low.empty())
        throw domain_error("davenport_decay_probe: need a polynomial of degree >= 1");
    if (residue_q == 0) throw domain_error("davenport_decay_probe: modulus must be positive");
    std::sort(checkpoints.begin(), checkpoints.end());
    std::uint64_t maxn = checkpoints.back();
    if (maxn > table.limit())
        throw domain_error("davenport_decay_probe: checkpoint beyond the sieve limit");
    int deg = static_cast<int>(theta_high_to_low.size());

    // P(n) with n = a + t q, evaluated in 256-bit arithmetic at integer t.
    auto eval_frac = [&](std::uint64_t t) {
        Real256 n = Real256(residue_a) + Real256(t) * Real256(residue_q);
        Real256 acc(0);
        for (double c : theta_high_to_low) acc = acc * n + Real256(c);
        acc *= n;  // P(n) = theta_d n^d + ... + theta_1 n, no constant term
        Real256 f = acc - boost::multiprecision::floor(acc);
        return f.convert_to<double>();
    };
    auto build_diffs = [&](std::uint64_t t0) {
        std::vector<double> row(deg + 1);
        for (int i = 0; i <= deg; ++i) row[i] = eval_frac(t0 + i);
        for (int level = 1; level <= deg; ++level)
            for (int i = deg; i >= level; --i) row[i] = frac(row[i] - row[i - 1]);
        return row;  // row[j] = Delta^j P at t0, mod 1
    };

    std::uint64_t start = (residue_a == 0) ? residue_q : residue_a;
    KahanSum re, im;
    DecayTrace trace;
    std::size_t ci = 0;
    auto record_upto = [&](std::uint64_t boundary) {
        while (ci < checkpoints.size() && checkpoints[ci] <= boundary) {
            Complex sum(re.value(), im.value());
            DecayCheckpoint cp;
            cp.n = checkpoints[ci];
            cp.partial_average = sum / static_cast<double>(checkpoints[ci]);
            cp.modulus = std::abs(cp.partial_average);
            cp.modulus_over_n_log2 = detail::modulus_over_n_log2(std::abs(sum), checkpoints[ci]);
            trace.checkpoints.push_back(cp);
            ++ci;
        }
    };
    std::uint64_t t0 = (start - residue_a) / residue_q;  // n = a + t q
    std::vector<double> diffs = build_diffs(t0);
    std::uint64_t t = t0;
    for (std::uint64_t n = start; n <= maxn; n += residue_q, ++t) {
        if (t > t0 && (t - t0) % 100'000 == 0) diffs = build_diffs(t);
        record_upto(n - 1);  // checkpoints strictly before this term
        double phase = diffs[0];
        int mu = table.mu(n);
        if (mu != 0) {
            Complex z = e_of(phase);
            re.add(mu * z.real());
            im.add(mu * z.imag());
        }
        for (int j = 0; j < deg; ++j) diffs[j] = frac(diffs[j] + diffs[j + 1]);
        record_upto(n);
    }
    record_upto(maxn);
    return trace;
}

struct OscillationReport {
    std::vector<DecayCheckpoint> window;  // plain Birkhoff averages, no mu
    double oscillation = 0.0;             // max pairwise |A_i - A_j|
    std::uint64_t n_lo = 0, n_hi = 0;     // the achieving pair
    std::string label = "demonstration";  // no pass/fail threshold is claimed
};

// Birkhoff averages (1/N) sum f(T^n x0) over the window; reports the
// oscillation diameter.  The irregularity claim has no in-paper construction
// of a witness, so this probe only measures and records.
inline OscillationReport birkhoff_irregularity_probe(const SkewProductSpec& spec,
                                                     const Observable& f, const TorusPoint& x0,
                                                     std::vector<std::uint64_t> window) {
    std::sort(window.begin(), window.end());
    if (window.empty()) throw domain_error("birkhoff probe: empty window");
    detail::OrbitPhase orbit(spec, f, x0);
    KahanSum re, im;
    OscillationReport out;
    std::size_t ci = 0;
    for (std::uint64_t n = 1; n <= window.back(); ++n) {
        double phase = orbit.advance();
        Complex t = e_of(frac(phase));
        re.add(t.real());
        im.add(t.imag());
        while (ci < window.size() && window[ci] == n) {
            DecayCheckpoint cp;
            cp.n = n;
            cp.partial_average = Complex(re.value(), im.value()) / static_cast<double>(n);
            cp.modulus = std::abs(cp.partial_average);
            out.window.push_back(cp);
            ++ci;
        }
    }
    for (std::size_t i = 0; i < out.window.size(); ++i) {
        for (std::size_t j = i + 1; j < out.window.size(); ++j) {
            double d = std::abs(out.window[i].partial_average - out.window[j].partial_average);
            if (d > out.oscillation) {
                out.oscillation = d;
                out.n_lo = out.window[i].n;
                out.n_hi = out.window[j].n;
            }
        }
    }
    return out;
}

// Default checkpoint schedule: powers of 10 from 1e3 up to `limit`.
inline std::vector<std::uint64_t> decade_checkpoints(std::uint64_t limit,
                                                     std::uint64_t from = 1000) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = from; n <= limit; n *= 10) out.push_back(n);
    if (out.empty() || out.back() != limit) out.push_back(limit);
    return out;
}

}  // namespace mdlab
