#pragma once

// Birkhoff cocycle sums S_{h,n}(t) = sum_{j<n} h(t + j alpha) in two routes:
// literal iteration and the per-mode geometric closed form
//   S_{h,n}(t) = c_0 n + sum_{q != 0} c_q e(qt) (1 - e(q n alpha)) / (1 - e(q alpha)),
// where e(q n alpha) comes from an exact rational reduction of q n alpha
// mod 1.  Also the resonant sets E_tau and M, the coboundary solutions
// psi-tilde / psi, and the truncation h_1.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "mdlab/diophantine.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/fourier.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

inline constexpr double kNearResonanceThreshold = 1e-15;

// S_{h,n}(t) by literal summation of n evaluations (the oracle route).
inline double cocycle_sum_direct(const FourierSeries& h, double t, std::uint64_t n,
                                 const Alpha& alpha) {
    double a = alpha.value();
    KahanSum acc;
    double u = frac(t);
    for (std::uint64_t j = 0; j < n; ++j) {
        acc.add(h.eval(u));
        u = frac(u + a);
    }
    return acc.value();
}

// Closed-form evaluator bound to (h, alpha).  Denominators 1 - e(q alpha)
// are certified at construction; a mode with certified ||q alpha|| below
// the near-resonance threshold is rejected (route it through h_1 instead).
// For exact-rational alpha a mode with q alpha integral is legal and its
// geometric sum degenerates to n; that path is what the rational-alpha
// reduction of the disjointness experiments exercises.
class CocycleEvaluator {
  public:
    CocycleEvaluator(FourierSeries h, const Alpha& alpha)
        : h_(std::move(h)), alpha_(&alpha) {
        const auto& modes = h_.modes();
        inv_den_.resize(modes.size());
        e_qa_.resize(modes.size());
        exact_resonant_.assign(modes.size(), false);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            BigInt q(modes[i].m);
            CertifiedDistance d = alpha.dist_best(q, BigRat(1, BigInt(1) << 90));
            if (d.is_zero()) {
                exact_resonant_[i] = true;  // q alpha integral (rational alpha)
                e_qa_[i] = Complex(1.0, 0.0);
                continue;
            }
            if (d.upper_below(kNearResonanceThreshold))
                throw precision_error("cocycle: mode " + std::to_string(modes[i].m) +
                                      " is resonant (certified ||q alpha|| < 1e-15)");
            auto [tn, td] = dyadic_pair(kNearResonanceThreshold);
            if (!d.lower_above(tn, td))
                throw precision_error("cocycle: mode " + std::to_string(modes[i].m) +
                                      " cannot be separated from the 1e-15 resonance line");
            CertifiedFrac f = alpha.frac_mul_best(q);
            Complex eqa = e_of(f.phase_d());
            e_qa_[i] = eqa;
            inv_den_[i] = 1.0 / (Complex(1.0, 0.0) - eqa);
        }
    }

    const FourierSeries& series() const { return h_; }
    const Alpha& alpha() const { return *alpha_; }

    // G_q(n) = (1 - e(q n alpha)) / (1 - e(q alpha)) per positive mode, in
    // the order of h.modes(); exact-resonant modes report G = n (callers
    // with huge n on rational alpha must stay in range, enforced here).
    std::vector<Complex> geometric_factors(const BigInt& n) const {
        const auto& modes = h_.modes();
        std::vector<Complex> g(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (exact_resonant_[i]) {
                if (bit_size(n) > 52)
                    throw precision_error("cocycle: resonant linear term overflows double");
                g[i] = Complex(to_double(n), 0.0);
                continue;
            }
            CertifiedFrac f = alpha_->frac_mul_best(BigInt(modes[i].m) * n);
            g[i] = (Complex(1.0, 0.0) - e_of(f.phase_d())) * inv_den_[i];
        }
        return g;
    }

    // S_{h,n}(t) - n c_0: the fluctuation part, O(#modes) independent of n.
    double fluct(double t, const BigInt& n) const {
        std::vector<Complex> g = geometric_factors(n);
        return fluct_with_factors(t, g);
    }

    // Same, reusing precomputed geometric factors (hot paths).
    double fluct_with_factors(double t, const std::vector<Complex>& g) const {
        const auto& modes = h_.modes();
        double u = frac(t);
        KahanSum acc;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            Complex term = modes[i].c * e_of(frac_qt(modes[i].m, u)) * g[i];
            acc.add(2.0 * term.real());
        }
        return acc.value();
    }

    // frac(n * c_0), exact: c_0 is a dyadic rational.
    double frac_n_c0(const BigInt& n) const {
        if (h_.c0() == 0.0) return 0.0;
        BigRat c0 = dyadic(h_.c0());
        return to_double(frac_rat(BigRat(n) * c0));
    }

    // S_{h,n}(t) as a plain double; meaningful while |n c_0| stays well
    // inside double range (tests and small-n dynamics).
    double sum(double t, const BigInt& n) const {
        return to_double(n) * h_.c0() + fluct(t, n);
    }

    // e(q alpha) per positive mode (identity for exact-resonant modes).
    const std::vector<Complex>& unit_rotations() const { return e_qa_; }
    const std::vector<Complex>& inverse_denominators() const { return inv_den_; }
    bool mode_exact_resonant(std::size_t i) const { return exact_resonant_[i]; }

    static BigRat dyadic(double x) {
        int e;
        double m = std::frexp(x, &e);
        auto M = static_cast<long long>(std::ldexp(m, 53));
        BigRat r(M);
        int s = e - 53;
        if (s >= 0) r *= BigRat(BigInt(1) << s);
        else r /= BigRat(BigInt(1) << (-s));
        return r;
    }

  private:
    FourierSeries h_;
    const Alpha* alpha_;
    std::vector<Complex> inv_den_;
    std::vector<Complex> e_qa_;
    std::vector<bool> exact_resonant_;
};

// One-shot closed form S_{h,n}(t); n may be any big integer.
inline double cocycle_sum_closed(const FourierSeries& h, double t, const BigInt& n,
                                 const Alpha& alpha) {
    if (n == 0) return 0.0;
    return CocycleEvaluator(h, alpha).sum(t, n);
}

// H_n(t) = S_{h_1,n}(t); H_0 = 0.
inline double H_n_eval(const FourierSeries& h1, double t, const BigInt& n, const Alpha& alpha) {
    if (n == 0) return 0.0;
    return CocycleEvaluator(h1, alpha).sum(t, n);
}

// ---------------------------------------------------------------------------
// Resonant sets E_tau and M
// ---------------------------------------------------------------------------

// Eq. (M) writes multipliers m_k = 1..a_k while (P1) indexes q_{k+1} =
// a_{k+1} q_k + q_{k-1}; the intended range is ambiguous, so both are
// supported and the literal a_k is the default.
enum class MultiplierRange { ak, ak1 };

struct ResonantSets {
    BigRat tau;
    std::vector<int> E;             // k in [2, horizon] with q_{k+1} > q_k^{1/tau + 3}
    std::vector<std::int64_t> M;    // positive members within the mode window (set is +-symmetric)
    bool M_is_finite_within_horizon = false;
    int horizon = 0;
    std::int64_t window = 0;

    bool contains(std::int64_t m) const {
        std::int64_t am = m < 0 ? -m : m;
        return std::binary_search(M.begin(), M.end(), am);
    }
};

namespace detail {

// Exact test of q_{k+1} > q_k^{1/tau + 3} for rational tau = b/a:
// q_{k+1}^b > q_k^{a + 3b}.  Falls back to 256-bit logs when the integer
// powers would be absurdly large.
inline bool resonant_inequality(const BigInt& qk, const BigInt& qk1, const BigRat& tau) {
    BigInt b = boost::multiprecision::numerator(tau);
    BigInt a = boost::multiprecision::denominator(tau);
    if (b <= 0) throw domain_error("resonant sets: tau must be positive");
    BigInt rhs_exp = a + 3 * b;
    if (b * BigInt(bit_size(qk1)) < 2'000'000 && rhs_exp * BigInt(bit_size(qk)) < 2'000'000) {
        return mdlab::pow(qk1, b.convert_to<unsigned>()) >
               mdlab::pow(qk, rhs_exp.convert_to<unsigned>());
    }
    Real256 lhs = Real256(b) * boost::multiprecision::log(Real256(qk1));
    Real256 rhs = Real256(rhs_exp) * boost::multiprecision::log(Real256(qk));
    Real256 margin = (boost::multiprecision::abs(lhs) + boost::multiprecision::abs(rhs)) *
                     Real256(1e-60);
    if (boost::multiprecision::abs(lhs - rhs) <= margin)
        throw precision_error("resonant sets: log comparison too close to decide");
    return lhs > rhs;
}

}  // namespace detail

inline ResonantSets resonant_sets(const ConvergentTable& t, const BigRat& tau, int horizon,
                                  std::int64_t window = kDefaultModeWindow,
                                  MultiplierRange mrange = MultiplierRange::ak) {
    if (tau <= 0) throw domain_error("resonant_sets: tau must be positive");
    if (horizon < 2 || horizon + 1 > t.depth())
        throw domain_error("resonant_sets: horizon must lie within the expanded table");
    ResonantSets out;
    out.tau = tau;
    out.horizon = horizon;
    out.window = window;
    for (int k = 2; k <= horizon; ++k) {
        if (detail::resonant_inequality(t.q(k), t.q(k + 1), tau)) out.E.push_back(k);
    }
    for (int k : out.E) {
        const BigInt& qk = t.q(k);
        if (qk > window) continue;
        BigInt mult = (mrange == MultiplierRange::ak) ? t.a(k) : t.a(k + 1);
        auto qk_i = qk.convert_to<std::int64_t>();
        std::int64_t max_m_window = window / qk_i;
        BigInt mmax = std::min(BigInt(max_m_window), mult);
        for (BigInt m = 1; m <= mmax; ++m)
            out.M.push_back((m * qk_i).convert_to<std::int64_t>());
    }
    std::sort(out.M.begin(), out.M.end());
    out.M.erase(std::unique(out.M.begin(), out.M.end()), out.M.end());
    // "Finite within horizon": no new E element in the trailing stretch of
    // the scanned range (heuristic desk-scale reading of M finite/infinite).
    int margin = std::max(3, horizon / 4);
    out.M_is_finite_within_horizon =
        out.E.empty() || out.E.back() < horizon - margin;
    return out;
}

// ---------------------------------------------------------------------------
// Coboundary solutions
// ---------------------------------------------------------------------------

namespace detail {

// coefficient(m) / (e(m alpha) - 1) with the near-resonance guard.
inline Complex coboundary_coefficient(const Complex& c, std::int64_t m, const Alpha& alpha) {
    CertifiedDistance d = alpha.dist(BigInt(m), BigRat(1, BigInt(1) << 90));
    if (d.upper_below(kNearResonanceThreshold))
        throw precision_error("coboundary: mode " + std::to_string(m) +
                              " has ||m alpha|| < 1e-15; use the h_1/psi route");
    CertifiedFrac f = alpha.frac_mul(BigInt(m));
    Complex den = e_of(f.phase_d()) - Complex(1.0, 0.0);
    return c / den;
}

}  // namespace detail

// psi~(t) = sum_{m != 0} h^(m) e(mt) / (e(m alpha) - 1); the zero mode is
// dropped, so psi~(t+alpha) - psi~(t) = h(t) - h^(0).
inline FourierSeries build_psi_tilde(const FourierSeries& h, const Alpha& alpha) {
    std::vector<FourierSeries::Mode> pos;
    pos.reserve(h.modes().size());
    for (const auto& md : h.modes())
        pos.push_back({md.m, detail::coboundary_coefficient(md.c, md.m, alpha)});
    FourierSeries out(0.0, std::move(pos), DecayTag{0.0, 0.0});
    return out;
}

// h_1 = restriction of h to modes in M and the mean; psi solves
// h - h_1 = psi o R_alpha - psi over the remaining modes.
inline std::pair<FourierSeries, FourierSeries> build_h1_and_psi(const FourierSeries& h,
                                                                const ResonantSets& sets,
                                                                const Alpha& alpha) {
    std::vector<FourierSeries::Mode> h1_modes;
    std::vector<FourierSeries::Mode> psi_modes;
    for (const auto& md : h.modes()) {
        if (sets.contains(md.m)) {
            h1_modes.push_back(md);
        } else {
            psi_modes.push_back({md.m, detail::coboundary_coefficient(md.c, md.m, alpha)});
        }
    }
    FourierSeries h1(h.c0(), std::move(h1_modes), DecayTag{0.0, 0.0});
    FourierSeries psi(0.0, std::move(psi_modes), DecayTag{0.0, 0.0});
    return {std::move(h1), std::move(psi)};
}

}  // namespace mdlab
