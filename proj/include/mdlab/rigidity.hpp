#pragma once

// The rigidity sequence r_n = l_n q_n: Dirichlet multipliers l_n, the
// quadrature of the return integral int d(T^{r_n} x, x)^2 dx_1 against its
// mode-by-mode analytic bound, and the PR-rigidity sum over |j| <= r_n^delta.

#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/cocycle.hpp"
#include "mdlab/diophantine.hpp"
#include "mdlab/dynamics.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

struct RigidityParams {
    double epsilon = 1.0;
    double gamma() const { return epsilon / 10.0; }    // Dirichlet exponent
    double lambda() const { return epsilon / 100.0; }  // decay exponent
    double delta() const { return epsilon / 400.0; }   // PR window exponent
};

namespace detail {

// q_n^x as Real256 (log route; q_n may be enormous).
inline Real256 real_pow(const BigInt& q, double x) {
    return boost::multiprecision::exp(Real256(x) * boost::multiprecision::log(Real256(q)));
}

}  // namespace detail

// Smallest l in [1, ceil(q_n^gamma)] with ||c0 l q_n|| < q_n^{-gamma}.
// theta = frac(c0 q_n) is an exact dyadic rational, so the search runs on
// exact arithmetic: brute force when the range is small, otherwise the
// classical best-approximation property of theta's own convergents (for
// l < q_{j+1}(theta), ||l theta|| >= ||q_j(theta) theta||, so the minimal
// l landing under the threshold is a convergent denominator).
inline BigInt dirichlet_multiplier_for(const BigInt& qn, double c0, double gamma) {
    if (gamma <= 0.0) throw domain_error("dirichlet_multiplier: gamma must be positive");
    if (c0 == 0.0) return 1;

    auto [cn, cd] = dyadic_pair(c0);  // c0 = cn / cd exactly, cd = 2^s
    BigInt theta_num = ((cn * qn) % cd + cd) % cd;  // frac(c0 q_n) = theta_num / cd
    if (theta_num.is_zero()) return 1;
    BigInt g = boost::multiprecision::gcd(theta_num, cd);
    BigInt A = theta_num / g, B = cd / g;

    Real256 thr = 1 / detail::real_pow(qn, gamma);
    Real256 Br(B);
    auto dist_ok = [&](const BigInt& dist_num) {  // ||l theta|| = dist_num / B < thr ?
        return Real256(dist_num) < thr * Br;
    };
    Real256 lmax_r = detail::real_pow(qn, gamma);
    BigInt lmax = boost::multiprecision::ceil(lmax_r).convert_to<BigInt>();
    if (lmax < 1) lmax = 1;

    if (lmax <= 1'000'000) {
        BigInt r = 0;
        for (BigInt l = 1; l <= lmax; ++l) {
            r += A;
            if (r >= B) r -= B;
            BigInt d = std::min(r, BigInt(B - r));
            if (dist_ok(d)) return l;
        }
        throw assertion_error("dirichlet_multiplier: no multiplier found below q_n^gamma "
                              "(contradicts Dirichlet's theorem)");
    }

    // Convergents of A/B by the Euclidean algorithm; probe l = 1 first
    // (||theta|| itself may already clear the threshold).
    if (dist_ok(std::min(A, BigInt(B - A)))) return 1;
    BigInt a0 = A / B;  // = 0 since A < B
    BigInt num = A % B, den = B;
    BigInt p_prev = 1, p_cur = a0;  // p_{-1}, p_0
    BigInt q_prev = 0, q_cur = 1;
    while (true) {
        if (num.is_zero())
            throw assertion_error("dirichlet_multiplier: exact hit beyond the search range");
        BigInt a = den / num;
        BigInt rem = den % num;
        BigInt p_next = a * p_cur + p_prev;
        BigInt q_next = a * q_cur + q_prev;
        // dist at denominator q_next: |q_next A - p_next B| / B
        BigInt dist_num = boost::multiprecision::abs(q_next * A - p_next * B);
        if (q_next > lmax)
            throw assertion_error("dirichlet_multiplier: no convergent below q_n^gamma "
                                  "(contradicts Dirichlet's theorem)");
        if (dist_ok(dist_num)) return q_next;
        p_prev = p_cur; p_cur = p_next;
        q_prev = q_cur; q_cur = q_next;
        den = num; num = rem;
    }
}

inline BigInt dirichlet_multiplier(const ConvergentTable& t, int n, double c0, double gamma) {
    if (n < 0 || n > t.depth()) throw domain_error("dirichlet_multiplier: n out of range");
    return dirichlet_multiplier_for(t.q(n), c0, gamma);
}

struct RigidityIntegral {
    double integral = 0.0;       // quadrature of int d(T^r x, x)^2 dx_1
    double bound_i2 = 0.0;       // 0.5||r a||^2 + ||c0 r||^2 + sum |c_q G_q(r)|^2
    double term_r_alpha2 = 0.0;  // ||r alpha||^2
    double term_c0_r2 = 0.0;     // ||c0 r||^2
    double term_low_modes = 0.0;   // sum over 0 < |q| < split of |c_q G_q|^2
    double term_high_modes = 0.0;  // sum over |q| >= split of |c_q G_q|^2
    double richardson_rel = 0.0;   // relative gap between N and 2N quadratures
    bool richardson_ok = true;
};

// One-dimensional composite midpoint quadrature of d(T^r x, x)^2 over x_1
// (the integrand depends on x only through x_1: the base difference is the
// constant ||r alpha|| and every fiber increment is an x_1-function).
inline RigidityIntegral rigidity_integral(const SkewProductSpec& spec, const BigInt& r,
                                          int quadrature, double lambda,
                                          const BigInt& mode_split = 0) {
    if (quadrature < (1 << 10)) throw config_error("rigidity_integral: need >= 2^10 points");
    if (spec.variant() != Variant::TLinear && spec.variant() != Variant::SModel)
        throw domain_error("rigidity_integral: defined for the T-family");
    // K_{r,lambda} condition: 2^{-2K} < r^{-lambda}
    int K = spec.truncation();
    if (2.0 * K * std::log(2.0) <= lambda * std::log(2.0) * log2_approx(r))
        throw config_error("rigidity_integral: truncation K violates 2^{-2K} < r^{-lambda}; "
                           "raise K");

    const FourierSeries& h = spec.h();
    CocycleEvaluator ev(h, spec.alpha());
    std::vector<Complex> g = ev.geometric_factors(r);
    const auto& modes = h.modes();
    std::vector<Complex> w(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) w[i] = modes[i].c * g[i];

    RigidityIntegral out;
    CertifiedDistance ra = spec.alpha().dist(r);
    double ra_d = ra.value_d();
    out.term_r_alpha2 = ra_d * ra_d;
    BigRat c0r = BigRat(r) * CocycleEvaluator::dyadic(h.c0());
    double c0r_dist = to_double(nearest_int_dist(c0r));
    out.term_c0_r2 = c0r_dist * c0r_dist;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double a2 = std::norm(w[i]);
        if (mode_split > 0 && BigInt(modes[i].m) < mode_split) out.term_low_modes += 2.0 * a2;
        else out.term_high_modes += 2.0 * a2;
    }
    out.bound_i2 = 0.5 * out.term_r_alpha2 + out.term_c0_r2 + out.term_low_modes +
                   out.term_high_modes;

    double nc0 = ev.frac_n_c0(r);
    auto quad = [&](int N) {
        // per-fiber rotating phasors over the uniform grid
        int K_ = spec.truncation();
        std::vector<Complex> ph((K_ - 1) * modes.size());
        std::vector<Complex> rot(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i)
            rot[i] = e_of(frac_qt(modes[i].m, 1.0 / N));
        double x0 = 0.5 / N;
        for (int k = 2; k <= K_; ++k) {
            double off = frac(x0 + spec.fiber_offset(k));
            for (std::size_t i = 0; i < modes.size(); ++i)
                ph[(k - 2) * modes.size() + i] = e_of(frac_qt(modes[i].m, off));
        }
        KahanSum acc;
        for (int p = 0; p < N; ++p) {
            double d = 0.5 * ra_d;
            double wgt = 0.25;
            for (int k = 2; k <= K_; ++k) {
                double fl = 0.0;
                Complex* row = &ph[(k - 2) * modes.size()];
                for (std::size_t i = 0; i < modes.size(); ++i) {
                    fl += 2.0 * (w[i].real() * row[i].real() - w[i].imag() * row[i].imag());
                    row[i] *= rot[i];
                }
                d += wgt * nearest_dist(nc0 + fl);
                wgt *= 0.5;
            }
            acc.add(d * d);
        }
        return acc.value() / N;
    };
    double coarse = quad(quadrature);
    double fine = quad(2 * quadrature);
    out.integral = fine;
    out.richardson_rel = std::abs(coarse - fine) / std::max(std::abs(fine), 1e-300);
    out.richardson_ok = out.richardson_rel <= 1e-4 || std::abs(coarse - fine) < 1e-18;
    return out;
}

struct RigidityRow {
    int n = 0;
    BigInt q_n, l_n, r_n;
    double integral = 0.0;
    double bound_i2 = 0.0;
    double r_pow_neg_lambda = 0.0;
    RigidityIntegral detail;
    bool verdict = false;  // integral <= bound_i2 up to quadrature slack
};

struct RigiditySequence {
    std::vector<RigidityRow> rows;
    bool case2 = false;               // some q_{n+1} >= q_n^2 triggered the subsequence
    std::vector<int> indices;         // the n used (subsequence when case2)
    double fitted_constant = 0.0;     // max integral / r^{-lambda}
    std::string status;               // "complete" or a depth-limited note
};

// Rows along r_n = l_n q_n; when the Case-2 condition q_{n+1} >= q_n^2
// triggers (anywhere, for q_n >= 2), rows are taken along exactly those
// indices, mirroring the paper's passage to the subsequence.
inline RigiditySequence build_rigidity_sequence(const SkewProductSpec& spec,
                                                const RigidityParams& params, int depth,
                                                int quadrature = 1 << 13) {
    const Alpha& alpha = spec.alpha();
    if (alpha.exact_rational())
        throw domain_error("rigidity: alpha must be irrational (no rigidity sequence otherwise)");
    if (spec.h().tag().exponent <= 1.0 && !spec.h().modes().empty())
        throw domain_error("rigidity: h must carry a decay tag with exponent > 1");
    try {
        alpha.ensure([&](const ConvergentTable& t) { return t.depth() >= depth + 2; });
    } catch (const Error&) {
        // depth-limited expansion; use what exists
    }
    const ConvergentTable& t = alpha.table();

    RigiditySequence out;
    std::vector<int> candidates, triggers;
    for (int n = 1; n + 1 <= t.depth(); ++n) {
        if (t.q(n) < 2) continue;
        candidates.push_back(n);
        if (t.q(n + 1) >= t.q(n) * t.q(n)) triggers.push_back(n);
    }
    if (candidates.empty()) throw domain_error("rigidity: table too shallow");
    // Case 1 reads "q_{n+1} < q_n^2 for all sufficiently large n": an early
    // accidental trigger (sqrt(2)-1 has q_2 = 5 >= q_1^2 = 4) does not count.
    // Case 2 holds when triggers persist into the tail of the scanned range.
    int tail_start = candidates[candidates.size() / 2];
    out.case2 = !triggers.empty() && triggers.back() >= tail_start;
    out.indices = out.case2 ? triggers : candidates;
    if (static_cast<int>(out.indices.size()) > depth) out.indices.resize(depth);
    out.status = (static_cast<int>(out.indices.size()) < depth)
                     ? "partial: convergent table depth-limited"
                     : "complete";

    double gamma = params.gamma();
    double lambda = params.lambda();
    BigInt prev_r = 0;
    for (int n : out.indices) {
        RigidityRow row;
        row.n = n;
        row.q_n = t.q(n);
        row.l_n = dirichlet_multiplier(t, n, spec.h().c0(), gamma);
        row.r_n = row.l_n * row.q_n;
        if (row.r_n <= prev_r) continue;  // keep r_n strictly increasing
        prev_r = row.r_n;

        // Eq.-(i21)/(i22) chain, certified:
        //   1 <= l_n <= ceil(q_n^gamma), ||c0 l_n q_n|| < q_n^{-gamma},
        //   ||r_n alpha|| <= l_n ||q_n alpha|| < q_n^gamma / q_{n+1}.
        Real256 qg = detail::real_pow(row.q_n, gamma);
        if (row.l_n < 1 || Real256(row.l_n) > boost::multiprecision::ceil(qg))
            throw assertion_error("rigidity: multiplier outside [1, q_n^gamma]");
        if (spec.h().c0() != 0.0) {
            BigRat c0r = BigRat(row.r_n) * CocycleEvaluator::dyadic(spec.h().c0());
            Real256 dist(to_double(nearest_int_dist(c0r)));
            if (!(dist < 1 / qg))
                throw assertion_error("rigidity: ||c0 l_n q_n|| >= q_n^{-gamma}");
        }
        CertifiedDistance dr = alpha.dist(row.r_n);
        CertifiedDistance dq = alpha.dist(row.q_n);
        double lq = to_double(row.l_n) * dq.value_d();
        if (dr.value_d() > lq * (1.0 + 1e-9) + dr.error_d() + 1e-300)
            throw assertion_error("rigidity: ||r_n alpha|| > l_n ||q_n alpha||");
        if (!(Real256(lq) < qg / Real256(t.q(n + 1)) * Real256(1.0 + 1e-9)))
            throw assertion_error("rigidity: l_n ||q_n alpha|| >= q_n^gamma / q_{n+1}");

        RigidityIntegral ri = rigidity_integral(spec, row.r_n, quadrature, lambda, row.q_n);
        if (ri.integral == 0.0 && ri.bound_i2 < 1e-300) {
            // beyond double range; further rows carry no information
            out.status = "halted: integral underflows double at n=" + std::to_string(n);
            break;
        }
        row.integral = ri.integral;
        row.bound_i2 = ri.bound_i2;
        row.detail = ri;
        row.r_pow_neg_lambda = (1 / detail::real_pow(row.r_n, lambda)).convert_to<double>();
        row.verdict = row.integral <= row.bound_i2 * (1.0 + 2e-4) + 1e-18;
        if (row.r_pow_neg_lambda > 0)
            out.fitted_constant = std::max(out.fitted_constant,
                                           row.integral / row.r_pow_neg_lambda);
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ||f o T^m - f||^2_{L^2} for f = e(<b, x>), with nu reduced to Lebesgue in
// x_1 (all integrands depend on x only through x_1).  Signed m: negative
// iterates go through the inverse map x_1 - |m| alpha with subtracted
// cocycle sums.
inline double observable_shift_norm2(const SkewProductSpec& spec, const Observable& f,
                                     const BigInt& m_signed, int samples) {
    if (spec.variant() != Variant::TLinear && spec.variant() != Variant::SModel)
        throw domain_error("observable_shift_norm2: defined for the T-family");
    bool all_zero = true;
    for (int b : f.b) all_zero &= (b == 0);
    if (all_zero || m_signed == 0) return 0.0;

    BigInt m = m_signed < 0 ? BigInt(-m_signed) : m_signed;
    int sgn = m_signed < 0 ? -1 : 1;
    const FourierSeries& h = spec.h();
    CocycleEvaluator ev(h, spec.alpha());
    std::vector<Complex> g = ev.geometric_factors(m);
    double nc0 = ev.frac_n_c0(m);
    double ma = spec.alpha().frac_mul(m).phase_d();
    int b1 = f.b.empty() ? 0 : f.b[0];

    KahanSum acc;
    for (int p = 0; p < samples; ++p) {
        double x1 = (p + 0.5) / samples;
        double base = x1;
        if (sgn < 0) base = frac(x1 - ma);  // x_1 of the earliest point in the block
        double delta = b1 * (sgn > 0 ? ma : -ma);
        for (std::size_t k = 1; k < f.b.size(); ++k) {
            if (f.b[k] == 0) continue;
            double t = frac(base + spec.fiber_offset(static_cast<int>(k) + 1));
            double s = nc0 + ev.fluct_with_factors(t, g);
            delta += f.b[k] * (sgn > 0 ? s : -s);
        }
        double sn = std::sin(M_PI * frac(delta));
        acc.add(4.0 * sn * sn);
    }
    return acc.value() / samples;
}

struct PrRigiditySum {
    double sum = 0.0;
    BigInt jmax;               // floor(r_n^delta)
    bool truncated = false;    // jmax capped at the summand budget
    std::vector<double> terms; // norm^2 at j = 1..jmax (negative side equal by symmetry is
                               // computed separately and added)
};

// Eq.-(PRr) sum over |j| <= r_n^delta of ||f o T^{j r_n} - f||^2.
inline PrRigiditySum pr_rigidity_sum(const SkewProductSpec& spec, const Observable& f,
                                     const BigInt& r_n, const RigidityParams& params,
                                     int samples = 1 << 12) {
    PrRigiditySum out;
    Real256 jr = detail::real_pow(r_n, params.delta());
    BigInt jmax = boost::multiprecision::floor(jr).convert_to<BigInt>();
    if (jmax > 1'000'000) {
        jmax = 1'000'000;
        out.truncated = true;  // monotone in range, so the partial sum under-reports
    }
    out.jmax = jmax;
    KahanSum acc;
    for (BigInt j = 1; j <= jmax; ++j) {
        double plus = observable_shift_norm2(spec, f, j * r_n, samples);
        double minus = observable_shift_norm2(spec, f, -(j * r_n), samples);
        out.terms.push_back(plus);
        acc.add(plus);
        acc.add(minus);
    }
    out.sum = acc.value();  // the j = 0 term is identically zero
    return out;
}

}  // namespace mdlab
