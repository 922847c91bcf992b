#pragma once

// The explicit covering family F_t of the sub-polynomial complexity proof:
// scale sequence n_t = q_t^{[1/tau]+2}, the product grid, the d-bar_{n_t}
// covering check driven by closed-form cocycle evaluation (n_t is never
// iterated), the greedy empirical covering-number estimator, and the
// sub-polynomial trend verdict.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mdlab/cocycle.hpp"
#include "mdlab/dynamics.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

struct CoveringConfig {
    double epsilon = 0.25;
    BigRat tau = BigRat(1);
    int L = 0;           // mesh constant, >= 4/epsilon and a Lipschitz bound for h_1
    int N = 0;           // coordinate cutoff, tail sum below epsilon/4
    int t0 = 0;          // least t with 2 C_hat / q_t < epsilon / 4
    double C_hat = 0.0;  // measured Lemma-4.4 constant
    ResonantSets sets;

    int eps_cells() const { return static_cast<int>(std::floor(4.0 / epsilon)) + 1; }
    BigInt floor_inv_tau() const {
        return boost::multiprecision::denominator(tau) / boost::multiprecision::numerator(tau);
    }
    // n_t = q_t^{[1/tau]+2}
    BigInt n_t(const BigInt& q_t) const {
        return mdlab::pow(q_t, (floor_inv_tau() + 2).convert_to<unsigned>());
    }
    // |F_t| = L^N q_t ([4/eps]+1)
    BigInt grid_size(const BigInt& q_t) const {
        return mdlab::pow(BigInt(L), static_cast<unsigned>(N)) * q_t * eps_cells();
    }
};

// max over a 2^12 grid of |H_{q_t}(x) - q_t h^(0)| (the Lemma-4.4 quantity).
inline double h_qt_fluctuation_max(const CocycleEvaluator& ev, const BigInt& q_t,
                                   int grid = 1 << 12) {
    std::vector<Complex> g = ev.geometric_factors(q_t);
    double mx = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        mx = std::max(mx, std::abs(ev.fluct_with_factors(x, g)));
    }
    return mx;
}

// Derive the covering configuration for the infinite-M branch.
inline CoveringConfig derive_config(const FourierSeries& h1, const Alpha& alpha,
                                    const BigRat& tau, double epsilon,
                                    MultiplierRange mrange = MultiplierRange::ak,
                                    std::int64_t window = kDefaultModeWindow) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw domain_error("derive_config: epsilon must lie in (0,1)");
    CoveringConfig cfg;
    cfg.epsilon = epsilon;
    cfg.tau = tau;
    const ConvergentTable& t = alpha.table();
    cfg.sets = resonant_sets(t, tau, t.depth() - 1, window, mrange);
    if (cfg.sets.E.empty())
        throw branch_error(
            "derive_config: E_tau empty within horizon; this alpha sits in the finite-M "
            "pathway where the complexity is bounded (discrete-spectrum regime) and no "
            "covering family is needed");

    cfg.L = std::max(static_cast<int>(std::ceil(4.0 / epsilon)),
                     static_cast<int>(std::ceil(h1.lipschitz_bound())));
    cfg.N = std::max(2, static_cast<int>(std::ceil(std::log2(4.0 / epsilon))));

    // C_hat = max over measurable t in E of q_t^{1/tau+2} |H_{q_t} - q_t h^(0)|_max,
    // assembled in logs so enormous q_t cannot overflow.
    CocycleEvaluator ev(h1, alpha);
    double inv_tau = to_double(BigRat(boost::multiprecision::denominator(tau),
                                      boost::multiprecision::numerator(tau)));
    double best_log2 = -1e300;
    for (int k : cfg.sets.E) {
        double fl = h_qt_fluctuation_max(ev, t.q(k));
        if (fl <= 0.0) continue;  // below double range; contributes nothing
        double cand = (inv_tau + 2.0) * log2_approx(t.q(k)) + std::log2(fl);
        best_log2 = std::max(best_log2, cand);
    }
    cfg.C_hat = best_log2 > -1e299 ? std::exp2(std::min(best_log2, 1000.0)) : 0.0;

    // t0: q_t > 8 C_hat / epsilon from there on (q_t is increasing).
    auto [cn, cd] = dyadic_pair(8.0 * cfg.C_hat / epsilon);
    cfg.t0 = 1;
    while (cfg.t0 <= t.depth() && t.q(cfg.t0) * cd <= cn) ++cfg.t0;
    if (cfg.t0 > t.depth())
        throw config_error("derive_config: no index with 2 C_hat/q_t < eps/4 inside the table");
    return cfg;
}

// The grid F_t as a lazy enumerator: first coordinate on a mesh of
// 1/(L q_t ([4/eps]+1)), fiber coordinates 2..N on 1/L, zero beyond.
struct GridSpec {
    int L = 2;
    int N = 2;
    BigInt q_t = 1;
    int eps_cells = 1;

    BigInt first_mesh_count() const { return BigInt(L) * q_t * eps_cells; }
    BigInt size() const { return mdlab::pow(BigInt(L), static_cast<unsigned>(N - 1)) * first_mesh_count(); }
};

inline GridSpec grid_spec(const CoveringConfig& cfg, const BigInt& q_t) {
    return GridSpec{cfg.L, cfg.N, q_t, cfg.eps_cells()};
}

// Streams every grid point through `visit`; throws when |F_t| exceeds the
// enumeration budget.
inline BigInt enumerate_grid(const GridSpec& g, int truncation,
                             const std::function<void(const TorusPoint&)>& visit,
                             std::uint64_t budget = 100'000'000) {
    BigInt total = g.size();
    if (total > budget)
        throw resource_error("enumerate_grid: |F_t| exceeds the enumeration budget; "
                             "use a larger epsilon");
    std::uint64_t first = g.first_mesh_count().convert_to<std::uint64_t>();
    double inv_first = 1.0 / static_cast<double>(first);
    std::vector<int> j(g.N + 1, 0);  // j[2..N]
    TorusPoint p = TorusPoint::zero(truncation);
    BigInt count = 0;
    bool done = false;
    while (!done) {
        for (int k = 2; k <= g.N; ++k) p.coords[k - 1] = static_cast<double>(j[k]) / g.L;
        for (std::uint64_t i = 0; i < first; ++i) {
            p.coords[0] = static_cast<double>(i) * inv_first;
            visit(p);
            ++count;
        }
        done = true;
        for (int k = 2; k <= g.N; ++k) {
            if (++j[k] < g.L) {
                done = false;
                break;
            }
            j[k] = 0;
        }
    }
    return count;
}

// Designated grid point of x: component-wise rounding, exact in the first
// coordinate (whose mesh can be far below double resolution).
struct GridRounding {
    TorusPoint x_star;      // representative coordinates (double)
    double delta1 = 0.0;    // x_1 - x_1^* exactly (signed, may be denormal-small)
    std::vector<double> delta_fiber;  // x_k - x_k^* for k = 2..N
    bool exact_hit = false; // x was already a grid point
};

inline GridRounding round_to_grid(const GridSpec& g, const TorusPoint& x) {
    GridRounding out;
    out.x_star = TorusPoint::zero(x.truncation());
    // first coordinate: nearest i/D with D = L q_t ([4/eps]+1), exact dyadics
    BigInt D = g.first_mesh_count();
    auto [mx, ms] = dyadic_pair(x.coords[0]);  // x_1 = mx / ms
    BigInt num = mx * D;                       // x_1 * D = num / ms
    BigInt i = (2 * num + ms) / (2 * ms);      // round(num/ms), num >= 0
    BigInt rem = num - i * ms;                 // x_1 D - i in units of 1/ms
    out.delta1 = div_to_double(rem, ms * D);
    BigInt imod = i % D;
    out.x_star.coords[0] = div_to_double(imod, D);
    out.delta_fiber.assign(std::max(0, g.N - 1), 0.0);
    bool exact = (rem == 0);
    for (int k = 2; k <= g.N; ++k) {
        double scaled = x.coords[k - 1] * g.L;
        double jr = std::nearbyint(scaled);
        double delta = (scaled - jr) / g.L;
        double jmod = jr >= g.L ? jr - g.L : jr;
        out.x_star.coords[k - 1] = jmod / g.L;
        out.delta_fiber[k - 2] = delta;
        exact = exact && delta == 0.0;
    }
    for (int k = g.N + 1; k <= x.truncation(); ++k) {
        if (x.coords[k - 1] != 0.0)
            throw domain_error("round_to_grid: sample has mass beyond coordinate N");
    }
    out.exact_hit = exact;
    return out;
}

struct CoverDefect {
    double max_dbar = 0.0;        // max over samples of the d-bar_{n_t} estimate
    double max_term = 0.0;        // worst single d(S^i x, S^i x*) seen
    double mean_dbar = 0.0;
    int samples = 0;
    int i_samples = 0;
    bool exhaustive_i = false;    // all i < n_t were evaluated (small n_t)
    TorusPoint worst_point;
};

namespace detail {

// (d-bar estimate, worst single term) for one sampled point against its
// designated grid point, across the supplied iterate list.
inline std::pair<double, double> point_cover_defect(
    const SkewProductSpec& spec, const CoveringConfig& cfg, const GridSpec& g,
    const CocycleEvaluator& ev, const std::vector<BigInt>& is,
    const std::vector<std::vector<Complex>>& g_factors, const TorusPoint& x, int K_eval) {
    const auto& modes = ev.series().modes();
    GridRounding rd = round_to_grid(g, x);

    // A_{k,q} = c_q e(q u_k) (1 - e(-q delta1)), constant in i; the
    // 1/(1 - e(q alpha)) factor lives inside the geometric factors.
    std::vector<Complex> A(static_cast<std::size_t>(K_eval - 1) * modes.size());
    for (int k = 2; k <= K_eval; ++k) {
        double u = frac(x.coords[0] + spec.fiber_offset(k));
        for (std::size_t q = 0; q < modes.size(); ++q) {
            Complex s_q = Complex(1.0, 0.0) - e_of(-modes[q].m * rd.delta1);
            A[(k - 2) * modes.size() + q] = modes[q].c * e_of(frac_qt(modes[q].m, u)) * s_q;
        }
    }

    KahanSum dbar;
    double worst = 0.0;
    for (std::size_t s = 0; s < is.size(); ++s) {
        double d = 0.5 * std::fabs(rd.delta1);
        double w = 0.25;
        for (int k = 2; k <= K_eval; ++k) {
            double pt_diff = (k <= cfg.N) ? rd.delta_fiber[k - 2] : 0.0;
            Complex fd{0.0, 0.0};
            const Complex* row = &A[(k - 2) * modes.size()];
            for (std::size_t q = 0; q < modes.size(); ++q) fd += row[q] * g_factors[s][q];
            d += w * nearest_dist(pt_diff + 2.0 * fd.real());
            w *= 0.5;
        }
        if (rd.delta1 != 0.0) d += w;  // tail fibers: fluct differences <= 1/2 each
        dbar.add(d);
        worst = std::max(worst, d);
    }
    return {dbar.value() / static_cast<double>(is.size()), worst};
}

}  // namespace detail

// Checks that every sampled x lies within d-bar_{n_t} distance epsilon of its
// designated grid point.  Each d(S^i x, S^i x*) is evaluated in O(#modes)
// via per-mode geometric factors at exact frac(q i alpha) — n_t is never
// iterated; i runs over a deterministic stratified sample (or all of
// [0, n_t) when n_t is small).  A defect above epsilon throws with the
// witness point.
inline CoverDefect verify_grid_covers(const SkewProductSpec& spec, const CoveringConfig& cfg,
                                      int t, int sample_count, std::uint64_t seed,
                                      int i_samples = 128) {
    if (spec.variant() != Variant::SModel)
        throw domain_error("verify_grid_covers: pass the S-model spec (h_1 fibers)");
    if (std::find(cfg.sets.E.begin(), cfg.sets.E.end(), t) == cfg.sets.E.end() || t < cfg.t0)
        throw domain_error("verify_grid_covers: t must lie in E intersect [t0, inf)");
    const ConvergentTable& tab = spec.alpha().table();
    BigInt q_t = tab.q(t);
    BigInt n_t = cfg.n_t(q_t);
    GridSpec g = grid_spec(cfg, q_t);

    const FourierSeries& h1 = spec.h();
    CocycleEvaluator ev(h1, spec.alpha());
    const auto& modes = h1.modes();

    // deterministic i sample: strata floor(s n_t / S), deduplicated
    std::vector<BigInt> is;
    bool exhaustive = n_t <= i_samples;
    if (exhaustive) {
        for (BigInt i = 0; i < n_t; ++i) is.push_back(i);
    } else {
        for (int s = 0; s < i_samples; ++s) is.push_back(n_t * s / i_samples);
        is.push_back(1);
        std::sort(is.begin(), is.end());
        is.erase(std::unique(is.begin(), is.end()), is.end());
    }

    // G_q(i) = (1 - e(q i alpha)) / (1 - e(q alpha)) per (i, mode): the only
    // big-integer work, hoisted out of the sample loop
    std::vector<std::vector<Complex>> g_factors(is.size());
    for (std::size_t s = 0; s < is.size(); ++s) g_factors[s] = ev.geometric_factors(is[s]);

    int K_eval = std::min(spec.truncation(), cfg.N + 16);
    std::mt19937_64 rng(seed);
    CoverDefect out;
    out.samples = sample_count;
    out.i_samples = static_cast<int>(is.size());
    out.exhaustive_i = exhaustive;

    KahanSum mean_acc;
    for (int sidx = 0; sidx < sample_count; ++sidx) {
        TorusPoint x = random_point(rng, spec.truncation(), cfg.N);
        auto [est, worst] = detail::point_cover_defect(spec, cfg, g, ev, is, g_factors, x, K_eval);
        mean_acc.add(est);
        if (est > out.max_dbar) {
            out.max_dbar = est;
            out.worst_point = x;
        }
        out.max_term = std::max(out.max_term, worst);
        if (est > cfg.epsilon) {
            std::ostringstream os;
            os << "verify_grid_covers: defect " << est << " > epsilon " << cfg.epsilon
               << " at x1=" << x.coords[0];
            throw assertion_error(os.str());
        }
    }
    out.mean_dbar = sample_count > 0 ? mean_acc.value() / sample_count : 0.0;
    return out;
}

// d-bar estimate across an explicit i-list for one point (testing surface).
inline std::pair<double, double> cover_defect_for_point(const SkewProductSpec& spec,
                                                        const CoveringConfig& cfg, int t,
                                                        const TorusPoint& x,
                                                        const std::vector<BigInt>& is) {
    const ConvergentTable& tab = spec.alpha().table();
    GridSpec g = grid_spec(cfg, tab.q(t));
    CocycleEvaluator ev(spec.h(), spec.alpha());
    std::vector<std::vector<Complex>> g_factors(is.size());
    for (std::size_t s = 0; s < is.size(); ++s) g_factors[s] = ev.geometric_factors(is[s]);
    int K_eval = std::min(spec.truncation(), cfg.N + 16);
    return detail::point_cover_defect(spec, cfg, g, ev, is, g_factors, x, K_eval);
}

// Consistency of the i = a q_t + b block decomposition:
// sum_{r<a} H_{q_t}(u + r q_t alpha) + sum_{j<b} h_1(u + (a q_t + j) alpha)
// must reproduce H_i(u).  Returns the absolute defect.
inline double h_block_decomposition_defect(const FourierSeries& h1, const Alpha& alpha,
                                           const BigInt& q_t, const BigInt& i, double u) {
    CocycleEvaluator ev(h1, alpha);
    BigInt a = i / q_t;
    BigInt b = i % q_t;
    double direct = ev.sum(u, i);
    std::vector<Complex> g_qt = ev.geometric_factors(q_t);
    double qt_c0 = to_double(q_t) * h1.c0();
    KahanSum blocks;
    // H_{q_t} blocks at shifts r q_t alpha; the shift advances incrementally
    // (drift a * 1e-16, far under the comparison scale) from one exact anchor
    double qt_step = alpha.frac_mul(q_t).phase_d();
    double shift = 0.0;
    for (BigInt r = 0; r < a; ++r) {
        blocks.add(qt_c0 + ev.fluct_with_factors(frac(u + shift), g_qt));
        shift = frac(shift + qt_step);
    }
    double a_step = alpha.frac_mul(BigInt(1)).phase_d();
    shift = alpha.frac_mul(a * q_t).phase_d();
    for (BigInt j = 0; j < b; ++j) {
        blocks.add(h1.eval(frac(u + shift)));
        shift = frac(shift + a_step);
    }
    return std::abs(blocks.value() - direct);
}

// Greedy estimate of the covering number s_n(d, nu, eps): sample points from
// the reduced Lebesgue measure, then repeatedly pick the sample whose
// d-bar_n ball covers the most uncovered samples until a (1-eps) fraction
// is covered.  Ties break toward the lowest sample index; deterministic per
// seed.  d-bar_n is estimated on a stratified i-subsample (exact for
// rotations, where d-bar_n = d).
inline std::uint64_t empirical_covering_number(const SkewProductSpec& spec, const BigInt& n,
                                               double epsilon, int samples, std::uint64_t seed,
                                               unsigned threads = 1) {
    if (samples < 100) throw domain_error("empirical_covering_number: need >= 100 samples");
    if (n < 1) throw domain_error("empirical_covering_number: n must be >= 1");
    int N = std::max(2, static_cast<int>(std::ceil(std::log2(4.0 / epsilon))));
    N = std::min(N, spec.truncation());
    int K_eval = std::min(spec.truncation(), N + 8);

    std::mt19937_64 rng(seed);
    std::vector<TorusPoint> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) pts.push_back(random_point(rng, spec.truncation(), N));

    // stratified i sample
    std::vector<BigInt> is;
    if (n <= 64) {
        for (BigInt i = 0; i < n; ++i) is.push_back(i);
    } else {
        for (int s = 0; s < 64; ++s) is.push_back(n * s / 64);
        std::sort(is.begin(), is.end());
        is.erase(std::unique(is.begin(), is.end()), is.end());
    }
    std::size_t S = is.size();

    // F[p][s][k] = fluctuation of the fiber-k cocycle sum at iterate is[s]
    bool rotation = spec.variant() == Variant::Rotation;
    std::vector<double> F;
    const FourierSeries& h = spec.h();
    if (!rotation && !h.modes().empty()) {
        CocycleEvaluator ev(h, spec.alpha());
        std::vector<std::vector<Complex>> gf(S);
        for (std::size_t s = 0; s < S; ++s) gf[s] = ev.geometric_factors(is[s]);
        F.assign(static_cast<std::size_t>(samples) * S * (K_eval - 1), 0.0);
        parallel_chunks(samples, threads, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p) {
                for (std::size_t s = 0; s < S; ++s) {
                    for (int k = 2; k <= K_eval; ++k) {
                        double u = frac(pts[p].coords[0] + spec.fiber_offset(k));
                        F[(p * S + s) * (K_eval - 1) + (k - 2)] =
                            ev.fluct_with_factors(u, gf[s]);
                    }
                }
            }
        });
    }

    auto dbar = [&](std::size_t p, std::size_t qd) {
        double base = torus_dist01(pts[p].coords[0], pts[qd].coords[0]);
        KahanSum acc;
        for (std::size_t s = 0; s < S; ++s) {
            double d = 0.5 * base;
            double w = 0.25;
            for (int k = 2; k <= K_eval; ++k) {
                double diff = pts[p].coords[k - 1] - pts[qd].coords[k - 1];
                if (!F.empty())
                    diff += F[(p * S + s) * (K_eval - 1) + (k - 2)] -
                            F[(qd * S + s) * (K_eval - 1) + (k - 2)];
                d += w * nearest_dist(diff);
                w *= 0.5;
            }
            acc.add(d);
        }
        // conservative tail for the fibers beyond K_eval
        return acc.value() / static_cast<double>(S) + std::ldexp(1.0, -(K_eval + 1));
    };

    // adjacency under d-bar_n < epsilon
    std::vector<std::vector<std::uint64_t>> adj(samples);
    std::size_t words = (samples + 63) / 64;
    for (auto& row : adj) row.assign(words, 0);
    parallel_chunks(samples, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            adj[p][p / 64] |= 1ull << (p % 64);
            for (std::size_t qd = 0; qd < static_cast<std::size_t>(samples); ++qd) {
                if (qd == p) continue;
                if (dbar(p, qd) < epsilon) adj[p][qd / 64] |= 1ull << (qd % 64);
            }
        }
    });

    std::vector<std::uint64_t> uncovered(words, ~0ull);
    if (samples % 64) uncovered[words - 1] = (1ull << (samples % 64)) - 1;
    std::uint64_t covered_target =
        static_cast<std::uint64_t>(std::ceil((1.0 - epsilon) * samples));
    std::uint64_t covered = 0, picks = 0;
    while (covered < covered_target) {
        std::size_t best = samples;
        std::uint64_t best_gain = 0;
        for (std::size_t p = 0; p < static_cast<std::size_t>(samples); ++p) {
            std::uint64_t gain = 0;
            for (std::size_t w = 0; w < words; ++w)
                gain += __builtin_popcountll(adj[p][w] & uncovered[w]);
            if (gain > best_gain) {
                best_gain = gain;
                best = p;
            }
        }
        if (best == static_cast<std::size_t>(samples) || best_gain == 0) break;
        for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~adj[best][w];
        covered += best_gain;
        ++picks;
    }
    return picks;
}

struct TrendVerdict {
    bool ok = false;
    bool strictly_decreasing = false;
    double fitted_exponent = 0.0;    // slope of log2(grid/n_t^tau) vs log2 q_t
    double expected_exponent = 0.0;  // 1 - tau ([1/tau]+2) < 0
    std::string status;
};

struct CoveringReport {
    int t = 0;
    BigInt q_t, n_t, grid_size;
    std::uint64_t empirical_count = 0;  // 0 when not estimated
    double ratio_empirical = 0.0;       // empirical_count / n_t^tau
    double ratio_grid = 0.0;            // grid_size / n_t^tau
    std::string verdict;
};

inline CoveringReport make_report(const CoveringConfig& cfg, const ConvergentTable& tab, int t,
                                  std::uint64_t empirical_count = 0) {
    CoveringReport r;
    r.t = t;
    r.q_t = tab.q(t);
    r.n_t = cfg.n_t(r.q_t);
    r.grid_size = cfg.grid_size(r.q_t);
    r.empirical_count = empirical_count;
    double tau_d = to_double(cfg.tau);
    double log2_nt_tau = tau_d * log2_approx(r.n_t);
    r.ratio_grid = std::exp2(log2_approx(r.grid_size) - log2_nt_tau);
    if (empirical_count > 0)
        r.ratio_empirical = std::exp2(std::log2(double(empirical_count)) - log2_nt_tau);
    return r;
}

// liminf s_n / n^tau = 0 made checkable: the grid-side ratios must decrease
// strictly along t, with log-log slope matching 1 - tau([1/tau]+2) exactly
// (grid_size is proportional to q_t).
inline TrendVerdict subpolynomial_trend(const CoveringConfig& cfg,
                                        const std::vector<CoveringReport>& reports) {
    TrendVerdict v;
    v.expected_exponent =
        1.0 - to_double(cfg.tau) * to_double(cfg.floor_inv_tau() + 2);
    if (reports.size() < 3) {
        v.status = "insufficient-data: need at least 3 reports along t in E";
        return v;
    }
    v.strictly_decreasing = true;
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (!(reports[i].ratio_grid < reports[i - 1].ratio_grid)) v.strictly_decreasing = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : reports) {
        double x = log2_approx(r.q_t);
        double y = log2_approx(r.grid_size) - to_double(cfg.tau) * log2_approx(r.n_t);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double n = static_cast<double>(reports.size());
    v.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    v.ok = v.strictly_decreasing && v.fitted_exponent < 0 &&
           std::abs(v.fitted_exponent - v.expected_exponent) < 1e-3;
    v.status = v.ok ? "subpolynomial trend confirmed" : "trend check failed";
    return v;
}

}  // namespace mdlab
