#pragma once

// Finite real trigonometric series: the fiber function h and everything
// derived from it (psi-tilde, psi, h_1).  Coefficients are stored for
// positive modes only; c_{-m} = conj(c_m) is structural, so every
// evaluation is exactly real.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdlab/diophantine.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

// Declared decay |c_m| <= witness * |m|^{-exponent}, verified at construction.
struct DecayTag {
    double exponent = 0.0;
    double witness = 0.0;
};

inline constexpr std::int64_t kDefaultModeWindow = 1 << 16;

class FourierSeries {
  public:
    struct Mode {
        std::int64_t m;  // > 0
        Complex c;
    };

    FourierSeries() = default;

    // `positive` must be sorted by mode, modes distinct and positive.
    FourierSeries(double c0, std::vector<Mode> positive, DecayTag tag)
        : c0_(c0), modes_(std::move(positive)), tag_(tag) {
        std::int64_t prev = 0;
        for (const auto& md : modes_) {
            if (md.m <= prev) throw domain_error("fourier: modes must be positive and sorted");
            prev = md.m;
            if (tag_.exponent > 0.0) {
                double bound = tag_.witness * std::pow(static_cast<double>(md.m), -tag_.exponent);
                if (std::abs(md.c) > bound * (1.0 + 1e-12))
                    throw domain_error("fourier: coefficient violates the declared decay tag");
            }
        }
    }

    // Construction from a full signed map; enforces c_{-m} = conj(c_m).
    static FourierSeries from_full_map(const std::map<std::int64_t, Complex>& full, DecayTag tag) {
        double c0 = 0.0;
        if (auto it = full.find(0); it != full.end()) {
            if (std::abs(it->second.imag()) > 1e-12)
                throw domain_error("fourier: c_0 must be real");
            c0 = it->second.real();
        }
        std::vector<Mode> pos;
        for (const auto& [m, c] : full) {
            if (m <= 0) continue;
            auto neg = full.find(-m);
            if (neg == full.end() || std::abs(neg->second - std::conj(c)) > 1e-12)
                throw domain_error("fourier: real-valuedness requires c(-m) = conj(c(m))");
            pos.push_back({m, c});
        }
        for (const auto& [m, c] : full) {
            if (m >= 0) continue;
            if (full.find(-m) == full.end())
                throw domain_error("fourier: mode " + std::to_string(m) + " lacks its mirror");
        }
        return FourierSeries(c0, std::move(pos), tag);
    }

    double c0() const { return c0_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const DecayTag& tag() const { return tag_; }
    bool empty() const { return modes_.empty() && c0_ == 0.0; }

    Complex coefficient(std::int64_t m) const {
        if (m == 0) return Complex(c0_, 0.0);
        std::int64_t am = m < 0 ? -m : m;
        for (const auto& md : modes_)
            if (md.m == am) return m > 0 ? md.c : std::conj(md.c);
        return Complex(0.0, 0.0);
    }

    // h(t) = c0 + sum_{m>0} 2 Re(c_m e(mt)); exactly real by construction.
    double eval(double t) const {
        double u = frac(t);
        double acc = c0_;
        for (const auto& md : modes_) {
            Complex ph = e_of(frac_qt(md.m, u));
            acc += 2.0 * (md.c.real() * ph.real() - md.c.imag() * ph.imag());
        }
        return acc;
    }

    // sum over m != 0 of |c_m|  (both signs).
    double abs_coeff_sum() const {
        double s = 0.0;
        for (const auto& md : modes_) s += 2.0 * std::abs(md.c);
        return s;
    }

    // 2*pi*sum |m||c_m| over both signs: a Lipschitz constant for h.
    double lipschitz_bound() const {
        double s = 0.0;
        for (const auto& md : modes_) s += 2.0 * static_cast<double>(md.m) * std::abs(md.c);
        return kTwoPi * s;
    }

    // Witness making the series pass exponent r: max |c_m| |m|^r.
    double measure_witness(double r) const {
        double w = 0.0;
        for (const auto& md : modes_)
            w = std::max(w, std::abs(md.c) * std::pow(static_cast<double>(md.m), r));
        return w;
    }

    void save_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw resource_error("fourier save: cannot open " + path);
        out << csv();
        if (!out) throw resource_error("fourier save: write failed for " + path);
    }

    std::string csv() const {
        std::ostringstream out;
        out.precision(17);
        out << "# mdlab fourier-series decay_r=" << tag_.exponent << " decay_B=" << tag_.witness
            << "\n";
        out << "mode,re,im\n";
        out << "0," << c0_ << ",0\n";
        for (const auto& md : modes_) {
            out << md.m << "," << md.c.real() << "," << md.c.imag() << "\n";
            out << -md.m << "," << md.c.real() << "," << -md.c.imag() << "\n";
        }
        return out.str();
    }

    static FourierSeries load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw resource_error("fourier load: cannot open " + path);
        DecayTag tag{0.0, 0.0};
        std::map<std::int64_t, Complex> full;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') {
                auto rp = line.find("decay_r=");
                auto bp = line.find("decay_B=");
                if (rp != std::string::npos) tag.exponent = std::stod(line.substr(rp + 8));
                if (bp != std::string::npos) tag.witness = std::stod(line.substr(bp + 8));
                continue;
            }
            if (line.rfind("mode", 0) == 0) continue;
            std::istringstream ls(line);
            std::string ms, res, ims;
            std::getline(ls, ms, ',');
            std::getline(ls, res, ',');
            std::getline(ls, ims, ',');
            full[std::stoll(ms)] = Complex(std::stod(res), std::stod(ims));
        }
        return from_full_map(full, tag);
    }

  private:
    double c0_ = 0.0;
    std::vector<Mode> modes_;  // positive modes, sorted
    DecayTag tag_{0.0, 0.0};
};

// Pseudo-random real trigonometric polynomial with |c_m| = |m|^{-r} and a
// seeded unit phase; kind "random-phase" is the only family, kept as a name
// so reports can state what they ran.
inline FourierSeries make_smooth_sample(const std::string& kind, double r, int modes,
                                        std::uint64_t seed, double c0 = 0.0) {
    if (r <= 1.0)
        throw domain_error("make_smooth_sample: decay exponent must exceed 1 (C^{1+eps} class)");
    if (modes < 1) throw domain_error("make_smooth_sample: need at least one mode");
    if (kind != "random-phase")
        throw domain_error("make_smooth_sample: unknown family '" + kind + "'");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<FourierSeries::Mode> pos;
    pos.reserve(modes);
    for (int m = 1; m <= modes; ++m) {
        double mag = std::pow(static_cast<double>(m), -r);
        double phase = uni(rng);
        pos.push_back({m, mag * e_of(phase)});
    }
    return FourierSeries(c0, std::move(pos), DecayTag{r, 1.0});
}

// h(x) = sum_{m != 0} t_m (1 - e(q_m alpha)) e(q_m x)  on the convergent
// denominators of alpha.  `coeff_rule` maps a signed index m to t_m and must
// be symmetric; |t_m| <= tau0 is enforced.  Materializes modes q_1..q_window,
// window <= depth-1 so each 1 - e(q_m alpha) carries a certified phase.
template <typename Rule>
FourierSeries make_furstenberg_h(const Alpha& alpha, Rule&& coeff_rule, int window,
                                 double tau0) {
    const ConvergentTable& t = alpha.table();
    if (window < 1) throw domain_error("make_furstenberg_h: window must be >= 1");
    if (window > t.depth() - 1)
        throw domain_error(
            "make_furstenberg_h: window exceeds certifiable depth (need rows to q_{m+1})");
    std::vector<FourierSeries::Mode> pos;
    for (int m = 1; m <= window; ++m) {
        double tm = coeff_rule(m);
        double tm_neg = coeff_rule(-m);
        if (tm != tm_neg)
            throw domain_error("make_furstenberg_h: coefficient rule is not symmetric at m=" +
                               std::to_string(m));
        if (std::abs(tm) > tau0)
            throw domain_error("make_furstenberg_h: |t_m| exceeds tau0 at m=" + std::to_string(m));
        if (t.q(m) >= (BigInt(1) << 62))
            throw domain_error("make_furstenberg_h: q_m exceeds the mode representation");
        auto qm = t.q(m).convert_to<std::int64_t>();
        CertifiedDistance d = alpha.dist_best(t.q(m));
        if (tm != 0.0 && (d.num.is_zero() || !d.relative_error_below(1, 1'000'000)))
            throw precision_error("make_furstenberg_h: ||q_m alpha|| not certifiable at m=" +
                                  std::to_string(m) + "; deepen the table");
        CertifiedFrac f = alpha.frac_mul_best(t.q(m));
        Complex coeff = tm * (Complex(1.0, 0.0) - e_of(f.phase_d()));
        if (coeff != Complex(0.0, 0.0)) pos.push_back({qm, coeff});
    }
    std::sort(pos.begin(), pos.end(),
              [](const FourierSeries::Mode& a, const FourierSeries::Mode& b) { return a.m < b.m; });
    FourierSeries out(0.0, std::move(pos), DecayTag{0.0, 0.0});
    return out;
}

}  // namespace mdlab
