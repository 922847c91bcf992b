#pragma once

// Named experiment corpus: the (alpha, beta, h) triples every suite runs
// against, each tagged with the proof branch it exercises.  All corpus h
// are mean-zero; rotation-flavored checks add their own constant term.

#include <functional>
#include <string>
#include <vector>

#include "mdlab/diophantine.hpp"
#include "mdlab/dynamics.hpp"
#include "mdlab/fourier.hpp"

namespace mdlab {

struct CorpusEntry {
    std::string name;
    IrrationalSpec alpha_spec;
    IrrationalSpec beta_spec;
    Variant variant = Variant::TLinear;
    std::string branch;  // expected proof branch
    std::function<FourierSeries(const Alpha& alpha)> make_h;

    Alpha alpha(int depth = 48) const { return Alpha(alpha_spec, depth); }
    Alpha beta(int depth = 48) const { return Alpha(beta_spec, depth); }

    SkewProductSpec spec(int truncation = kDefaultTruncation) const {
        Alpha a = alpha();
        FourierSeries h = make_h(a);
        return SkewProductSpec(variant, std::move(a), beta(), std::move(h), truncation);
    }
};

inline IrrationalSpec golden_spec() { return QuadraticSurd{-1, 2, 5}; }     // (sqrt5-1)/2
inline IrrationalSpec sqrt2_spec() { return QuadraticSurd{-1, 1, 2}; }      // sqrt2-1

// h for the infinite-M branch: substantial coefficients on the resonant
// modes 2, 65, 130 of the liouville:5 alpha, plus non-resonant 1 and 3.
inline FourierSeries liouville_resonant_h() {
    std::vector<FourierSeries::Mode> pos{
        {1, 0.5 * e_of(0.13)},
        {2, std::pow(2.0, -4.0) * e_of(0.41)},
        {3, std::pow(3.0, -4.0) * e_of(0.77)},
        {65, std::pow(65.0, -4.0) * e_of(0.29)},
        {130, std::pow(130.0, -4.0) * e_of(0.61)}};
    return FourierSeries(0.0, std::move(pos), DecayTag{4.0, 1.0});
}

inline std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> out;
    out.push_back({"golden", golden_spec(), sqrt2_spec(), Variant::TLinear,
                   "finite-M;case-1",
                   [](const Alpha&) { return make_smooth_sample("random-phase", 2.5, 5, 11); }});
    out.push_back({"sqrt2", sqrt2_spec(), golden_spec(), Variant::TLinear,
                   "finite-M;case-1",
                   [](const Alpha&) { return make_smooth_sample("random-phase", 2.5, 5, 7); }});
    out.push_back({"liouville5", LiouvilleRule{5, 1}, golden_spec(), Variant::TLinear,
                   "infinite-M;case-2",
                   [](const Alpha&) { return liouville_resonant_h(); }});
    out.push_back({"liouville1", LiouvilleRule{1, 1}, golden_spec(), Variant::TLinear,
                   "finite-M;case-2",
                   [](const Alpha&) { return make_smooth_sample("random-phase", 2.5, 5, 5); }});
    out.push_back({"furstenberg", FurstenbergRule{}, sqrt2_spec(), Variant::QGeometric,
                   "demonstration;irregular",
                   [](const Alpha& a) {
                       return make_furstenberg_h(a, [](int) { return 0.4; }, 2, 0.5);
                   }});
    out.push_back({"rational25", ExplicitQuotients{{2, 2}}, golden_spec(), Variant::TLinear,
                   "rational;davenport",
                   [](const Alpha&) {
                       return make_smooth_sample("random-phase", 2.5, 5, 7, 0.25);
                   }});
    return out;
}

inline CorpusEntry corpus_entry(const std::string& name) {
    for (auto& e : corpus())
        if (e.name == name) return e;
    throw config_error("corpus: unknown entry '" + name + "'");
}

// The six alphas of the convergent-exactness gate (all expandable to depth
// 20+ in milliseconds).
inline std::vector<std::pair<std::string, IrrationalSpec>> exactness_alphas() {
    ExplicitQuotients ramp;
    for (int a = 1; a <= 30; ++a) ramp.quotients.push_back(1 + (a * a) % 7);
    return {
        {"golden", golden_spec()},
        {"sqrt2", sqrt2_spec()},
        {"sqrt3", QuadraticSurd{-1, 1, 3}},
        {"sqrt13", QuadraticSurd{-3, 2, 13}},
        {"sqrt7", QuadraticSurd{-2, 1, 7}},
        {"ramp30", ramp},
    };
}

}  // namespace mdlab
