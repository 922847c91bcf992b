#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mdlab/disjointness.hpp"

using namespace mdlab;

namespace {

Alpha golden() { return Alpha(QuadraticSurd{-1, 2, 5}); }
Alpha sqrt2m1() { return Alpha(QuadraticSurd{-1, 1, 2}); }

const MobiusTable& sieve_1e5() {
    static MobiusTable t = MobiusTable::sieve(100'000);
    return t;
}

SkewProductSpec corpus_spec(Alpha a, std::uint64_t seed = 7) {
    return SkewProductSpec(Variant::TLinear, std::move(a), golden(),
                           make_smooth_sample("random-phase", 2.5, 5, seed), 12);
}

}  // namespace

TEST_CASE("mobius_average") {
    const MobiusTable& mu = sieve_1e5();

    SECTION("b = 0 reduces to Mertens partial averages") {
        SkewProductSpec spec = corpus_spec(sqrt2m1());
        Observable zero{{0, 0}};
        TorusPoint x0 = TorusPoint::zero(12);
        DecayTrace tr = mobius_average(spec, zero, x0, mu, {10, 1000, 100000});
        // direct Mertens accumulation from the same table (different path)
        double mertens = 0;
        for (std::uint64_t n = 1; n <= 1000; ++n) mertens += mu.mu(n);
        REQUIRE(tr.checkpoints.size() == 3);
        CHECK(tr.checkpoints[0].partial_average.real() == Catch::Approx(-0.1).margin(1e-12));
        CHECK(tr.checkpoints[1].partial_average.real() ==
              Catch::Approx(mertens / 1000.0).margin(1e-12));
        CHECK(tr.checkpoints[1].partial_average.imag() == Catch::Approx(0.0).margin(1e-12));
    }

    SECTION("h = 0, b = (1,0,...): the classical rotation sum") {
        SkewProductSpec spec(Variant::TLinear, sqrt2m1(), golden(),
                             FourierSeries(0.0, {}, DecayTag{}), 12);
        Observable e1{{1}};
        TorusPoint x0 = TorusPoint::zero(12);
        DecayTrace tr = mobius_average(spec, e1, x0, mu, {100'000});
        // independent oracle: per-n exact dyadic phases, no incremental state
        double a = spec.alpha().value();
        auto s = weighted_exp_sum(
            mu, [&](std::uint64_t n) { return frac_qt(static_cast<std::int64_t>(n), a); },
            100'000);
        Complex expect = s.value / 100000.0;
        CHECK(std::abs(tr.checkpoints[0].partial_average - expect) < 1e-7);
        CHECK(tr.max_anchor_drift < 1e-8);
    }

    SECTION("phase recurrence drift stays below 1e-8 across 1e5 steps") {
        SkewProductSpec spec = corpus_spec(golden(), 3);
        Observable f{{0, 1, 0, 2}};
        TorusPoint x0 = TorusPoint::zero(12);
        x0.coords[0] = 0.37;
        x0.coords[1] = 0.11;
        DecayTrace tr = mobius_average(spec, f, x0, mu, {100'000});
        CHECK(tr.max_anchor_drift < 1e-8);
    }

    SECTION("checkpoint past the sieve limit is a range error") {
        SkewProductSpec spec = corpus_spec(golden());
        Observable f{{0, 1}};
        CHECK_THROWS_AS(mobius_average(spec, f, TorusPoint::zero(12), mu, {200'000}), Error);
    }
}

TEST_CASE("rational alpha reduction") {
    const MobiusTable& mu = sieve_1e5();

    SECTION("identity with the direct orbit sum at alpha = 2/5") {
        SkewProductSpec spec(Variant::TLinear, Alpha(ExplicitQuotients{{2, 2}}), golden(),
                             make_smooth_sample("random-phase", 2.5, 5, 7, 0.25), 12);
        REQUIRE(spec.alpha().rational_value() == BigRat(2, 5));
        Observable b{{1, 1, 0, 1}};
        TorusPoint x0 = TorusPoint::zero(12);
        x0.coords[0] = 0.2;
        x0.coords[1] = 0.65;
        RationalAlphaSum rs = rational_alpha_sum(spec, b, x0, mu, 100'000);
        DecayTrace direct = mobius_average(spec, b, x0, mu, {100'000});
        Complex direct_sum = direct.checkpoints[0].partial_average * 100000.0;
        CHECK(std::abs(rs.total - direct_sum) < 1e-9 * (1.0 + std::abs(direct_sum)));
        CHECK(rs.residue_moduli.size() == 5);
    }

    SECTION("gamma partition: gamma1 + gamma2 = S_{h,q} for every residue and fiber") {
        SkewProductSpec spec(Variant::TLinear, Alpha(ExplicitQuotients{{3, 1, 4}}), golden(),
                             make_smooth_sample("random-phase", 2.5, 4, 9), 12);
        Observable b{{0, 1, 1}};
        TorusPoint x0 = TorusPoint::zero(12);
        x0.coords[0] = 0.41;
        RationalAlphaSum rs = rational_alpha_sum(spec, b, x0, mu, 10'000);
        BigRat lq = spec.alpha().rational_value();
        auto q = boost::multiprecision::denominator(lq).convert_to<std::uint64_t>();
        for (std::size_t s = 0; s < rs.fiber_ks.size(); ++s) {
            double t0 = frac(x0.coords[0] + spec.fiber_offset(rs.fiber_ks[s]));
            double period = cocycle_sum_direct(spec.h(), t0, q, spec.alpha());
            for (std::uint64_t r = 0; r < q; ++r) {
                REQUIRE(rs.gamma1[r][s] + rs.gamma2[r][s] ==
                        Catch::Approx(period).margin(1e-10));
            }
        }
    }

    SECTION("alpha = 0 (represented as 1/1): pure linear phase per section 6") {
        SkewProductSpec spec(Variant::TLinear, Alpha(ExplicitQuotients{{1}}), golden(),
                             make_smooth_sample("random-phase", 2.5, 4, 11), 12);
        Observable b{{0, 2}};
        TorusPoint x0 = TorusPoint::zero(12);
        x0.coords[0] = 0.3;
        RationalAlphaSum rs = rational_alpha_sum(spec, b, x0, mu, 50'000);
        // oracle: mu-weighted geometric phase n * (b_2 h(x_1))
        double slope = 2.0 * spec.h().eval(0.3);
        auto s = weighted_exp_sum(
            mu, [&](std::uint64_t n) { return frac(static_cast<double>(n) * frac(slope)); },
            50'000);
        CHECK(std::abs(rs.total - s.value) < 1e-6 * (1.0 + std::abs(s.value)));
    }
}

TEST_CASE("davenport decay probe") {
    const MobiusTable& mu = sieve_1e5();

    SECTION("P = 0 polynomial reproduces Mertens partial sums") {
        DecayTrace tr = davenport_decay_probe({0.0}, 0, 1, mu, {1000, 100'000});
        double mertens = 0;
        for (std::uint64_t n = 1; n <= 1000; ++n) mertens += mu.mu(n);
        CHECK(tr.checkpoints[0].partial_average.real() ==
              Catch::Approx(mertens / 1000.0).margin(1e-12));
    }

    SECTION("theta_1 = 1/2 gives the alternating Mobius sum exactly") {
        DecayTrace tr = davenport_decay_probe({0.5}, 0, 1, mu, {50'000});
        double alt = 0;
        for (std::uint64_t n = 1; n <= 50'000; ++n) alt += mu.mu(n) * (n % 2 == 0 ? 1.0 : -1.0);
        CHECK(tr.checkpoints[0].partial_average.real() ==
              Catch::Approx(alt / 50000.0).margin(1e-9));
        CHECK(tr.checkpoints[0].partial_average.imag() == Catch::Approx(0.0).margin(1e-9));
    }

    SECTION("quadratic phase through a residue class matches a direct evaluation") {
        double th2 = 0.137, th1 = 0.58;
        DecayTrace tr = davenport_decay_probe({th2, th1}, 2, 5, mu, {20'000});
        KahanSum re, im;
        for (std::uint64_t n = 2; n <= 20'000; n += 5) {
            int m = mu.mu(n);
            if (m == 0) continue;
            // independent 256-bit phase evaluation per term
            Real256 p = Real256(th2) * n * n + Real256(th1) * n;
            double ph = (p - boost::multiprecision::floor(p)).convert_to<double>();
            Complex z = e_of(ph);
            re.add(m * z.real());
            im.add(m * z.imag());
        }
        Complex expect = Complex(re.value(), im.value()) / 20000.0;
        CHECK(std::abs(tr.checkpoints[0].partial_average - expect) < 1e-9);
    }
}

TEST_CASE("birkhoff irregularity probe") {
    SECTION("f = 1 has all averages exactly 1 and zero oscillation") {
        Alpha fur((FurstenbergRule()));
        FourierSeries h = make_furstenberg_h(fur, [](int) { return 0.4; }, 2, 0.5);
        SkewProductSpec spec(Variant::QGeometric, fur, sqrt2m1(), h, 12);
        Observable one{{0, 0}};
        OscillationReport rep = birkhoff_irregularity_probe(spec, one, TorusPoint::zero(12),
                                                            {100, 1000, 10'000});
        for (const auto& cp : rep.window)
            CHECK(cp.partial_average.real() == Catch::Approx(1.0).margin(1e-12));
        CHECK(rep.oscillation == Catch::Approx(0.0).margin(1e-12));
        CHECK(rep.label == "demonstration");
    }

    SECTION("rotation baseline oscillates less than the Furstenberg flow") {
        Alpha fur((FurstenbergRule()));
        FourierSeries h = make_furstenberg_h(fur, [](int) { return 0.4; }, 2, 0.5);
        TorusPoint x0 = TorusPoint::zero(12);
        Observable f{{0, 1}};
        std::vector<std::uint64_t> window{1000, 3162, 10'000, 31'623, 100'000};

        SkewProductSpec flow(Variant::QGeometric, fur, sqrt2m1(), h, 12);
        OscillationReport irregular = birkhoff_irregularity_probe(flow, f, x0, window);

        SkewProductSpec rot(Variant::Rotation, fur, sqrt2m1(),
                            FourierSeries(0.3, {}, DecayTag{}), 12);
        OscillationReport baseline = birkhoff_irregularity_probe(rot, f, x0, window);

        CHECK(baseline.oscillation < irregular.oscillation);
    }
}
