#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mdlab/diophantine.hpp"

using namespace mdlab;

namespace {

Alpha golden() { return Alpha(QuadraticSurd{-1, 2, 5}); }          // (sqrt(5)-1)/2
Alpha sqrt2m1() { return Alpha(QuadraticSurd{-1, 1, 2}); }         // sqrt(2)-1

// Exact-rational brute force for Lemma 4.1: every ||q alpha|| evaluated as
// a rational at one deep convergent; independent of the incremental-residue
// path inside resonance_sum.
double resonance_oracle(const Alpha& alpha, int k) {
    const ConvergentTable& t = alpha.table();
    BigInt qk = t.q(k);
    double sum = 0.0;
    for (BigInt q = 1; q < qk; ++q) {
        double dd = alpha.dist(q).value_d();
        sum += 2.0 / (dd * dd);
    }
    return sum / to_double(qk * qk);
}

}  // namespace

TEST_CASE("golden surd expands to all-ones quotients with Fibonacci denominators") {
    ConvergentTable t = expand(QuadraticSurd{-1, 2, 5}, 30);
    REQUIRE(t.depth() == 30);
    for (int k = 1; k <= 30; ++k) CHECK(t.a(k) == 1);
    // Fibonacci oracle: q_0 = q_1 = 1, q_{k+1} = q_k + q_{k-1}.
    BigInt f0 = 1, f1 = 1;
    CHECK(t.q(0) == f0);
    CHECK(t.q(1) == f1);
    for (int k = 2; k <= 30; ++k) {
        BigInt f2 = f1 + f0;
        CHECK(t.q(k) == f2);
        f0 = f1;
        f1 = f2;
    }
    std::vector<BigInt> expect{1, 1, 2, 3, 5, 8};
    for (int k = 0; k < 6; ++k) CHECK(t.q(k) == expect[k]);
}

TEST_CASE("explicit quotients [2,2,2,2] give q = 1,2,5,12,29") {
    ConvergentTable t = expand(ExplicitQuotients{{2, 2, 2, 2}}, 4);
    std::vector<BigInt> expect{1, 2, 5, 12, 29};
    REQUIRE(t.rows.size() == 5);
    for (int k = 0; k <= 4; ++k) CHECK(t.q(k) == expect[k]);
    CHECK(t.exact_rational);
}

TEST_CASE("liouville rule a_{k+1} = q_k^5 forces q_{k+1} = q_k^6 + q_{k-1}") {
    ConvergentTable t = expand(LiouvilleRule{5, 1}, 5);
    for (int k = 1; k <= t.depth(); ++k) {
        BigInt qk = t.q(k - 1);
        BigInt qkm1 = (k >= 2) ? t.q(k - 2) : BigInt(0);
        CHECK(t.q(k) == pow(qk, 6) + qkm1);
    }
}

TEST_CASE("rule expansion respects the bit cap with a depth-limited status") {
    ConvergentTable t = expand(LiouvilleRule{5, 1}, 40, /*bit_cap=*/4096);
    CHECK(t.depth_limited);
    CHECK(t.depth() < 40);
    CHECK(bit_size(t.q(t.depth())) <= 4096);
}

TEST_CASE("furstenberg rule matches round(e^{q_k}/q_k) and stops at the cap") {
    ConvergentTable t = expand(FurstenbergRule{}, 10);
    REQUIRE(t.depth() >= 3);
    CHECK(t.a(1) == 3);    // round(e^1/1)
    CHECK(t.a(2) == 7);    // round(e^3/3) = round(6.695...)
    CHECK(t.a(3) == BigInt("162950584"));  // round(e^22/22), frozen from Real256 oracle below
    CHECK(t.depth_limited);

    // Independent high-precision check of the frozen a_3.
    Real256 v = boost::multiprecision::exp(Real256(22)) / Real256(22);
    BigInt lo = v.convert_to<BigInt>();
    CHECK((t.a(3) == lo || t.a(3) == lo + 1));
}

TEST_CASE("table invariants: determinant, coprimality, growth") {
    std::vector<IrrationalSpec> specs{
        QuadraticSurd{-1, 2, 5}, QuadraticSurd{-1, 1, 2}, QuadraticSurd{-1, 1, 3},
        QuadraticSurd{-3, 2, 13}, ExplicitQuotients{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
        LiouvilleRule{2, 1}};
    for (const auto& spec : specs) {
        ConvergentTable t = expand(spec, 10);
        for (int k = 0; k + 1 <= t.depth(); ++k) {
            // determinant identity with alternating sign
            CHECK(t.l(k + 1) * t.q(k) - t.l(k) * t.q(k + 1) == ((k % 2 == 0) ? 1 : -1));
        }
        for (int k = 1; k <= t.depth(); ++k) {
            CHECK(boost::multiprecision::gcd(t.l(k), t.q(k)) == 1);
            if (k >= 2) CHECK(t.q(k) > t.q(k - 1));  // strict from k >= 1 on
        }
        // strict doubling holds from k >= 1 (at k = 0, a_1 = a_2 = 1 gives
        // q_2 = 2 = 2 q_0 exactly)
        for (int k = 1; k + 2 <= t.depth(); ++k) CHECK(t.q(k + 2) > 2 * t.q(k));
    }
}

TEST_CASE("(P2) certified with exact rational arithmetic") {
    for (Alpha alpha : {golden(), sqrt2m1(), Alpha(QuadraticSurd{-3, 2, 13})}) {
        alpha.ensure([](const ConvergentTable& t) { return t.depth() >= 24; });
        for (int k = 1; k <= 20; ++k) CHECK(p2_certified(alpha, k));
    }
}

TEST_CASE("nearest_distance basics") {
    Alpha a = golden();

    SECTION("n = 0 gives value 0, error 0") {
        CertifiedDistance d = a.dist(0);
        CHECK(d.is_zero());
    }

    SECTION("||5 alpha|| for the golden ratio") {
        // 5 = q_4, so (P2) brackets the distance in (1/16, 1/8); the exact
        // value is (5 sqrt(5) - 11)/2.
        CertifiedDistance d = a.dist(5);
        double expect = (5.0 * std::sqrt(5.0) - 11.0) / 2.0;
        CHECK(std::abs(d.value_d() - expect) < 1e-12);
        CHECK(d.value_d() > 1.0 / 16.0);
        CHECK(d.value_d() < 1.0 / 8.0);
    }

    SECTION("shallow table raises a precision error naming the problem") {
        ConvergentTable t = expand(QuadraticSurd{-1, 2, 5}, 5);  // q_5 = 8
        CHECK_THROWS_AS(nearest_distance(t, BigInt(100), 5), Error);
        try {
            nearest_distance(t, BigInt(100), 5);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Precision);
        }
    }

    SECTION("Alpha auto-extends to certify large n") {
        CertifiedFrac f = a.frac_mul(BigInt("1000000000000"));
        CHECK(f.error_d() <= to_double(Alpha::default_tol()) * (1.0 + 1e-12));
        // Independent 256-bit route: frac(n * (sqrt(5)-1)/2).
        Real256 al = (boost::multiprecision::sqrt(Real256(5)) - 1) / 2;
        Real256 x = Real256(BigInt("1000000000000")) * al;
        Real256 fr = x - boost::multiprecision::floor(x);
        CHECK(std::abs(f.value_d() - fr.convert_to<double>()) < 1e-15);
    }
}

TEST_CASE("expand rejects bad specs") {
    CHECK_THROWS_AS(expand(QuadraticSurd{-1, 2, 9}, 4), Error);   // perfect square
    CHECK_THROWS_AS(expand(QuadraticSurd{-1, 0, 5}, 4), Error);   // zero denominator
    CHECK_THROWS_AS(expand(ExplicitQuotients{{2, 0, 2}}, 3), Error);
    CHECK_THROWS_AS(expand(ExplicitQuotients{{2, -3}}, 2), Error);
    CHECK_THROWS_AS(expand(QuadraticSurd{-1, 2, 5}, 0), Error);   // depth < 1
    try {
        expand(ExplicitQuotients{{2, 0, 2}}, 3);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
        CHECK(std::string(e.what()).find("a_2") != std::string::npos);
    }
}

TEST_CASE("resonance_sum matches the exact-rational oracle") {
    Alpha a = golden();
    a.ensure([](const ConvergentTable& t) { return t.depth() >= 48; });
    for (int k : {4, 6, 8, 10}) {
        double oracle = resonance_oracle(a, k);
        ResonanceSum r = resonance_sum(a.table(), k);
        CHECK(r.rel_err < 1e-6);
        CHECK(r.ratio == Catch::Approx(oracle).epsilon(1e-5));
    }
}

TEST_CASE("resonance_sum ratios stay in a bounded window (Lemma 4.1)") {
    SECTION("golden: k in [2,14]") {
        Alpha a = golden();
        a.ensure([](const ConvergentTable& t) { return t.depth() >= 48; });
        double lo = 1e300, hi = 0;
        for (int k = 2; k <= 14; ++k) {
            ResonanceSum r = resonance_sum(a.table(), k);
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
        CHECK(hi / lo < 4.0);  // frozen spread bound; see acceptance for per-alpha windows
    }
    SECTION("liouville rule: ratios bounded despite fast growth") {
        Alpha a(LiouvilleRule{5, 1});
        double lo = 1e300, hi = 0;
        for (int k = 2; k <= 3; ++k) {  // q_4 ~ 7.5e10 is beyond the budget
            ResonanceSum r = resonance_sum(a.table(), k);
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
        CHECK(hi / lo < 16.0);
    }
}

TEST_CASE("resonance_sum single-pair case at k = 2 with quotients [1,1]") {
    // q_2 = 2, so the sum has only q = +-1 and the ratio is 2/(||alpha||^2 * 4)
    // with alpha = [0;1,1] = 1/2 exactly.
    ConvergentTable t = expand(ExplicitQuotients{{1, 1}}, 2);
    REQUIRE(t.q(2) == 2);
    ResonanceSum r = resonance_sum(t, 2);
    CHECK(r.ratio == Catch::Approx(2.0 / (0.25 * 4.0)).epsilon(1e-12));
}

TEST_CASE("tail_min_sum") {
    Alpha a = sqrt2m1();
    a.ensure([](const ConvergentTable& t) { return t.depth() >= 40; });

    SECTION("c = 1 keeps every term below 1/q^2") {
        TailMinSum s = tail_min_sum(a.table(), 4, 1);
        double qk = to_double(a.table().q(4));
        CHECK(s.sum <= 2.0 / (qk - 1.0));
        CHECK(s.comparison == Catch::Approx(1.0 / qk));
    }

    SECTION("k=6, c=q_6: sum measured against the c/q_k comparison value") {
        BigInt c = a.table().q(6);
        TailMinSum s = tail_min_sum(a.table(), 6, c);
        CHECK_FALSE(s.partial);
        CHECK(s.comparison == Catch::Approx(1.0));
        CHECK(s.sum > 0.0);
        CHECK(s.sum <= 8.0 * s.comparison);  // frozen Lemma-4.2 constant for sqrt(2)-1
    }

    SECTION("the q = q_k term is pinned by (P2)") {
        int k = 6;
        BigInt c = a.table().q(k);
        // first term of the sum is (1/q_k^2) min(1/||q_k alpha||^2, c^2), and
        // (P2) puts 1/||q_k alpha||^2 in (q_{k+1}^2, 4 q_{k+1}^2).
        double qk = to_double(a.table().q(k));
        double qk1 = to_double(a.table().q(k + 1));
        double dist = a.dist(a.table().q(k)).value_d();
        double lead = std::min(1.0 / (dist * dist), to_double(c) * to_double(c)) / (qk * qk);
        CHECK(1.0 / (dist * dist) > qk1 * qk1);
        CHECK(1.0 / (dist * dist) < 4.0 * qk1 * qk1);
        TailMinSum s = tail_min_sum(a.table(), k, c);
        CHECK(s.sum >= 2.0 * lead * (1.0 - 1e-9));
    }

    SECTION("c outside [1, q_k] is a domain error") {
        CHECK_THROWS_AS(tail_min_sum(a.table(), 4, 0), Error);
        CHECK_THROWS_AS(tail_min_sum(a.table(), 4, a.table().q(4) + 1), Error);
    }

    SECTION("huge ranges are truncated and flagged partial") {
        Alpha liou(LiouvilleRule{5, 1});
        TailMinSum s = tail_min_sum(liou.table(), 3, 5, /*cap=*/1000);
        CHECK(s.partial);
        CHECK(s.terms == 1000);
    }
}

TEST_CASE("alpha spec strings parse and round-trip") {
    auto s1 = parse_alpha_spec("surd:-1,2,5");
    CHECK(alpha_spec_to_string(s1) == "surd:-1,2,5");
    auto s2 = parse_alpha_spec("quotients:2,2,2,2");
    CHECK(alpha_spec_to_string(s2) == "quotients:2,2,2,2");
    auto s3 = parse_alpha_spec("rule:liouville:5");
    CHECK(alpha_spec_to_string(s3) == "rule:liouville:5");
    auto s4 = parse_alpha_spec("rule:furstenberg");
    CHECK(alpha_spec_to_string(s4) == "rule:furstenberg");
    CHECK_THROWS_AS(parse_alpha_spec("nonsense:1"), Error);
    CHECK_THROWS_AS(parse_alpha_spec("rule:liouville:0"), Error);
}
