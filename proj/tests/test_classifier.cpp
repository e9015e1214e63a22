#include <doctest.h>

#include "atlas/classifier.hpp"

using namespace atlas;
using arith::i64;
using invariants::ShimuraDiscriminant;

TEST_CASE("bielliptic involutions") {
    CHECK(classifier::bielliptic_involutions(ShimuraDiscriminant::make(26)) ==
          std::vector<i64>{2, 13});
    CHECK(classifier::bielliptic_involutions(ShimuraDiscriminant::make(145)).empty());
    CHECK(classifier::bielliptic_involutions(ShimuraDiscriminant::make(210)) ==
          std::vector<i64>{30, 42, 70, 105, 210});
    CHECK_THROWS_AS(classifier::bielliptic_involutions(ShimuraDiscriminant::make(6)),
                    GenusTooSmall);
    CHECK_THROWS_AS(classifier::bielliptic_involutions(ShimuraDiscriminant::make(15)),
                    GenusTooSmall);
}

TEST_CASE("hyperelliptic involutions") {
    CHECK(classifier::hyperelliptic_involutions(ShimuraDiscriminant::make(26)) ==
          std::vector<i64>{26});
    CHECK(classifier::hyperelliptic_involutions(ShimuraDiscriminant::make(58)) ==
          std::vector<i64>{29});
    CHECK(classifier::hyperelliptic_involutions(ShimuraDiscriminant::make(210)).empty());
    // hyperelliptic only over a quadratic extension: the involution is there
    CHECK(classifier::hyperelliptic_involutions(ShimuraDiscriminant::make(57)) ==
          std::vector<i64>{19});
}

TEST_CASE("involution pair audit") {
    CHECK(classifier::involution_pair_audit(ShimuraDiscriminant::make(26)).pass);
    CHECK(classifier::involution_pair_audit(ShimuraDiscriminant::make(35)).pass);
    CHECK(classifier::involution_pair_audit(ShimuraDiscriminant::make(210)).pass);
}

TEST_CASE("finiteness bound") {
    auto ev551 = classifier::bielliptic_bound_excludes(ShimuraDiscriminant::make(551));
    CHECK(ev551.excluded);
    CHECK(ev551.ell == 2);
    CHECK(ev551.lower_bound == Rat(42));
    CHECK(ev551.weil_cap == 18);

    CHECK(!classifier::bielliptic_bound_excludes(ShimuraDiscriminant::make(210)).excluded);
    CHECK(!classifier::bielliptic_bound_excludes(ShimuraDiscriminant::make(546)).excluded);

    auto smooth = classifier::bielliptic_bound_excludes(
        ShimuraDiscriminant::make(2 * 3 * 5 * 7 * 11 * 13));
    CHECK(smooth.excluded);
    CHECK(smooth.by_full_smooth);
}

TEST_CASE("bielliptic scans") {
    auto rows30 = classifier::scan_bielliptic(30, 1);
    REQUIRE(rows30.size() == 1);
    CHECK(rows30[0].D == 26);
    CHECK(rows30[0].genus == 2);

    CHECK(classifier::scan_bielliptic(25, 1).empty());

    // deterministic under parallelism
    auto seq = classifier::scan_bielliptic(550, 1);
    auto par = classifier::scan_bielliptic(550, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].D == par[i].D);
        CHECK(seq[i].bielliptic_m == par[i].bielliptic_m);
    }
}

TEST_CASE("automorphism certificates") {
    auto c26 = classifier::aut_certificate(ShimuraDiscriminant::make(26));
    CHECK(c26.conclusion == classifier::AutConclusion::AutIsAtkinLehner);
    CHECK(c26.rule == classifier::AutRule::NoEllipticPoints);
    CHECK(c26.lower_rank == 2);

    auto c94 = classifier::aut_certificate(ShimuraDiscriminant::make(94));
    CHECK(c94.conclusion == classifier::AutConclusion::AutIsAtkinLehner);
    CHECK(c94.rule == classifier::AutRule::CMFixedPair);

    auto c106 = classifier::aut_certificate(ShimuraDiscriminant::make(106));
    CHECK(c106.conclusion == classifier::AutConclusion::AutIsAtkinLehner);
    CHECK(c106.rule == classifier::AutRule::BadFiberLengthTwo);

    // the mod-4 count at 109 vanishes at 51, so no implemented rule certifies
    // the automorphism group there
    auto c51 = classifier::aut_certificate(ShimuraDiscriminant::make(51));
    CHECK(c51.conclusion == classifier::AutConclusion::Unknown);

    // ... while it works at the two discriminants with replacement primes
    auto c267 = classifier::aut_certificate(ShimuraDiscriminant::make(267));
    CHECK(c267.conclusion == classifier::AutConclusion::AutIsAtkinLehner);
    CHECK(c267.rule == classifier::AutRule::GoodFiberParity);

    auto c145 = classifier::aut_certificate(ShimuraDiscriminant::make(145));
    CHECK(c145.conclusion == classifier::AutConclusion::KnownSpecialCase);

    auto c330 = classifier::aut_certificate(ShimuraDiscriminant::make(330));
    CHECK(c330.conclusion == classifier::AutConclusion::Unknown);
    CHECK(c330.lower_rank == 4);

    CHECK_THROWS_AS(classifier::aut_certificate(ShimuraDiscriminant::make(6)),
                    GenusTooSmall);
}
