#include <doctest.h>

#include <sstream>

#include "atlas/quad_points.hpp"

using namespace atlas;
using arith::i64;

namespace {

const std::string kData = ATLAS_TEST_DATA_DIR;

const quad::Context& ctx() {
    static quad::Context c = quad::Context::load(kData);
    return c;
}

const cremona::Database& db() {
    static cremona::Database d =
        cremona::Database::load_file(fixtures::allcurves_path(kData));
    return d;
}

}  // namespace

TEST_CASE("deficiency lookups") {
    auto d39 = ctx().deficiency.get(39, 13);
    CHECK(d39.real);
    CHECK(d39.primes == std::vector<i64>{3});

    auto d115 = ctx().deficiency.get(115, 23);
    CHECK(!d115.real);
    CHECK(d115.primes == std::vector<i64>{5});

    CHECK(ctx().deficiency.get(26, 2).empty());
}

TEST_CASE("heegner witnesses") {
    auto w = quad::heegner_rational_point(210, 210);
    REQUIRE(w.has_value());
    CHECK(w->d == -43);
    CHECK(w->inert == std::vector<i64>{2, 3, 5, 7});

    CHECK(!quad::heegner_rational_point(26, 2).has_value());
    CHECK(!quad::heegner_rational_point(58, 2).has_value());

    auto w26 = quad::heegner_rational_point(26, 13);
    REQUIRE(w26.has_value());
    CHECK(w26->d == -8);

    CHECK_THROWS_AS(quad::heegner_rational_point(26, 26), BadInput);
}

TEST_CASE("genus-2 fallback") {
    CHECK(quad::kuhn_fallback(26, 2));
    CHECK(quad::kuhn_fallback(58, 2));
    CHECK(!quad::kuhn_fallback(115, 23));  // genus 7
    CHECK(!quad::kuhn_fallback(210, 210));  // heegner point exists
}

TEST_CASE("elliptic quotient identification at 210") {
    auto qc = quad::elliptic_quotient_class(210, 210, db());
    CHECK(qc.cls == "D");
    CHECK(qc.rank == 1);
    REQUIRE(qc.curve != nullptr);
    CHECK(qc.curve->label() == "210D2");
    CHECK(qc.curve->a == std::array<i64, 5>{1, 1, 0, -23, 33});
    CHECK(cremona::multiplicative_type(*qc.curve, 3) == KodairaSymbol{2});
    // the sign of the quaternionic w_210 eigenvalue is the product of the
    // multiplicative a_p over p | 210
    int sign = 1;
    for (i64 p : {2, 3, 5, 7}) sign *= cremona::ap_multiplicative(*qc.curve, p);
    CHECK(sign == 1);
}

TEST_CASE("quotient identification at 65") {
    auto qc = quad::elliptic_quotient_class(65, 65, db());
    CHECK(qc.cls == "A");
    CHECK(qc.rank == 1);
}

TEST_CASE("verdicts") {
    auto v210 = quad::quadratic_points_verdict(210, db(), ctx());
    CHECK(v210.status == quad::Status::InfiniteBielliptic);
    CHECK(v210.m == 210);
    CHECK(v210.quotient_label == "210D2");
    CHECK(v210.rank == 1);
    REQUIRE(v210.witness.has_value());
    CHECK(v210.witness->d == -43);

    auto v115 = quad::quadratic_points_verdict(115, db(), ctx());
    CHECK(v115.status == quad::Status::Finite);
    REQUIRE(!v115.justifications.empty());

    auto v26 = quad::quadratic_points_verdict(26, db(), ctx());
    CHECK(v26.status == quad::Status::InfiniteHyperelliptic);
    CHECK(v26.m == 26);

    auto v202 = quad::quadratic_points_verdict(202, db(), ctx());
    CHECK(v202.status == quad::Status::Finite);
    bool rank_reason = false;
    for (auto& j : v202.justifications)
        if (j.find("rank 0") != std::string::npos) rank_reason = true;
    CHECK(rank_reason);
}

TEST_CASE("quotient identification error paths") {
    // no curves at the conductor
    cremona::Database empty;
    CHECK_THROWS_AS(quad::elliptic_quotient_class(210, 210, empty),
                    MissingConductor);

    // a database missing the matching-sign class cannot identify the quotient
    std::istringstream partial("26 A 1 [1,0,1,-5,-8] 0 3\n");
    cremona::Database onlyA = cremona::Database::parse(partial);
    CHECK(quad::elliptic_quotient_class(26, 13, onlyA).cls == "A");
    CHECK_THROWS_AS(quad::elliptic_quotient_class(26, 2, onlyA), AmbiguousClass);

    // not a genus-1 quotient
    CHECK_THROWS_AS(quad::elliptic_quotient_class(26, 26, db()), BadInput);
}

TEST_CASE("full table reproduction") {
    auto got = quad::quadratic_points_table(db(), ctx());
    auto diffs = quad::compare_table3(got, ctx());
    for (auto& d : diffs) MESSAGE(d);
    CHECK(diffs.empty());

    // 39 rows over 38 discriminants, 58 twice
    CHECK(got.size() == 39);
}
