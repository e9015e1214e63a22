#include <doctest.h>

#include <sstream>

#include "atlas/cremona.hpp"

using namespace atlas;
using arith::i64;
using cremona::Database;
using cremona::EllipticCurveRecord;

TEST_CASE("database parsing") {
    std::istringstream in("210 D 2 [1,1,0,-23,33] 1 4\n");
    Database db = Database::parse(in);
    REQUIRE(db.curves.size() == 1);
    const auto& c = db.curves[0];
    CHECK(c.conductor == 210);
    CHECK(c.cls == "D");
    CHECK(c.number == 2);
    CHECK(c.a == std::array<i64, 5>{1, 1, 0, -23, 33});
    CHECK(c.rank == 1);
    CHECK(c.torsion == 4);
    CHECK(c.label() == "210D2");

    std::istringstream empty("");
    CHECK(Database::parse(empty).curves.empty());

    std::istringstream bad("210 D 2 [1,1,0]\n");
    CHECK_THROWS_AS(Database::parse(bad), ParseError);

    std::istringstream arity("210 D 2 [1,1,0] 1 4\n");
    CHECK_THROWS_AS(Database::parse(arity), ParseError);

    std::istringstream dup("26 A 1 [1,0,1,-5,-8] 0 3\n26 a 1 [1,0,1,-5,-8] 0 3\n");
    CHECK_THROWS_AS(Database::parse(dup), DuplicateLabel);

    std::istringstream comments("# header\n\n26 A 1 [1,0,1,-5,-8] 0 3 # note\n");
    CHECK(Database::parse(comments).curves.size() == 1);

    // brackets with internal spaces
    std::istringstream spaced("210 D 2 [1, 1, 0, -23, 33] 1 4\n");
    Database db2 = Database::parse(spaced);
    REQUIRE(db2.curves.size() == 1);
    CHECK(db2.curves[0].a == std::array<i64, 5>{1, 1, 0, -23, 33});

    std::istringstream singular("15 A 1 [0,0,0,0,0] 0 1\n");
    CHECK_THROWS_AS(Database::parse(singular), ParseError);
}

TEST_CASE("round trip") {
    std::istringstream in(
        "26 A 1 [1,0,1,-5,-8] 0 3\n"
        "26 B 1 [1,-1,1,-3,3] 0 7\n"
        "210 D 2 [1,1,0,-23,33] 1 4\n");
    Database db = Database::parse(in);
    std::istringstream again(db.serialize());
    CHECK(Database::parse(again).serialize() == db.serialize());
}

TEST_CASE("point counting") {
    // y^2 = x^3 + x: 4 points over F_3 including infinity
    EllipticCurveRecord cm;
    cm.conductor = 64;  // only the equation matters here
    cm.cls = "A";
    cm.number = 1;
    cm.a = {0, 0, 0, 1, 0};
    CHECK(cremona::ap(cm, 3) == 0);
    CHECK(cremona::ap(cm, 5) == 2);

    // Hasse bound over a few good primes
    EllipticCurveRecord e11;
    e11.conductor = 11;
    e11.cls = "A";
    e11.number = 1;
    e11.a = {0, -1, 1, -10, -20};
    for (i64 p : {2, 3, 5, 7, 13, 17, 19, 23}) {
        i64 a = cremona::ap(e11, p);
        CHECK(a * a <= 4 * p);
    }
    CHECK(cremona::ap(e11, 2) == -2);
    CHECK(cremona::ap(e11, 3) == -1);
    CHECK(cremona::ap(e11, 5) == 1);
    CHECK_THROWS_AS(cremona::ap(e11, 11), BadReduction);
}

TEST_CASE("multiplicative reduction") {
    EllipticCurveRecord e11;
    e11.conductor = 11;
    e11.cls = "A";
    e11.number = 1;
    e11.a = {0, -1, 1, -10, -20};
    CHECK(e11.discriminant() == -161051);  // -11^5
    CHECK(cremona::ap_multiplicative(e11, 11) == 1);
    CHECK(cremona::al_sign(e11, 11) == -1);
    CHECK(cremona::multiplicative_type(e11, 11) == KodairaSymbol{5});
    CHECK_THROWS_AS(cremona::multiplicative_type(e11, 7), NotMultiplicative);
    CHECK_THROWS_AS(cremona::ap_multiplicative(e11, 7), NotMultiplicative);
}
