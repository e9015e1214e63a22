#include <doctest.h>

#include <numeric>
#include <random>

#include "atlas/arith.hpp"

using namespace atlas;
using arith::i64;

namespace {

// independent square-enumeration oracle for quadratic residues mod an odd prime
bool is_square_mod(i64 a, i64 p) {
    a %= p;
    if (a < 0) a += p;
    for (i64 x = 0; x < p; ++x)
        if ((x * x) % p == a) return true;
    return false;
}

// independent reduced-form count: enumerate b, then factor 4ac = b^2 - d
i64 class_number_oracle(i64 d) {
    i64 absd = -d;
    i64 count = 0;
    for (i64 b = absd % 2; 3 * b * b <= absd; b += 2) {
        i64 m4 = b * b + absd;
        if (m4 % 4 != 0) continue;
        i64 m = m4 / 4;
        for (i64 a = std::max<i64>(b, 1); a * a <= m; ++a) {
            if (m % a != 0) continue;
            i64 c = m / a;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            if (b == 0 || b == a || a == c)
                count += 1;  // sign of b is forced
            else
                count += 2;  // both (a, b, c) and (a, -b, c)
        }
    }
    return count;
}

}  // namespace

TEST_CASE("kronecker symbol values") {
    CHECK(arith::kronecker(-4, 2) == 0);

    // (-4|13): -4 = 9 (mod 13) is a square; (-8|13): 5 is not
    REQUIRE(is_square_mod(-4, 13));
    REQUIRE(!is_square_mod(-8, 13));
    CHECK(arith::kronecker(-4, 13) == 1);
    CHECK(arith::kronecker(-8, 13) == -1);

    // agreement with the Legendre symbol at odd primes
    for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23}) {
        for (i64 a = -30; a <= 30; ++a) {
            int want = a % p == 0 ? 0 : (is_square_mod(a, p) ? 1 : -1);
            CHECK(arith::kronecker(a, p) == want);
        }
    }

    // full generality
    CHECK(arith::kronecker(1, 0) == 1);
    CHECK(arith::kronecker(-1, 0) == 1);
    CHECK(arith::kronecker(5, 0) == 0);
    CHECK(arith::kronecker(-7, -1) == -1);
    CHECK(arith::kronecker(7, -1) == 1);
    CHECK(arith::kronecker(10, 1) == 1);
}

TEST_CASE("kronecker multiplicativity in the denominator") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<i64> da(-400, 400), dn(1, 200);
    for (int t = 0; t < 3000; ++t) {
        i64 a = da(rng), m = dn(rng), n = dn(rng);
        CHECK(arith::kronecker(a, m * n) ==
              arith::kronecker(a, m) * arith::kronecker(a, n));
    }
}

TEST_CASE("class numbers") {
    CHECK(arith::class_number(-4) == 1);
    CHECK(arith::class_number(-3) == 1);
    CHECK(arith::class_number(-52) == 2);
    CHECK(arith::class_number(-104) == 6);

    for (i64 d = -3; d >= -3000; --d) {
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        CHECK(arith::class_number(d) == class_number_oracle(d));
    }

    CHECK_THROWS_AS(arith::class_number(5), InvalidDiscriminant);
    CHECK_THROWS_AS(arith::class_number(-6), InvalidDiscriminant);
    CHECK_THROWS_AS(arith::class_number(0), InvalidDiscriminant);
}

TEST_CASE("hurwitz class numbers") {
    CHECK(arith::hurwitz_class_number(0) == Rat(-1, 12));
    CHECK(arith::hurwitz_class_number(3) == Rat(1, 3));
    CHECK(arith::hurwitz_class_number(4) == Rat(1, 2));
    CHECK(arith::hurwitz_class_number(1) == Rat(0));
    CHECK(arith::hurwitz_class_number(2) == Rat(0));
    CHECK(arith::hurwitz_class_number(23) == Rat(3));
    // H(n) for n = 4|d| with extra conductors
    CHECK(arith::hurwitz_class_number(16) == Rat(3, 2));  // h(-16) + H(4)-part

    auto table = arith::hurwitz_table(20);
    CHECK(table[0] == Rat(-1, 12));
    CHECK(table[3] == Rat(1, 3));
    CHECK(table[20] == Rat(2));
}

TEST_CASE("squarefree factorization") {
    auto f = arith::factor_squarefree(210);
    CHECK(f.primes == std::vector<i64>{2, 3, 5, 7});
    CHECK(f.divisors().size() == 16);
    CHECK(f.divisors().front() == 1);
    CHECK(f.divisors().back() == 210);

    CHECK(arith::factor_squarefree(1).primes.empty());
    CHECK_THROWS_AS(arith::factor_squarefree(12), NotSquarefree);
    CHECK_THROWS_AS(arith::factor_squarefree(0), BadInput);
}

TEST_CASE("discriminant decomposition") {
    auto d = arith::decompose_discriminant(-572);  // 4 * (-143)
    CHECK(d.fundamental == -143);
    CHECK(d.conductor == 2);
    CHECK(arith::decompose_discriminant(-4).fundamental == -4);
    CHECK(arith::decompose_discriminant(-4).conductor == 1);
    CHECK(arith::decompose_discriminant(-12).fundamental == -3);
    CHECK(arith::decompose_discriminant(-12).conductor == 2);
    CHECK(arith::decompose_discriminant(-75).fundamental == -3);
    CHECK(arith::decompose_discriminant(-75).conductor == 5);
}

TEST_CASE("class number one discriminants") {
    auto h1 = arith::class_number_one_discriminants(10000);
    CHECK(h1 == std::vector<i64>{-3, -4, -7, -8, -11, -19, -43, -67, -163});
}
