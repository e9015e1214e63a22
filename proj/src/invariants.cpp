#include "atlas/invariants.hpp"

#include <numeric>
#include <string>

namespace atlas::invariants {

using arith::class_number;
using arith::decompose_discriminant;
using arith::kronecker;

ShimuraDiscriminant ShimuraDiscriminant::make(i64 n) {
    FactoredSquarefree f = arith::factor_squarefree(n);
    if (f.primes.size() < 2 || f.primes.size() % 2 != 0)
        throw InvalidDiscriminant(
            "quaternion discriminant needs an even number (>= 2) of prime factors: " +
            std::to_string(n));
    return ShimuraDiscriminant{std::move(f)};
}

bool ShimuraDiscriminant::is_valid(i64 n) {
    if (n < 2) return false;
    try {
        FactoredSquarefree f = arith::factor_squarefree(n);
        return f.primes.size() >= 2 && f.primes.size() % 2 == 0;
    } catch (const Error&) {
        return false;
    }
}

std::vector<i64> valid_discriminants(i64 max) {
    std::vector<i64> out;
    for (i64 n = 6; n <= max; ++n)
        if (ShimuraDiscriminant::is_valid(n)) out.push_back(n);
    return out;
}

std::pair<i64, i64> elliptic_point_counts(const ShimuraDiscriminant& D) {
    i64 e2 = 1, e3 = 1;
    for (i64 p : D.primes()) {
        e2 *= 1 - kronecker(-4, p);
        e3 *= 1 - kronecker(-3, p);
    }
    return {e2, e3};
}

i64 genus(const ShimuraDiscriminant& D) {
    auto [e2, e3] = elliptic_point_counts(D);
    Rat phi(1);
    for (i64 p : D.primes()) phi *= Rat(p - 1);
    Rat g = Rat(1) + phi / Rat(12) - Rat(e2, 4) - Rat(e3, 3);
    if (!g.is_integer() || g.num < 0)
        throw InternalInconsistency("genus formula non-integral at D = " +
                                    std::to_string(D.value()));
    return g.integer();
}

namespace {

// Local factor at a prime p not dividing m, for the order of discriminant d:
// zero when p divides the conductor of d, else 1 - (d|p).
i64 local_factor(i64 d, i64 p) {
    if (decompose_discriminant(d).conductor % p == 0) return 0;
    return 1 - kronecker(d, p);
}

i64 fixed_count_term(i64 d, const std::vector<i64>& cofactor_primes) {
    i64 t = class_number(d);
    for (i64 p : cofactor_primes) {
        if (t == 0) break;
        t *= local_factor(d, p);
    }
    return t;
}

}  // namespace

i64 fixed_point_count(const ShimuraDiscriminant& D, i64 m) {
    if (m <= 1 || D.value() % m != 0)
        throw BadInput("fixed_point_count: m = " + std::to_string(m) +
                       " is not a divisor > 1 of D = " + std::to_string(D.value()));
    std::vector<i64> cof;
    for (i64 p : D.primes())
        if (m % p != 0) cof.push_back(p);

    if (m == 2) return fixed_count_term(-4, cof) + fixed_count_term(-8, cof);
    if (m % 4 == 3) return fixed_count_term(-m, cof) + fixed_count_term(-4 * m, cof);
    return fixed_count_term(-4 * m, cof);
}

i64 quotient_genus(const ShimuraDiscriminant& D, i64 m) {
    i64 g = genus(D);
    i64 n = fixed_point_count(D, m);
    i64 num = 2 * g + 2 - n;
    if (num % 4 != 0 || num < 0)
        throw InternalInconsistency(
            "Riemann-Hurwitz does not give a genus for (D, m) = (" +
            std::to_string(D.value()) + ", " + std::to_string(m) + ")");
    return num / 4;
}

std::vector<i64> atkin_lehner_divisors(const ShimuraDiscriminant& D) {
    return D.D.divisors();
}

i64 al_compose(i64 m, i64 mp) {
    i64 g = std::gcd(m, mp);
    return m / g * (mp / g);
}

CurveInvariants curve_invariants(const ShimuraDiscriminant& D) {
    CurveInvariants inv;
    inv.D = D.value();
    auto [e2, e3] = elliptic_point_counts(D);
    inv.e2 = e2;
    inv.e3 = e3;
    inv.genus = genus(D);
    for (i64 m : atkin_lehner_divisors(D))
        if (m > 1) inv.fixed_counts.emplace_back(m, fixed_point_count(D, m));
    return inv;
}

}  // namespace atlas::invariants
