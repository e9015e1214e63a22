#pragma once

#include <utility>
#include <vector>

#include "atlas/arith.hpp"

namespace atlas::invariants {

using arith::FactoredSquarefree;
using arith::i64;

// Discriminant of an indefinite non-split rational quaternion algebra:
// squarefree with an even number (>= 2) of prime factors.
struct ShimuraDiscriminant {
    FactoredSquarefree D;

    i64 value() const { return D.value; }
    const std::vector<i64>& primes() const { return D.primes; }

    static ShimuraDiscriminant make(i64 n);
    static bool is_valid(i64 n);
};

// Discriminants of all valid D in [2, max], ascending.
std::vector<i64> valid_discriminants(i64 max);

// Counts of elliptic points of order 2 and 3.
std::pair<i64, i64> elliptic_point_counts(const ShimuraDiscriminant& D);

i64 genus(const ShimuraDiscriminant& D);

// Number of fixed points n(w_m) of the Atkin-Lehner involution w_m, m | D, m > 1.
i64 fixed_point_count(const ShimuraDiscriminant& D, i64 m);

// Genus of the quotient curve by w_m, via 2g - 2 = 2(2g' - 2) + n(w_m).
i64 quotient_genus(const ShimuraDiscriminant& D, i64 m);

// All m | D indexing the Atkin-Lehner group (2^omega values, m = 1 included).
std::vector<i64> atkin_lehner_divisors(const ShimuraDiscriminant& D);

// Group law w_m . w_m' = w_{mm'/gcd(m,m')^2}.
i64 al_compose(i64 m, i64 mp);

struct CurveInvariants {
    i64 D = 0;
    i64 e2 = 0;
    i64 e3 = 0;
    i64 genus = 0;
    std::vector<std::pair<i64, i64>> fixed_counts;  // (m, n(w_m)) for m | D, m > 1
};

CurveInvariants curve_invariants(const ShimuraDiscriminant& D);

}  // namespace atlas::invariants
