#pragma once

#include <cstdint>
#include <vector>

#include "atlas/errors.hpp"
#include "atlas/rational.hpp"

namespace atlas::arith {

using i64 = long long;

// Kronecker symbol (a|n), defined for every integer n (including n <= 0).
int kronecker(i64 a, i64 n);

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);

// Squarefree positive integer kept with its ascending prime factorization.
struct FactoredSquarefree {
    i64 value = 1;
    std::vector<i64> primes;  // ascending, distinct, product = value

    std::vector<i64> divisors() const;  // all divisors, ascending
    bool divisible_by(i64 p) const;
    std::size_t omega() const { return primes.size(); }
};

// Factors n; throws NotSquarefree if a square divides n, BadInput if n < 1.
FactoredSquarefree factor_squarefree(i64 n);

// Number of primitive reduced forms (a,b,c), b^2-4ac = d, |b| <= a <= c,
// b >= 0 when |b| = a or a = c, gcd(a,b,c) = 1.  Requires d < 0 and
// d = 0,1 (mod 4).  Memoized; safe for concurrent callers.
i64 class_number(i64 d);

// Hurwitz class number H(n), n >= 0.  Zero for n = 1,2 (mod 4); H(0) = -1/12.
Rat hurwitz_class_number(i64 n);

// Bulk table H(0..n_max), by the same definition.
std::vector<Rat> hurwitz_table(i64 n_max);

// d = fundamental * conductor^2 for a negative discriminant d.
struct DiscDecomposition {
    i64 fundamental;
    i64 conductor;
};
DiscDecomposition decompose_discriminant(i64 d);

// Negative fundamental discriminants with h(d) = 1 and |d| <= bound,
// ordered by |d|.
std::vector<i64> class_number_one_discriminants(i64 bound);

void clear_caches();

}  // namespace atlas::arith
