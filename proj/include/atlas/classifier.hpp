#pragma once

#include <string>
#include <vector>

#include "atlas/invariants.hpp"
#include "atlas/rational.hpp"

namespace atlas::classifier {

using arith::i64;
using invariants::ShimuraDiscriminant;

struct BiellipticReport {
    i64 D = 0;
    i64 genus = 0;
    std::vector<i64> bielliptic_m;     // m with n(w_m) = 2g - 2
    std::vector<i64> hyperelliptic_m;  // m with n(w_m) = 2g + 2
};

// Atkin-Lehner involutions with 2g - 2 fixed points.  Throws GenusTooSmall
// when the genus is below 2.
std::vector<i64> bielliptic_involutions(const ShimuraDiscriminant& D);

// Atkin-Lehner involutions with 2g + 2 fixed points (genus-0 quotient).
std::vector<i64> hyperelliptic_involutions(const ShimuraDiscriminant& D);

// Fixed-point pattern audit for bielliptic curves with elementary-abelian
// automorphism group: for a bielliptic v and w not in {1, v}, the pair
// {n(w), n(vw)} must be {2,6} in even genus and one of {0,0},{0,8},{4,4}
// in odd genus.
struct PairAudit {
    struct Offense {
        i64 v = 0, m = 0;
        i64 n_w = 0, n_vw = 0;
    };
    i64 D = 0;
    bool pass = true;
    std::vector<Offense> offenses;
};
PairAudit involution_pair_audit(const ShimuraDiscriminant& D);

// Finiteness bound: good-reduction point counts over F_{ell^2} for small ell
// cap the size of a bielliptic discriminant.
struct ExclusionEvidence {
    i64 D = 0;
    bool excluded = false;
    i64 ell = 0;         // witness prime (0 when excluded by the smooth rule)
    Rat lower_bound;     // (ell-1)/12 * prod_{p|D} (p-1)
    i64 weil_cap = 0;    // 2 (ell+1)^2
    bool by_full_smooth = false;  // 2*3*5*7*11 | D
};
ExclusionEvidence bielliptic_bound_excludes(const ShimuraDiscriminant& D);

// All D <= d_max with genus >= 2 and at least one bielliptic involution,
// ascending.  jobs = 0 means use the available hardware parallelism.
std::vector<BiellipticReport> scan_bielliptic(i64 d_max, int jobs = 0);

enum class AutRule {
    NoEllipticPoints,   // e2 = e3 = 0
    CMFixedPair,        // D = 2p, p = 3 (mod 4)
    BadFiberLengthTwo,  // D = 2p, p = 1 (mod 4), or D = 3p, p = 1 (mod 3)
    GoodFiberParity,    // D = 3p, p = 2 (mod 3), point count mod 4 nonzero
};

enum class AutConclusion { AutIsAtkinLehner, KnownSpecialCase, Unknown };

struct AutCertificate {
    i64 D = 0;
    AutConclusion conclusion = AutConclusion::Unknown;
    AutRule rule = AutRule::NoEllipticPoints;  // valid when AutIsAtkinLehner
    int lower_rank = 0;                        // 2r = number of prime factors
    std::vector<AutRule> fired;                // every rule that applies
    std::string evidence;
};

AutCertificate aut_certificate(const ShimuraDiscriminant& D);

const char* rule_name(AutRule r);
const char* conclusion_name(AutConclusion c);

}  // namespace atlas::classifier
