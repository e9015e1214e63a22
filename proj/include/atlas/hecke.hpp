#pragma once

#include <utility>
#include <vector>

#include "atlas/arith.hpp"
#include "atlas/rational.hpp"

namespace atlas::hecke {

using arith::i64;

// Trace of the Hecke operator T_m on S_2(Gamma_0(N)).
// Requires N >= 1 squarefree and gcd(m, N) = 1; throws UnsupportedInput
// otherwise.  Backed by the weight-2 modular-symbol presentation of the
// space with exact rational linear algebra.
i64 trace_hecke(i64 N, i64 m);

// Trace of T_m on the new subspace of S_2(Gamma_0(N)):
// sum over d | N of beta(N/d) * trace_hecke(d, m), beta multiplicative with
// beta(p) = -2.
i64 trace_hecke_new(i64 N, i64 m);

struct FrobeniusCount {
    i64 D = 0;
    i64 ell = 0;
    int k = 1;
    i64 count = 0;
};

// Number of points of the good-reduction fiber at ell over F_{ell^k}, k <= 2,
// from new-subspace traces at level D.
FrobeniusCount point_count(i64 D, i64 ell, int k);

struct ParityWitness {
    i64 ell = 0;
    int residue = 0;  // point count over F_ell, mod 4
};

// For D = 3p, p = 2 (mod 3), genus >= 2: the good prime used for the
// mod-4 point-count test and the resulting residue.
ParityWitness parity_witness(i64 D);

// Genus of X_0(N) for squarefree N, by the standard index/elliptic-point
// formula.  Used as a structural cross-check on the symbol spaces.
i64 genus_x0(i64 N);

// Dimension of the cuspidal modular-symbol space at level N (equals twice
// the genus of X_0(N)).
i64 cuspidal_dimension(i64 N);

// Dimension of the simultaneous kernel of (T_ell - a_ell) on the cuspidal
// space over all listed pairs.  A weight-2 newform of exact level N with
// rational eigenvalues contributes dimension exactly 2.
i64 simultaneous_eigenspace_dim(i64 N,
                                const std::vector<std::pair<i64, i64>>& eigs);

void clear_caches();

}  // namespace atlas::hecke
