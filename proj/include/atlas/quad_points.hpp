#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atlas/cremona.hpp"
#include "atlas/fixtures.hpp"
#include "atlas/invariants.hpp"

namespace atlas::quad {

using arith::i64;

struct Places {
    bool real = false;
    std::vector<i64> primes;

    bool empty() const { return !real && primes.empty(); }
    std::string str() const;
};

// Curated deficiency data for the genus-1 Atkin-Lehner quotients.
struct DeficiencyTable {
    std::map<std::pair<i64, i64>, Places> rows;

    Places get(i64 D, i64 m) const;
};

// Bundled fixtures used by the quadratic-points pipeline.
struct Context {
    DeficiencyTable deficiency;
    std::vector<fixtures::HyperellipticRow> hyperelliptic;
    std::vector<fixtures::Table3Row> table3;

    bool is_hyperelliptic_over_q(i64 D) const;
    const fixtures::HyperellipticRow* hyperelliptic_row(i64 D) const;

    static Context load(const std::string& data_dir);
};

struct HeegnerWitness {
    i64 D = 0, m = 0;
    i64 d = 0;                // CM discriminant, fundamental, h(d) = 1
    std::vector<i64> inert;   // primes of D inert in Q(sqrt(d))
};

// Least |d| fundamental discriminant with h(d) = 1 such that every p | D is
// non-split and the inert primes multiply to m.  Requires a genus-1 quotient.
std::optional<HeegnerWitness> heegner_rational_point(i64 D, i64 m);

// The genus-2 rational-point fallback for a genus-1 quotient without a
// Heegner witness.
bool kuhn_fallback(i64 D, i64 m);

struct QuotientClass {
    i64 conductor = 0;
    std::string cls;
    const cremona::EllipticCurveRecord* curve = nullptr;  // set when pinned
    i64 rank = 0;

    std::string label() const;
};

// The isogeny class of the genus-1 quotient by w_m: the unique conductor-D
// class whose eigenvalue for w_m on the quaternionic side is +1.  The curve
// within the class is pinned through the bad-fiber reduction type when that
// computation is available.
QuotientClass elliptic_quotient_class(i64 D, i64 m, const cremona::Database& db);

enum class Status { InfiniteHyperelliptic, InfiniteBielliptic, Finite };

struct Verdict {
    i64 D = 0;
    Status status = Status::Finite;
    i64 m = 0;                   // involution for the Infinite* statuses
    std::string quotient_label;  // "P1" or curve/class label
    i64 rank = -1;
    std::optional<HeegnerWitness> witness;
    bool kuhn = false;
    std::vector<std::string> justifications;  // non-empty for Finite
};

Verdict quadratic_points_verdict(i64 D, const cremona::Database& db,
                                 const Context& ctx);

struct Table3Entry {
    i64 D = 0;
    i64 m = 0;
    std::string quotient;  // "P1" or class/curve label
    i64 rank = -1;         // for elliptic rows
};

// All rows (D <= d_max, genus >= 2) with infinitely many quadratic points:
// the rational-quotient rows plus every positive-rank bielliptic quotient.
std::vector<Table3Entry> quadratic_points_table(const cremona::Database& db,
                                                const Context& ctx,
                                                i64 d_max = 546);

// Differences against the bundled fixture (empty = exact match, modulo the
// recorded erratum notes).
std::vector<std::string> compare_table3(const std::vector<Table3Entry>& got,
                                        const Context& ctx);

const char* status_name(Status s);

}  // namespace atlas::quad
