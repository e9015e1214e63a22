#pragma once

#include <array>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "atlas/arith.hpp"
#include "atlas/kodaira.hpp"

namespace atlas::cremona {

using arith::i64;

// One row of an "allcurves"-style elliptic curve table:
//   conductor  class  number  [a1,a2,a3,a4,a6]  rank  torsion
struct EllipticCurveRecord {
    i64 conductor = 0;
    std::string cls;  // isogeny class letters, stored uppercase
    int number = 0;
    std::array<i64, 5> a{};  // a1, a2, a3, a4, a6
    i64 rank = 0;
    i64 torsion = 1;

    std::string label() const;

    i64 b2() const { return a[0] * a[0] + 4 * a[1]; }
    i64 b4() const { return 2 * a[3] + a[0] * a[2]; }
    i64 b6() const { return a[2] * a[2] + 4 * a[4]; }
    i64 b8() const {
        return a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] +
               a[1] * a[2] * a[2] - a[3] * a[3];
    }
    i64 discriminant() const;  // of this (trusted minimal) equation
};

struct Database {
    std::vector<EllipticCurveRecord> curves;

    static Database parse(std::istream& in);
    static Database load_file(const std::string& path);

    bool has_conductor(i64 N) const;
    std::vector<const EllipticCurveRecord*> at_conductor(i64 N) const;
    std::vector<std::string> classes_at(i64 N) const;
    std::vector<const EllipticCurveRecord*> curves_in_class(i64 N,
                                                            const std::string& cls) const;
    const EllipticCurveRecord* find(i64 N, const std::string& cls, int number) const;

    // normalized row set, one curve per line, parse-compatible
    std::string serialize() const;
};

// a_p = p + 1 - #E(F_p) at a prime of good reduction, by direct counting.
i64 ap(const EllipticCurveRecord& E, i64 p);

// a_p in {+1, -1} at a prime of multiplicative reduction (p || conductor).
int ap_multiplicative(const EllipticCurveRecord& E, i64 p);

// Modular Atkin-Lehner eigenvalue lambda_p = -a_p at p || conductor.
int al_sign(const EllipticCurveRecord& E, i64 p);

// Reduction type I_n at p || conductor: n = v_p of the minimal discriminant.
KodairaSymbol multiplicative_type(const EllipticCurveRecord& E, i64 p);

}  // namespace atlas::cremona
