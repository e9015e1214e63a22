#include "atlas/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "atlas/cd_graphs.hpp"
#include "atlas/classifier.hpp"
#include "atlas/cremona.hpp"
#include "atlas/fixtures.hpp"
#include "atlas/hecke.hpp"
#include "atlas/invariants.hpp"
#include "atlas/quad_points.hpp"

namespace atlas::audit {

using arith::i64;
using invariants::ShimuraDiscriminant;

namespace {

CheckResult run_check(const std::string& name,
                      const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
        r.detail = body();  // empty = pass
        r.pass = r.detail.empty();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    return r;
}

std::string kronecker_checks() {
    std::mt19937 rng(20260808);
    std::uniform_int_distribution<i64> da(-500, 500), dn(1, 300);
    for (int t = 0; t < 4000; ++t) {
        i64 a = da(rng), m = dn(rng), n = dn(rng);
        if (arith::kronecker(a, m * n) !=
            arith::kronecker(a, m) * arith::kronecker(a, n))
            return "multiplicativity failed at a=" + std::to_string(a) +
                   " m=" + std::to_string(m) + " n=" + std::to_string(n);
    }
    for (i64 a = -50; a <= 50; ++a) {
        int want;
        if (a % 2 == 0)
            want = 0;
        else {
            i64 r = ((a % 8) + 8) % 8;
            want = (r == 1 || r == 7) ? 1 : -1;
        }
        if (arith::kronecker(a, 2) != want)
            return "(a|2) wrong at a=" + std::to_string(a);
    }
    return "";
}

std::string class_number_checks() {
    if (arith::class_number(-3) != 1 || arith::class_number(-4) != 1)
        return "h(-3) or h(-4) is not 1";
    for (i64 d = -3; d >= -2000; --d) {
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        if (arith::class_number(d) < 1)
            return "h(" + std::to_string(d) + ") < 1";
    }
    return "";
}

std::string class_number_oddness() {
    for (i64 p : arith::primes_up_to(1000)) {
        if (p % 4 != 3) continue;
        if (arith::class_number(-p) % 2 == 0)
            return "h(-" + std::to_string(p) + ") is even";
    }
    return "";
}

// direct weighted count of all reduced forms of discriminant -n
Rat hurwitz_direct(i64 n) {
    Rat h(0);
    for (i64 a = 1; 3 * a * a <= n; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b + n;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (b == 0 && a == c)
                h += Rat(1, 2);
            else if (b == a && a == c)
                h += Rat(1, 3);
            else
                h += Rat(1);
        }
    }
    return h;
}

std::string hurwitz_consistency() {
    if (arith::hurwitz_class_number(0) != Rat(-1, 12)) return "H(0) wrong";
    for (i64 n = 1; n <= 2000; ++n) {
        Rat h = arith::hurwitz_class_number(n);
        i64 r = n % 4;
        if (r == 1 || r == 2) {
            if (!h.is_zero()) return "H nonzero at n=" + std::to_string(n);
            continue;
        }
        if (h != hurwitz_direct(n))
            return "H mismatch at n=" + std::to_string(n) + ": formula " + h.str() +
                   ", direct " + hurwitz_direct(n).str();
    }
    return "";
}

std::string genus_linear_identity() {
    for (i64 Dv : invariants::valid_discriminants(1000)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(Dv);
        auto [e2, e3] = invariants::elliptic_point_counts(D);
        i64 g = invariants::genus(D);
        i64 phi = 1;
        for (i64 p : D.primes()) phi *= p - 1;
        if (12 * (g - 1) + 3 * e2 + 4 * e3 != phi)
            return "identity failed at D=" + std::to_string(Dv);
    }
    return "";
}

std::string odd_genus_checks() {
    for (i64 Dv : invariants::valid_discriminants(1000)) {
        if (Dv % 2 == 0) continue;
        ShimuraDiscriminant D = ShimuraDiscriminant::make(Dv);
        if (invariants::genus(D) % 2 != 1)
            return "even genus at odd D=" + std::to_string(Dv);
    }
    return "";
}

std::string rh_integrality() {
    for (i64 Dv : invariants::valid_discriminants(1000)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(Dv);
        for (i64 m : invariants::atkin_lehner_divisors(D)) {
            if (m <= 1) continue;
            i64 n = invariants::fixed_point_count(D, m);
            if (n < 0 || n % 2 != 0)
                return "odd fixed count at (D, m) = (" + std::to_string(Dv) + ", " +
                       std::to_string(m) + ")";
            invariants::quotient_genus(D, m);  // throws on failure
        }
    }
    return "";
}

std::string table1_golden(const std::string& data_dir, int jobs) {
    auto fixture = fixtures::load_table1(data_dir);
    auto scan = classifier::scan_bielliptic(5000, jobs);
    if (scan.size() != fixture.size()) {
        return "scan found " + std::to_string(scan.size()) + " rows, fixture has " +
               std::to_string(fixture.size());
    }
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const auto& got = scan[i];
        const auto& want = fixture[i];
        std::vector<i64> winv = want.involutions;
        std::sort(winv.begin(), winv.end());
        std::vector<i64> ginv = got.bielliptic_m;
        std::sort(ginv.begin(), ginv.end());
        if (got.D != want.D || got.genus != want.genus || ginv != winv)
            return "row mismatch at D=" + std::to_string(want.D);
    }
    return "";
}

std::string pair_audit_all(const std::string& data_dir) {
    for (auto& row : fixtures::load_table1(data_dir)) {
        auto audit =
            classifier::involution_pair_audit(ShimuraDiscriminant::make(row.D));
        if (!audit.pass) return "pattern audit failed at D=" + std::to_string(row.D);
    }
    return "";
}

std::string unique_bielliptic_high_genus(const std::string& data_dir) {
    for (auto& row : fixtures::load_table1(data_dir)) {
        if (row.genus < 6) continue;
        auto biell =
            classifier::bielliptic_involutions(ShimuraDiscriminant::make(row.D));
        if (biell.size() != 1)
            return "expected a unique involution at D=" + std::to_string(row.D);
    }
    return "";
}

std::string eichler_integrality() {
    for (i64 delta = 2; delta <= 1000; ++delta) {
        arith::FactoredSquarefree fd;
        try {
            fd = arith::factor_squarefree(delta);
        } catch (const Error&) {
            continue;
        }
        if (fd.omega() % 2 != 1) continue;
        for (i64 nu = 1; nu <= 100; ++nu) {
            if (std::gcd(delta, nu) != 1) continue;
            try {
                arith::factor_squarefree(nu);
            } catch (const Error&) {
                continue;
            }
            cd::eichler_class_number(delta, nu);  // throws if non-integral
        }
    }
    return "";
}

std::string mumford_identities(const std::string& data_dir) {
    for (auto& row : fixtures::load_table1(data_dir)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(row.D);
        auto [e2, e3] = invariants::elliptic_point_counts(D);
        if (e2 != 0 || e3 != 0) continue;
        for (i64 p : D.primes()) {
            if (!cd::torsion_free(row.D, p)) continue;
            i64 h1 = cd::eichler_class_number(row.D / p, 1);
            i64 hp = cd::eichler_class_number(row.D / p, p);
            if (hp != (p + 1) * h1)
                return "degree identity failed at (" + std::to_string(row.D) + ", " +
                       std::to_string(p) + ")";
            if (hp - 2 * h1 + 1 != invariants::genus(D))
                return "genus identity failed at (" + std::to_string(row.D) + ", " +
                       std::to_string(p) + ")";
        }
    }
    return "";
}

std::string hyperelliptic_fixture_counts(const std::string& data_dir) {
    for (auto& row : fixtures::load_hyperelliptic(data_dir)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(row.D);
        i64 g = invariants::genus(D);
        if (invariants::fixed_point_count(D, row.m) != 2 * g + 2)
            return "n(w_" + std::to_string(row.m) + ") != 2g+2 at D=" +
                   std::to_string(row.D);
        if (invariants::quotient_genus(D, row.m) != 0)
            return "quotient not rational at D=" + std::to_string(row.D);
    }
    // hyperelliptic involutions may exist beyond the over-Q list; the known
    // cases have genus-0 quotients without rational points
    for (i64 Dv : {57, 82}) {
        auto hyp = classifier::hyperelliptic_involutions(ShimuraDiscriminant::make(Dv));
        if (hyp.size() != 1)
            return "expected one involution with a genus-0 quotient at D=" +
                   std::to_string(Dv);
    }
    return "";
}

std::string heegner_soundness(int jobs) {
    for (auto& rep : classifier::scan_bielliptic(546, jobs)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(rep.D);
        for (i64 m : rep.bielliptic_m) {
            auto w = quad::heegner_rational_point(rep.D, m);
            if (!w) continue;
            if (arith::class_number(w->d) != 1)
                return "witness with h != 1 at D=" + std::to_string(rep.D);
            if (arith::decompose_discriminant(w->d).conductor != 1)
                return "witness with non-fundamental d at D=" + std::to_string(rep.D);
            i64 prod = 1;
            for (i64 p : D.primes()) {
                int k = arith::kronecker(w->d, p);
                if (k == 1)
                    return "split prime in witness at D=" + std::to_string(rep.D);
                if (k == -1) prod *= p;
            }
            if (prod != m) return "inert product mismatch at D=" + std::to_string(rep.D);
        }
    }
    return "";
}

std::string database_checks(const cremona::Database& db) {
    // round trip
    std::istringstream ss(db.serialize());
    if (cremona::Database::parse(ss).serialize() != db.serialize())
        return "serialize/parse round trip failed";
    for (const auto& c : db.curves) {
        i64 disc = c.discriminant();
        // all bundled conductors are squarefree: semistable everywhere, so
        // the conductor is the radical of the minimal discriminant
        arith::FactoredSquarefree n = arith::factor_squarefree(c.conductor);
        i64 rad = 1;
        i64 d = disc < 0 ? -disc : disc;
        for (i64 p = 2; p * p <= d; ++p) {
            if (d % p) continue;
            rad *= p;
            while (d % p == 0) d /= p;
        }
        if (d > 1) rad *= d;
        if (rad != c.conductor)
            return c.label() + ": discriminant radical " + std::to_string(rad) +
                   " != conductor";
        for (i64 p : arith::primes_up_to(50)) {
            if (disc % p == 0) continue;
            i64 a = cremona::ap(c, p);
            if (a * a > 4 * p)
                return c.label() + ": Hasse bound failed at p=" + std::to_string(p);
        }
        int w = -1;  // root number: -1 from the infinite place
        for (i64 p : n.primes) {
            int amult = cremona::ap_multiplicative(c, p);
            w *= -amult;
        }
        bool odd_rank = c.rank % 2 == 1;
        if ((w == -1) != odd_rank)
            return c.label() + ": rank parity disagrees with the root number";
    }
    return "";
}

std::string trace_oracle(const cremona::Database& db) {
    for (i64 N : {26, 57, 58}) {
        auto classes = db.classes_at(N);
        if (classes.empty()) return "no conductor-" + std::to_string(N) + " curves";
        for (i64 ell : arith::primes_up_to(50)) {
            if (N % ell == 0) continue;
            i64 total = 0;
            for (auto& cls : classes)
                total += cremona::ap(*db.curves_in_class(N, cls).front(), ell);
            if (total != hecke::trace_hecke_new(N, ell))
                return "trace mismatch at N=" + std::to_string(N) +
                       " ell=" + std::to_string(ell);
        }
    }
    return "";
}

std::string weil_and_monotonicity() {
    for (i64 Dv : {26, 51, 57, 58, 82}) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(Dv);
        i64 phi = 1;
        for (i64 p : D.primes()) phi *= p - 1;
        for (i64 ell : {2, 3, 5, 7, 11}) {
            if (Dv % ell == 0) continue;
            // point_count enforces the Weil bound internally
            i64 n1 = hecke::point_count(Dv, ell, 1).count;
            i64 n2 = hecke::point_count(Dv, ell, 2).count;
            if (n2 < n1)
                return "monotonicity failed at (D, ell) = (" + std::to_string(Dv) +
                       ", " + std::to_string(ell) + ")";
            if (Rat(n2) < Rat(ell - 1, 12) * Rat(phi))
                return "lower bound failed at (D, ell) = (" + std::to_string(Dv) +
                       ", " + std::to_string(ell) + ")";
        }
    }
    return "";
}

}  // namespace

std::vector<CheckResult> run_audit(const Options& opt) {
    std::string data_dir =
        opt.data_dir.empty() ? fixtures::default_data_dir() : opt.data_dir;
    std::string db_path = opt.cremona_path.empty()
                              ? fixtures::allcurves_path(data_dir)
                              : opt.cremona_path;

    std::vector<CheckResult> out;
    out.push_back(run_check("kronecker-multiplicativity", kronecker_checks));
    out.push_back(run_check("class-number-basics", class_number_checks));
    out.push_back(run_check("class-number-oddness", class_number_oddness));
    out.push_back(run_check("hurwitz-consistency", hurwitz_consistency));
    out.push_back(run_check("genus-linear-identity", genus_linear_identity));
    out.push_back(run_check("odd-discriminant-odd-genus", odd_genus_checks));
    out.push_back(run_check("riemann-hurwitz-integrality", rh_integrality));
    out.push_back(run_check("bielliptic-table-golden",
                            [&] { return table1_golden(data_dir, opt.jobs); }));
    out.push_back(run_check("involution-pair-audit",
                            [&] { return pair_audit_all(data_dir); }));
    out.push_back(run_check("unique-involution-high-genus",
                            [&] { return unique_bielliptic_high_genus(data_dir); }));
    out.push_back(run_check("eichler-integrality", eichler_integrality));
    out.push_back(run_check("mumford-identities",
                            [&] { return mumford_identities(data_dir); }));
    out.push_back(run_check("rational-quotient-counts",
                            [&] { return hyperelliptic_fixture_counts(data_dir); }));
    out.push_back(run_check("heegner-witness-soundness",
                            [&] { return heegner_soundness(opt.jobs); }));
    out.push_back(run_check("curve-database", [&] {
        return database_checks(cremona::Database::load_file(db_path));
    }));
    if (opt.with_traces) {
        out.push_back(run_check("weil-bounds-and-monotonicity", weil_and_monotonicity));
        out.push_back(run_check("trace-oracle", [&] {
            return trace_oracle(cremona::Database::load_file(db_path));
        }));
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

}  // namespace atlas::audit
