// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <atomic>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "atlas/audit.hpp"
#include "atlas/cd_graphs.hpp"
#include "atlas/classifier.hpp"
#include "atlas/cremona.hpp"
#include "atlas/fixtures.hpp"
#include "atlas/hecke.hpp"
#include "atlas/invariants.hpp"
#include "atlas/quad_points.hpp"

using namespace atlas;
using arith::i64;
using invariants::ShimuraDiscriminant;

namespace {

const std::string kData = ATLAS_TEST_DATA_DIR;

// run fn over [0, n) on all cores, collecting failure messages
std::vector<std::string> parallel_scan(std::size_t n,
                                       const std::function<std::string(std::size_t)>& fn) {
    std::vector<std::string> failures;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            std::string msg = fn(i);
            if (!msg.empty()) {
                std::lock_guard lock(mu);
                failures.push_back(std::move(msg));
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return failures;
}

std::string criterion_1() {
    auto fixture = fixtures::load_table1(kData);
    auto scan = classifier::scan_bielliptic(5000, 0);
    if (scan.size() != 32)
        return "expected 32 bielliptic discriminants, found " +
               std::to_string(scan.size());
    if (fixture.size() != 32) return "fixture does not have 32 rows";
    for (std::size_t i = 0; i < 32; ++i) {
        auto want = fixture[i].involutions;
        std::sort(want.begin(), want.end());
        if (scan[i].D != fixture[i].D)
            return "discriminant mismatch at row " + std::to_string(i);
        if (scan[i].genus != fixture[i].genus)
            return "genus mismatch at D=" + std::to_string(scan[i].D);
        if (scan[i].bielliptic_m != want)
            return "involution set mismatch at D=" + std::to_string(scan[i].D);
    }
    return "";
}

std::string criterion_2() {
    std::vector<i64> ds;
    for (i64 D = 547; D <= 20000; ++D)
        if (ShimuraDiscriminant::is_valid(D)) ds.push_back(D);
    auto failures = parallel_scan(ds.size(), [&](std::size_t i) -> std::string {
        i64 Dv = ds[i];
        ShimuraDiscriminant D = ShimuraDiscriminant::make(Dv);
        if (classifier::bielliptic_bound_excludes(D).excluded) return "";
        if (invariants::genus(D) < 2) return "";
        if (classifier::bielliptic_involutions(D).empty()) return "";
        return "bielliptic discriminant above the bound: " + std::to_string(Dv);
    });
    return failures.empty() ? "" : failures.front();
}

std::string criterion_3() {
    i64 c267 = hecke::point_count(267, 67, 1).count;
    if (c267 != 94) return "count(267, 67) = " + std::to_string(c267) + ", want 94";
    i64 c411 = hecke::point_count(411, 103, 1).count;
    if (c411 != 98) return "count(411, 103) = " + std::to_string(c411) + ", want 98";
    // the sign convention is pinned: the opposite sign would give 42 and 64
    i64 t267 = hecke::trace_hecke_new(267, 67);
    if (t267 != -26) return "trace at (267, 67) is " + std::to_string(t267);
    if (68 + t267 == 94) return "opposite sign convention matches; engine broken";
    return "";
}

std::string criterion_4() {
    std::vector<i64> ds;
    for (i64 p : arith::primes_up_to(182)) {
        if (p % 3 != 2 || p == 2) continue;
        i64 D = 3 * p;
        if (D > 546 || D == 267 || D == 411) continue;
        if (!ShimuraDiscriminant::is_valid(D)) continue;
        if (invariants::genus(ShimuraDiscriminant::make(D)) < 2) continue;
        ds.push_back(D);
    }
    if (ds.empty()) return "empty parity family";
    auto failures = parallel_scan(ds.size(), [&](std::size_t i) -> std::string {
        auto w = hecke::parity_witness(ds[i]);
        if (w.ell != 109)
            return "unexpected witness prime at D=" + std::to_string(ds[i]);
        if (w.residue == 0)
            return "count over F_109 divisible by 4 at D=" + std::to_string(ds[i]) +
                   " (count = " +
                   std::to_string(hecke::point_count(ds[i], 109, 1).count) +
                   "); the engine reproduces the printed values 94 and 98 and "
                   "matches direct curve counts at six primes near 109, and finds "
                   "residue 0 at every member of this family except 267 and 411";
        return "";
    });
    std::sort(failures.begin(), failures.end());
    return failures.empty() ? "" : failures.front();
}

std::string criterion_5() {
    auto ds = invariants::valid_discriminants(546);
    auto failures = parallel_scan(ds.size(), [&](std::size_t i) -> std::string {
        i64 Dv = ds[i];
        i64 g = invariants::genus(ShimuraDiscriminant::make(Dv));
        i64 t = hecke::trace_hecke_new(Dv, 1);
        if (g != t)
            return "genus mismatch at D=" + std::to_string(Dv) + ": formula " +
                   std::to_string(g) + ", trace " + std::to_string(t);
        return "";
    });
    return failures.empty() ? "" : failures.front();
}

std::string criterion_6() {
    auto db = cremona::Database::load_file(fixtures::allcurves_path(kData));
    for (i64 N : {26, 57, 58}) {
        auto classes = db.classes_at(N);
        if (classes.empty()) return "no curves at conductor " + std::to_string(N);
        for (i64 ell : arith::primes_up_to(50)) {
            if (N % ell == 0) continue;
            i64 total = 0;
            for (const auto& cls : classes)
                total += cremona::ap(*db.curves_in_class(N, cls).front(), ell);
            i64 t = hecke::trace_hecke_new(N, ell);
            if (total != t)
                return "oracle mismatch at (N, ell) = (" + std::to_string(N) + ", " +
                       std::to_string(ell) + "): curves " + std::to_string(total) +
                       ", trace " + std::to_string(t);
        }
    }
    return "";
}

std::string criterion_7() {
    if (cd::eichler_class_number(70, 1) != 2) return "h(70, 1) != 2";
    if (cd::eichler_class_number(70, 3) != 8) return "h(70, 3) != 8";

    auto res = cd::dual_graph(210, 3, 4, {{0, 1}, {2, 3}});
    if (res.kind != cd::DualGraphResult::Kind::Full)
        return "constrained dual graph not unique";
    for (i64 i = 0; i < 2; ++i)
        for (i64 j = 0; j < 2; ++j)
            if (res.graph->multiplicity[i][j] != 2)
                return "dual graph multiplicities do not match the figure";

    cd::Graph q = cd::al_quotient(res.graph->graph,
                                  cd::side_swap_involution(*res.graph));
    if (q.n_vertices != 2 || q.edges.size() != 2)
        return "quotient graph is not two vertices with two edges";
    if (cd::kodaira_symbol(q) != KodairaSymbol{2}) return "reduction type is not I_2";

    auto db = cremona::Database::load_file(fixtures::allcurves_path(kData));
    auto qc = quad::elliptic_quotient_class(210, 210, db);
    if (qc.cls != "D") return "quotient class is 210" + qc.cls + ", want 210D";
    if (!qc.curve || qc.curve->label() != "210D2")
        return "quotient curve is not 210D2";
    if (qc.curve->a != std::array<i64, 5>{1, 1, 0, -23, 33})
        return "210D2 has unexpected coefficients";
    if (qc.rank != 1) return "rank of 210D is not 1";
    return "";
}

std::string criterion_8() {
    for (const auto& row : fixtures::load_table1(kData)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(row.D);
        auto [e2, e3] = invariants::elliptic_point_counts(D);
        if (e2 != 0 || e3 != 0) continue;
        for (i64 p : D.primes()) {
            if (!cd::torsion_free(row.D, p)) continue;
            i64 h1 = cd::eichler_class_number(row.D / p, 1);
            i64 hp = cd::eichler_class_number(row.D / p, p);
            if (hp - 2 * h1 + 1 != invariants::genus(D))
                return "genus identity failed at (" + std::to_string(row.D) + ", " +
                       std::to_string(p) + ")";
        }
    }
    return "";
}

std::string criterion_9() {
    auto db = cremona::Database::load_file(fixtures::allcurves_path(kData));
    auto ctx = quad::Context::load(kData);
    auto got = quad::quadratic_points_table(db, ctx);
    auto diffs = quad::compare_table3(got, ctx);
    if (!diffs.empty()) return diffs.front();
    for (i64 D : {115, 178, 202}) {
        auto v = quad::quadratic_points_verdict(D, db, ctx);
        if (v.status != quad::Status::Finite)
            return "expected a finite verdict at D=" + std::to_string(D);
        if (v.justifications.empty())
            return "finite verdict without justification at D=" + std::to_string(D);
    }
    return "";
}

std::string criterion_10() {
    auto w = quad::heegner_rational_point(210, 210);
    if (!w || w->d != -43) return "witness at (210, 210) is not d = -43";
    if (w->inert != std::vector<i64>{2, 3, 5, 7})
        return "inert primes at (210, 210) are wrong";

    std::set<std::pair<i64, i64>> kuhn_pairs;
    for (const auto& row : fixtures::load_table1(kData)) {
        ShimuraDiscriminant D = ShimuraDiscriminant::make(row.D);
        for (i64 m : classifier::bielliptic_involutions(D))
            if (quad::kuhn_fallback(row.D, m)) kuhn_pairs.insert({row.D, m});
    }
    std::set<std::pair<i64, i64>> want{{26, 2}, {58, 2}};
    if (kuhn_pairs != want) {
        std::ostringstream os;
        os << "fallback pairs:";
        for (auto& [D, m] : kuhn_pairs) os << " (" << D << "," << m << ")";
        return os.str();
    }
    return "";
}

std::string criterion_11() {
    audit::Options opt;
    opt.data_dir = kData;
    auto results = audit::run_audit(opt);
    for (const auto& r : results)
        if (!r.pass) return r.name + ": " + r.detail;
    return "";
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* title;
        std::function<std::string()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "bielliptic table reproduction (scan to 5000)", criterion_1},
        {2, "finiteness bound above 546 (scan to 20000)", criterion_2},
        {3, "good-reduction point counts 94 and 98", criterion_3},
        {4, "mod-4 parity at 109 across the 3p family", criterion_4},
        {5, "genus equals the new-subspace trace at m = 1", criterion_5},
        {6, "trace oracle against curve point counts", criterion_6},
        {7, "bad-fiber chain at (210, 3) down to curve 210D2", criterion_7},
        {8, "Mumford genus identity for torsion-free fibers", criterion_8},
        {9, "quadratic-points table reproduction", criterion_9},
        {10, "Heegner witness and the genus-2 fallback pairs", criterion_10},
        {11, "library property suites", criterion_11},
    };

    int failures = 0;
    for (auto& c : criteria) {
        std::string msg;
        try {
            msg = c.run();
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        if (msg.empty()) {
            std::cout << "PASS criterion " << c.number << ": " << c.title << "\n";
        } else {
            std::cout << "FAIL criterion " << c.number << ": " << c.title << " — "
                      << msg << "\n";
            ++failures;
        }
        std::cout.flush();
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
