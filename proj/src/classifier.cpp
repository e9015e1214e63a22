#include "atlas/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "atlas/hecke.hpp"

namespace atlas::classifier {

using invariants::al_compose;
using invariants::atkin_lehner_divisors;
using invariants::elliptic_point_counts;
using invariants::fixed_point_count;
using invariants::genus;

namespace {

std::vector<i64> involutions_with_count(const ShimuraDiscriminant& D, i64 target) {
    std::vector<i64> out;
    for (i64 m : atkin_lehner_divisors(D))
        if (m > 1 && fixed_point_count(D, m) == target) out.push_back(m);
    return out;
}

}  // namespace

std::vector<i64> bielliptic_involutions(const ShimuraDiscriminant& D) {
    i64 g = genus(D);
    if (g < 2)
        throw GenusTooSmall("genus " + std::to_string(g) + " at D = " +
                            std::to_string(D.value()));
    return involutions_with_count(D, 2 * g - 2);
}

std::vector<i64> hyperelliptic_involutions(const ShimuraDiscriminant& D) {
    i64 g = genus(D);
    if (g < 2)
        throw GenusTooSmall("genus " + std::to_string(g) + " at D = " +
                            std::to_string(D.value()));
    return involutions_with_count(D, 2 * g + 2);
}

PairAudit involution_pair_audit(const ShimuraDiscriminant& D) {
    PairAudit audit;
    audit.D = D.value();
    i64 g = genus(D);
    auto biell = bielliptic_involutions(D);
    for (i64 v : biell) {
        for (i64 m : atkin_lehner_divisors(D)) {
            if (m <= 1 || m == v) continue;
            i64 n_w = fixed_point_count(D, m);
            i64 n_vw = fixed_point_count(D, al_compose(v, m));
            i64 lo = std::min(n_w, n_vw), hi = std::max(n_w, n_vw);
            bool ok;
            if (g % 2 == 0)
                ok = (lo == 2 && hi == 6);
            else
                ok = (lo == 0 && hi == 0) || (lo == 0 && hi == 8) ||
                     (lo == 4 && hi == 4);
            if (!ok) {
                audit.pass = false;
                audit.offenses.push_back({v, m, n_w, n_vw});
            }
        }
    }
    return audit;
}

ExclusionEvidence bielliptic_bound_excludes(const ShimuraDiscriminant& D) {
    ExclusionEvidence ev;
    ev.D = D.value();

    Rat phi(1);
    for (i64 p : D.primes()) phi *= Rat(p - 1);

    for (i64 ell : {2, 3, 5, 7, 11}) {
        if (D.value() % ell == 0) continue;
        Rat lower = Rat(ell - 1, 12) * phi;
        i64 cap = 2 * (ell + 1) * (ell + 1);
        if (lower > Rat(cap)) {
            ev.excluded = true;
            ev.ell = ell;
            ev.lower_bound = lower;
            ev.weil_cap = cap;
            return ev;
        }
    }
    if (D.value() % (2LL * 3 * 5 * 7 * 11) == 0) {
        ev.excluded = true;
        ev.by_full_smooth = true;
        return ev;
    }
    return ev;
}

std::vector<BiellipticReport> scan_bielliptic(i64 d_max, int jobs) {
    if (d_max < 2) throw BadInput("scan_bielliptic: d_max must be >= 2");
    std::vector<i64> ds = invariants::valid_discriminants(d_max);
    std::vector<std::optional<BiellipticReport>> slots(ds.size());

    unsigned nworkers = jobs > 0 ? (unsigned)jobs
                                 : std::max(1u, std::thread::hardware_concurrency());
    nworkers = std::min<unsigned>(nworkers, std::max<std::size_t>(1, ds.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ds.size()) break;
            ShimuraDiscriminant D = ShimuraDiscriminant::make(ds[i]);
            if (genus(D) < 2) continue;
            auto biell = bielliptic_involutions(D);
            if (biell.empty()) continue;
            BiellipticReport rep;
            rep.D = ds[i];
            rep.genus = genus(D);
            rep.bielliptic_m = std::move(biell);
            rep.hyperelliptic_m = hyperelliptic_involutions(D);
            slots[i] = std::move(rep);
        }
    };
    if (nworkers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<BiellipticReport> out;
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

AutCertificate aut_certificate(const ShimuraDiscriminant& D) {
    i64 g = genus(D);
    if (g < 2)
        throw GenusTooSmall("genus " + std::to_string(g) + " at D = " +
                            std::to_string(D.value()));
    AutCertificate cert;
    cert.D = D.value();
    cert.lower_rank = (int)D.primes().size();

    auto [e2, e3] = elliptic_point_counts(D);
    const auto& ps = D.primes();
    bool is_2p = ps.size() == 2 && ps[0] == 2;
    bool is_3p = ps.size() == 2 && ps[0] == 3;
    i64 p = ps.size() == 2 ? ps[1] : 0;

    if (e2 == 0 && e3 == 0) cert.fired.push_back(AutRule::NoEllipticPoints);
    if (is_2p && p % 4 == 3) cert.fired.push_back(AutRule::CMFixedPair);
    if ((is_2p && p % 4 == 1) || (is_3p && p % 3 == 1))
        cert.fired.push_back(AutRule::BadFiberLengthTwo);
    if (is_3p && p % 3 == 2) {
        hecke::ParityWitness w = hecke::parity_witness(D.value());
        if (w.residue != 0) {
            cert.fired.push_back(AutRule::GoodFiberParity);
            cert.evidence = "count over F_" + std::to_string(w.ell) + " = " +
                            std::to_string(w.residue) + " (mod 4)";
        }
    }

    if (!cert.fired.empty()) {
        cert.conclusion = AutConclusion::AutIsAtkinLehner;
        cert.rule = cert.fired.front();
        return cert;
    }
    if (D.value() == 55 || D.value() == 85 || D.value() == 145) {
        cert.conclusion = AutConclusion::KnownSpecialCase;
        cert.evidence = "ad hoc isogeny-decomposition argument";
        return cert;
    }
    cert.conclusion = AutConclusion::Unknown;
    return cert;
}

const char* rule_name(AutRule r) {
    switch (r) {
        case AutRule::NoEllipticPoints: return "no-elliptic-points";
        case AutRule::CMFixedPair: return "cm-fixed-pair";
        case AutRule::BadFiberLengthTwo: return "bad-fiber-length-two";
        case AutRule::GoodFiberParity: return "good-fiber-parity";
    }
    return "?";
}

const char* conclusion_name(AutConclusion c) {
    switch (c) {
        case AutConclusion::AutIsAtkinLehner: return "aut-equals-atkin-lehner";
        case AutConclusion::KnownSpecialCase: return "known-special-case";
        case AutConclusion::Unknown: return "unknown";
    }
    return "?";
}

}  // namespace atlas::classifier
