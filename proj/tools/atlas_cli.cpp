#include <atomic>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string format = "tsv";
    std::string data_dir;
    std::string cremona;
    int jobs = 0;
};

std::string data_dir(const GlobalOpts& g) {
    return g.data_dir.empty() ? fixtures::default_data_dir() : g.data_dir;
}

std::string cremona_path(const GlobalOpts& g) {
    if (!g.cremona.empty()) return g.cremona;
    if (const char* env = std::getenv("SHIMURA_ATLAS_CREMONA"); env && *env)
        return env;
    return fixtures::allcurves_path(data_dir(g));
}

// tabular output in the three formats; column order is fixed
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void print(const std::string& format) const {
        if (format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < header.size() && i < row.size(); ++i)
                    obj[header[i]] = row[i];
                arr.push_back(obj);
            }
            std::cout << arr.dump(2) << "\n";
            return;
        }
        if (format == "md") {
            auto line = [&](const std::vector<std::string>& cells) {
                std::cout << "|";
                for (const auto& c : cells) std::cout << " " << c << " |";
                std::cout << "\n";
            };
            line(header);
            std::vector<std::string> rule(header.size(), "---");
            line(rule);
            for (const auto& row : rows) line(row);
            return;
        }
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) std::cout << '\t';
                std::cout << row[i];
            }
            std::cout << "\n";
        }
    }
};

std::string join_i64(const std::vector<i64>& xs, const char* sep = ",") {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << sep;
        os << xs[i];
    }
    return os.str();
}

int cmd_invariants(const GlobalOpts& g, i64 D) {
    auto inv = invariants::curve_invariants(ShimuraDiscriminant::make(D));
    Table t;
    t.header = {"D", "genus", "e2", "e3", "fixed_counts"};
    std::ostringstream fc;
    for (std::size_t i = 0; i < inv.fixed_counts.size(); ++i) {
        if (i) fc << ";";
        fc << "n(w_" << inv.fixed_counts[i].first
           << ")=" << inv.fixed_counts[i].second;
    }
    t.rows.push_back({std::to_string(inv.D), std::to_string(inv.genus),
                      std::to_string(inv.e2), std::to_string(inv.e3), fc.str()});
    t.print(g.format);
    return 0;
}

Table bielliptic_table(const std::vector<classifier::BiellipticReport>& reps) {
    Table t;
    t.header = {"D", "genus", "bielliptic", "hyperelliptic"};
    for (const auto& r : reps)
        t.rows.push_back({std::to_string(r.D), std::to_string(r.genus),
                          join_i64(r.bielliptic_m), join_i64(r.hyperelliptic_m)});
    return t;
}

int cmd_classify(const GlobalOpts& g, i64 max) {
    auto reps = classifier::scan_bielliptic(max, g.jobs);
    bielliptic_table(reps).print(g.format);
    return 0;
}

int cmd_count_points(const GlobalOpts& g, i64 D, i64 ell, int k) {
    auto fc = hecke::point_count(D, ell, k);
    Table t;
    t.header = {"D", "ell", "k", "count"};
    t.rows.push_back({std::to_string(fc.D), std::to_string(fc.ell),
                      std::to_string(fc.k), std::to_string(fc.count)});
    t.print(g.format);
    return 0;
}

int cmd_parity(const GlobalOpts& g, i64 D) {
    auto w = hecke::parity_witness(D);
    Table t;
    t.header = {"D", "ell", "count_mod_4"};
    t.rows.push_back(
        {std::to_string(D), std::to_string(w.ell), std::to_string(w.residue)});
    t.print(g.format);
    return 0;
}

int cmd_dual_graph(const GlobalOpts& g, i64 D, i64 p, std::optional<i64> crossing,
                   bool dot) {
    auto res = cd::dual_graph(D, p, crossing);
    if (g.format == "json") {
        json obj;
        obj["D"] = res.skeleton.D;
        obj["p"] = res.skeleton.p;
        obj["vertices"] = res.skeleton.n_vertices;
        obj["edges"] = res.skeleton.n_edges;
        obj["torsion_free"] = res.skeleton.torsion_free;
        obj["kind"] = res.kind == cd::DualGraphResult::Kind::Full ? "full"
                      : res.kind == cd::DualGraphResult::Kind::Underdetermined
                          ? "underdetermined"
                          : "skeleton-only";
        if (res.graph) {
            json edges = json::array();
            for (auto& e : res.graph->graph.edges)
                edges.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
            obj["edge_list"] = edges;
        }
        std::cout << obj.dump(2) << "\n";
        return 0;
    }
    std::cout << "D=" << res.skeleton.D << " p=" << res.skeleton.p
              << " vertices=" << res.skeleton.n_vertices
              << " edges=" << res.skeleton.n_edges
              << " torsion_free=" << (res.skeleton.torsion_free ? "yes" : "no")
              << "\n";
    if (res.kind == cd::DualGraphResult::Kind::Full) {
        std::cout << (dot ? cd::to_dot(*res.graph) : cd::to_text(*res.graph));
    } else if (res.kind == cd::DualGraphResult::Kind::Underdetermined) {
        std::cout << (crossing ? "constraints do not pin a unique graph\n"
                               : "graph underdetermined; pass --crossing to pin it\n");
    }
    return 0;
}

int cmd_verdicts(const GlobalOpts& g, i64 max) {
    auto db = cremona::Database::load_file(cremona_path(g));
    auto ctx = quad::Context::load(data_dir(g));

    std::vector<i64> ds;
    for (i64 D : invariants::valid_discriminants(max))
        if (invariants::genus(ShimuraDiscriminant::make(D)) >= 2) ds.push_back(D);

    std::vector<quad::Verdict> verdicts(ds.size());
    unsigned nworkers = g.jobs > 0
                            ? (unsigned)g.jobs
                            : std::max(1u, std::thread::hardware_concurrency());
    nworkers = std::min<unsigned>(nworkers, std::max<std::size_t>(1, ds.size()));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ds.size() || failed.load()) break;
            try {
                verdicts[i] = quad::quadratic_points_verdict(ds[i], db, ctx);
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mu);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed.load()) throw Error(first_error);

    Table t;
    t.header = {"D", "status", "m", "quotient", "rank", "witness", "notes"};
    for (const auto& v : verdicts) {
        std::string witness;
        if (v.witness) witness = "d=" + std::to_string(v.witness->d);
        if (v.kuhn) witness = witness.empty() ? "genus-2 fallback" : witness;
        std::string notes;
        for (std::size_t i = 0; i < v.justifications.size(); ++i) {
            if (i) notes += "; ";
            notes += v.justifications[i];
        }
        t.rows.push_back({std::to_string(v.D), quad::status_name(v.status),
                          v.m ? std::to_string(v.m) : "",
                          v.quotient_label, v.rank >= 0 ? std::to_string(v.rank) : "",
                          witness, notes});
    }
    t.print(g.format);
    return 0;
}

int cmd_tables(const GlobalOpts& g, int which, i64 max) {
    std::string dir = data_dir(g);
    if (which == 1) {
        auto fixture = fixtures::load_table1(dir);
        auto scan = classifier::scan_bielliptic(max, g.jobs);
        bielliptic_table(scan).print(g.format);
        std::vector<std::string> diffs;
        std::size_t n = std::max(scan.size(), fixture.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= scan.size()) {
                diffs.push_back("missing D=" + std::to_string(fixture[i].D));
                continue;
            }
            if (i >= fixture.size()) {
                diffs.push_back("unexpected D=" + std::to_string(scan[i].D));
                continue;
            }
            auto want = fixture[i].involutions;
            std::sort(want.begin(), want.end());
            if (scan[i].D != fixture[i].D || scan[i].genus != fixture[i].genus ||
                scan[i].bielliptic_m != want)
                diffs.push_back("mismatch at D=" + std::to_string(fixture[i].D));
        }
        for (const auto& d : diffs) std::cerr << "diff: " << d << "\n";
        return diffs.empty() ? 0 : 1;
    }
    if (which == 2) {
        auto rows = fixtures::load_table2(dir);
        Table t;
        t.header = {"D", "m", "deficient_places", "provenance"};
        std::vector<std::string> diffs;
        for (const auto& r : rows) {
            quad::Places pl;
            pl.real = r.real_place;
            pl.primes = r.primes;
            t.rows.push_back({std::to_string(r.D), std::to_string(r.m), pl.str(),
                              r.provenance});
            // each entry must be a bielliptic pair with a genus-1 quotient
            try {
                auto D = ShimuraDiscriminant::make(r.D);
                if (invariants::quotient_genus(D, r.m) != 1)
                    diffs.push_back("not a genus-1 quotient: (" +
                                    std::to_string(r.D) + ", " +
                                    std::to_string(r.m) + ")");
            } catch (const Error& e) {
                diffs.push_back(e.what());
            }
        }
        t.print(g.format);
        for (const auto& d : diffs) std::cerr << "diff: " << d << "\n";
        return diffs.empty() ? 0 : 1;
    }
    if (which == 3) {
        auto db = cremona::Database::load_file(cremona_path(g));
        auto ctx = quad::Context::load(dir);
        auto got = quad::quadratic_points_table(db, ctx);
        Table t;
        t.header = {"D", "m", "quotient", "rank"};
        for (const auto& r : got)
            t.rows.push_back({std::to_string(r.D), std::to_string(r.m), r.quotient,
                              r.rank >= 0 ? std::to_string(r.rank) : ""});
        t.print(g.format);
        auto diffs = quad::compare_table3(got, ctx);
        for (const auto& d : diffs) std::cerr << "diff: " << d << "\n";
        return diffs.empty() ? 0 : 1;
    }
    throw BadInput("tables: expected 1, 2 or 3");
}

int cmd_audit(const GlobalOpts& g, bool with_traces) {
    audit::Options opt;
    opt.data_dir = data_dir(g);
    opt.cremona_path = cremona_path(g);
    opt.jobs = g.jobs;
    opt.with_traces = with_traces;
    auto results = audit::run_audit(opt);
    for (const auto& r : results) {
        if (r.pass)
            std::cout << "ok   " << r.name << "\n";
        else
            std::cout << "FAIL " << r.name << ": " << r.detail << "\n";
    }
    return audit::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic of Shimura curves: invariants, classification, "
                 "reduction data, quadratic points"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"tsv", "json", "md"}))
        ->capture_default_str();
    app.add_option("--data", g.data_dir, "data directory override");
    app.add_option("--jobs", g.jobs, "worker threads (0 = auto)");
    app.add_option("--cremona", g.cremona,
                   "elliptic curve database (also SHIMURA_ATLAS_CREMONA)");

    i64 arg_D = 0, arg_ell = 0, arg_p = 0, arg_max = 5000, arg_vmax = 546;
    int arg_k = 1, arg_table = 1;
    i64 arg_crossing = -1;
    bool no_traces = false;

    auto* c_inv = app.add_subcommand("invariants", "genus and fixed-point data");
    c_inv->add_option("D", arg_D, "quaternion discriminant")->required();

    auto* c_cls = app.add_subcommand("classify", "scan for bielliptic curves");
    c_cls->add_option("--max", arg_max, "scan bound")->capture_default_str();

    auto* c_cnt = app.add_subcommand("count-points", "good-reduction point counts");
    c_cnt->add_option("D", arg_D)->required();
    c_cnt->add_option("ELL", arg_ell)->required();
    c_cnt->add_option("K", arg_k)->required();

    auto* c_par = app.add_subcommand("parity", "mod-4 point count witness");
    c_par->add_option("D", arg_D)->required();

    auto* c_dg = app.add_subcommand("dual-graph", "bad-fiber dual graph");
    c_dg->add_option("D", arg_D)->required();
    c_dg->add_option("P", arg_p)->required();
    c_dg->add_option("--crossing", arg_crossing, "total crossing multiplicity");
    bool dg_dot = false;
    c_dg->add_flag("--dot", dg_dot, "emit the graph in dot format");

    auto* c_ver = app.add_subcommand("verdicts", "quadratic-point verdicts");
    c_ver->add_option("--max", arg_vmax, "discriminant bound")->capture_default_str();

    auto* c_tab = app.add_subcommand("tables", "reproduce a bundled table");
    c_tab->add_option("N", arg_table, "table number (1, 2 or 3)")->required();
    c_tab->add_option("--max", arg_max, "scan bound for table 1")
        ->capture_default_str();

    auto* c_aud = app.add_subcommand("audit", "run the invariant suites");
    c_aud->add_flag("--no-traces", no_traces, "skip the trace-engine suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_inv->parsed()) return cmd_invariants(g, arg_D);
        if (c_cls->parsed()) return cmd_classify(g, arg_max);
        if (c_cnt->parsed()) return cmd_count_points(g, arg_D, arg_ell, arg_k);
        if (c_par->parsed()) return cmd_parity(g, arg_D);
        if (c_dg->parsed())
            return cmd_dual_graph(g, arg_D, arg_p,
                                  arg_crossing >= 0
                                      ? std::optional<i64>(arg_crossing)
                                      : std::nullopt,
                                  dg_dot);
        if (c_ver->parsed()) return cmd_verdicts(g, arg_vmax);
        if (c_tab->parsed()) return cmd_tables(g, arg_table, arg_max);
        if (c_aud->parsed()) return cmd_audit(g, !no_traces);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
