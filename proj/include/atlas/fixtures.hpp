#pragma once

#include <string>
#include <vector>

#include "atlas/arith.hpp"

namespace atlas::fixtures {

using arith::i64;

// Data directory resolution: explicit argument wins, else the compiled-in
// bundle location.
std::string default_data_dir();

struct TsvRow {
    std::vector<std::string> fields;
    int line = 0;
};

// Tab-separated rows; '#' starts a comment, blank lines are skipped.
std::vector<TsvRow> read_tsv(const std::string& path, std::size_t min_fields);

// table1.tsv: D, genus, bielliptic involutions, provenance, note
struct Table1Row {
    i64 D = 0;
    i64 genus = 0;
    std::vector<i64> involutions;
    std::string provenance;
    std::string note;
};
std::vector<Table1Row> load_table1(const std::string& dir);

// table2.tsv: D, m, deficient places ("R" and primes), provenance
struct DeficiencyRow {
    i64 D = 0, m = 0;
    bool real_place = false;
    std::vector<i64> primes;
    std::string provenance;
};
std::vector<DeficiencyRow> load_table2(const std::string& dir);

// hyperelliptic_q.tsv: D, m (rational-quotient involution), provenance, note
struct HyperellipticRow {
    i64 D = 0, m = 0;
    std::string provenance;
    std::string note;
};
std::vector<HyperellipticRow> load_hyperelliptic(const std::string& dir);

// table3.tsv: D, m printed, m computed, quotient ("P1" or curve label),
// provenance, note
struct Table3Row {
    i64 D = 0;
    i64 m_printed = 0;
    i64 m_computed = 0;
    std::string quotient;
    std::string provenance;
    std::string note;
};
std::vector<Table3Row> load_table3(const std::string& dir);

std::string allcurves_path(const std::string& dir);

}  // namespace atlas::fixtures
