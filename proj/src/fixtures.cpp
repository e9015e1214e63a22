#include "atlas/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"

#ifndef ATLAS_DEFAULT_DATA_DIR
#define ATLAS_DEFAULT_DATA_DIR "data"
#endif

namespace atlas::fixtures {

std::string default_data_dir() { return ATLAS_DEFAULT_DATA_DIR; }

std::vector<TsvRow> read_tsv(const std::string& path, std::size_t min_fields) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open fixture: " + path);
    std::vector<TsvRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        TsvRow row;
        row.line = lineno;
        std::size_t pos = 0;
        while (true) {
            auto tab = line.find('\t', pos);
            row.fields.push_back(line.substr(pos, tab == std::string::npos
                                                      ? std::string::npos
                                                      : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (row.fields.size() < min_fields)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected at least " + std::to_string(min_fields) +
                             " fields");
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::vector<i64> parse_int_list(const std::string& s) {
    std::vector<i64> out;
    std::string t = s;
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream ss(t);
    i64 v;
    while (ss >> v) out.push_back(v);
    return out;
}

std::string field(const TsvRow& row, std::size_t i) {
    return i < row.fields.size() ? row.fields[i] : std::string();
}

}  // namespace

std::vector<Table1Row> load_table1(const std::string& dir) {
    std::vector<Table1Row> out;
    for (auto& row : read_tsv(dir + "/table1.tsv", 4)) {
        Table1Row r;
        r.D = std::stoll(row.fields[0]);
        r.genus = std::stoll(row.fields[1]);
        r.involutions = parse_int_list(row.fields[2]);
        r.provenance = field(row, 3);
        r.note = field(row, 4);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<DeficiencyRow> load_table2(const std::string& dir) {
    std::vector<DeficiencyRow> out;
    for (auto& row : read_tsv(dir + "/table2.tsv", 4)) {
        DeficiencyRow r;
        r.D = std::stoll(row.fields[0]);
        r.m = std::stoll(row.fields[1]);
        std::string places = row.fields[2];
        for (char& c : places)
            if (c == ',') c = ' ';
        std::istringstream ss(places);
        std::string tok;
        while (ss >> tok) {
            if (tok == "R" || tok == "r")
                r.real_place = true;
            else
                r.primes.push_back(std::stoll(tok));
        }
        if (!r.real_place && r.primes.empty())
            throw ParseError("table2.tsv: empty place set at D = " +
                             std::to_string(r.D));
        r.provenance = field(row, 3);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<HyperellipticRow> load_hyperelliptic(const std::string& dir) {
    std::vector<HyperellipticRow> out;
    for (auto& row : read_tsv(dir + "/hyperelliptic_q.tsv", 3)) {
        HyperellipticRow r;
        r.D = std::stoll(row.fields[0]);
        r.m = std::stoll(row.fields[1]);
        r.provenance = field(row, 2);
        r.note = field(row, 3);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Table3Row> load_table3(const std::string& dir) {
    std::vector<Table3Row> out;
    for (auto& row : read_tsv(dir + "/table3.tsv", 5)) {
        Table3Row r;
        r.D = std::stoll(row.fields[0]);
        r.m_printed = std::stoll(row.fields[1]);
        r.m_computed = std::stoll(row.fields[2]);
        r.quotient = row.fields[3];
        r.provenance = field(row, 4);
        r.note = field(row, 5);
        out.push_back(std::move(r));
    }
    return out;
}

std::string allcurves_path(const std::string& dir) {
    return dir + "/allcurves.fixture";
}

}  // namespace atlas::fixtures
