#pragma once

#include <string>
#include <vector>

#include "atlas/arith.hpp"

namespace atlas::audit {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // failure description or a short summary
};

struct Options {
    std::string data_dir;      // fixtures, empty = default
    std::string cremona_path;  // curve database, empty = bundled fixture
    int jobs = 0;              // 0 = hardware parallelism
    bool with_traces = true;   // include the trace-engine suites
};

// The library-wide invariant suites: exact arithmetic properties, scan
// identities, fixture golden checks.  Every check is deterministic.
std::vector<CheckResult> run_audit(const Options& opt);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace atlas::audit
