#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sdmt/outage.hpp"
#include "sdmt/schemes.hpp"

namespace sdmt {

// Shortest decimal string that parses back to exactly the same double, so
// emitted files are stable across runs and reductions can be compared
// byte-for-byte.
std::string format_double(double v);

// Writes content to a sibling temp file and renames it into place; the
// destination is never observable half-written.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Estimate table with header
//   snr_db,trials,weighted_hits,p_hat,ci_lo,ci_hi,tilt_theta
std::string ladder_csv(const std::vector<OutageEstimate>& estimates);

// Full ladder result: rungs, fit (null when unavailable), exclusions.
std::string ladder_summary_json(const LadderResult& result);

// Per-rung tree-code report: {snr_db, per_k: [{k, trials, errors, p_hat}],
// per_lag: [{lag, rate}]} with interval fields alongside.
std::string treesim_json(const std::vector<TreeRungReport>& reports);

}  // namespace sdmt
