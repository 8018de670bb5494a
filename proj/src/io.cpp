#include "sdmt/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace sdmt {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " into place: " +
                             ec.message());
  }
}

std::string ladder_csv(const std::vector<OutageEstimate>& estimates) {
  std::string out = "snr_db,trials,weighted_hits,p_hat,ci_lo,ci_hi,tilt_theta\n";
  for (const auto& est : estimates) {
    out += format_double(est.snr_db);
    out += ',';
    out += std::to_string(est.trials);
    out += ',';
    out += format_double(est.weighted_hits);
    out += ',';
    out += format_double(est.p_hat);
    out += ',';
    out += format_double(est.ci_lo);
    out += ',';
    out += format_double(est.ci_hi);
    out += ',';
    out += format_double(est.tilt_theta);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json estimate_json(const OutageEstimate& est) {
  nlohmann::json j{{"snr_db", est.snr_db},
                   {"rho", est.rho},
                   {"tilt_theta", est.tilt_theta},
                   {"trials", est.trials},
                   {"hits", est.hits},
                   {"weighted_hits", est.weighted_hits},
                   {"p_hat", est.p_hat},
                   {"ci_lo", est.ci_lo},
                   {"ci_hi", est.ci_hi}};
  if (!est.warning.empty()) j["warning"] = est.warning;
  return j;
}

}  // namespace

std::string ladder_summary_json(const LadderResult& result) {
  nlohmann::json j;
  j["rungs"] = nlohmann::json::array();
  for (const auto& est : result.estimates) j["rungs"].push_back(estimate_json(est));
  if (result.fit) {
    j["fit"] = {{"slope", result.fit->slope},
                {"intercept", result.fit->intercept},
                {"r_squared", result.fit->r_squared},
                {"points_used", result.fit->points_used}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = result.fit_error;
  }
  j["excluded"] = nlohmann::json::array();
  for (const auto& ex : result.excluded)
    j["excluded"].push_back({{"index", ex.index}, {"reason", ex.reason}});
  return j.dump(2) + "\n";
}

std::string treesim_json(const std::vector<TreeRungReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rep : reports) {
    nlohmann::json j;
    j["snr_db"] = rep.snr_db;
    j["rho"] = rep.rho;
    j["tilt_theta"] = rep.tilt_theta;
    j["trials"] = rep.trials;
    j["per_k"] = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.per_k.size(); ++k) {
      const auto& est = rep.per_k[k];
      j["per_k"].push_back({{"k", k},
                            {"trials", est.trials},
                            {"errors", est.hits},
                            {"p_hat", est.p_hat},
                            {"ci_lo", est.ci_lo},
                            {"ci_hi", est.ci_hi}});
    }
    j["per_lag"] = nlohmann::json::array();
    for (std::size_t lag = 0; lag < rep.lag_rate.size(); ++lag) {
      j["per_lag"].push_back({{"lag", lag},
                              {"rate", rep.lag_rate[lag]},
                              {"hits", rep.lag_hits[lag]},
                              {"opportunities", rep.lag_opportunities[lag]}});
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace sdmt
