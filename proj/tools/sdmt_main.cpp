#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdmt/channel.hpp"
#include "sdmt/converse.hpp"
#include "sdmt/dmt.hpp"
#include "sdmt/io.hpp"
#include "sdmt/outage.hpp"
#include "sdmt/rng.hpp"
#include "sdmt/schemes.hpp"

#ifndef SDMT_VERSION
#define SDMT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  double snr_start = 10.0;
  double snr_stop = 30.0;
  double snr_step = 5.0;
  int nt = 1;
  int nr = 1;
  int delay = 2;
  double rate = 0.5;
  double epsilon = 0.01;
  double tilt = 0.0;
  std::string out_dir = ".";
  int workers = 1;
  std::string format = "csv";
  // curves
  double r_step = 0.05;
  // scheme
  std::string scheme = "interleave";
  // treesim
  int horizon = 6;
  double synthetic_mf = -1.0;  // negative = feature off
  // audit
  std::string audit = "threshold";
  double delta = 0.1;
  long window = 5;
  long n_max = 50;
  double snr_db = 20.0;
  std::vector<double> gains;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per rung")
      ->capture_default_str();
  cmd->add_option("--snr-start-db", o.snr_start, "first ladder rung (dB)")
      ->capture_default_str();
  cmd->add_option("--snr-stop-db", o.snr_stop, "last ladder rung (dB)")
      ->capture_default_str();
  cmd->add_option("--snr-step-db", o.snr_step, "rung spacing (dB)")
      ->capture_default_str();
  cmd->add_option("--nt", o.nt, "transmit antennas")->capture_default_str();
  cmd->add_option("--nr", o.nr, "receive antennas")->capture_default_str();
  cmd->add_option("--delay", o.delay, "decoding delay in blocks")
      ->capture_default_str();
  cmd->add_option("--rate", o.rate, "multiplexing gain r")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "tree-code threshold slack")
      ->capture_default_str();
  cmd->add_option("--tilt", o.tilt, "importance-sampling tilt theta")
      ->capture_default_str();
  cmd->add_option("--out-dir", o.out_dir, "output directory")
      ->envname("SDMT_OUT_DIR")
      ->capture_default_str();
  cmd->add_option("--workers", o.workers, "worker threads")->capture_default_str();
  cmd->add_option("--format", o.format, "estimate table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

sdmt::SnrLadder make_ladder(const Options& o) {
  if (!(o.snr_step > 0.0))
    throw std::invalid_argument("snr step must be positive");
  if (o.snr_stop < o.snr_start - 1e-12)
    throw std::invalid_argument("snr stop must not precede snr start");
  const int n = int(std::floor((o.snr_stop - o.snr_start) / o.snr_step + 1e-9)) + 1;
  sdmt::SnrLadder ladder;
  ladder.snr_db.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) ladder.snr_db.push_back(o.snr_start + double(i) * o.snr_step);
  ladder.validate();
  return ladder;
}

sdmt::LadderSpec make_ladder_spec(const Options& o) {
  sdmt::LadderSpec spec;
  spec.ladder = make_ladder(o);
  spec.trials = {o.trials};
  spec.tilt_theta = {o.tilt};
  spec.workers = o.workers;
  spec.validate();
  return spec;
}

json common_echo(const Options& o, bool mc) {
  json j{{"nt", o.nt},         {"nr", o.nr},     {"delay", o.delay},
         {"rate", o.rate},     {"epsilon", o.epsilon},
         {"out_dir", o.out_dir}, {"format", o.format}};
  if (mc) {
    j["trials"] = o.trials;
    j["snr_start_db"] = o.snr_start;
    j["snr_stop_db"] = o.snr_stop;
    j["snr_step_db"] = o.snr_step;
    j["tilt"] = o.tilt;
    j["workers"] = o.workers;
  }
  return j;
}

using FileList = std::vector<std::pair<std::string, std::string>>;

// Everything is computed before this point; summary.json goes last so its
// presence certifies a complete run.
void write_outputs(const Options& o, const char* command, const json& config_echo,
                   const FileList& files, double wall_s) {
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  for (const auto& [name, content] : files)
    sdmt::write_file_atomic(dir / name, content);
  json summary{{"command", command},
               {"version", SDMT_VERSION},
               {"seed", o.seed},
               {"wall_time_s", wall_s},
               {"config", config_echo}};
  sdmt::write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
}

json breakpoints_json(const sdmt::DmtCurve& curve) {
  json arr = json::array();
  for (const auto& [r, d] : curve.breakpoints()) arr.push_back({r, d});
  return arr;
}

void run_curves(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.nt < 1 || o.nr < 1) throw std::invalid_argument("antenna counts must be >= 1");
  if (o.delay < 1) throw std::invalid_argument("delay must be >= 1");
  if (!(o.r_step > 0.0)) throw std::invalid_argument("r step must be positive");

  const sdmt::AntennaConfig cfg{o.nt, o.nr};
  const double rmax = double(std::min(o.nt, o.nr));
  const int rows = int(std::floor(rmax / o.r_step + 1e-9)) + 1;
  if (rows < 1 || rows > 1000000) throw std::invalid_argument("r grid size out of range");

  const sdmt::DmtCurve single = sdmt::d1_curve(cfg);
  const sdmt::DmtCurve stream = sdmt::streaming_curve(o.delay, cfg);
  const sdmt::DmtCurve par = sdmt::parallel_curve(o.delay, cfg);

  std::string csv = "r,d1,d_streaming,d_parallel,prop1,prop2,envelope\n";
  for (int i = 0; i < rows; ++i) {
    const double r = std::min(double(i) * o.r_step, rmax);
    csv += sdmt::format_double(r);
    csv += ',';
    csv += sdmt::format_double(single.eval(r));
    csv += ',';
    csv += sdmt::format_double(stream.eval(r));
    csv += ',';
    csv += sdmt::format_double(par.eval(std::min(r * double(o.delay), par.r_max())));
    csv += ',';
    if (r <= 1.0 + 1e-12) {
      const double rc = std::min(r, 1.0);
      csv += sdmt::format_double(sdmt::prop1_dmt(rc));
      csv += ',';
      csv += sdmt::format_double(sdmt::prop2_dmt(rc));
    } else {
      csv += ',';
    }
    csv += ',';
    csv += sdmt::format_double(sdmt::simple_bound_envelope(r, 50).envelope);
    csv += '\n';
  }

  json bp{{"d1", breakpoints_json(single)},
          {"streaming", breakpoints_json(stream)},
          {"parallel", breakpoints_json(par)}};

  json echo = common_echo(o, false);
  echo["r_step"] = o.r_step;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(o, "curves", echo,
                {{"curves.csv", csv}, {"breakpoints.json", bp.dump(2) + "\n"}}, wall);
}

sdmt::McEvent mimo_block_event(int nr, int nt, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  sdmt::McEvent ev;
  ev.nr = nr;
  ev.nt = nt;
  ev.n_blocks = 1;
  ev.outage = [rate](const sdmt::ChannelSequence& seq, double rho) {
    return sdmt::mutual_info(seq.blocks[0], rho) <= rate * std::log2(rho);
  };
  return ev;
}

FileList ladder_files(const Options& o, const sdmt::LadderResult& result) {
  FileList files;
  if (o.format == "json") {
    json arr = json::array();
    // reuse the summary JSON rung serialization for the table too
    json full = json::parse(sdmt::ladder_summary_json(result));
    files.emplace_back("estimates.json", full["rungs"].dump(2) + "\n");
  } else {
    files.emplace_back("estimates.csv", sdmt::ladder_csv(result.estimates));
  }
  files.emplace_back("fit.json", sdmt::ladder_summary_json(result));
  return files;
}

void run_outage(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.nt < 1 || o.nr < 1) throw std::invalid_argument("antenna counts must be >= 1");
  const auto spec = make_ladder_spec(o);
  const auto event = mimo_block_event(o.nr, o.nt, o.rate);
  const auto result = sdmt::run_ladder(event, spec, {o.seed, 0});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(o, "outage", common_echo(o, true), ladder_files(o, result), wall);
}

void run_scheme(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = make_ladder_spec(o);
  const sdmt::RngSpec rng{o.seed, 0};
  sdmt::LadderResult result;
  if (o.scheme == "interleave") {
    sdmt::StreamSpec stream{{o.nt, o.nr}, o.delay, o.rate, o.epsilon};
    result = sdmt::interleave_sim(stream, spec, rng);
  } else {
    if (o.nt != 1 || o.nr != 1)
      throw std::invalid_argument(o.scheme + " is a single-antenna scheme");
    if (o.scheme == "naive") {
      result = sdmt::naive_scheme_sim(o.rate, spec, rng);
    } else if (o.scheme == "prop1") {
      result = sdmt::prop1_sim(o.rate, sdmt::Prop1Mode::union_events, spec, rng);
    } else if (o.scheme == "prop1-first") {
      result = sdmt::prop1_sim(o.rate, sdmt::Prop1Mode::first_only, spec, rng);
    } else {
      result = sdmt::prop1_sim(o.rate, sdmt::Prop1Mode::second_only, spec, rng);
    }
  }
  json echo = common_echo(o, true);
  echo["scheme"] = o.scheme;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(o, "scheme", echo, ladder_files(o, result), wall);
}

void run_treesim(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = make_ladder_spec(o);
  sdmt::StreamSpec stream{{o.nt, o.nr}, o.delay, o.rate, o.epsilon};
  std::optional<double> mf;
  if (o.synthetic_mf >= 0.0) mf = o.synthetic_mf;
  const auto reports =
      sdmt::treecode_decode_sim(stream, o.horizon, spec, {o.seed, 0}, mf);
  json echo = common_echo(o, true);
  echo["horizon"] = o.horizon;
  if (mf) echo["synthetic_mf"] = *mf;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(o, "treesim", echo, {{"treesim.json", sdmt::treesim_json(reports)}},
                wall);
}

void run_audit(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  json result;
  FileList files;
  if (o.audit == "threshold") {
    const auto th = sdmt::amplification_threshold(o.delay, o.rate, o.delta);
    result = {{"N_star", th.n_star}, {"bracket", th.bracket}};
  } else if (o.audit == "budget") {
    const auto bc = sdmt::siso_budget_check(o.rate, o.delta, int(o.window));
    result = {{"window", o.window},
              {"decodable", bc.decodable},
              {"required", bc.required},
              {"contradiction", bc.contradiction}};
  } else if (o.audit == "trace") {
    if (o.gains.empty())
      throw std::invalid_argument("trace needs --gains with at least two values");
    sdmt::AmplificationScenario sc;
    sc.r = o.rate;
    sc.delta = o.delta;
    sc.rho = sdmt::db_to_linear(o.snr_db);
    sc.t_delay = 2;
    sc.gains_sq = o.gains;
    const auto trace = sdmt::amplification_trace(sc);
    result["snr_db"] = o.snr_db;
    result["threshold"] = std::pow(sc.rho, -(1.0 - sc.r + sc.delta));
    std::string table;
    if (trace.violating_block) {
      result["violating_block"] = *trace.violating_block;
      table = "precondition violated at block " +
              std::to_string(*trace.violating_block) + "\n";
    } else {
      result["violating_block"] = nullptr;
      result["steps"] = json::array();
      for (const auto& st : trace.steps) {
        result["steps"].push_back({{"step", st.step},
                                   {"effective_gains", st.effective_gains},
                                   {"membership", st.membership}});
        table += "step " + std::to_string(st.step) + ": gains =";
        for (double g : st.effective_gains) table += " " + sdmt::format_double(g);
        table += st.membership ? "  -> member\n" : "  -> NOT member\n";
      }
    }
    files.emplace_back("trace.txt", table);
  } else if (o.audit == "envelope") {
    const auto env = sdmt::simple_bound_envelope(o.rate, int(o.n_max));
    result = {{"envelope", env.envelope}, {"argmin_n", env.argmin_n}};
  } else {  // multicast
    const double rho = sdmt::db_to_linear(o.snr_db);
    const double bracket = sdmt::multicast_bracket(o.rate, o.delta, rho, o.window);
    const auto min_n = sdmt::multicast_min_n(o.rate, o.delta, rho);
    result = {{"window", o.window}, {"bracket", bracket}};
    if (min_n)
      result["min_window"] = *min_n;
    else
      result["min_window"] = nullptr;
  }
  files.emplace_back("audit.json", result.dump(2) + "\n");

  json echo = common_echo(o, false);
  echo["audit"] = o.audit;
  echo["delta"] = o.delta;
  echo["window"] = o.window;
  echo["n_max"] = o.n_max;
  echo["snr_db"] = o.snr_db;
  echo["gains"] = o.gains;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(o, "audit", echo, files, wall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming MIMO diversity/multiplexing simulation toolkit"};
  app.set_version_flag("--version", SDMT_VERSION);
  app.set_config("--config", "", "plain-text config file; command-line flags win");
  app.require_subcommand(1);

  Options o;

  CLI::App* curves = app.add_subcommand("curves", "analytic tradeoff curves on an r grid");
  add_common(curves, o);
  curves->add_option("--r-step", o.r_step, "multiplexing grid step")
      ->capture_default_str();

  CLI::App* outage = app.add_subcommand("outage", "single-block outage ladder");
  add_common(outage, o);

  CLI::App* scheme = app.add_subcommand("scheme", "streaming scheme error ladder");
  add_common(scheme, o);
  scheme->add_option("--scheme", o.scheme, "which scheme to simulate")
      ->check(CLI::IsMember({"interleave", "naive", "prop1", "prop1-first",
                             "prop1-second"}))
      ->capture_default_str();

  CLI::App* treesim = app.add_subcommand("treesim", "tree-code decoder ladder");
  add_common(treesim, o);
  treesim->add_option("--horizon", o.horizon, "number of messages")
      ->capture_default_str();
  treesim
      ->add_option("--synthetic-mf", o.synthetic_mf,
                   "inject synthetic step failures with probability 2^-x (off if negative)")
      ->capture_default_str();

  CLI::App* audit = app.add_subcommand("audit", "converse arithmetic checks");
  add_common(audit, o);
  audit->add_option("--audit", o.audit, "which check to run")
      ->check(CLI::IsMember({"threshold", "budget", "trace", "envelope", "multicast"}))
      ->capture_default_str();
  audit->add_option("--delta", o.delta, "rate slack delta")->capture_default_str();
  audit->add_option("--window", o.window, "window length N")->capture_default_str();
  audit->add_option("--n-max", o.n_max, "largest window for the envelope")
      ->capture_default_str();
  audit->add_option("--snr-db", o.snr_db, "operating SNR (dB) for trace/multicast")
      ->capture_default_str();
  audit->add_option("--gains", o.gains, "per-block gains |h|^2 for the trace")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (curves->parsed()) {
      run_curves(o);
    } else if (outage->parsed()) {
      run_outage(o);
    } else if (scheme->parsed()) {
      run_scheme(o);
    } else if (treesim->parsed()) {
      run_treesim(o);
    } else if (audit->parsed()) {
      run_audit(o);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
