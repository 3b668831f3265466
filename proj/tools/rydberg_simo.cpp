// Command-line front end: one subcommand per analysis, CSV out.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/harness/commands.hpp"
#include "rydberg/harness/config.hpp"
#include "rydberg/harness/csv.hpp"
#include "rydberg/parallel.hpp"

namespace {

using namespace rydberg;
using namespace rydberg::harness;

enum Exit { ok = 0, usage = 2, analysis = 3, numerical = 4 };

int classify(const std::exception& e) {
  if (const auto* row = dynamic_cast<const ScanRowError*>(&e)) {
    try {
      std::rethrow_if_nested(*row);
    } catch (const std::exception& inner) {
      return classify(inner);
    }
    return numerical;
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const InvalidInput*>(&e))
    return usage;
  if (dynamic_cast<const NoCrossing*>(&e) || dynamic_cast<const BadSlope*>(&e) ||
      dynamic_cast<const InsufficientPoints*>(&e) || dynamic_cast<const CalibrationDiverged*>(&e) ||
      dynamic_cast<const NonpositiveNoise*>(&e))
    return analysis;
  return numerical;
}

void emit(const ScanTable& table, const std::string& out) {
  if (out.empty() || out == "-")
    write_table(table, std::cout);
  else
    write_table(table, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-atom SIMO receiver model"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, out_path, timestamp;
  std::vector<std::string> overrides;
  unsigned threads = 0;
  app.add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output CSV (default stdout)");
  app.add_option("--set", overrides, "override, key=value (repeatable)");
  app.add_option("--threads", threads, "cap on worker threads (0 = hardware)");
  app.add_option("--pin-timestamp", timestamp, "fixed value for the timestamp metadata line");

  auto* spectrum = app.add_subcommand("spectrum", "probe transmission versus detuning");
  std::string axis;
  double start = 0.0, stop = 0.0;
  int steps = 0;
  spectrum->add_option("--axis", axis, "probe or coupling")->check(CLI::IsMember({"probe", "coupling"}));
  spectrum->add_option("--start", start, "first detuning / 2π, MHz");
  spectrum->add_option("--stop", stop, "last detuning / 2π, MHz");
  spectrum->add_option("--steps", steps, "number of points");

  auto* snr = app.add_subcommand("snr", "SNR versus probe power or f_AM");
  std::string variable;
  snr->add_option("--variable", variable, "probe_power or f_am")->check(CLI::IsMember({"probe_power", "f_am"}));

  auto* bandwidth = app.add_subcommand("bandwidth", "10 dB bandwidth for N = 1..size");
  auto* capacity = app.add_subcommand("capacity", "Shannon capacity versus f_AM or N");

  auto* noise = app.add_subcommand("noise", "noise floor and SNR with and without the AOM term");
  bool run_calibration = false;
  std::string fragment_path;
  noise->add_flag("--calibrate", run_calibration, "fit the noise coefficients to the anchors first");
  CalibrationMode mode;
  noise->add_flag("--fit-coupling", mode.coupling, "with --calibrate: also fit probe_omega_ref_mhz");
  noise->add_flag("--fit-corner", mode.corner, "with --calibrate: also fit dynamic_corner_khz");
  noise->add_option("--fragment", fragment_path, "where to write the calibration (default stderr)");

  auto* scaling = app.add_subcommand("scaling", "SNR versus N against the factor-N line");
  std::string input_path;
  scaling->add_option("--input", input_path, "measured CSV with n_receivers and snr_db columns")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    set_max_threads(threads);
    Config config = config_path.empty() ? Config{} : Config::from_file(config_path);
    for (const auto& o : overrides) config.set_override(o);
    const std::string name = app.get_subcommands().front()->get_name();
    const RunInfo info{name, timestamp};

    CommandOutput out;
    if (spectrum->parsed()) {
      if (!axis.empty()) config.set("spectrum_axis", axis);
      if (spectrum->count("--start") || spectrum->count("--stop") || spectrum->count("--steps")) {
        config.set("scan_variable", "detuning");
        config.set("scan_log", "false");
        if (spectrum->count("--start")) config.set("scan_start", format_double(start));
        if (spectrum->count("--stop")) config.set("scan_stop", format_double(stop));
        if (spectrum->count("--steps")) config.set("scan_steps", std::to_string(steps));
      }
      out = cmd_spectrum(config, info);
    } else if (snr->parsed()) {
      if (!variable.empty()) config.set("scan_variable", variable);
      out = cmd_snr(config, info);
    } else if (bandwidth->parsed()) {
      out = cmd_bandwidth(config, info);
    } else if (capacity->parsed()) {
      out = cmd_capacity(config, info);
    } else if (noise->parsed()) {
      NoiseOutput n = cmd_noise(config, run_calibration, mode, info);
      if (run_calibration) {
        if (fragment_path.empty()) {
          std::cerr << n.fragment;
        } else {
          std::ofstream f(fragment_path);
          if (!f) throw InvalidInput("cannot open '" + fragment_path + "'");
          f << n.fragment;
        }
      }
      out = std::move(n.output);
    } else if (scaling->parsed()) {
      out = input_path.empty() ? cmd_scaling(config, info) : cmd_scaling(read_table(input_path));
    }

    emit(out.table, out_path);
    if (!out.report.empty()) std::cerr << out.report << '\n';
    return ok;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return classify(e);
  }
}
