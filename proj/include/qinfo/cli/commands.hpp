#ifndef QINFO_CLI_COMMANDS_HPP
#define QINFO_CLI_COMMANDS_HPP

// Subcommands of the `qinfo` tool. Each command writes its files into the
// output directory and returns the JSON document it also prints.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "qinfo/cli/config.hpp"
#include "qinfo/detector.hpp"
#include "qinfo/dynamics.hpp"
#include "qinfo/entropy.hpp"
#include "qinfo/io.hpp"
#include "qinfo/signal.hpp"
#include "qinfo/stochastic.hpp"

namespace qinfo::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitNumerical = 3 };

class IoError : public Error {
 public:
  using Error::Error;
};

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw IoError("failed writing " + path.string());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json cmd_word(const RunConfig& c, const fs::path& out) {
  if (!c.word) throw ConfigError("word: config needs a 'word' block with weights");
  const auto w = word_information(c.word->weights);
  json terms = json::array();
  for (const auto& [n, p] : w.weights) {
    const double z = zeta(n);
    terms.push_back({{"n", n}, {"zeta", z}, {"weight", p}, {"contribution", p * z}});
  }
  json doc = {{"zeta", terms}, {"Z", w.value}, {"config", c.to_json()}};
  write_file(out / "word.json", dump(doc));
  return doc;
}

inline json cmd_spectrum(const RunConfig& c, const fs::path& out) {
  const auto& hb = c.hamiltonian;
  const auto model = hb.model(c.constants);
  const auto levels = eigen_spectrum(model);
  const double analytic = ground_energy_analytic(hb.omega, hb.zeta, hb.lambda, c.constants);

  std::ostringstream csv;
  csv << "index,energy\n";
  for (std::size_t i = 0; i < levels.size(); ++i) csv << i << ',' << io::format_number(levels[i]) << '\n';
  write_file(out / "spectrum.csv", csv.str());

  json doc = {{"dim", hb.dim},
              {"ground_energy", levels.front()},
              {"ground_energy_analytic", analytic},
              {"discrepancy", levels.front() - analytic},
              {"config", c.to_json()}};
  write_file(out / "spectrum.json", dump(doc));
  return doc;
}

inline json cmd_entropy(const RunConfig& c, const fs::path& out) {
  if (!c.entropy) throw ConfigError("entropy: config needs an 'entropy' block");
  const auto& e = *c.entropy;
  json doc = json::object();
  auto put = [&](const char* key, double nats) {
    doc[key] = nats;
    doc[std::string(key) + "_bits"] = to_bits(nats);
  };
  if (e.joint) {
    put("shannon", joint_shannon_entropy(*e.joint));
    put("mutual_information", mutual_information(*e.joint));
  }
  if (e.density) put("von_neumann", von_neumann_entropy(*e.density));
  if (e.state) put("entanglement", entanglement_entropy(*e.state, e.dim_a, e.dim_b));
  doc["config"] = c.to_json();
  write_file(out / "entropy.json", dump(doc));
  return doc;
}

inline json cmd_trajectory(const RunConfig& c, const fs::path& out) {
  if (!c.trajectory) throw ConfigError("trajectory: config needs a 'trajectory' block");
  const auto& tb = *c.trajectory;
  RandomSource src = RandomSource(c.seed).derive(0);
  const auto grid = tb.grid();
  const auto traj = entropy_trajectory(tb.chain, tb.states, grid, src, tb.window, tb.bins);

  std::ostringstream csv;
  io::write_columns(csv, "t,value", traj.times, traj.entropy);
  write_file(out / "trajectory.csv", csv.str());

  const auto pi = stationary_distribution(tb.chain);
  std::map<int, double> by_position;
  json stationary = json::object();
  for (std::size_t i = 0; i < tb.chain.size(); ++i) {
    const double p = pi.at(tb.chain.states()[i]);
    stationary[std::to_string(tb.chain.states()[i])] = p;
    by_position[static_cast<int>(i)] = p;
  }
  const double s_inf = von_neumann_entropy(density_from_mixture(tb.states, ProbabilityWeights(std::move(by_position))));

  json doc = {{"mean_entropy", traj.mean},
              {"mean_entropy_bits", to_bits(traj.mean)},
              {"histogram", {{"edges", traj.histogram.edges}, {"counts", traj.histogram.counts}}},
              {"stationary", stationary},
              {"stationary_entropy", s_inf},
              {"config", c.to_json()}};
  write_file(out / "trajectory.json", dump(doc));
  return doc;
}

inline json cmd_generate(const RunConfig& c, const fs::path& out) {
  const auto model = c.signal_model();
  for (const auto& t : model.tones)
    if (t.omega / kTwoPi >= 0.5 * c.generate.sample_rate)
      throw DomainError("tone at " + std::to_string(t.omega / kTwoPi) + " Hz is at or above Nyquist");
  RandomSource src = RandomSource(c.seed).derive(0);
  auto series = synthesize_noise(model.noise, model.M, c.generate.duration, c.generate.sample_rate, src);
  series = inject_tones(std::move(series), model);

  std::ostringstream csv;
  io::write_series_csv(csv, series);
  write_file(out / "series.csv", csv.str());

  json tones = json::array();
  for (std::size_t k = 0; k < model.tones.size(); ++k)
    tones.push_back({{"omega", model.tones[k].omega},
                     {"freq_hz", model.tones[k].omega / kTwoPi},
                     {"z", model.tones[k].z},
                     {"amplitude", tone_amplitude(model.tones[k], model)},
                     {"phase", tone_phase(model, k)}});
  json doc = {{"n_samples", series.size()},
              {"sample_rate", series.sample_rate},
              {"tones", tones},
              {"config", c.to_json()}};
  write_file(out / "series.json", dump(doc));
  return doc;
}

inline json cmd_detect(const RunConfig& c, const fs::path& input, const fs::path& out) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IoError("cannot open input " + input.string());
  const auto series = io::read_series_csv(in);
  const auto& d = c.detect;
  if (series.size() < d.segment_length)
    throw ValidationError("input has " + std::to_string(series.size()) + " samples, fewer than one segment (" +
                          std::to_string(d.segment_length) + ")");
  const auto psd = welch_psd(series, d.segment_length, d.overlap, d.window);
  const EnergyCalibration calib{c.signal.rate_scale, c.noise.T, c.constants};
  const auto report = detect_excess_power(psd, c.noise_model(), c.noise.M, d.threshold_sigma, calib);

  std::ostringstream csv;
  io::write_psd_csv(csv, psd);
  write_file(out / "psd.csv", csv.str());

  json dets = json::array();
  for (const auto& det : report.detections)
    dets.push_back({{"freq_hz", det.freq_hz},
                    {"power", det.power},
                    {"floor", det.floor},
                    {"snr", det.snr},
                    {"energy_est", det.energy_est},
                    {"z_est", det.z_est}});
  json doc = {{"threshold_sigma", report.threshold_sigma},
              {"n_segments", report.n_segments},
              {"detections", dets},
              {"sample_rate", series.sample_rate},
              {"config", c.to_json()}};
  write_file(out / "detection.json", dump(doc));
  return doc;
}

inline json cmd_power(const RunConfig& c, const fs::path& out) {
  const auto model = c.signal_model();
  const auto& p = c.power;
  json samples = json::array();
  for (double t : p.times) {
    json row = {{"t", t}, {"power", measured_power(p.z, c.noise.T, t, model, p.omega)}};
    if (p.z_dot) row["power_rate"] = signal_power_rate(*p.z_dot, c.noise.T, model, p.omega, t);
    samples.push_back(std::move(row));
  }
  json doc = {{"samples", samples}, {"config", c.to_json()}};
  write_file(out / "power.json", dump(doc));
  return doc;
}

/// Entry point shared by the tool and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Information quanta simulation and synthetic detection"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> units;
  std::string input;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--units", units, "natural or si")->check(CLI::IsMember({"natural", "si"}));

  auto* word = app.add_subcommand("word", "information word Z from probability weights");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the field-information Hamiltonian");
  auto* entropy = app.add_subcommand("entropy", "Shannon, mutual, Von Neumann and entanglement entropies");
  auto* trajectory = app.add_subcommand("trajectory", "entropy of a Markov-driven mixed state over time");
  auto* generate = app.add_subcommand("generate", "synthetic heat-current noise with injected tones");
  auto* detect = app.add_subcommand("detect", "Welch PSD and excess-power detection on a series CSV");
  auto* power = app.add_subcommand("power", "measured signal power over a time window");
  detect->add_option("--input", input, "time series CSV (t,value)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    json raw = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path, std::ios::binary);
      if (!f) throw IoError("cannot open config " + config_path);
      try {
        raw = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    std::optional<UnitSystem> unit_override;
    if (units) unit_override = RunConfig::parse_units(*units);
    const RunConfig config = RunConfig::parse(raw, unit_override, seed);

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    json doc;
    if (*word)
      doc = cmd_word(config, dir);
    else if (*spectrum)
      doc = cmd_spectrum(config, dir);
    else if (*entropy)
      doc = cmd_entropy(config, dir);
    else if (*trajectory)
      doc = cmd_trajectory(config, dir);
    else if (*generate)
      doc = cmd_generate(config, dir);
    else if (*detect)
      doc = cmd_detect(config, input, dir);
    else if (*power)
      doc = cmd_power(config, dir);
    out << dump(doc);
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace qinfo::cli

#endif  // QINFO_CLI_COMMANDS_HPP
