#ifndef QINFO_CLI_CONFIG_HPP
#define QINFO_CLI_CONFIG_HPP

// JSON run configuration. Every block is parsed into validated library
// objects before a command does any work; unknown keys are rejected.
// docs/config.md describes the schema.

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qinfo/detector.hpp"
#include "qinfo/dynamics.hpp"
#include "qinfo/entropy.hpp"
#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"
#include "qinfo/signal.hpp"
#include "qinfo/stochastic.hpp"

namespace qinfo::cli {

using json = nlohmann::ordered_json;

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace cfg {

inline void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

inline double number(const json& j, std::string_view where) {
  if (!j.is_number()) throw ConfigError(std::string(where) + ": expected a number");
  return j.get<double>();
}

inline double number_or(const json& obj, const char* key, double fallback, std::string_view where) {
  return obj.contains(key) ? number(obj.at(key), std::string(where) + "." + key) : fallback;
}

inline std::int64_t integer(const json& j, std::string_view where) {
  if (!j.is_number_integer()) throw ConfigError(std::string(where) + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::int64_t integer_or(const json& obj, const char* key, std::int64_t fallback, std::string_view where) {
  return obj.contains(key) ? integer(obj.at(key), std::string(where) + "." + key) : fallback;
}

inline std::size_t count_or(const json& obj, const char* key, std::size_t fallback, std::string_view where) {
  auto v = integer_or(obj, key, static_cast<std::int64_t>(fallback), where);
  if (v < 0) throw ConfigError(std::string(where) + "." + key + ": must be non-negative");
  return static_cast<std::size_t>(v);
}

inline std::string string_or(const json& obj, const char* key, std::string fallback, std::string_view where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(std::string(where) + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

/// A number or an [re, im] pair.
inline cplx complex_entry(const json& j, std::string_view where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(std::string(where) + ": expected a number or an [re, im] pair");
}

inline Eigen::MatrixXd real_matrix(const json& j, std::string_view where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ConfigError(std::string(where) + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(std::string(where) + ": rows must all have " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline Eigen::MatrixXcd complex_matrix(const json& j, std::string_view where) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError(std::string(where) + ": expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ConfigError(std::string(where) + ": matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_entry(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline Eigen::VectorXcd complex_vector(const json& j, std::string_view where) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(where) + ": expected a non-empty array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_entry(j[i], where);
  return v;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

inline json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cfg

struct WordBlock {
  ProbabilityWeights weights;

  static WordBlock parse(const json& j) {
    cfg::check_keys(j, "word", {"weights"});
    if (!j.contains("weights")) throw ConfigError("word.weights is required");
    const auto& w = j.at("weights");
    std::map<int, double> m;
    if (w.is_object()) {
      for (const auto& [key, val] : w.items()) {
        std::size_t used = 0;
        int n = -1;
        try {
          n = std::stoi(key, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != key.size() || n < 0) throw ConfigError("word.weights: key '" + key + "' is not a word index");
        m[n] = cfg::number(val, "word.weights." + key);
      }
    } else if (w.is_array()) {
      for (std::size_t i = 0; i < w.size(); ++i) m[static_cast<int>(i)] = cfg::number(w[i], "word.weights");
    } else {
      throw ConfigError("word.weights: expected an object {index: probability} or an array");
    }
    for (const auto& [n, p] : m) zeta(n);  // index range
    return WordBlock{ProbabilityWeights(std::move(m))};
  }

  json to_json() const {
    json w = json::object();
    for (const auto& [n, p] : weights) w[std::to_string(n)] = p;
    return {{"weights", w}};
  }
};

struct HamiltonianBlock {
  double omega = 1.0;
  double zeta = qinfo::zeta(0);
  double lambda = kDefaultCoupling;
  std::int64_t dim = kDefaultFockDim;

  static HamiltonianBlock parse(const json& j) {
    cfg::check_keys(j, "hamiltonian", {"omega", "zeta", "lambda", "dim"});
    HamiltonianBlock b;
    b.omega = cfg::number_or(j, "omega", b.omega, "hamiltonian");
    b.zeta = cfg::number_or(j, "zeta", b.zeta, "hamiltonian");
    b.lambda = cfg::number_or(j, "lambda", b.lambda, "hamiltonian");
    b.dim = cfg::integer_or(j, "dim", b.dim, "hamiltonian");
    (void)FockSpace(static_cast<Eigen::Index>(b.dim), b.omega);
    detail::require<ValidationError>(b.dim <= 4096, "hamiltonian.dim above 4096 is not supported");
    detail::require<DomainError>(b.zeta >= 0.0, "hamiltonian.zeta must be non-negative");
    return b;
  }

  HamiltonianModel model(const PhysicalConstants& k) const {
    return build_hamiltonian(FockSpace(static_cast<Eigen::Index>(dim), omega), zeta, lambda, k);
  }

  json to_json() const { return {{"omega", omega}, {"zeta", zeta}, {"lambda", lambda}, {"dim", dim}}; }
};

struct EntropyBlock {
  std::optional<JointDistribution> joint;
  std::optional<DensityMatrix> density;
  std::optional<PureState> state;
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;

  static EntropyBlock parse(const json& j) {
    cfg::check_keys(j, "entropy", {"joint", "density", "state", "dim_a", "dim_b"});
    EntropyBlock b;
    if (j.contains("joint")) b.joint.emplace(cfg::real_matrix(j.at("joint"), "entropy.joint"));
    if (j.contains("density")) b.density.emplace(cfg::complex_matrix(j.at("density"), "entropy.density"));
    if (j.contains("state")) {
      b.state.emplace(PureState::normalized(cfg::complex_vector(j.at("state"), "entropy.state")));
      b.dim_a = cfg::integer_or(j, "dim_a", 0, "entropy");
      b.dim_b = cfg::integer_or(j, "dim_b", 0, "entropy");
      detail::require<ShapeError>(b.dim_a > 0 && b.dim_b > 0 && b.dim_a * b.dim_b == b.state->dim(),
                                  "entropy.state: dim_a x dim_b must equal the state dimension");
    }
    if (!b.joint && !b.density && !b.state) throw ConfigError("entropy: give at least one of joint, density, state");
    return b;
  }

  json to_json() const {
    json out = json::object();
    if (joint) out["joint"] = cfg::to_json(joint->matrix());
    if (density) out["density"] = cfg::to_json(density->matrix());
    if (state) {
      out["state"] = cfg::to_json(state->amplitudes());
      out["dim_a"] = dim_a;
      out["dim_b"] = dim_b;
    }
    return out;
  }
};

struct TrajectoryBlock {
  MarkovChain chain;
  std::vector<PureState> states;
  double dt = 1.0;
  std::size_t steps = 1000;
  std::size_t window = 100;
  std::size_t bins = 20;

  static TrajectoryBlock parse(const json& j) {
    cfg::check_keys(j, "trajectory", {"transition", "words", "states", "dt", "steps", "window", "bins"});
    if (!j.contains("transition")) throw ConfigError("trajectory.transition is required");
    if (!j.contains("states")) throw ConfigError("trajectory.states is required");
    Eigen::MatrixXd p = cfg::real_matrix(j.at("transition"), "trajectory.transition");
    std::vector<int> words;
    if (j.contains("words")) {
      const auto& w = j.at("words");
      if (!w.is_array()) throw ConfigError("trajectory.words: expected an array");
      for (const auto& x : w) words.push_back(static_cast<int>(cfg::integer(x, "trajectory.words")));
    } else {
      for (Eigen::Index i = 0; i < p.rows(); ++i) words.push_back(static_cast<int>(i));
    }
    const auto& s = j.at("states");
    if (!s.is_array()) throw ConfigError("trajectory.states: expected an array of state vectors");
    std::vector<PureState> states;
    for (const auto& v : s) states.push_back(PureState::normalized(cfg::complex_vector(v, "trajectory.states")));

    TrajectoryBlock b{MarkovChain(std::move(words), std::move(p)), std::move(states)};
    b.dt = cfg::number_or(j, "dt", b.dt, "trajectory");
    b.steps = cfg::count_or(j, "steps", b.steps, "trajectory");
    b.window = cfg::count_or(j, "window", b.window, "trajectory");
    b.bins = cfg::count_or(j, "bins", b.bins, "trajectory");
    detail::require<ValidationError>(b.dt > 0.0, "trajectory.dt must be positive");
    detail::require<ValidationError>(b.steps >= 1, "trajectory.steps must be at least 1");
    detail::require<ValidationError>(b.window >= 1, "trajectory.window must be at least 1");
    detail::require<ValidationError>(b.bins >= 1, "trajectory.bins must be at least 1");
    detail::require<ShapeError>(b.states.size() == b.chain.size(), "trajectory: need one state per chain state");
    for (const auto& st : b.states)
      detail::require<ShapeError>(st.dim() == b.states.front().dim(), "trajectory.states differ in dimension");
    return b;
  }

  std::vector<double> grid() const {
    std::vector<double> t(steps);
    for (std::size_t i = 0; i < steps; ++i) t[i] = dt * static_cast<double>(i);
    return t;
  }

  json to_json() const {
    json st = json::array();
    for (const auto& s : states) st.push_back(cfg::to_json(s.amplitudes()));
    return {{"transition", cfg::to_json(chain.transition())},
            {"words", chain.states()},
            {"states", st},
            {"dt", dt},
            {"steps", steps},
            {"window", window},
            {"bins", bins}};
  }
};

struct NoiseBlock {
  double K = 1.0;
  double T = 1.0;
  double M = 1.0;

  static NoiseBlock parse(const json& j) {
    cfg::check_keys(j, "noise", {"K", "T", "M"});
    NoiseBlock b;
    b.K = cfg::number_or(j, "K", b.K, "noise");
    b.T = cfg::number_or(j, "T", b.T, "noise");
    b.M = cfg::number_or(j, "M", b.M, "noise");
    detail::require<ValidationError>(b.M >= 0.0, "noise.M must be non-negative");
    b.model(PhysicalConstants::natural()).validate();
    return b;
  }

  NoiseModel model(const PhysicalConstants& k) const { return NoiseModel{K, T, k}; }
  json to_json() const { return {{"K", K}, {"T", T}, {"M", M}}; }
};

struct SignalBlock {
  std::vector<Tone> tones;
  Damping damping;
  double rate_scale = 1.0;

  static SignalBlock parse(const json& j) {
    cfg::check_keys(j, "signal", {"tones", "damping", "rate_scale"});
    SignalBlock b;
    if (j.contains("tones")) {
      const auto& ts = j.at("tones");
      if (!ts.is_array()) throw ConfigError("signal.tones: expected an array");
      for (const auto& t : ts) {
        cfg::check_keys(t, "signal.tones[]", {"omega", "z"});
        if (!t.contains("omega") || !t.contains("z")) throw ConfigError("signal.tones[]: omega and z are required");
        b.tones.push_back(Tone{cfg::number(t.at("omega"), "signal.tones[].omega"), cfg::number(t.at("z"), "signal.tones[].z")});
      }
    }
    if (j.contains("damping")) {
      const auto& d = j.at("damping");
      cfg::check_keys(d, "signal.damping", {"kind", "gamma0", "tau"});
      const auto kind = cfg::string_or(d, "kind", "constant", "signal.damping");
      if (kind == "constant")
        b.damping.kind = DampingKind::constant;
      else if (kind == "exponential")
        b.damping.kind = DampingKind::exponential;
      else
        throw ConfigError("signal.damping.kind must be 'constant' or 'exponential'");
      b.damping.gamma0 = cfg::number_or(d, "gamma0", 0.0, "signal.damping");
      b.damping.tau = cfg::number_or(d, "tau", 1.0, "signal.damping");
    }
    b.rate_scale = cfg::number_or(j, "rate_scale", b.rate_scale, "signal");
    return b;
  }

  json to_json() const {
    json ts = json::array();
    for (const auto& t : tones) ts.push_back({{"omega", t.omega}, {"z", t.z}});
    return {{"tones", ts},
            {"damping",
             {{"kind", damping.kind == DampingKind::constant ? "constant" : "exponential"},
              {"gamma0", damping.gamma0},
              {"tau", damping.tau}}},
            {"rate_scale", rate_scale}};
  }
};

struct GenerateBlock {
  double duration = 16.0;
  double sample_rate = 1024.0;

  static GenerateBlock parse(const json& j) {
    cfg::check_keys(j, "generate", {"duration", "sample_rate"});
    GenerateBlock b;
    b.duration = cfg::number_or(j, "duration", b.duration, "generate");
    b.sample_rate = cfg::number_or(j, "sample_rate", b.sample_rate, "generate");
    detail::require<ValidationError>(b.duration > 0.0 && b.sample_rate > 0.0,
                                     "generate: duration and sample_rate must be positive");
    detail::require<ValidationError>(b.duration * b.sample_rate >= static_cast<double>(kMinSynthSamples) - 0.5,
                                     "generate: duration x sample_rate must give at least 64 samples");
    return b;
  }

  json to_json() const { return {{"duration", duration}, {"sample_rate", sample_rate}}; }
};

struct DetectBlock {
  std::size_t segment_length = 256;
  double overlap = 0.5;
  WindowKind window = WindowKind::hann;
  double threshold_sigma = 5.0;

  static DetectBlock parse(const json& j) {
    cfg::check_keys(j, "detect", {"segment_length", "overlap", "window", "threshold_sigma"});
    DetectBlock b;
    b.segment_length = cfg::count_or(j, "segment_length", b.segment_length, "detect");
    b.overlap = cfg::number_or(j, "overlap", b.overlap, "detect");
    b.window = parse_window(cfg::string_or(j, "window", "hann", "detect"));
    b.threshold_sigma = cfg::number_or(j, "threshold_sigma", b.threshold_sigma, "detect");
    detail::require<ValidationError>(b.segment_length >= 2 && std::has_single_bit(b.segment_length),
                                     "detect.segment_length must be a power of two >= 2");
    detail::require<ValidationError>(b.overlap >= 0.0 && b.overlap <= 0.9, "detect.overlap must lie in [0, 0.9]");
    detail::require<ValidationError>(b.threshold_sigma > 0.0, "detect.threshold_sigma must be positive");
    return b;
  }

  json to_json() const {
    return {{"segment_length", segment_length},
            {"overlap", overlap},
            {"window", to_string(window)},
            {"threshold_sigma", threshold_sigma}};
  }
};

struct PowerBlock {
  double z = qinfo::zeta(0);
  double omega = 1.0;
  std::optional<double> z_dot;
  std::vector<double> times{1.0, 2.0, 4.0};

  static PowerBlock parse(const json& j) {
    cfg::check_keys(j, "power", {"z", "z_dot", "omega", "times", "t_start", "t_stop", "count"});
    PowerBlock b;
    b.z = cfg::number_or(j, "z", b.z, "power");
    b.omega = cfg::number_or(j, "omega", b.omega, "power");
    if (j.contains("z_dot")) b.z_dot = cfg::number(j.at("z_dot"), "power.z_dot");
    const bool window = j.contains("t_start") || j.contains("t_stop") || j.contains("count");
    if (j.contains("times") && window) throw ConfigError("power: give either times or t_start/t_stop/count");
    if (j.contains("times")) {
      const auto& ts = j.at("times");
      if (!ts.is_array() || ts.empty()) throw ConfigError("power.times: expected a non-empty array");
      b.times.clear();
      for (const auto& t : ts) b.times.push_back(cfg::number(t, "power.times"));
    } else if (window) {
      if (!j.contains("t_start")) throw ConfigError("power.t_start is required with t_stop/count");
      const double t0 = cfg::number(j.at("t_start"), "power.t_start");
      const double t1 = cfg::number_or(j, "t_stop", t0, "power");
      const std::size_t n = cfg::count_or(j, "count", 1, "power");
      detail::require<ValidationError>(n >= 1 && t1 >= t0, "power: need count >= 1 and t_stop >= t_start");
      b.times.clear();
      for (std::size_t i = 0; i < n; ++i)
        b.times.push_back(n == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    for (double t : b.times)
      detail::require<DomainError>(t > 0.0, "power: measurement times must be > 0 (window must start after t = 0)");
    detail::require<DomainError>(b.omega > 0.0, "power.omega must be positive");
    return b;
  }

  json to_json() const {
    json out = {{"z", z}, {"omega", omega}, {"times", times}};
    if (z_dot) out["z_dot"] = *z_dot;
    return out;
  }
};

/// Fully resolved configuration. Blocks a command needs but the file omits
/// take their defaults.
struct RunConfig {
  UnitSystem units = UnitSystem::natural;
  std::uint64_t seed = 1;
  PhysicalConstants constants = PhysicalConstants::natural();
  std::optional<WordBlock> word;
  HamiltonianBlock hamiltonian;
  std::optional<EntropyBlock> entropy;
  std::optional<TrajectoryBlock> trajectory;
  NoiseBlock noise;
  SignalBlock signal;
  GenerateBlock generate;
  DetectBlock detect;
  PowerBlock power;

  /// Overrides come from command-line flags and win over the file.
  static RunConfig parse(const json& j, std::optional<UnitSystem> units_override = std::nullopt,
                         std::optional<std::uint64_t> seed_override = std::nullopt) {
    cfg::check_keys(j, "config", {"units", "seed", "constants", "word", "hamiltonian", "entropy", "trajectory",
                                  "noise", "signal", "generate", "detect", "power"});
    RunConfig c;
    if (j.contains("units")) c.units = parse_units(cfg::string_or(j, "units", "natural", "config"));
    if (units_override) c.units = *units_override;
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
        throw ConfigError("seed: expected a non-negative integer");
      c.seed = s.get<std::uint64_t>();
    }
    if (seed_override) c.seed = *seed_override;

    c.constants = PhysicalConstants::for_units(c.units);
    if (j.contains("constants")) {
      const auto& k = j.at("constants");
      cfg::check_keys(k, "constants", {"h", "kB", "c", "m_e"});
      c.constants = PhysicalConstants::from_planck(
          cfg::number_or(k, "h", c.constants.h, "constants"), cfg::number_or(k, "kB", c.constants.kB, "constants"),
          cfg::number_or(k, "c", c.constants.c, "constants"), cfg::number_or(k, "m_e", c.constants.m_e, "constants"));
    }

    if (j.contains("word")) c.word = WordBlock::parse(j.at("word"));
    c.hamiltonian = HamiltonianBlock::parse(j.value("hamiltonian", json::object()));
    if (j.contains("entropy")) c.entropy = EntropyBlock::parse(j.at("entropy"));
    if (j.contains("trajectory")) c.trajectory = TrajectoryBlock::parse(j.at("trajectory"));
    c.noise = NoiseBlock::parse(j.value("noise", json::object()));
    c.signal = SignalBlock::parse(j.value("signal", json::object()));
    c.generate = GenerateBlock::parse(j.value("generate", json::object()));
    c.detect = DetectBlock::parse(j.value("detect", json::object()));
    c.power = PowerBlock::parse(j.value("power", json::object()));
    c.signal_model().validate();
    return c;
  }

  static UnitSystem parse_units(const std::string& s) {
    if (s == "natural") return UnitSystem::natural;
    if (s == "si" || s == "SI") return UnitSystem::si;
    throw ConfigError("units must be 'natural' or 'si', got '" + s + "'");
  }

  NoiseModel noise_model() const { return noise.model(constants); }

  /// Tone phases come from a stream derived from the run seed.
  SignalModel signal_model() const {
    SignalModel m;
    m.tones = signal.tones;
    m.M = noise.M;
    m.damping = signal.damping;
    m.noise = noise_model();
    m.rate_scale = signal.rate_scale;
    m.phase_seed = RandomSource(seed).derive(1).next_u64();
    return m;
  }

  json to_json() const {
    json out = {{"units", qinfo::to_string(units)},
                {"seed", seed},
                {"constants", {{"h", constants.h}, {"kB", constants.kB}, {"c", constants.c}, {"m_e", constants.m_e}}}};
    if (word) out["word"] = word->to_json();
    out["hamiltonian"] = hamiltonian.to_json();
    if (entropy) out["entropy"] = entropy->to_json();
    if (trajectory) out["trajectory"] = trajectory->to_json();
    out["noise"] = noise.to_json();
    out["signal"] = signal.to_json();
    out["generate"] = generate.to_json();
    out["detect"] = detect.to_json();
    out["power"] = power.to_json();
    return out;
  }
};

}  // namespace qinfo::cli

#endif  // QINFO_CLI_CONFIG_HPP
