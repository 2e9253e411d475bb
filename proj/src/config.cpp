#include "cyldiff/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cyldiff/errors.hpp"

namespace cyldiff {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::vector<double> get_coeffs(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

MapSystem RunConfig::map_system() const { return MapSystem(potentials, epsilon, a, smoothness); }

StripParams RunConfig::strip_params() const {
  try {
    return StripParams::make(strips.l, strips.gamma, strips.tau, beta, strips.kappa, strips.delta,
                             std::max(potentials.degree(), 1), a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("strips: ") + e.what());
  }
}

SystemPotentials parse_potentials(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "cos_sin") return SystemPotentials::cos_sin();
    fail(where, "unknown preset '" + j.get<std::string>() + "' (known: cos_sin)");
  }
  if (!j.is_array()) fail(where, "expected an array of harmonic entries or a preset name");
  // (which, sign) -> k -> coefficient
  std::map<std::pair<char, int>, std::map<int, ComplexPoly>> acc;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = where + "[" + std::to_string(i) + "]";
    const json& e = j[i];
    only_keys(e, p, {"which", "sign", "k", "re", "im"});
    if (!e.contains("which")) fail(p + ".which", "missing");
    if (!e.contains("sign")) fail(p + ".sign", "missing");
    if (!e.contains("k")) fail(p + ".k", "missing");
    if (!e["which"].is_string()) fail(p + ".which", "expected \"u\", \"v\" or \"w\"");
    const std::string which = e["which"].get<std::string>();
    if (which != "u" && which != "v" && which != "w") fail(p + ".which", "expected \"u\", \"v\" or \"w\"");
    const long long sign = get_integer(e["sign"], p + ".sign");
    if (sign != 1 && sign != -1) fail(p + ".sign", "expected 1 or -1");
    const long long k = get_integer(e["k"], p + ".k");
    if (k < -64 || k > 64) fail(p + ".k", "harmonic out of range [-64, 64]");
    ComplexPoly c;
    if (e.contains("re")) c.re = Polynomial(get_coeffs(e["re"], p + ".re"));
    if (e.contains("im")) c.im = Polynomial(get_coeffs(e["im"], p + ".im"));
    auto& slot = acc[{which[0], static_cast<int>(sign)}];
    if (slot.count(static_cast<int>(k))) fail(p + ".k", "harmonic " + std::to_string(k) + " given twice");
    slot[static_cast<int>(k)] = c;
  }
  SystemPotentials sys;
  for (const auto& [key, coeffs] : acc) {
    TrigPotential pot;
    try {
      pot = TrigPotential::from_harmonics(coeffs);
    } catch (const std::invalid_argument& e) {
      fail(where, std::string(1, key.first) + (key.second > 0 ? "_{+1}" : "_{-1}") + ": " + e.what());
    }
    TrigPotential* dst = nullptr;
    switch (key.first) {
      case 'u': dst = key.second > 0 ? &sys.u_plus : &sys.u_minus; break;
      case 'v': dst = key.second > 0 ? &sys.v_plus : &sys.v_minus; break;
      default: dst = key.second > 0 ? &sys.w_plus : &sys.w_minus; break;
    }
    *dst = pot;
  }
  return sys;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error: " + e.what());
  }
  RunConfig cfg;
  only_keys(j, source, {"potentials", "epsilon", "s", "samples", "seed", "beta", "threads", "a", "smoothness",
                        "initial", "strips", "range", "grid", "out"});
  if (j.contains("potentials")) cfg.potentials = parse_potentials(j["potentials"], "potentials");
  if (j.contains("epsilon")) cfg.epsilon = get_number(j["epsilon"], "epsilon");
  if (j.contains("s")) cfg.s = get_number(j["s"], "s");
  if (j.contains("samples")) {
    const long long m = get_integer(j["samples"], "samples");
    if (m < 1) fail("samples", "must be at least 1");
    cfg.samples = static_cast<std::size_t>(m);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("beta")) cfg.beta = get_number(j["beta"], "beta");
  if (j.contains("threads")) {
    const long long t = get_integer(j["threads"], "threads");
    if (t < 0) fail("threads", "must be non-negative");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (j.contains("a")) cfg.a = get_number(j["a"], "a");
  if (j.contains("smoothness")) cfg.smoothness = static_cast<int>(get_integer(j["smoothness"], "smoothness"));
  if (j.contains("initial")) {
    const json& ic = j["initial"];
    only_keys(ic, "initial", {"mode", "theta", "r", "r_lo", "r_hi"});
    if (ic.contains("mode")) {
      if (!ic["mode"].is_string()) fail("initial.mode", "expected a string");
      const std::string m = ic["mode"].get<std::string>();
      if (m == "fixed")
        cfg.initial.mode = InitialMode::Fixed;
      else if (m == "uniform_theta")
        cfg.initial.mode = InitialMode::UniformTheta;
      else if (m == "uniform_torus")
        cfg.initial.mode = InitialMode::UniformTorus;
      else
        fail("initial.mode", "expected fixed, uniform_theta or uniform_torus");
    }
    if (ic.contains("theta")) cfg.initial.theta = get_number(ic["theta"], "initial.theta");
    if (ic.contains("r")) cfg.initial.r = get_number(ic["r"], "initial.r");
    if (ic.contains("r_lo")) cfg.initial.r_lo = get_number(ic["r_lo"], "initial.r_lo");
    if (ic.contains("r_hi")) cfg.initial.r_hi = get_number(ic["r_hi"], "initial.r_hi");
  }
  if (j.contains("strips")) {
    const json& st = j["strips"];
    only_keys(st, "strips", {"l", "gamma", "tau", "kappa", "delta"});
    if (st.contains("l")) cfg.strips.l = static_cast<int>(get_integer(st["l"], "strips.l"));
    if (st.contains("gamma")) cfg.strips.gamma = get_number(st["gamma"], "strips.gamma");
    if (st.contains("tau")) cfg.strips.tau = get_number(st["tau"], "strips.tau");
    if (st.contains("kappa")) cfg.strips.kappa = get_number(st["kappa"], "strips.kappa");
    if (st.contains("delta")) cfg.strips.delta = get_number(st["delta"], "strips.delta");
  }
  if (j.contains("range")) {
    const json& r = j["range"];
    if (!r.is_array() || r.size() != 2) fail("range", "expected [lo, hi]");
    cfg.range = {get_number(r[0], "range[0]"), get_number(r[1], "range[1]")};
    if (!(cfg.range.hi > cfg.range.lo)) fail("range", "need lo < hi");
  }
  if (j.contains("grid")) {
    const long long g = get_integer(j["grid"], "grid");
    if (g < 2) fail("grid", "must be at least 2");
    cfg.grid = static_cast<int>(g);
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) fail("out", "expected a string");
    cfg.out = j["out"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace cyldiff
