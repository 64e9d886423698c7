#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "biphoton/errors.hpp"
#include "biphoton/interferometers.hpp"
#include "biphoton/io.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/transforms.hpp"

namespace biphoton::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCenteredModels = {"sign_alpha", "power_alpha", "split_phase"};
const std::set<std::string> kModels = {"gaussian", "sign_alpha", "power_alpha", "split_phase", "odd_gaussian_pair"};
const std::set<std::string> kSpectrumKeys = {"f_plus", "f_minus", "gamma", "beta", "spectrum"};

std::string fmt(double v) { return io::format9(v); }

std::string tag_a(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", a);
  if (std::abs(std::stod(buf) - a) > 1e-12) std::snprintf(buf, sizeof buf, "%.6g", a);
  return buf;
}

// ---- json helpers -------------------------------------------------------

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + " must be finite");
  return v;
}

std::size_t get_count(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  return j.at(key).get<std::size_t>();
}

Range parse_range(const json& j, const std::string& where) {
  check_keys(j, {"min", "max", "points"}, where);
  Range r{get_number(j, "min", where), get_number(j, "max", where), get_count(j, "points", where)};
  if (r.points < 2) throw ConfigError(where + " sweep needs at least 2 points");
  if (!(r.max > r.min)) throw ConfigError(where + ".max must exceed " + where + ".min");
  return r;
}

ModelSpec parse_model(const json& j, const std::string& where) {
  check_keys(j, {"model", "center", "sigma", "a", "chirp"}, where);
  if (!j.contains("model") || !j.at("model").is_string()) throw ConfigError(where + ".model must be a string");
  ModelSpec m;
  m.model = j.at("model").get<std::string>();
  if (!kModels.count(m.model))
    throw ConfigError(where + ": unknown model '" + m.model + "' (see list-models)");
  if (j.contains("center")) m.center = get_number(j, "center", where);
  if (j.contains("sigma")) m.sigma = get_number(j, "sigma", where);
  if (j.contains("a")) m.a = get_number(j, "a", where);
  if (j.contains("chirp")) m.chirp = get_number(j, "chirp", where);
  if (!(m.sigma > 0.0)) throw ConfigError(where + ".sigma must be positive");
  if (m.a && !(*m.a >= 0.0 && *m.a <= 1.0)) throw ConfigError(where + ".a must lie in [0, 1]");
  if (kCenteredModels.count(m.model) && m.center != 0.0)
    throw ConfigError(where + ": model '" + m.model + "' is centered at 0");
  return m;
}

bool uses_a(const ModelSpec& m) { return kCenteredModels.count(m.model) > 0; }

const std::map<std::string, std::set<std::string>> kStates = {
    {"mz", {"symmetric", "antisymmetric", "anyonic", "general", "single_count"}},
    {"gmz", {"symmetric", "antisymmetric", "anyonic", "separable", "general"}},
};

std::vector<std::string> needed_spectra(const Scenario& s, const std::string& state) {
  const std::string& c = s.command;
  if (c == "hom") return s.oracle ? std::vector<std::string>{"f_plus", "f_minus"} : std::vector<std::string>{"f_minus"};
  if (c == "nlmz" || c == "fermion") return {"f_plus", "f_minus"};
  if (c == "wigner" || c == "stft") return {"spectrum"};
  if (c == "reconstruct")
    return s.oracle ? std::vector<std::string>{"f_plus", "f_minus"} : std::vector<std::string>{"f_plus"};
  if (state == "single_count") return {"spectrum"};
  if (state == "separable") return {"gamma", "beta"};
  if (s.oracle || state == "anyonic" || state == "general") return {"f_plus", "f_minus"};
  if (state == "symmetric") return {"f_plus"};
  if (state == "antisymmetric") return {"f_minus"};
  return {};
}

}  // namespace

std::string ModelSpec::describe() const {
  std::string d = model + "(center=" + fmt(center) + ",sigma=" + fmt(sigma);
  if (a) d += ",a=" + fmt(*a);
  if (chirp != 0.0) d += ",chirp=" + fmt(chirp);
  return d + ")";
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"hom", "mz", "nlmz", "gmz", "wigner", "stft", "reconstruct", "fermion"};
  return c;
}

Scenario parse_scenario(const json& config, const std::string& command) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw ConfigError("unknown command '" + command + "'");
  check_keys(config,
             {"name", "grid", "tau", "mu", "wigner", "a", "f_plus", "f_minus", "gamma", "beta", "spectrum", "states",
              "port", "input_trace", "oracle", "quarter_phase"},
             "config");
  Scenario s;
  s.command = command;
  if (config.contains("name")) {
    if (!config["name"].is_string() || config["name"].get<std::string>().empty())
      throw ConfigError("config.name must be a non-empty string");
    s.name = config["name"].get<std::string>();
    if (s.name.find_first_of("/\\") != std::string::npos) throw ConfigError("config.name must not contain slashes");
  }
  if (config.contains("grid")) {
    const auto& g = config["grid"];
    check_keys(g, {"points", "span"}, "grid");
    if (g.contains("points")) s.grid_points = get_count(g, "points", "grid");
    if (g.contains("span")) s.grid_span = get_number(g, "span", "grid");
    if (s.grid_points < 3) throw ConfigError("grid.points must be at least 3");
    if (!(s.grid_span > 0.0)) throw ConfigError("grid.span must be positive");
  }
  if (config.contains("tau")) s.tau = parse_range(config["tau"], "tau");
  if (config.contains("mu")) s.mu = parse_range(config["mu"], "mu");
  if (config.contains("wigner")) {
    const auto& w = config["wigner"];
    check_keys(w, {"tau", "mu"}, "wigner");
    if (w.contains("tau")) s.wigner_tau = parse_range(w["tau"], "wigner.tau");
    if (w.contains("mu")) s.wigner_mu = parse_range(w["mu"], "wigner.mu");
  }
  if (config.contains("a")) {
    const auto& a = config["a"];
    std::vector<double> values;
    if (a.is_array()) {
      for (const auto& v : a) {
        if (!v.is_number()) throw ConfigError("config.a entries must be numbers");
        values.push_back(v.get<double>());
      }
    } else if (a.is_object()) {
      check_keys(a, {"min", "max", "points"}, "a");
      const double lo = get_number(a, "min", "a"), hi = get_number(a, "max", "a");
      const std::size_t n = get_count(a, "points", "a");
      if (n == 1) values.push_back(lo);
      for (std::size_t k = 0; n > 1 && k < n; ++k)
        values.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    } else if (a.is_number()) {
      values.push_back(a.get<double>());
    } else {
      throw ConfigError("config.a must be a number, a list or {min,max,points}");
    }
    if (values.empty()) throw ConfigError("config.a sweep is empty");
    s.a_values.clear();
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("config.a values must lie in [0, 1]");
      s.a_values.emplace_back(v);
    }
  }
  for (const auto& key : kSpectrumKeys)
    if (config.contains(key)) s.spectra[key] = parse_model(config[key], key);
  if (command == "wigner" && !s.spectra.count("spectrum") && s.spectra.count("f_minus"))
    s.spectra["spectrum"] = s.spectra["f_minus"];
  if (command == "stft" && !s.spectra.count("spectrum") && s.spectra.count("f_plus"))
    s.spectra["spectrum"] = s.spectra["f_plus"];

  if (config.contains("states")) {
    const auto& st = config["states"];
    if (st.is_string()) {
      s.states.push_back(st.get<std::string>());
    } else if (st.is_array()) {
      for (const auto& v : st) {
        if (!v.is_string()) throw ConfigError("config.states entries must be strings");
        s.states.push_back(v.get<std::string>());
      }
    } else {
      throw ConfigError("config.states must be a string or a list of strings");
    }
    if (s.states.empty()) throw ConfigError("config.states is empty");
  }
  if (config.contains("port")) {
    const auto p = config["port"].is_string() ? config["port"].get<std::string>() : "";
    if (p == "a")
      s.port = Port::A;
    else if (p == "b")
      s.port = Port::B;
    else
      throw ConfigError("config.port must be \"a\" or \"b\"");
  }
  if (config.contains("input_trace")) {
    if (!config["input_trace"].is_string()) throw ConfigError("config.input_trace must be a path string");
    s.input_trace = config["input_trace"].get<std::string>();
  }
  for (const auto* key : {"oracle", "quarter_phase"}) {
    if (!config.contains(key)) continue;
    if (!config[key].is_boolean()) throw ConfigError(std::string("config.") + key + " must be a boolean");
  }
  s.oracle = config.value("oracle", false);
  s.quarter_phase = config.value("quarter_phase", false);

  // command-specific requirements
  if (kStates.count(command)) {
    if (s.states.empty()) {
      if (command == "gmz" && s.spectra.count("gamma") && s.spectra.count("beta"))
        s.states = {"separable"};
      else
        s.states = {"general"};
    }
    for (const auto& st : s.states)
      if (!kStates.at(command).count(st)) throw ConfigError("state '" + st + "' is not valid for " + command);
  } else if (!s.states.empty()) {
    throw ConfigError("config.states only applies to mz and gmz");
  }
  if ((command == "gmz" || command == "wigner" || command == "stft" || command == "reconstruct") && !s.mu)
    throw ConfigError(command + " needs a mu sweep");
  if (s.input_trace && command != "reconstruct") throw ConfigError("config.input_trace only applies to reconstruct");
  return s;
}

Scenario load_scenario(const fs::path& path, const std::string& command) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(is, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  auto s = parse_scenario(j, command);
  if (s.input_trace && s.input_trace->is_relative()) s.input_trace = path.parent_path() / *s.input_trace;
  return s;
}

SpectralAmplitude build_model(const ModelSpec& spec, const FrequencyGrid& grid, std::optional<double> a_override) {
  std::optional<double> a = a_override ? a_override : spec.a;
  SpectralAmplitude f = [&] {
    if (spec.model == "gaussian") return build_gaussian(spec.center, spec.sigma, grid);
    if (spec.model == "odd_gaussian_pair") return build_odd_gaussian_pair(spec.center, spec.sigma, grid);
    if (!a) throw ConfigError("model '" + spec.model + "' needs an anyon parameter a");
    const AnyonParameter ap(*a);
    if (spec.model == "sign_alpha") return build_sign_alpha_gaussian(ap, spec.sigma, grid);
    if (spec.model == "power_alpha") return build_power_alpha_gaussian(ap, spec.sigma, grid);
    if (spec.model == "split_phase") return build_split_phase_gaussian(ap, spec.sigma, grid);
    throw ConfigError("unknown model '" + spec.model + "'");
  }();
  return spec.chirp == 0.0 ? f : f.with_linear_phase(spec.chirp);
}

std::string list_models() {
  return "gaussian           center, sigma      (pi sigma^2)^{-1/4} exp(-(w-center)^2/2sigma^2)\n"
         "sign_alpha         sigma, a           sgn(w)^a exp(-w^2/2sigma^2), phase e^{i pi a} for w<0\n"
         "power_alpha        sigma, a           |w/sigma|^a exp(-w^2/2sigma^2), phase e^{i pi a} for w<0\n"
         "split_phase        sigma, a           e^{i pi a sgn(w)/2} exp(-w^2/2sigma^2)\n"
         "odd_gaussian_pair  center, sigma      g(w-center) - g(w+center)\n"
         "separable          gamma, beta        JSA gamma(ws) beta(wi) (gmz state \"separable\")\n"
         "every 1D model also takes chirp: extra phase e^{i chirp w}\n";
}

// ---- runner -------------------------------------------------------------

namespace {

class Runner {
 public:
  explicit Runner(const Scenario& s) : s_(s) {}

  RunReport go() {
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(s_.out, ec);
    if (ec || !fs::is_directory(s_.out)) throw IoError("cannot create output directory " + s_.out.string());

    for (const auto& a : s_.a_values) {
      a_ = a;
      const auto& c = s_.command;
      if (c == "hom") run_hom();
      else if (c == "mz") run_states();
      else if (c == "gmz") run_states();
      else if (c == "nlmz") run_jsa_trace(Pipeline::NLMZ);
      else if (c == "fermion") run_jsa_trace(Pipeline::FERMION_MZ);
      else if (c == "wigner") run_wigner();
      else if (c == "stft") run_stft();
      else if (c == "reconstruct") run_reconstruct();
    }
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_summary();
    return report_;
  }

 private:
  const Scenario& s_;
  std::optional<double> a_;
  RunReport report_;

  // ---- grids and spectra ------------------------------------------------

  const ModelSpec& spec(const std::string& key) const {
    auto it = s_.spectra.find(key);
    if (it == s_.spectra.end()) throw ConfigError(s_.command + " needs a '" + key + "' spectrum");
    return it->second;
  }

  std::optional<double> model_a(const ModelSpec& m) const { return uses_a(m) ? a_ : std::nullopt; }

  double jsa_center() const {
    if (s_.spectra.count("f_plus")) return spec("f_plus").center;
    return 0.5 * (spec("gamma").center + spec("beta").center);
  }
  FrequencyGrid jsa_grid() const { return {jsa_center(), s_.grid_span, s_.grid_points}; }
  FrequencyGrid plus_grid() const { return collective_grid(jsa_center(), s_.grid_span, s_.grid_points); }
  FrequencyGrid minus_grid() const { return collective_grid(0.0, s_.grid_span, s_.grid_points); }
  FrequencyGrid own_grid(const ModelSpec& m) const { return {m.center, s_.grid_span, s_.grid_points}; }

  SpectralAmplitude f_plus() const { return build_model(spec("f_plus"), plus_grid(), model_a(spec("f_plus"))); }
  SpectralAmplitude f_minus() const { return build_model(spec("f_minus"), minus_grid(), model_a(spec("f_minus"))); }
  SpectralAmplitude single(const std::string& key) const {
    const auto& m = spec(key);
    return build_model(m, own_grid(m), model_a(m));
  }

  JointSpectralAmplitude jsa(const std::string& state = "") const {
    const auto g = jsa_grid();
    if (state == "separable") {
      return build_jsa_separable(build_model(spec("gamma"), g, model_a(spec("gamma"))),
                                 build_model(spec("beta"), g, model_a(spec("beta"))), g, g);
    }
    return build_jsa_factored(f_plus(), f_minus(), g, g);
  }

  double current_a(const std::string& key) const {
    const auto& m = spec(key);
    if (a_) return *a_;
    if (m.a) return *m.a;
    throw ConfigError("state needs an anyon parameter a (config.a or " + key + ".a)");
  }

  // ---- output -----------------------------------------------------------

  std::string stem(const std::string& what) const {
    std::string st = s_.name + "_" + what;
    if (a_) st += "_a" + tag_a(*a_);
    return st;
  }

  std::map<std::string, std::string> base_meta(const std::string& pipeline) const {
    std::map<std::string, std::string> m;
    m["command"] = s_.command;
    m["pipeline"] = pipeline;
    m["scenario"] = s_.name;
    m["oracle"] = s_.oracle ? "true" : "false";
    m["quarter_phase"] = s_.quarter_phase ? "true" : "false";
    m["grid"] = "points=" + std::to_string(s_.grid_points) + ",span=" + fmt(s_.grid_span);
    m["units"] = "dimensionless: frequencies in units of the model sigma scale, tau in inverse units";
    if (a_) m["a"] = fmt(*a_);
    for (const auto& [k, v] : s_.spectra) m["spectrum." + k] = v.describe();
    return m;
  }

  template <typename T>
  void emit(const std::string& file_stem, const T& data, std::map<std::string, std::string> meta) {
    const fs::path csv = s_.out / (file_stem + ".csv");
    const fs::path side = s_.out / (file_stem + ".meta");
    io::write_csv_file(csv, data);
    meta["file"] = csv.filename().string();
    io::write_metadata_file(side, meta);
    report_.files.push_back(csv);
    report_.files.push_back(side);
  }

  void emit_trace(const std::string& file_stem, CoincidenceTrace& t, std::map<std::string, std::string> meta) {
    meta["format"] = t.mu_grid ? "tau,mu,probability" : "tau,probability";
    meta["tau_grid"] = range_text(s_.tau);
    if (t.mu_grid) meta["mu_grid"] = range_text(*s_.mu);
    meta["max_clip"] = fmt(t.max_clip);
    meta["clipped_mass"] = fmt(t.clipped_mass);
    report_.max_clip = std::max(report_.max_clip, t.max_clip);
    report_.clipped_mass = std::max(report_.clipped_mass, t.clipped_mass);
    if (t.max_clip > 1e-6) report_.notes.push_back(file_stem + ": probabilities clipped by " + fmt(t.max_clip));
    if (t.clipped_mass > 1e-4)
      report_.notes.push_back(file_stem + ": shifted lookups lost " + fmt(t.clipped_mass) + " of the norm");
    t.metadata = meta;
    emit(file_stem, t, std::move(meta));
  }

  static std::string range_text(const Range& r) {
    return "min=" + fmt(r.min) + ",max=" + fmt(r.max) + ",points=" + std::to_string(r.points);
  }

  TimeGrid taus() const { return TimeGrid::from_range(s_.tau.min, s_.tau.max, s_.tau.points); }
  FrequencyGrid mus() const { return FrequencyGrid::from_range(s_.mu->min, s_.mu->max, s_.mu->points); }

  CoincidenceTrace trace(Pipeline p, const std::function<double(double, double)>& fn) const {
    if (s_.mu) return sweep(p, taus(), mus(), fn, s_.threads);
    return sweep(p, taus(), [&](double tau) { return fn(tau, 0.0); }, s_.threads);
  }

  // ---- commands ---------------------------------------------------------

  void run_hom() {
    auto meta = base_meta("HOM");
    CoincidenceTrace t = [&] {
      if (s_.oracle) {
        const auto j = jsa();
        meta["method"] = "oracle";
        return trace(Pipeline::HOM, [&](double tau, double mu) { return oracle_coincidence(j, Pipeline::HOM, tau, mu); });
      }
      const auto fm = single("f_minus");
      meta["method"] = "wigner";
      return trace(Pipeline::HOM, [&](double tau, double mu) { return hom(fm, tau, mu); });
    }();
    emit_trace(stem("hom"), t, meta);

    const auto fm = single("f_minus");
    const Range wt = s_.wigner_tau.value_or(Range{-4.0, 4.0, 161});
    const Range wm = s_.wigner_mu.value_or(Range{-4.0, 4.0, 161});
    const auto map = wigner_map(fm, TimeGrid::from_range(wt.min, wt.max, wt.points),
                                FrequencyGrid::from_range(wm.min, wm.max, wm.points), s_.threads);
    auto wmeta = base_meta("WIGNER");
    wmeta["format"] = "tau,mu,value";
    wmeta["value"] = "pi W(tau, mu) of f_minus";
    wmeta["tau_grid"] = range_text(wt);
    wmeta["mu_grid"] = range_text(wm);
    emit(stem("wigner"), map, wmeta);
  }

  void run_states() {
    const bool gmz = s_.command == "gmz";
    const Pipeline p = gmz ? Pipeline::GMZ : Pipeline::MZ;
    for (const auto& state : s_.states) {
      for (const auto& key : needed_spectra(s_, state)) spec(key);
      auto meta = base_meta(state == "single_count" ? "SINGLE_COUNT" : to_string(p));
      meta["state"] = state;
      CoincidenceTrace t = gmz ? gmz_trace(state, meta) : mz_trace(state, meta);
      emit_trace(stem(s_.command + "_" + state), t, meta);
    }
  }

  CoincidenceTrace mz_trace(const std::string& state, std::map<std::string, std::string>& meta) {
    if (s_.mu) report_.notes.push_back("mz ignores the mu sweep");
    auto tau_only = [&](Pipeline p, const std::function<double(double)>& fn) { return sweep(p, taus(), fn, s_.threads); };
    if (state == "single_count") {
      if (s_.oracle) report_.notes.push_back("single_count has no oracle path; closed form used");
      const auto sp = single("spectrum");
      const Port port = s_.port;
      meta["port"] = port == Port::A ? "a" : "b";
      meta["method"] = "cosine_fourier";
      return tau_only(Pipeline::SINGLE_COUNT, [&](double tau) { return single_count(sp, tau, port); });
    }
    if (s_.oracle || state == "general") {
      const auto j = jsa();
      meta["method"] = s_.oracle ? "oracle" : "mz_general";
      if (s_.oracle) return tau_only(Pipeline::MZ, [&](double tau) { return oracle_coincidence(j, Pipeline::MZ, tau); });
      return tau_only(Pipeline::MZ, [&](double tau) { return mz_general(j, tau); });
    }
    if (state == "symmetric") {
      const auto fp = f_plus();
      meta["method"] = "mz_symmetric";
      return tau_only(Pipeline::MZ, [&](double tau) { return mz_symmetric(fp, tau); });
    }
    if (state == "antisymmetric") {
      const auto fm = f_minus();
      meta["method"] = "mz_antisymmetric";
      return tau_only(Pipeline::MZ, [&](double tau) { return mz_antisymmetric(fm, tau); });
    }
    const auto fp = f_plus();
    const auto env = f_minus().modulus();
    const AnyonParameter a(current_a("f_minus"));
    meta["method"] = "mz_anyonic";
    return tau_only(Pipeline::MZ, [&](double tau) { return mz_anyonic(fp, env, a, tau); });
  }

  CoincidenceTrace gmz_trace(const std::string& state, std::map<std::string, std::string>& meta) {
    const bool q = s_.quarter_phase;
    const auto j = jsa(state);
    const double mu_max = std::max(std::abs(s_.mu->min), std::abs(s_.mu->max));
    if (!(mu_max <= 0.25 * s_.grid_span)) throw PreconditionError("mu sweep exceeds a quarter of the grid span");
    const double lost = gmz_shifted_mass_deficit(j, mu_max);
    auto finish = [&](CoincidenceTrace t) {
      t.clipped_mass = lost;
      return t;
    };
    auto general = [&](const char* method) {
      meta["method"] = method;
      return finish(trace(Pipeline::GMZ, [&](double tau, double mu) { return gmz_general(j, tau, mu, q); }));
    };
    if (s_.oracle) {
      meta["method"] = "oracle";
      return finish(
          trace(Pipeline::GMZ, [&](double tau, double mu) { return oracle_coincidence(j, Pipeline::GMZ, tau, mu, q); }));
    }
    if (state == "general") return general("gmz_general");
    if (state == "symmetric") {
      const auto fp = f_plus();
      meta["method"] = "gmz_symmetric";
      return finish(trace(Pipeline::GMZ, [&](double tau, double mu) { return gmz_symmetric(fp, tau, mu, q); }));
    }
    if (state == "antisymmetric") {
      const auto fm = f_minus();
      meta["method"] = "gmz_antisymmetric";
      return finish(trace(Pipeline::GMZ, [&](double tau, double mu) { return gmz_antisymmetric(fm, tau, mu); }));
    }
    if (state == "separable") {
      const auto g = jsa_grid();
      const auto ga = build_model(spec("gamma"), g, model_a(spec("gamma"))).normalized();
      const auto be = build_model(spec("beta"), g, model_a(spec("beta"))).normalized();
      meta["method"] = "gmz_separable";
      return finish(trace(Pipeline::GMZ, [&](double tau, double mu) { return gmz_separable(ga, be, tau, mu, q); }));
    }
    if (q) return general("gmz_general (quarter phase)");
    const auto fp = f_plus();
    const auto fm = f_minus();
    meta["method"] = "gmz_anyonic";
    return finish(trace(Pipeline::GMZ, [&](double tau, double mu) { return gmz_anyonic(fp, fm, tau, mu); }));
  }

  void run_jsa_trace(Pipeline p) {
    const auto j = jsa();
    auto meta = base_meta(to_string(p));
    if (s_.mu) report_.notes.push_back(s_.command + " ignores the mu sweep");
    CoincidenceTrace t = [&] {
      if (s_.oracle) {
        meta["method"] = "oracle";
        return sweep(p, taus(), [&](double tau) { return oracle_coincidence(j, p, tau); }, s_.threads);
      }
      if (p == Pipeline::NLMZ) {
        meta["method"] = "nonlinear_mz";
        return sweep(p, taus(), [&](double tau) { return nonlinear_mz(j, tau); }, s_.threads);
      }
      meta["method"] = "fermion_mz";
      return sweep(p, taus(), [&](double tau) { return fermion_mz(j, tau); }, s_.threads);
    }();
    emit_trace(stem(s_.command), t, meta);
  }

  void run_wigner() {
    const auto f = single("spectrum");
    const auto map = wigner_map(f, taus(), mus(), s_.threads);
    auto meta = base_meta("WIGNER");
    meta["format"] = "tau,mu,value";
    meta["value"] = "pi W(tau, mu)";
    meta["tau_grid"] = range_text(s_.tau);
    meta["mu_grid"] = range_text(*s_.mu);
    emit(stem("wigner"), map, meta);
  }

  void run_stft() {
    const auto f = single("spectrum");
    const auto map = stft_map(f, taus(), mus(), s_.threads);
    auto meta = base_meta("STFT");
    meta["format"] = "tau,mu,re,im";
    meta["value"] = "F(mu, t) = int f(w) f*(w+mu) e^{i w t} dw with t = tau column; GMZ probes t = 2 tau";
    meta["tau_grid"] = range_text(s_.tau);
    meta["mu_grid"] = range_text(*s_.mu);
    emit(stem("stft"), map, meta);
  }

  void run_reconstruct() {
    const auto fp = f_plus();
    const auto omegas = mus();
    const auto ts = taus();

    // pump intensity from a symmetric MZ trace
    std::vector<double> trace_values;
    TimeGrid trace_taus = ts;
    auto meta = base_meta("MZ");
    if (s_.input_trace) {
      const auto table = io::read_trace_csv(*s_.input_trace);
      if (!table.mu.empty()) throw ConfigError("input_trace must be a 1D tau,probability trace");
      if (table.tau.size() < 2) throw ConfigError("input_trace needs at least 2 rows");
      trace_taus = TimeGrid::from_range(table.tau.front(), table.tau.back(), table.tau.size());
      for (std::size_t k = 0; k < table.tau.size(); ++k)
        if (std::abs(table.tau[k] - trace_taus[k]) > 1e-6 * trace_taus.step())
          throw ConfigError("input_trace tau column is not uniform");
      trace_values = table.probability;
      meta["source"] = s_.input_trace->string();
    } else {
      const auto j = s_.oracle ? std::optional(jsa()) : std::nullopt;
      const auto t = sweep(Pipeline::MZ, ts, [&](double tau) {
        return j ? oracle_coincidence(*j, Pipeline::MZ, tau) : mz_symmetric(fp, tau);
      }, s_.threads);
      trace_values.assign(t.values.data(), t.values.data() + t.values.size());
      auto tcopy = t;
      auto tmeta = meta;
      tmeta["method"] = s_.oracle ? "oracle" : "mz_symmetric";
      emit_trace(stem("mz_trace"), tcopy, tmeta);
    }
    const auto est = reconstruct_pump_intensity(trace_taus, trace_values, omegas);
    if (est.window_short) report_.notes.push_back("pump intensity: trace window too short (|I-1/2| > 1e-3 at edges)");
    if (est.negative_flag)
      report_.notes.push_back("pump intensity: negative lobes down to " + fmt(est.most_negative) + " of the peak");
    std::vector<cplx> iv(est.values.begin(), est.values.end());
    const SpectralAmplitude intensity(omegas, std::move(iv));
    auto imeta = base_meta("RECONSTRUCT");
    imeta["format"] = "omega,re,im";
    imeta["value"] = "|f_plus(omega)|^2 estimate, unit integral (re), im = 0";
    imeta["window_short"] = est.window_short ? "true" : "false";
    imeta["most_negative"] = fmt(est.most_negative);
    if (!s_.input_trace) {
      std::vector<double> truth(omegas.points());
      double total = 0.0;
      for (std::size_t k = 0; k < truth.size(); ++k) {
        truth[k] = std::norm(fp(omegas[k]));
        total += truth[k] * omegas.weight(k);
      }
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < truth.size(); ++k) {
        truth[k] /= total;
        num += std::pow(est.values[k] - truth[k], 2) * omegas.weight(k);
        den += truth[k] * truth[k] * omegas.weight(k);
      }
      imeta["relative_l2_error"] = fmt(std::sqrt(num / den));
      report_.notes.push_back("pump intensity relative L2 error " + fmt(std::sqrt(num / den)));
    }
    emit(stem("pump_intensity"), intensity, imeta);

    // complex amplitude from the GMZ maps with and without the quarter phase
    const auto j = s_.oracle ? std::optional(jsa()) : std::nullopt;
    auto gmz_at = [&](bool q) {
      return sweep(Pipeline::GMZ, ts, omegas, [&](double tau, double mu) {
        return j ? oracle_coincidence(*j, Pipeline::GMZ, tau, mu, q) : gmz_symmetric(fp, tau, mu, q);
      }, s_.threads);
    };
    auto plain = gmz_at(false);
    auto quarter = gmz_at(true);
    auto gmeta = base_meta("GMZ");
    gmeta["method"] = s_.oracle ? "oracle" : "gmz_symmetric";
    emit_trace(stem("gmz"), plain, gmeta);
    gmeta["quarter_phase"] = "true";
    emit_trace(stem("gmz_quarter"), quarter, gmeta);

    const TimeGrid t2 = TimeGrid::from_range(2.0 * s_.tau.min, 2.0 * s_.tau.max, s_.tau.points);
    Eigen::MatrixXcd F(plain.values.rows(), plain.values.cols());
    for (Eigen::Index r = 0; r < F.rows(); ++r)
      for (Eigen::Index c = 0; c < F.cols(); ++c)
        F(r, c) = cplx(2.0 * plain.values(r, c) - 1.0, 1.0 - 2.0 * quarter.values(r, c));
    const StftMap measured{t2, omegas, std::move(F)};
    auto smeta = base_meta("STFT");
    smeta["format"] = "tau,mu,re,im";
    smeta["value"] = "F(mu, t) from GMZ traces, t = 2 tau";
    emit(stem("stft_measured"), measured, smeta);

    const cplx f0 = fp(0.0);
    const auto rec = reconstruct_amplitude(measured, f0);
    auto ameta = base_meta("RECONSTRUCT");
    ameta["format"] = "omega,re,im";
    ameta["value"] = "f_plus estimate, unit norm";
    cplx overlap{};
    double truth_norm = 0.0;
    for (std::size_t k = 0; k < omegas.points(); ++k) {
      overlap += std::conj(fp(omegas[k])) * rec.values()[k] * omegas.weight(k);
      truth_norm += std::norm(fp(omegas[k])) * omegas.weight(k);
    }
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
    double err2 = 0.0;
    for (std::size_t k = 0; k < omegas.points(); ++k)
      err2 += std::norm(rec.values()[k] - phase * fp(omegas[k]) / std::sqrt(truth_norm)) * omegas.weight(k);
    const double err = std::sqrt(err2);
    ameta["relative_l2_error"] = fmt(err);
    report_.notes.push_back("amplitude relative L2 error (up to global phase) " + fmt(err));
    emit(stem("amplitude"), rec, ameta);
  }

  void write_summary() {
    const fs::path path = s_.out / (s_.name + "_" + s_.command + "_summary.txt");
    std::ostringstream os;
    os << "scenario: " << s_.name << "\ncommand: " << s_.command << "\n";
    os << "oracle: " << (s_.oracle ? "yes" : "no") << "\nquarter_phase: " << (s_.quarter_phase ? "yes" : "no") << "\n";
    os << "files written: " << report_.files.size() + 1 << "\n";
    for (const auto& f : report_.files) os << "  " << f.filename().string() << "\n";
    os << "max clip: " << fmt(report_.max_clip) << "\n";
    os << "clipped mass: " << fmt(report_.clipped_mass) << "\n";
    os << "wall time [s]: " << fmt(report_.wall_seconds) << "\n";
    for (const auto& n : report_.notes) os << "note: " << n << "\n";
    std::ofstream f(path, std::ios::trunc);
    if (!(f << os.str())) throw IoError("cannot write " + path.string());
    report_.files.push_back(path);
  }
};

}  // namespace

RunReport run(const Scenario& scenario) { return Runner(scenario).go(); }

}  // namespace biphoton::cli
