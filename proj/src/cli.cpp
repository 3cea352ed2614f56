#include "conduit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "conduit/errors.hpp"
#include "conduit/io.hpp"

namespace conduit {

namespace {

using Keys = std::vector<std::string>;

const Keys wave_keys{"a", "E", "c", "k", "M", "A"};

Keys join(Keys a, const Keys& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::map<std::string, Keys>& param_table() {
  static const std::map<std::string, Keys> t{
      {"wave", join(wave_keys, {"n"})},
      {"whitham", wave_keys},
      {"bloch", join(wave_keys, {"n", "xi-max"})},
      {"verify", join(wave_keys, {"n", "xi-max", "tol"})},
      {"smallamp", {"k", "M", "A", "k-min", "k-max", "count"}},
      {"sweep", {"M", "A", "k-min", "k-max", "count", "threads"}},
      {"evolve", join(wave_keys, {"n", "wavelengths", "noise", "tmax", "dt", "record", "rtol", "keep-u"})},
  };
  return t;
}

const std::map<std::string, Keys>& format_table() {
  static const std::map<std::string, Keys> t{
      {"wave", {"json"}},          {"whitham", {"json"}},         {"bloch", {"json"}},
      {"verify", {"text", "json"}}, {"smallamp", {"json", "csv"}}, {"sweep", {"csv", "json"}},
      {"evolve", {"json"}},
  };
  return t;
}

struct NamedProfile {
  bool amplitude;
  double p1, p2, p3;
};

const std::map<std::string, NamedProfile>& named_profiles() {
  static const std::map<std::string, NamedProfile> t{
      {"small", {false, -1, 0.01, 1}},
      {"moderate", {false, -1, 0.05, 1}},
      {"elliptic", {true, std::sqrt(6.0) / (2 * std::numbers::pi), 1, 0.02}},
  };
  return t;
}

bool has(const JobConfig& c, const std::string& key) { return c.params.count(key) > 0; }

void set_default(JobConfig& c, const std::string& key, double v) { c.params.emplace(key, v); }

void resolve_wave(JobConfig& c) {
  if (!c.profile.empty()) {
    const auto it = named_profiles().find(c.profile);
    if (it == named_profiles().end()) throw ConfigError("unknown profile '" + c.profile + "'");
    for (const auto& k : wave_keys)
      if (has(c, k)) throw ConfigError("profile '" + c.profile + "' conflicts with --" + k);
    const auto& np = it->second;
    const Keys names = np.amplitude ? Keys{"k", "M", "A"} : Keys{"a", "E", "c"};
    c.params[names[0]] = np.p1;
    c.params[names[1]] = np.p2;
    c.params[names[2]] = np.p3;
    return;
  }
  const bool amp = has(c, "k") || has(c, "M") || has(c, "A");
  if (amp) {
    for (const char* k : {"a", "E", "c"})
      if (has(c, k)) throw ConfigError("give either (a, E, c) or (k, M, A), not both");
    for (const char* k : {"k", "M", "A"})
      if (!has(c, k)) throw ConfigError(std::string("amplitude selection needs --") + k);
    return;
  }
  set_default(c, "a", -1);
  set_default(c, "E", 0.01);
  set_default(c, "c", 1);
}

WaveParams wave_of(const JobConfig& c) {
  if (has(c, "k")) return match_amplitude(c.params.at("k"), c.params.at("M"), c.params.at("A"));
  return {c.params.at("a"), c.params.at("E"), c.params.at("c")};
}

int as_int(const JobConfig& c, const std::string& key) {
  const double v = c.params.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("--" + key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ConfigError("--count must be positive");
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

std::vector<double> xi_list(double xi_max) {
  if (!(xi_max > 0)) throw ConfigError("--xi-max must be positive");
  return {xi_max, -xi_max, xi_max / 2, -xi_max / 2};
}

void emit(const JobConfig& cfg, std::ostream& out, const std::string& body) {
  if (cfg.output_path.empty()) out << body;
  else write_atomic(cfg.output_path, body);
}

std::string json_doc(const JobConfig& cfg, json result) {
  json doc = {{"config", config_json(cfg)}, {"result", std::move(result)}};
  return doc.dump(2) + "\n";
}

std::string csv_header(const JobConfig& cfg) { return "# config: " + config_json(cfg).dump() + "\n"; }

struct VerifyRow {
  std::complex<double> bloch, modulation;
  double abs_error, rel_error;
};

int run_verify(const JobConfig& cfg, std::ostream& out) {
  const WaveParams p = wave_of(cfg);
  const double tol = cfg.params.at("tol");
  const auto w = reconstruct_profile(p, as_int(cfg, "n"));
  const auto br = origin_slopes(w, xi_list(cfg.params.at("xi-max")));
  const auto wm = whitham_matrix(p);
  Eigen::Vector3cd target = wm.speeds.array() + p.c;
  const double scale = std::max(target.cwiseAbs().maxCoeff(), 1e-300);
  std::array<int, 3> perm{0, 1, 2}, best{};
  double best_err = INFINITY;
  do {
    double e = 0;
    for (int j = 0; j < 3; ++j) e = std::max(e, std::abs(br.slopes[perm[j]] - target[j]));
    if (e < best_err) {
      best_err = e;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<VerifyRow> rows;
  for (int j = 0; j < 3; ++j) {
    const auto mu = br.slopes[best[j]];
    const double ae = std::abs(mu - target[j]);
    rows.push_back({mu, target[j], ae, ae / scale});
  }
  const double im = br.slopes.imag().cwiseAbs().maxCoeff();
  const bool bloch_complex = im > 1e-5 * scale;
  const bool consistent = bloch_complex == (wm.classification == Classification::Elliptic) &&
                          wm.classification != Classification::Marginal;
  const bool pass = best_err / scale < tol && consistent;

  if (cfg.format == "json") {
    json jr = json::array();
    for (int j = 0; j < 3; ++j)
      jr.push_back({{"bloch", {rows[j].bloch.real(), rows[j].bloch.imag()}},
                    {"modulation_plus_c", {rows[j].modulation.real(), rows[j].modulation.imag()}},
                    {"abs_error", rows[j].abs_error},
                    {"rel_error", rows[j].rel_error}});
    emit(cfg, out,
         json_doc(cfg, {{"params", {{"a", p.a}, {"E", p.E}, {"c", p.c}}},
                        {"rows", jr},
                        {"fit_residual", br.residual},
                        {"classification", to_string(wm.classification)},
                        {"bloch_complex", bloch_complex},
                        {"max_rel_error", best_err / scale},
                        {"tol", tol},
                        {"pass", pass}}));
  } else {
    std::ostringstream s;
    s << "# config: " << config_json(cfg).dump() << "\n";
    s << "# wave a=" << format_double(p.a) << " E=" << format_double(p.E) << " c=" << format_double(p.c)
      << " class=" << to_string(wm.classification) << " fit_residual=" << format_double(br.residual)
      << "\n";
    s << "j  Re(mu)  Im(mu)  Re(s+c)  Im(s+c)  abs_err  rel_err\n";
    for (int j = 0; j < 3; ++j)
      s << j + 1 << "  " << format_double(rows[j].bloch.real()) << "  " << format_double(rows[j].bloch.imag())
        << "  " << format_double(rows[j].modulation.real()) << "  "
        << format_double(rows[j].modulation.imag()) << "  " << format_double(rows[j].abs_error) << "  "
        << format_double(rows[j].rel_error) << "\n";
    s << "max_rel_error " << format_double(best_err / scale) << " tol " << format_double(tol)
      << " realness " << (consistent ? "consistent" : "INCONSISTENT") << " -> " << (pass ? "PASS" : "FAIL")
      << "\n";
    emit(cfg, out, s.str());
  }
  return pass ? 0 : 3;
}

int run_evolve(const JobConfig& cfg, std::ostream& out) {
  const WaveParams p = wave_of(cfg);
  const auto w = reconstruct_profile(p, as_int(cfg, "n"));
  const int nw = as_int(cfg, "wavelengths");
  const auto sw = seeded_wave(w.values, w.k, nw, cfg.params.at("noise"), static_cast<unsigned>(cfg.seed));
  EvolutionOptions opt;
  opt.rtol = cfg.params.at("rtol");
  opt.atol = opt.rtol * 1e-2;
  const auto s0 = make_state(sw.u, sw.L, cfg.params.at("dt"));
  const auto tr = evolve(s0, cfg.params.at("tmax"), cfg.params.at("record"), nw, cfg.params.at("keep-u") != 0, opt);
  std::string body = json({{"config", config_json(cfg)},
                           {"wave", {{"a", p.a}, {"E", p.E}, {"c", p.c}, {"k", w.k}}},
                           {"L", sw.L},
                           {"grid", s0.n}})
                         .dump() +
                     "\n";
  for (const auto& sn : tr.snapshots) body += to_json(sn).dump() + "\n";
  body += json({{"summary", {{"steps", tr.steps}, {"warnings", tr.warnings}}}}).dump() + "\n";
  emit(cfg, out, body);
  return 0;
}

int run_sweep(const JobConfig& cfg, std::ostream& out) {
  std::vector<SweepPoint> pts;
  for (double k : linspace(cfg.params.at("k-min"), cfg.params.at("k-max"), as_int(cfg, "count")))
    pts.push_back(AmplitudePoint{k, cfg.params.at("M"), cfg.params.at("A")});
  const auto rows = classify_sweep(pts, as_int(cfg, "threads"));
  if (cfg.format == "csv") {
    emit(cfg, out, csv_header(cfg) + sweep_csv(pts, rows));
    return 0;
  }
  json arr = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& ap = std::get<AmplitudePoint>(pts[i]);
    json row = {{"k", ap.k}, {"M", ap.M}, {"A", ap.A}, {"ok", r.ok}};
    if (r.ok) {
      row["params"] = {{"a", r.params.a}, {"E", r.params.E}, {"c", r.params.c}};
      json sp = json::array();
      for (int j = 0; j < 3; ++j) sp.push_back({r.speeds[j].real(), r.speeds[j].imag()});
      row["speeds"] = sp;
      row["class"] = to_string(r.classification);
    } else {
      row["failure"] = r.failure;
    }
    arr.push_back(row);
  }
  emit(cfg, out, json_doc(cfg, arr));
  return 0;
}

int run_smallamp(const JobConfig& cfg, std::ostream& out) {
  const double M = cfg.params.at("M"), A = cfg.params.at("A");
  std::vector<double> ks = has(cfg, "k") ? std::vector<double>{cfg.params.at("k")}
                                         : linspace(cfg.params.at("k-min"), cfg.params.at("k-max"),
                                                    as_int(cfg, "count"));
  std::vector<StokesData> rows;
  for (double k : ks) rows.push_back(stokes_data(k, M, A));
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    emit(cfg, out, json_doc(cfg, arr));
    return 0;
  }
  std::string s = csv_header(cfg);
  s += "k,M,A,x,omega0,omega2,d_omega0,d2_omega0,n,lambda1,Re(lambda_plus),Im(lambda_plus),"
       "Re(lambda_minus),Im(lambda_minus),elliptic\n";
  for (const auto& r : rows) {
    for (double v : {r.k, r.M, r.A, r.x, r.omega.omega0, r.omega.omega2, r.omega.d_omega0,
                     r.omega.d2_omega0, r.speeds.n_coef, r.speeds.lambda1, r.speeds.lambda_plus.real(),
                     r.speeds.lambda_plus.imag(), r.speeds.lambda_minus.real(),
                     r.speeds.lambda_minus.imag()})
      s += format_double(v) + ",";
    s += r.elliptic ? "1\n" : "0\n";
  }
  emit(cfg, out, s);
  return 0;
}

std::string error_type(const std::exception& e, const char* fallback) {
  const std::string w = e.what();
  const auto pos = w.find(": ");
  if (pos != std::string::npos && pos > 0 && w.find(' ') >= pos) return w.substr(0, pos);
  return fallback;
}

int report(const std::exception& e, const char* type, int code) {
  json rec = {{"error", {{"type", error_type(e, type)}, {"message", e.what()}, {"exit_code", code}}}};
  std::cerr << rec.dump() << "\n";
  return code;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const Keys c{"wave", "whitham", "smallamp", "bloch", "evolve", "sweep", "verify"};
  return c;
}

const std::vector<std::string>& allowed_params(const std::string& command) {
  const auto it = param_table().find(command);
  if (it == param_table().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

JobConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a flat JSON object");
  JobConfig c;
  std::set<std::string> numeric;
  for (const auto& [_, keys] : param_table()) numeric.insert(keys.begin(), keys.end());
  for (const auto& [key, v] : doc.items()) {
    if (key == "command" || key == "out" || key == "format" || key == "profile") {
      if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
      const std::string s = v.get<std::string>();
      if (key == "command") c.command = s;
      else if (key == "out") c.output_path = s;
      else if (key == "format") c.format = s;
      else c.profile = s;
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (numeric.count(key)) {
      if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
      c.params[key] = v.get<double>();
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return c;
}

JobConfig resolve(JobConfig c) {
  if (c.command.empty()) throw ConfigError("no command given");
  const auto& keys = allowed_params(c.command);
  for (const auto& [k, v] : c.params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ConfigError("parameter '" + k + "' does not apply to command '" + c.command + "'");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' is not finite");
  }
  const auto& formats = format_table().at(c.command);
  if (c.format.empty()) c.format = formats.front();
  if (std::find(formats.begin(), formats.end(), c.format) == formats.end())
    throw ConfigError("format '" + c.format + "' not available for '" + c.command + "'");
  if (!c.profile.empty() && c.command != "wave" && c.command != "whitham" && c.command != "bloch" &&
      c.command != "verify" && c.command != "evolve")
    throw ConfigError("profile does not apply to command '" + c.command + "'");

  const std::string& cmd = c.command;
  if (cmd == "wave" || cmd == "whitham" || cmd == "bloch" || cmd == "verify" || cmd == "evolve")
    resolve_wave(c);
  if (cmd == "wave" || cmd == "bloch" || cmd == "verify") set_default(c, "n", 128);
  if (cmd == "bloch" || cmd == "verify") set_default(c, "xi-max", 1e-3);
  if (cmd == "verify") set_default(c, "tol", 1e-3);
  if (cmd == "smallamp" || cmd == "sweep") {
    set_default(c, "M", 1);
    set_default(c, "A", 0.01);
    if (!has(c, "k")) {
      set_default(c, "k-min", 0.2);
      set_default(c, "k-max", 0.35);
      set_default(c, "count", 16);
    }
  }
  if (cmd == "sweep") set_default(c, "threads", 0);
  if (cmd == "evolve") {
    set_default(c, "n", 64);
    set_default(c, "wavelengths", 1);
    set_default(c, "noise", 0);
    set_default(c, "tmax", 10);
    set_default(c, "dt", 0.01);
    set_default(c, "record", c.params.at("tmax") / 10);
    set_default(c, "rtol", 1e-10);
    set_default(c, "keep-u", 0);
  }
  return c;
}

json config_json(const JobConfig& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  json j = {{"command", c.command}, {"format", c.format}, {"seed", c.seed}, {"params", params}};
  if (!c.profile.empty()) j["profile"] = c.profile;
  return j;
}

int run(const JobConfig& cfg, std::ostream& out) {
  const std::string& cmd = cfg.command;
  if (cmd == "wave") {
    emit(cfg, out, json_doc(cfg, to_json(reconstruct_profile(wave_of(cfg), as_int(cfg, "n")))));
    return 0;
  }
  if (cmd == "whitham") {
    const WaveParams p = wave_of(cfg);
    json r = to_json(whitham_matrix(p));
    r["nondegeneracy"] = to_json(nondegeneracy(p));
    emit(cfg, out, json_doc(cfg, r));
    return 0;
  }
  if (cmd == "bloch") {
    const auto w = reconstruct_profile(wave_of(cfg), as_int(cfg, "n"));
    emit(cfg, out, json_doc(cfg, to_json(origin_slopes(w, xi_list(cfg.params.at("xi-max"))))));
    return 0;
  }
  if (cmd == "verify") return run_verify(cfg, out);
  if (cmd == "evolve") return run_evolve(cfg, out);
  if (cmd == "sweep") return run_sweep(cfg, out);
  if (cmd == "smallamp") return run_smallamp(cfg, out);
  throw ConfigError("unknown command '" + cmd + "'");
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Periodic traveling waves of the conduit equation: modulation and Bloch analysis"};
  std::string command, config_path, out_path, format, profile;
  std::uint64_t seed = 0;
  app.add_option("--command", command, "wave | whitham | smallamp | bloch | evolve | sweep | verify");
  app.add_option("--config", config_path, "flat JSON job file; flags override its values");
  app.add_option("--out", out_path, "output file (written atomically); default stdout");
  app.add_option("--format", format, "json | csv | text");
  app.add_option("--profile", profile, "named wave: small | moderate | elliptic");
  auto* seed_opt = app.add_option("--seed", seed, "seed for the evolve sideband noise");
  std::map<std::string, double> values;
  std::map<std::string, CLI::Option*> opts;
  std::set<std::string> all;
  for (const auto& [_, keys] : param_table()) all.insert(keys.begin(), keys.end());
  for (const auto& k : all) opts[k] = app.add_option("--" + k, values[k]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    JobConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config file " + config_path);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
      }
      cfg = parse_config(doc);
    }
    if (!command.empty()) cfg.command = command;
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (!profile.empty()) cfg.profile = profile;
    if (seed_opt->count() > 0) cfg.seed = seed;
    for (const auto& [k, o] : opts)
      if (o->count() > 0) cfg.params[k] = values[k];
    return run(resolve(std::move(cfg)), std::cout);
  } catch (const DomainError& e) {
    return report(e, "DomainError", 1);
  } catch (const NumericalError& e) {
    return report(e, "NumericalError", 2);
  } catch (const std::exception& e) {
    return report(e, "Error", 2);
  }
}

}  // namespace conduit
