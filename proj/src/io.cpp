#include "conduit/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "conduit/errors.hpp"

namespace conduit {

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json complex_list(const Eigen::Vector3cd& v) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back(complex_json(v[i]));
  return a;
}

json matrix_json(const Eigen::Matrix3d& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return a;
}

json params_json(const WaveParams& p) { return {{"a", p.a}, {"E", p.E}, {"c", p.c}}; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json to_json(const WaveProfile& w) {
  return {{"n", w.n},           {"k", w.k},
          {"c", w.c},           {"a", w.params.a},
          {"E", w.params.E},    {"M", w.mass},
          {"Q", w.qinv},        {"values", vector_json(w.values)},
          {"deriv", vector_json(w.deriv)}};
}

json to_json(const BlochResult& r) {
  json triples = json::array();
  for (const auto& t : r.triples) {
    json row = json::array();
    for (const auto& z : t) row.push_back(complex_json(z));
    triples.push_back(row);
  }
  return {{"xis", r.xis}, {"triples", triples}, {"slopes", complex_list(r.slopes)}, {"residual", r.residual}};
}

json to_json(const WhithamMatrix& m) {
  return {{"params", params_json(m.params)},
          {"coords", {{"k", m.coords.k}, {"M", m.coords.M}, {"Q", m.coords.Q}}},
          {"entries", matrix_json(m.entries)},
          {"error", matrix_json(m.error)},
          {"speeds", complex_list(m.speeds)},
          {"speeds_lab", complex_list(m.speeds_lab)},
          {"c_grad", {m.c_grad[0], m.c_grad[1], m.c_grad[2]}},
          {"classification", to_string(m.classification)},
          {"tol", m.tol}};
}

json to_json(const Nondegeneracy& d) {
  return {{"T_a", d.T_a},
          {"TM_aE", d.TM_aE},
          {"TMQ_aEc", d.TMQ_aEc},
          {"T_a_degenerate", d.T_a_degenerate},
          {"TM_degenerate", d.TM_degenerate},
          {"TMQ_degenerate", d.TMQ_degenerate}};
}

json to_json(const StokesData& s) {
  return {{"k", s.k},
          {"M", s.M},
          {"A", s.A},
          {"x", s.x},
          {"omega0", s.omega.omega0},
          {"omega2", s.omega.omega2},
          {"d_omega0", s.omega.d_omega0},
          {"d2_omega0", s.omega.d2_omega0},
          {"n", s.speeds.n_coef},
          {"lambda1", s.speeds.lambda1},
          {"lambda_plus", complex_json(s.speeds.lambda_plus)},
          {"lambda_minus", complex_json(s.speeds.lambda_minus)},
          {"elliptic", s.elliptic}};
}

json to_json(const Snapshot& s) {
  json j = {{"t", s.t}, {"M", s.M}, {"Q", s.Q}, {"sideband_energy", s.sideband_energy}};
  if (s.u) j["u"] = vector_json(*s.u);
  return j;
}

std::string sweep_csv(const std::vector<SweepPoint>& points, const std::vector<SweepResult>& rows) {
  if (points.size() != rows.size()) throw DomainError("sweep_csv: points and rows differ in length");
  std::string out = "k,M,Q,a,E,c,Re(s1),Im(s1),Re(s2),Im(s2),Re(s3),Im(s3),class\n";
  auto cell = [&](double x, bool last = false) {
    out += format_double(x);
    out += last ? '\n' : ',';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.ok) {
      cell(r.coords.k);
      cell(r.coords.M);
      cell(r.coords.Q);
      cell(r.params.a);
      cell(r.params.E);
      cell(r.params.c);
      for (int j = 0; j < 3; ++j) {
        cell(r.speeds[j].real());
        cell(r.speeds[j].imag());
      }
      out += to_string(r.classification) + "\n";
      continue;
    }
    // known inputs of a failed point, the rest left empty
    if (const auto* ap = std::get_if<AmplitudePoint>(&points[i])) {
      out += format_double(ap->k) + "," + format_double(ap->M) + ",,,,,";
    } else {
      const auto& wp = std::get<WaveParams>(points[i]);
      out += ",,," + format_double(wp.a) + "," + format_double(wp.E) + "," + format_double(wp.c) + ",";
    }
    out += ",,,,,,failed\n";
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot rename onto " + path);
  }
}

}  // namespace conduit
