#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "conduit/bloch.hpp"
#include "conduit/evolution.hpp"
#include "conduit/reparam.hpp"
#include "conduit/smallamp.hpp"
#include "conduit/whitham.hpp"

namespace conduit {

using nlohmann::json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// {n, k, c, a, E, M, Q, values[], deriv[]}; M and Q are the per-unit-phase means.
json to_json(const WaveProfile& w);
/// {xis[], triples[][], slopes[], residual}; complex numbers as [re, im].
json to_json(const BlochResult& r);
json to_json(const WhithamMatrix& m);
json to_json(const Nondegeneracy& d);
json to_json(const StokesData& s);
/// {t, M, Q, sideband_energy, u[]?}
json to_json(const Snapshot& s);

/// Header plus one row per point: k,M,Q,a,E,c,Re(s1),Im(s1),...,class. Failed rows carry
/// empty numeric fields and class "failed".
std::string sweep_csv(const std::vector<SweepPoint>& points, const std::vector<SweepResult>& rows);

/// Write to a sibling temporary file and rename it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace conduit
