#include "cuspsieve_cli/json_io.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace cuspsieve::cli {

namespace {

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_real(double x) {
  std::string s = format_shortest(x);
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

json to_json(const CheckRow& row) {
  json params = json::object();
  for (const auto& [k, v] : row.params) params[k] = number(v);
  return json{{"id", row.lemma},
              {"status", std::string(to_string(row.status))},
              {"lhs", number(row.lhs)},
              {"rhs", number(row.rhs)},
              {"margin", number(row.margin)},
              {"params", params},
              {"note", row.note}};
}

json to_json(const CheckReport& report) {
  json rows = json::array();
  for (const auto& r : report) rows.push_back(to_json(r));
  return rows;
}

json to_json(const CuspReport& r) {
  json arcs = json::array();
  for (const auto& a : r.arcs)
    arcs.push_back({{"lo", a.lo}, {"hi", a.hi}, {"peak_pos", a.peak.position},
                    {"peak_height", a.peak.weight}});
  json ws = json::array();
  for (const auto& p : r.wellspaced) ws.push_back({{"position", p.position}, {"weight", p.weight}});
  return json{{"A", r.A},
              {"K", r.K},
              {"N", r.N},
              {"T0", r.T0},
              {"bound", r.bound},
              {"wellspaced_count", r.wellspaced.size()},
              {"bound_holds", r.bound_holds()},
              {"arc_count", r.arcs.size()},
              {"measure_estimate", r.measure_estimate},
              {"arcs", arcs},
              {"wellspaced", ws}};
}

json to_json(const CompanionResult& c) {
  json offs = json::array();
  for (std::size_t i = 0; i < c.offsets.size(); ++i)
    offs.push_back({{"a", c.offsets[i].a}, {"q", c.offsets[i].q}, {"height", c.heights[i]}});
  return json{{"count", c.offsets.size()}, {"Z", c.Z}, {"bound", c.bound},
              {"holds", c.holds()}, {"offsets", offs}};
}

json to_json(const Decomposition& d) {
  const auto& m = d.metrics;
  json bohr = json{{"size", d.bohr.size()}, {"xi_M", d.bohr.xi_M.size()}, {"h1", d.bohr.h1}};
  if (d.bohr.size() <= 1000) bohr["elements"] = d.bohr.elements;
  return json{
      {"params", {{"N", d.N}, {"z0", d.z0}, {"z", d.z}, {"M", d.M}, {"tau", 1}, {"A", d.A},
                  {"eps", d.eps}}},
      {"G", d.G},
      {"V", d.V},
      {"h1", d.h1},
      {"h2", d.h2},
      {"log10_z0_regime", d.log10_z0_regime},
      {"support", {{"lmin", d.lmin}, {"lmax", d.lmax()}}},
      {"cover", {{"Nprime", d.cover.Nprime}, {"points", d.cover.size()},
                 {"even", d.cover.even_count}, {"odd", d.cover.odd_count},
                 {"family_bound", d.cover.family_bound()}}},
      {"bohr", bohr},
      {"metrics",
       {{"residual_max", m.residual_max},
        {"flat_coprime_violations", m.flat_coprime_violations},
        {"flat_min", m.flat_min},
        {"flat_max", m.flat_max},
        {"flat_bound", m.flat_bound},
        {"star_rational_max", m.star_rational_max},
        {"star_identity_max", m.star_identity_max},
        {"sharp_identity_max", m.sharp_identity_max},
        {"sharp_le_T_violations", m.sharp_le_T_violations},
        {"flat_le_T_violations", m.flat_le_T_violations},
        {"truncation_max", m.truncation_max},
        {"sup_sharp_over_T0", m.sup_sharp},
        {"target_one_over_A", m.target},
        {"sup_below_target", m.sup_sharp < m.target},
        {"alpha_samples", m.alpha_samples},
        {"sup_grid", m.sup_grid}}}};
}

}  // namespace cuspsieve::cli
