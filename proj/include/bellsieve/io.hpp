#pragma once

// JSON and CSV encodings. Numbers are rounded to 12 significant digits so
// outputs diff cleanly; nlohmann::json keeps object keys sorted.

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "bellsieve/analysis.hpp"

namespace bellsieve::io {

using nlohmann::json;

inline std::string format_number(double v) {
  if (v == 0.0 || std::abs(v) < 1e-300) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline double rounded(double v) { return std::stod(format_number(v)); }

inline json to_json(const PhotonMode& m) {
  return {{"path", m.path},
          {"pol", std::string(to_string(m.pol))},
          {"parity", std::string(to_string(m.parity))},
          {"temporal", m.temporal}};
}

inline PhotonMode mode_from_json(const json& j) {
  PhotonMode m;
  m.path = j.at("path").get<std::string>();
  m.pol = parse_polarization(j.at("pol").get<std::string>());
  m.parity = parse_parity(j.value("parity", std::string("even")));
  m.temporal = j.value("temporal", 0);
  return m;
}

/// [{modes: [m1, m2], re, im}, ...] in canonical key order.
inline json to_json(const TwoPhotonState& s) {
  json terms = json::array();
  for (const auto& [pair, amp] : s.terms())
    terms.push_back({{"modes", {to_json(pair.first), to_json(pair.second)}},
                     {"re", rounded(amp.real())},
                     {"im", rounded(amp.imag())}});
  return terms;
}

inline TwoPhotonState state_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("state JSON must be an array of terms");
  TwoPhotonState s;
  for (const auto& t : j) {
    const auto& modes = t.at("modes");
    if (!modes.is_array() || modes.size() != 2)
      throw std::invalid_argument("state term must list exactly two modes");
    s.add(mode_from_json(modes[0]), mode_from_json(modes[1]),
          {t.at("re").get<double>(), t.at("im").get<double>()});
  }
  s.prune();
  return s;
}

inline json to_json(const EventDistribution& d) {
  json out = json::object();
  for (const auto& [ev, p] : d)
    if (p > kSupportTolerance) out[ev.label()] = rounded(p);
  return out;
}

inline json to_json(const SignatureTable& t) {
  json states = json::object();
  for (const auto& row : t.rows) states[row.label] = to_json(row.distribution);
  return {{"pump_parity", t.pump_parity}, {"overlap", rounded(t.overlap)}, {"states", states}};
}

inline json to_json(const DiscriminationReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) classes.push_back(c);
  json ambiguous = json::array();
  for (const auto& a : r.ambiguities) {
    json events = json::array();
    for (const auto& ev : a.shared_events) events.push_back(ev.label());
    ambiguous.push_back({{"states", {a.a, a.b}}, {"shared_events", events}});
  }
  return {{"classes", classes},
          {"class_count", r.classes.size()},
          {"bits", rounded(r.bits)},
          {"ambiguous", ambiguous}};
}

inline json to_json(const SuccessReport& r) {
  json per = json::object();
  for (const auto& [label, ps] : r.per_state)
    per[label] = {{"correct", rounded(ps.correct)},
                  {"wrong", rounded(ps.wrong)},
                  {"unassigned", rounded(ps.unassigned)},
                  {"success", rounded(ps.success)}};
  return {{"overlap", rounded(r.overlap)},
          {"policy", std::string(to_string(r.policy))},
          {"average", rounded(r.average)},
          {"per_state", per}};
}

}  // namespace bellsieve::io
