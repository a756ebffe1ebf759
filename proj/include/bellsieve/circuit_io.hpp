#pragma once

// Circuit files:
//
//   {
//     "version": 1,
//     "name": "...",
//     "paths": ["1", "2", ...],
//     "source_paths": ["1", "2"],          // 2 paths: Bell pair, 4: hyper (a,b,c,d)
//     "delayed_paths": ["2"],               // arm made distinguishable by the delay
//     "elements": [
//       {"type": "beam_splitter", "in1", "in2", "out1", "out2", "reflect_flips_y"},
//       {"type": "pbs", "in1", "in2"?, "out_t", "out_r", "basis_angle_deg", "reflect_flips_y"},
//       {"type": "waveplate", "path", "kind": "half"|"quarter", "fast_axis_deg"},
//       {"type": "delay", "path", "delta_m"},
//       {"type": "mirror", "path", "flips_y"}
//     ],
//     "detectors": [{"id", "path", "port": "any"|"parallel"|"perpendicular", "basis_angle_deg"}]
//   }

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellsieve/analysis.hpp"

namespace bellsieve::io {

inline constexpr int kCircuitSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CircuitFile {
  std::string name;
  Circuit circuit;
  DetectorLayout layout;
  std::vector<std::string> source_paths;
  std::vector<std::string> delayed_paths;

  bool hyper() const { return source_paths.size() == 4; }

  TwoPhotonState source(BellKind kind) const {
    if (hyper())
      return hyper_state(kind, source_paths[0], source_paths[1], source_paths[2],
                         source_paths[3]);
    return bell_state(kind, source_paths[0], source_paths[1]);
  }
};

namespace detail {

template <class T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

inline Element element_from_json(const nlohmann::json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "beam_splitter")
    return BeamSplitter{field<std::string>(j, "in1"), field<std::string>(j, "in2"),
                        field<std::string>(j, "out1"), field<std::string>(j, "out2"),
                        field_or<bool>(j, "reflect_flips_y", true)};
  if (type == "pbs")
    return PolarizingBS{field<std::string>(j, "in1"), field_or<std::string>(j, "in2", ""),
                        field<std::string>(j, "out_t"), field<std::string>(j, "out_r"),
                        field_or<double>(j, "basis_angle_deg", 0.0),
                        field_or<bool>(j, "reflect_flips_y", true)};
  if (type == "waveplate") {
    const auto kind = field<std::string>(j, "kind");
    if (kind != "half" && kind != "quarter") throw SchemaError("unknown waveplate kind '" + kind + "'");
    return WavePlate{field<std::string>(j, "path"),
                     kind == "half" ? PlateKind::Half : PlateKind::Quarter,
                     field_or<double>(j, "fast_axis_deg", 0.0)};
  }
  if (type == "delay") return Delay{field<std::string>(j, "path"), field_or<double>(j, "delta_m", 0.0)};
  if (type == "mirror")
    return Mirror{field<std::string>(j, "path"), field_or<bool>(j, "flips_y", true)};
  throw SchemaError("unknown element type '" + type + "'");
}

}  // namespace detail

inline nlohmann::json element_to_json(const Element& e) {
  return std::visit(
      [](const auto& el) -> nlohmann::json {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>)
          return {{"type", "beam_splitter"}, {"in1", el.in1}, {"in2", el.in2}, {"out1", el.out1},
                  {"out2", el.out2}, {"reflect_flips_y", el.reflect_flips_y}};
        else if constexpr (std::is_same_v<T, PolarizingBS>) {
          nlohmann::json j{{"type", "pbs"}, {"in1", el.in1}, {"out_t", el.out_t},
                           {"out_r", el.out_r}, {"basis_angle_deg", el.basis_angle_deg},
                           {"reflect_flips_y", el.reflect_flips_y}};
          if (!el.in2.empty()) j["in2"] = el.in2;
          return j;
        } else if constexpr (std::is_same_v<T, WavePlate>)
          return {{"type", "waveplate"}, {"path", el.path},
                  {"kind", el.kind == PlateKind::Half ? "half" : "quarter"},
                  {"fast_axis_deg", el.fast_axis_deg}};
        else if constexpr (std::is_same_v<T, Delay>)
          return {{"type", "delay"}, {"path", el.path}, {"delta_m", el.delta}};
        else
          return {{"type", "mirror"}, {"path", el.path}, {"flips_y", el.flips_y}};
      },
      e);
}

inline CircuitFile circuit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("circuit file must be a JSON object");
  const int version = detail::field_or<int>(j, "version", kCircuitSchemaVersion);
  if (version != kCircuitSchemaVersion)
    throw SchemaError("unsupported circuit schema version " + std::to_string(version));
  CircuitFile file;
  file.name = detail::field_or<std::string>(j, "name", "");
  const auto paths = detail::field<std::vector<std::string>>(j, "paths");
  const auto& elements = j.contains("elements") ? j.at("elements") : nlohmann::json::array();
  if (!elements.is_array()) throw SchemaError("'elements' must be an array");
  std::vector<Element> parsed;
  for (const auto& e : elements) parsed.push_back(detail::element_from_json(e));

  std::vector<Detector> detectors;
  if (j.contains("detectors")) {
    for (const auto& d : j.at("detectors")) {
      Detector det;
      det.id = detail::field<std::string>(d, "id");
      det.path = detail::field<std::string>(d, "path");
      try {
        det.port = parse_port(detail::field_or<std::string>(d, "port", "any"));
      } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
      }
      det.basis_angle_deg = detail::field_or<double>(d, "basis_angle_deg", 0.0);
      detectors.push_back(std::move(det));
    }
  }
  file.source_paths = detail::field_or<std::vector<std::string>>(j, "source_paths", {});
  file.delayed_paths = detail::field_or<std::vector<std::string>>(j, "delayed_paths", {});
  if (file.source_paths.size() != 2 && file.source_paths.size() != 4)
    throw SchemaError("'source_paths' must list 2 (Bell) or 4 (hyperentangled) paths");
  try {
    file.circuit = Circuit(paths, std::move(parsed));
    file.layout = DetectorLayout(std::move(detectors));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  for (const auto& p : file.source_paths)
    if (!file.circuit.has_path(p)) throw SchemaError("source path '" + p + "' is not registered");
  for (const auto& d : file.layout.detectors())
    if (!file.circuit.has_path(d.path))
      throw SchemaError("detector '" + d.id + "' sits on unregistered path '" + d.path + "'");
  return file;
}

inline nlohmann::json circuit_to_json(const CircuitFile& file) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : file.circuit.elements()) elements.push_back(element_to_json(e));
  nlohmann::json detectors = nlohmann::json::array();
  for (const auto& d : file.layout.detectors()) {
    nlohmann::json jd{{"id", d.id}, {"path", d.path}, {"port", std::string(to_string(d.port))}};
    if (d.port != Port::Any) jd["basis_angle_deg"] = d.basis_angle_deg;
    detectors.push_back(jd);
  }
  return {{"version", kCircuitSchemaVersion}, {"name", file.name},
          {"paths", file.circuit.paths()},    {"source_paths", file.source_paths},
          {"delayed_paths", file.delayed_paths}, {"elements", elements},
          {"detectors", detectors}};
}

inline CircuitFile load_circuit(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open circuit file '" + filename + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return circuit_from_json(j);
}

}  // namespace bellsieve::io
