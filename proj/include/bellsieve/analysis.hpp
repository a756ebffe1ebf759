#pragma once

// Detection statistics for threshold (bucket) detectors: event
// distributions, Bell-state signature tables, class partitioning, HOM scans
// and discrimination success under partial distinguishability.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellsieve/optics.hpp"

namespace bellsieve {

inline constexpr double kSupportTolerance = 1e-12;

enum class Port : std::uint8_t { Any, Parallel, Perpendicular };

constexpr std::string_view to_string(Port p) noexcept {
  switch (p) {
    case Port::Any: return "any";
    case Port::Parallel: return "parallel";
    case Port::Perpendicular: return "perpendicular";
  }
  return "?";
}

inline Port parse_port(std::string_view s) {
  if (s == "any") return Port::Any;
  if (s == "parallel") return Port::Parallel;
  if (s == "perpendicular") return Port::Perpendicular;
  throw std::invalid_argument("unknown detector port '" + std::string(s) + "'");
}

/// A bucket detector on `path`. Port::Any clicks for any polarization;
/// Parallel/Perpendicular analyze along e(angle) or its orthogonal partner.
struct Detector {
  std::string id;
  std::string path;
  Port port = Port::Any;
  double basis_angle_deg = 0.0;
};

class DetectorLayout {
 public:
  DetectorLayout() = default;
  explicit DetectorLayout(std::vector<Detector> detectors) : detectors_(std::move(detectors)) {
    validate();
  }

  const std::vector<Detector>& detectors() const noexcept { return detectors_; }

  /// Detector for a photon on `path` whose polarization label (already in
  /// the path's analysis basis) is `pol`.
  const Detector* find(const std::string& path, Polarization pol) const {
    const Port wanted = pol == Polarization::H ? Port::Parallel : Port::Perpendicular;
    for (const auto& d : detectors_)
      if (d.path == path && (d.port == Port::Any || d.port == wanted)) return &d;
    return nullptr;
  }

  std::optional<double> analysis_angle(const std::string& path) const {
    for (const auto& d : detectors_)
      if (d.path == path && d.port != Port::Any) return d.basis_angle_deg;
    return std::nullopt;
  }

  DetectorLayout relabeled(const std::map<std::string, std::string>& ids) const {
    auto copy = detectors_;
    for (auto& d : copy)
      if (auto it = ids.find(d.id); it != ids.end()) d.id = it->second;
    return DetectorLayout(std::move(copy));
  }

 private:
  void validate() const {
    std::set<std::string> ids;
    std::map<std::string, std::set<Port>> ports;
    std::map<std::string, double> angles;
    for (const auto& d : detectors_) {
      if (d.id.empty()) throw std::invalid_argument("detector layout: empty detector id");
      if (!ids.insert(d.id).second)
        throw std::invalid_argument("detector layout: duplicate id '" + d.id + "'");
      auto& used = ports[d.path];
      if (!used.insert(d.port).second || (d.port == Port::Any && used.size() > 1) ||
          (d.port != Port::Any && used.contains(Port::Any)))
        throw std::invalid_argument("detector layout: conflicting ports on path '" + d.path +
                                    "'");
      if (d.port != Port::Any) {
        auto [it, fresh] = angles.emplace(d.path, d.basis_angle_deg);
        if (!fresh && it->second != d.basis_angle_deg)
          throw std::invalid_argument("detector layout: mixed analysis angles on path '" +
                                      d.path + "'");
      }
    }
  }

  std::vector<Detector> detectors_;
};

/// Two detector clicks; equal ids mean both photons reached one detector.
struct DetectionEvent {
  std::string first;
  std::string second;

  static DetectionEvent of(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
  }

  bool same_detector() const { return first == second; }
  std::string label() const { return first + "+" + second; }

  auto operator<=>(const DetectionEvent&) const = default;
  bool operator==(const DetectionEvent&) const = default;
};

using EventDistribution = std::map<DetectionEvent, double>;

/// Born-rule probabilities of detector pairs. Parity and temporal labels are
/// summed incoherently because bucket detectors do not resolve them.
inline EventDistribution event_distribution(const TwoPhotonState& state,
                                            const DetectorLayout& layout) {
  // Rotate each analyzed path into its detector basis: H <- e(angle), V <- e_perp.
  const TwoPhotonState analyzed = transform(state, [&](const PhotonMode& m) {
    const auto angle = layout.analysis_angle(m.path);
    if (!angle) return ModeImage{{m, 1.0}};
    const double th = detail::deg2rad(*angle);
    const double c = std::cos(th), s = std::sin(th);
    PhotonMode par = m, perp = m;
    par.pol = Polarization::H;
    perp.pol = Polarization::V;
    if (m.pol == Polarization::H) return ModeImage{{par, c}, {perp, -s}};
    return ModeImage{{par, s}, {perp, c}};
  });

  EventDistribution dist;
  for (const auto& [pair, amp] : analyzed.terms()) {
    const double p = std::norm(amp);
    const Detector* d1 = layout.find(pair.first.path, pair.first.pol);
    const Detector* d2 = layout.find(pair.second.path, pair.second.pol);
    if (!d1 || !d2) {
      if (p <= kSupportTolerance) continue;
      const auto& lost = d1 ? pair.second : pair.first;
      throw std::invalid_argument("event_distribution: no detector covers " + to_string(lost));
    }
    dist[DetectionEvent::of(d1->id, d2->id)] += p;
  }
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0,
                                       [](double a, const auto& kv) { return a + kv.second; });
  if (total > 0.0)
    for (auto& [ev, p] : dist) p /= total;
  return dist;
}

inline double probability_of(const EventDistribution& dist, const DetectionEvent& ev) {
  const auto it = dist.find(ev);
  return it == dist.end() ? 0.0 : it->second;
}

inline std::set<DetectionEvent> support(const EventDistribution& dist,
                                        double tolerance = kSupportTolerance) {
  std::set<DetectionEvent> out;
  for (const auto& [ev, p] : dist)
    if (p > tolerance) out.insert(ev);
  return out;
}

struct LabeledState {
  std::string label;
  TwoPhotonState state;
};

struct SignatureTable {
  struct Row {
    std::string label;
    EventDistribution distribution;
  };
  std::vector<Row> rows;
  std::string pump_parity;  // "even", "odd" or empty when unknown
  double overlap = 1.0;

  const EventDistribution& at(const std::string& label) const {
    for (const auto& r : rows)
      if (r.label == label) return r.distribution;
    throw std::out_of_range("signature table has no row '" + label + "'");
  }
};

inline SignatureTable signature_table(const Circuit& circuit,
                                      std::span<const LabeledState> inputs,
                                      const DetectorLayout& layout) {
  SignatureTable table;
  for (const auto& in : inputs) {
    table.rows.push_back({in.label, event_distribution(run_circuit(circuit, in.state), layout)});
    if (const auto p = in.state.pump_parity()) table.pump_parity = std::string(to_string(*p));
  }
  return table;
}

/// True iff no supported event has both photons at one detector.
inline bool coincidence_basis_only(const SignatureTable& table) {
  for (const auto& row : table.rows)
    for (const auto& [ev, p] : row.distribution)
      if (p > kSupportTolerance && ev.same_detector()) return false;
  return true;
}

struct DiscriminationReport {
  struct Overlap {
    std::string a, b;
    std::vector<DetectionEvent> shared_events;
  };
  std::vector<std::vector<std::string>> classes;
  std::map<DetectionEvent, std::size_t> event_class;  // supported event -> class index
  std::vector<Overlap> ambiguities;
  double bits = 0.0;

  std::optional<std::size_t> class_of(const std::string& label) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (std::find(classes[i].begin(), classes[i].end(), label) != classes[i].end()) return i;
    return std::nullopt;
  }
};

/// Partitions inputs into classes: inputs whose supports intersect (directly
/// or through a chain) merge; distinct classes have disjoint supports.
inline DiscriminationReport classify(const SignatureTable& table) {
  const std::size_t n = table.rows.size();
  std::vector<std::set<DetectionEvent>> supports;
  supports.reserve(n);
  for (const auto& row : table.rows) supports.push_back(support(row.distribution));

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  DiscriminationReport report;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<DetectionEvent> shared;
      std::set_intersection(supports[i].begin(), supports[i].end(), supports[j].begin(),
                            supports[j].end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      parent[find(i)] = find(j);
      report.ambiguities.push_back({table.rows[i].label, table.rows[j].label, std::move(shared)});
    }

  std::map<std::size_t, std::size_t> root_to_class;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, fresh] = root_to_class.emplace(find(i), report.classes.size());
    if (fresh) report.classes.emplace_back();
    report.classes[it->second].push_back(table.rows[i].label);
    for (const auto& ev : supports[i]) report.event_class[ev] = it->second;
  }
  report.bits = report.classes.empty() ? 0.0 : std::log2(double(report.classes.size()));
  return report;
}

/// Temporal overlap of the two photons versus relative delay:
/// o(delta) = exp(-(delta / sigma_L)^2).
struct OverlapModel {
  double sigma_l = 0.0;  // meters

  double overlap(double delta) const {
    if (!(sigma_l > 0.0)) throw std::invalid_argument("OverlapModel: sigma_L must be > 0");
    const double t = delta / sigma_l;
    return std::exp(-t * t);
  }

  /// Gaussian filter with intensity FWHM `fwhm` centred at `wavelength`:
  /// sigma_L = 2 sqrt(ln 2) lambda^2 / (pi fwhm).
  static OverlapModel from_filter(double wavelength = hg::kPhotonWavelength,
                                  double fwhm = 1e-9) {
    return {2.0 * std::sqrt(std::log(2.0)) * wavelength * wavelength /
            (std::numbers::pi * fwhm)};
  }
};

/// Labeled source state plus the paths of the delayed arm. Photons on those
/// paths become distinguishable (temporal tag 1) when the overlap vanishes.
struct SourceInput {
  std::string label;
  TwoPhotonState state;
  std::vector<std::string> delayed_paths;
};

/// o * P(interfering) + (1 - o) * P(distinguishable), event by event.
inline EventDistribution mixed_distribution(const Circuit& circuit, const TwoPhotonState& pumped,
                                            const std::vector<std::string>& delayed_paths,
                                            const DetectorLayout& layout, double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0))
    throw std::invalid_argument("overlap must lie in [0, 1]");
  EventDistribution out;
  if (overlap > 0.0)
    for (const auto& [ev, p] : event_distribution(run_circuit(circuit, pumped), layout))
      out[ev] += overlap * p;
  if (overlap < 1.0) {
    const auto tagged = with_temporal_tag(pumped, delayed_paths, 1);
    for (const auto& [ev, p] : event_distribution(run_circuit(circuit, tagged), layout))
      out[ev] += (1.0 - overlap) * p;
  }
  return out;
}

/// Balanced HOM interferometer: source on paths "1","2", delay on "1",
/// beam splitter into "A","B" with one bucket detector on each output.
struct HomSetup {
  Circuit circuit;
  DetectorLayout layout;

  static HomSetup make(double delta) {
    Circuit c({"1", "2", "A", "B"}, {});
    c.add(Delay{"1", delta});
    c.add(BeamSplitter{"1", "2", "A", "B"});
    return {std::move(c), DetectorLayout({{"A", "A"}, {"B", "B"}})};
  }
};

struct HomPoint {
  double delta;    // meters
  double overlap;  // o(delta)
  double p_coinc;
};

inline std::vector<HomPoint> hom_scan(BellKind source, Parity pump,
                                      std::span<const double> deltas, const OverlapModel& model) {
  const auto pumped = attach_pump_parity(bell_state(source, "1", "2"), pump);
  const auto cross = DetectionEvent::of("A", "B");
  std::vector<HomPoint> curve;
  curve.reserve(deltas.size());
  for (const double delta : deltas) {
    const auto setup = HomSetup::make(delta);
    const auto out = run_circuit(setup.circuit, pumped);
    const double o = model.overlap(out.delay("1") - out.delay("2"));
    const double p_int = probability_of(event_distribution(out, setup.layout), cross);
    const auto tagged = run_circuit(setup.circuit, with_temporal_tag(pumped, {"1"}, 1));
    const double p_dist = probability_of(event_distribution(tagged, setup.layout), cross);
    curve.push_back({delta, o, o * p_int + (1.0 - o) * p_dist});
  }
  return curve;
}

/// (P_far - P_0)/P_far for a dip, (P_0 - P_far)/P_far for a peak.
inline double hom_visibility(double p_zero, double p_far) {
  if (p_far == 0.0) throw std::domain_error("hom_visibility: zero baseline");
  return std::abs(p_far - p_zero) / p_far;
}

/// How events outside every signature are scored. Two photons at one
/// threshold detector always fall here.
enum class UnassignedPolicy : std::uint8_t { CountAsError, Discard };

constexpr std::string_view to_string(UnassignedPolicy p) noexcept {
  return p == UnassignedPolicy::Discard ? "discard" : "error";
}

inline UnassignedPolicy parse_policy(std::string_view s) {
  if (s == "discard") return UnassignedPolicy::Discard;
  if (s == "error") return UnassignedPolicy::CountAsError;
  throw std::invalid_argument("unknown policy '" + std::string(s) + "'");
}

struct SuccessReport {
  struct PerState {
    double correct = 0.0;     // probability of an event assigned to the right class
    double wrong = 0.0;       // assigned to another class
    double unassigned = 0.0;  // outside all signatures or same-detector
    double success = 0.0;     // under the policy
  };
  std::map<std::string, PerState> per_state;
  double average = 0.0;
  double overlap = 1.0;
  UnassignedPolicy policy = UnassignedPolicy::CountAsError;
};

/// Decision rule comes from the ideal (o = 1) table; counts are taken from
/// the mixed model at the requested overlap.
inline SuccessReport success_probability(const Circuit& circuit, const DetectorLayout& layout,
                                         Parity pump, double overlap,
                                         std::span<const SourceInput> inputs,
                                         const std::map<std::string, double>& priors = {},
                                         UnassignedPolicy policy = UnassignedPolicy::CountAsError) {
  if (!(overlap >= 0.0 && overlap <= 1.0))
    throw std::invalid_argument("success_probability: overlap must lie in [0, 1]");
  std::vector<LabeledState> ideal_inputs;
  std::vector<TwoPhotonState> pumped;
  for (const auto& in : inputs) {
    pumped.push_back(attach_pump_parity(in.state, pump));
    ideal_inputs.push_back({in.label, pumped.back()});
  }
  const auto ideal = signature_table(circuit, ideal_inputs, layout);
  const auto report = classify(ideal);

  SuccessReport out;
  out.overlap = overlap;
  out.policy = policy;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const auto own = report.class_of(in.label);
    SuccessReport::PerState ps;
    for (const auto& [ev, p] :
         mixed_distribution(circuit, pumped[i], in.delayed_paths, layout, overlap)) {
      const auto it = report.event_class.find(ev);
      if (ev.same_detector() || it == report.event_class.end()) ps.unassigned += p;
      else if (own && it->second == *own) ps.correct += p;
      else ps.wrong += p;
    }
    if (policy == UnassignedPolicy::Discard) {
      const double kept = 1.0 - ps.unassigned;
      ps.success = kept > kSupportTolerance ? ps.correct / kept : 0.0;
    } else {
      ps.success = ps.correct;
    }
    const auto pit = priors.find(in.label);
    const double w = priors.empty() ? 1.0 : (pit == priors.end() ? 0.0 : pit->second);
    out.average += w * ps.success;
    weight_sum += w;
    out.per_state[in.label] = ps;
  }
  if (weight_sum > 0.0) out.average /= weight_sum;
  return out;
}

}  // namespace bellsieve
