#pragma once

// Optical elements and the circuit engine.
//
// Conventions:
//  * Beam splitter: symmetric 50-50, t = 1/sqrt(2), r = i/sqrt(2). A
//    reflected photon is mirrored in y and picks up (-1) if its transverse
//    parity is odd (when reflect_flips_y is set).
//  * PBS at basis angle theta: the e(theta) component is transmitted
//    (in1 -> out_t, in2 -> out_r), the orthogonal component is reflected
//    (in1 -> out_r, in2 -> out_t) with amplitude i * sigma(parity).
//  * Wave plate: R(theta) diag(e^{-i G/2}, e^{i G/2}) R(-theta), G = pi or pi/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bellsieve/twophoton.hpp"

namespace bellsieve {

struct BeamSplitter {
  std::string in1, in2, out1, out2;
  bool reflect_flips_y = true;
};

struct PolarizingBS {
  std::string in1;
  std::string in2;  // empty: vacuum port
  std::string out_t, out_r;
  double basis_angle_deg = 0.0;
  bool reflect_flips_y = true;
};

enum class PlateKind : std::uint8_t { Half, Quarter };

struct WavePlate {
  std::string path;
  PlateKind kind = PlateKind::Half;
  double fast_axis_deg = 0.0;
};

struct Delay {
  std::string path;
  double delta = 0.0;  // meters
};

struct Mirror {
  std::string path;
  bool flips_y = true;
};

using Element = std::variant<BeamSplitter, PolarizingBS, WavePlate, Delay, Mirror>;

namespace detail {

inline int reflection_sign(Parity p, bool flips) { return flips ? sign(p) : 1; }

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline PhotonMode moved(const PhotonMode& m, const std::string& path, Polarization pol) {
  return {path, pol, m.parity, m.temporal};
}

inline PhotonMode moved(const PhotonMode& m, const std::string& path) {
  return moved(m, path, m.pol);
}

using Jones = std::array<std::array<cplx, 2>, 2>;

inline Jones retarder(double fast_axis_deg, double retardance) {
  const double th = deg2rad(fast_axis_deg);
  const double c = std::cos(th), s = std::sin(th);
  const cplx e0 = std::polar(1.0, -retardance / 2.0);
  const cplx e1 = std::polar(1.0, retardance / 2.0);
  // R diag(e0, e1) R^T
  return {{{c * c * e0 + s * s * e1, c * s * (e0 - e1)},
           {c * s * (e0 - e1), s * s * e0 + c * c * e1}}};
}

inline int pol_index(Polarization p) { return p == Polarization::H ? 0 : 1; }

inline std::vector<std::string> inputs_of(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<std::string> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) return {el.in1, el.in2};
        else if constexpr (std::is_same_v<T, PolarizingBS>) {
          if (el.in2.empty()) return {el.in1};
          return {el.in1, el.in2};
        } else return {el.path};
      },
      e);
}

inline std::vector<std::string> outputs_of(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<std::string> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) return {el.out1, el.out2};
        else if constexpr (std::is_same_v<T, PolarizingBS>) return {el.out_t, el.out_r};
        else return {el.path};
      },
      e);
}

}  // namespace detail

/// All paths an element references.
inline std::vector<std::string> element_paths(const Element& e) {
  auto out = detail::inputs_of(e);
  for (auto& p : detail::outputs_of(e))
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

/// Column of the element's single-photon map for mode `m`.
inline ModeImage element_image(const BeamSplitter& bs, const PhotonMode& m) {
  const double t = 1.0 / kSqrt2;
  const cplx r = kI * (detail::reflection_sign(m.parity, bs.reflect_flips_y) / kSqrt2);
  if (m.path == bs.in1) return {{detail::moved(m, bs.out1), t}, {detail::moved(m, bs.out2), r}};
  if (m.path == bs.in2) return {{detail::moved(m, bs.out2), t}, {detail::moved(m, bs.out1), r}};
  return {{m, 1.0}};
}

inline ModeImage element_image(const PolarizingBS& pbs, const PhotonMode& m) {
  const bool from1 = m.path == pbs.in1;
  const bool from2 = !pbs.in2.empty() && m.path == pbs.in2;
  if (!from1 && !from2) return {{m, 1.0}};
  const double th = detail::deg2rad(pbs.basis_angle_deg);
  const double c = std::cos(th), s = std::sin(th);
  // Projections of the input polarization on e = (c, s) and e_perp = (-s, c).
  const double along = m.pol == Polarization::H ? c : s;
  const double across = m.pol == Polarization::H ? -s : c;
  const cplx r = kI * double(detail::reflection_sign(m.parity, pbs.reflect_flips_y));
  const std::string& straight = from1 ? pbs.out_t : pbs.out_r;
  const std::string& turned = from1 ? pbs.out_r : pbs.out_t;
  using enum Polarization;
  ModeImage img;
  img.reserve(4);
  img.emplace_back(detail::moved(m, straight, H), along * c);
  img.emplace_back(detail::moved(m, straight, V), along * s);
  img.emplace_back(detail::moved(m, turned, H), r * (across * -s));
  img.emplace_back(detail::moved(m, turned, V), r * (across * c));
  std::erase_if(img, [](const auto& kv) { return std::abs(kv.second) < kPruneTolerance; });
  return img;
}

inline ModeImage element_image(const WavePlate& wp, const PhotonMode& m) {
  if (m.path != wp.path) return {{m, 1.0}};
  const double retardance =
      wp.kind == PlateKind::Half ? std::numbers::pi : std::numbers::pi / 2.0;
  const auto j = detail::retarder(wp.fast_axis_deg, retardance);
  const int col = detail::pol_index(m.pol);
  ModeImage img{{detail::moved(m, m.path, Polarization::H), j[0][col]},
                {detail::moved(m, m.path, Polarization::V), j[1][col]}};
  std::erase_if(img, [](const auto& kv) { return std::abs(kv.second) < kPruneTolerance; });
  return img;
}

inline ModeImage element_image(const Delay&, const PhotonMode& m) { return {{m, 1.0}}; }

inline ModeImage element_image(const Mirror& mirror, const PhotonMode& m) {
  if (m.path != mirror.path) return {{m, 1.0}};
  return {{m, double(detail::reflection_sign(m.parity, mirror.flips_y))}};
}

inline ModeImage element_image(const Element& e, const PhotonMode& m) {
  return std::visit([&](const auto& el) { return element_image(el, m); }, e);
}

class Circuit {
 public:
  Circuit() = default;
  Circuit(std::vector<std::string> paths, std::vector<Element> elements)
      : paths_(std::move(paths)), elements_(std::move(elements)) {
    validate();
  }

  const std::vector<std::string>& paths() const noexcept { return paths_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }

  bool has_path(const std::string& p) const {
    return std::find(paths_.begin(), paths_.end(), p) != paths_.end();
  }

  void add_path(const std::string& p) {
    if (!has_path(p)) paths_.push_back(p);
  }

  void add(Element e) {
    check_element(e);
    elements_.push_back(std::move(e));
  }

  void validate() const {
    const std::set<std::string> unique(paths_.begin(), paths_.end());
    if (unique.size() != paths_.size()) throw std::invalid_argument("circuit: duplicate path");
    for (const auto& e : elements_) check_element(e);
  }

 private:
  void check_element(const Element& e) const {
    for (const auto& p : element_paths(e))
      if (!has_path(p)) throw std::invalid_argument("circuit: unregistered path '" + p + "'");
    std::visit(
        [](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            if (el.in1 == el.in2 || el.out1 == el.out2)
              throw std::invalid_argument("beam splitter: ports must be distinct paths");
          } else if constexpr (std::is_same_v<T, PolarizingBS>) {
            if (el.in1 == el.in2 || el.out_t == el.out_r)
              throw std::invalid_argument("pbs: ports must be distinct paths");
            if (!(el.basis_angle_deg >= 0.0 && el.basis_angle_deg < 180.0))
              throw std::invalid_argument("pbs: basis angle must lie in [0, 180)");
          }
        },
        e);
  }

  std::vector<std::string> paths_;
  std::vector<Element> elements_;
};

/// Applies one element. Output paths that are not also inputs must be empty.
inline TwoPhotonState apply_element(const TwoPhotonState& state, const Element& e) {
  const auto ins = detail::inputs_of(e);
  for (const auto& out : detail::outputs_of(e))
    if (std::find(ins.begin(), ins.end(), out) == ins.end() && state.populates(out))
      throw std::invalid_argument("element output path '" + out + "' is already populated");
  if (const auto* d = std::get_if<Delay>(&e)) {
    TwoPhotonState out = state;
    out.add_delay(d->path, d->delta);
    return out;
  }
  return transform(state, [&](const PhotonMode& m) { return element_image(e, m); });
}

inline TwoPhotonState apply_beam_splitter(const TwoPhotonState& s, const BeamSplitter& bs) {
  return apply_element(s, bs);
}
inline TwoPhotonState apply_pbs(const TwoPhotonState& s, const PolarizingBS& pbs) {
  return apply_element(s, pbs);
}
inline TwoPhotonState apply_waveplate(const TwoPhotonState& s, const WavePlate& wp) {
  return apply_element(s, wp);
}
inline TwoPhotonState apply_delay(const TwoPhotonState& s, const Delay& d) {
  return apply_element(s, d);
}
inline TwoPhotonState apply_mirror(const TwoPhotonState& s, const Mirror& m) {
  return apply_element(s, m);
}

inline constexpr double kNormDriftTolerance = 1e-9;

/// Applies the circuit's elements left to right.
inline TwoPhotonState run_circuit(const Circuit& circuit, const TwoPhotonState& state) {
  for (const auto& p : state.paths())
    if (!circuit.has_path(p))
      throw std::invalid_argument("run_circuit: state path '" + p + "' is not registered");
  const double norm_in = state.norm_squared();
  TwoPhotonState s = state;
  for (const auto& e : circuit.elements()) s = apply_element(s, e);
  if (std::abs(s.norm_squared() - norm_in) > kNormDriftTolerance)
    throw std::runtime_error("run_circuit: norm drift beyond tolerance (internal error)");
  return norm_in > 0.0 ? s.normalized() : s;
}

}  // namespace bellsieve
