#pragma once

// Two-photon states over unordered pairs of single-photon modes.
//
// Amplitudes are stored in the orthonormal symmetric Fock basis:
//   {a, b}, a != b  ->  a+ b+ |0>
//   {a, a}          ->  (a+)^2 / sqrt(2) |0>
// so the norm is the plain sum of |amplitude|^2 and bosonic symmetry is a
// property of the key type rather than a runtime check.

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellsieve/hgmodes.hpp"
#include "bellsieve/types.hpp"

namespace bellsieve {

struct PhotonMode {
  std::string path;
  Polarization pol = Polarization::H;
  Parity parity = Parity::Even;
  int temporal = 0;

  auto operator<=>(const PhotonMode&) const = default;
  bool operator==(const PhotonMode&) const = default;
};

inline std::string to_string(const PhotonMode& m) {
  std::string s = m.path + ":" + std::string(to_string(m.pol));
  if (m.parity == Parity::Odd) s += ":odd";
  if (m.temporal != 0) s += ":t" + std::to_string(m.temporal);
  return s;
}

/// Unordered pair of modes, stored with first <= second.
struct ModePair {
  PhotonMode first;
  PhotonMode second;

  static ModePair of(PhotonMode a, PhotonMode b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
  }

  bool bunched() const { return first == second; }

  auto operator<=>(const ModePair&) const = default;
  bool operator==(const ModePair&) const = default;
};

/// Image of one mode under a linear single-photon map.
using ModeImage = std::vector<std::pair<PhotonMode, cplx>>;

class TwoPhotonState {
 public:
  using TermMap = std::map<ModePair, cplx>;

  TwoPhotonState() = default;

  void add(const PhotonMode& a, const PhotonMode& b, cplx amplitude) {
    terms_[ModePair::of(a, b)] += amplitude;
  }
  void set(const ModePair& pair, cplx amplitude) { terms_[pair] = amplitude; }

  cplx amplitude(const PhotonMode& a, const PhotonMode& b) const {
    const auto it = terms_.find(ModePair::of(a, b));
    return it == terms_.end() ? cplx{} : it->second;
  }

  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& [pair, amp] : terms_) n += std::norm(amp);
    return n;
  }

  TwoPhotonState normalized() const {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) throw std::domain_error("cannot normalize the zero state");
    TwoPhotonState out = *this;
    for (auto& [pair, amp] : out.terms_) amp /= n;
    return out;
  }

  void prune(double tolerance = kPruneTolerance) {
    std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) < tolerance; });
  }

  std::set<std::string> paths() const {
    std::set<std::string> out;
    for (const auto& [pair, amp] : terms_) {
      out.insert(pair.first.path);
      out.insert(pair.second.path);
    }
    return out;
  }

  bool populates(const std::string& path) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const auto& kv) {
      return kv.first.first.path == path || kv.first.second.path == path;
    });
  }

  std::set<int> temporal_tags() const {
    std::set<int> out;
    for (const auto& [pair, amp] : terms_) {
      out.insert(pair.first.temporal);
      out.insert(pair.second.temporal);
    }
    return out;
  }

  // Pump parity already folded into the per-photon parity labels, if any.
  std::optional<Parity> pump_parity() const noexcept { return pump_parity_; }
  void mark_pump_parity(Parity p) noexcept { pump_parity_ = p; }

  // Path-length offsets recorded by delay elements (meters).
  const std::map<std::string, double>& delays() const noexcept { return delays_; }
  double delay(const std::string& path) const {
    const auto it = delays_.find(path);
    return it == delays_.end() ? 0.0 : it->second;
  }
  void add_delay(const std::string& path, double delta) { delays_[path] += delta; }

  /// Copy with the same metadata and no terms.
  TwoPhotonState empty_like() const {
    TwoPhotonState out;
    out.pump_parity_ = pump_parity_;
    out.delays_ = delays_;
    return out;
  }

 private:
  TermMap terms_;
  std::optional<Parity> pump_parity_;
  std::map<std::string, double> delays_;
};

/// Lifts a linear single-photon map to the two-photon space. `image(mode)`
/// returns the map's column for `mode`; modes it does not touch must map to
/// themselves with amplitude 1.
template <class ImageFn>
TwoPhotonState transform(const TwoPhotonState& state, ImageFn&& image) {
  // Work with creation-polynomial coefficients so both photons can be
  // substituted independently, then convert back to the orthonormal basis.
  std::map<ModePair, cplx> poly;
  for (const auto& [pair, amp] : state.terms()) {
    const cplx coeff = pair.bunched() ? amp / kSqrt2 : amp;
    const ModeImage first = image(pair.first);
    const ModeImage second = image(pair.second);
    for (const auto& [m1, u1] : first)
      for (const auto& [m2, u2] : second) poly[ModePair::of(m1, m2)] += coeff * u1 * u2;
  }
  TwoPhotonState out = state.empty_like();
  for (const auto& [pair, c] : poly) out.set(pair, pair.bunched() ? c * kSqrt2 : c);
  out.prune();
  return out;
}

inline cplx inner_product(const TwoPhotonState& lhs, const TwoPhotonState& rhs) {
  cplx sum{};
  for (const auto& [pair, amp] : lhs.terms()) {
    const auto it = rhs.terms().find(pair);
    if (it != rhs.terms().end()) sum += std::conj(amp) * it->second;
  }
  return sum;
}

/// |<a|b>| / (|a| |b|); 1 means equal up to a global phase.
inline double overlap_magnitude(const TwoPhotonState& a, const TwoPhotonState& b) {
  const double na = std::sqrt(a.norm_squared());
  const double nb = std::sqrt(b.norm_squared());
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(inner_product(a, b)) / (na * nb);
}

inline bool equal_up_to_phase(const TwoPhotonState& a, const TwoPhotonState& b,
                              double tolerance = 1e-9) {
  return std::abs(1.0 - overlap_magnitude(a, b)) <= tolerance;
}

inline TwoPhotonState bell_state(BellKind kind, const std::string& p1, const std::string& p2) {
  if (p1 == p2) throw std::invalid_argument("bell_state: the two paths must differ");
  using enum Polarization;
  const double a = 1.0 / kSqrt2;
  const double s = relative_sign(kind);
  TwoPhotonState st;
  if (is_psi(kind)) {
    st.add({p1, H}, {p2, V}, a);
    st.add({p1, V}, {p2, H}, s * a);
  } else {
    st.add({p1, H}, {p2, H}, a);
    st.add({p1, V}, {p2, V}, s * a);
  }
  return st;
}

/// Two-path Bell pair (a,b) plus (c,d) in superposition, amplitude 1/2 each.
inline TwoPhotonState hyper_state(BellKind kind, const std::string& a, const std::string& b,
                                  const std::string& c, const std::string& d) {
  const std::set<std::string> distinct{a, b, c, d};
  if (distinct.size() != 4) throw std::invalid_argument("hyper_state: paths must be distinct");
  using enum Polarization;
  const double s = relative_sign(kind);
  TwoPhotonState st;
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{c, d}}) {
    if (is_psi(kind)) {
      st.add({x, H}, {y, V}, 0.5);
      st.add({x, V}, {y, H}, s * 0.5);
    } else {
      st.add({x, H}, {y, H}, 0.5);
      st.add({x, V}, {y, V}, s * 0.5);
    }
  }
  return st;
}

/// Folds the pump's joint y-parity into per-photon parity labels. Even pump:
/// labels stay (Even, Even). Odd pump: each pair a+ b+ becomes
/// (a+_E b+_O + a+_O b+_E)/sqrt(2).
inline TwoPhotonState attach_pump_parity(const TwoPhotonState& state, Parity pump) {
  if (state.pump_parity())
    throw std::logic_error("attach_pump_parity: pump parity already attached");
  for (const auto& [pair, amp] : state.terms())
    if (pair.first.parity != Parity::Even || pair.second.parity != Parity::Even)
      throw std::logic_error("attach_pump_parity: state already carries odd parity labels");

  TwoPhotonState out = state.empty_like();
  out.mark_pump_parity(pump);
  if (pump == Parity::Even) {
    for (const auto& [pair, amp] : state.terms()) out.set(pair, amp);
    return out;
  }
  std::map<ModePair, cplx> poly;
  for (const auto& [pair, amp] : state.terms()) {
    const cplx coeff = (pair.bunched() ? amp / kSqrt2 : amp) / kSqrt2;
    PhotonMode ae = pair.first, ao = pair.first, be = pair.second, bo = pair.second;
    ao.parity = Parity::Odd;
    bo.parity = Parity::Odd;
    poly[ModePair::of(ae, bo)] += coeff;
    poly[ModePair::of(ao, be)] += coeff;
  }
  for (const auto& [pair, c] : poly) out.set(pair, pair.bunched() ? c * kSqrt2 : c);
  out.prune();
  return out;
}

inline TwoPhotonState attach_pump_parity(const TwoPhotonState& state,
                                         const hg::PumpProfile& pump) {
  return attach_pump_parity(state, pump.parity());
}

/// Moves every photon on one of `paths` into temporal mode `tag`, making it
/// distinguishable from photons left in mode 0.
inline TwoPhotonState with_temporal_tag(const TwoPhotonState& state,
                                        const std::vector<std::string>& paths, int tag) {
  return transform(state, [&](const PhotonMode& m) {
    PhotonMode out = m;
    if (std::find(paths.begin(), paths.end(), m.path) != paths.end()) out.temporal = tag;
    return ModeImage{{out, 1.0}};
  });
}

/// Joint parity of every term; nullopt if terms disagree.
inline std::optional<Parity> joint_parity(const TwoPhotonState& state) {
  std::optional<Parity> p;
  for (const auto& [pair, amp] : state.terms()) {
    const Parity q = pair.first.parity * pair.second.parity;
    if (p && *p != q) return std::nullopt;
    p = q;
  }
  return p;
}

}  // namespace bellsieve
