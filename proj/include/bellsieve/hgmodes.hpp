#pragma once

// Hermite-Gaussian beam modes and the two-photon coincidence amplitude at
// the outputs of a balanced HOM interferometer.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bellsieve/types.hpp"

namespace bellsieve::hg {

inline constexpr double kPumpWavelength = 351.1e-9;
inline constexpr double kPhotonWavelength = 702.2e-9;
inline constexpr double kDefaultWaist = 1e-3;

/// Physicists' Hermite polynomial H_n(x) by upward recurrence.
inline double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: negative order");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// HG_mn beam with waist `waist` (m) at z = 0 and wavelength `wavelength` (m).
class HGMode {
 public:
  HGMode(int m, int n, double waist = kDefaultWaist, double wavelength = kPumpWavelength)
      : m_(m), n_(n), waist_(waist), wavelength_(wavelength) {
    if (m < 0 || n < 0) throw std::invalid_argument("HGMode: indices must be >= 0");
    if (!(waist > 0.0)) throw std::invalid_argument("HGMode: waist must be > 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("HGMode: wavelength must be > 0");
  }

  static HGMode gaussian(double waist = kDefaultWaist, double wavelength = kPumpWavelength) {
    return {0, 0, waist, wavelength};
  }
  static HGMode hg01(double waist = kDefaultWaist, double wavelength = kPumpWavelength) {
    return {0, 1, waist, wavelength};
  }

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  double waist() const noexcept { return waist_; }
  double wavelength() const noexcept { return wavelength_; }

  double wave_number() const noexcept { return 2.0 * std::numbers::pi / wavelength_; }
  double rayleigh_range() const noexcept {
    return std::numbers::pi * waist_ * waist_ / wavelength_;
  }
  double width(double z) const noexcept {
    const double t = z / rayleigh_range();
    return waist_ * std::sqrt(1.0 + t * t);
  }
  /// R(z) = (z^2 + z_R^2)/z; infinite at the waist plane.
  double curvature_radius(double z) const noexcept {
    if (z == 0.0) return std::numeric_limits<double>::infinity();
    const double zr = rayleigh_range();
    return (z * z + zr * zr) / z;
  }
  double gouy_phase(double z) const noexcept { return std::atan(z / rayleigh_range()); }

  /// L2 normalization: sqrt(2 / (pi 2^(m+n) m! n!)); the 1/w(z) factor is
  /// applied separately so the norm holds at every z.
  double norm_constant() const noexcept {
    const double log_c = 0.5 * (std::log(2.0 / std::numbers::pi) -
                                (m_ + n_) * std::log(2.0) - std::lgamma(m_ + 1.0) -
                                std::lgamma(n_ + 1.0));
    return std::exp(log_c);
  }

  std::string label() const { return "HG" + std::to_string(m_) + std::to_string(n_); }

 private:
  int m_;
  int n_;
  double waist_;
  double wavelength_;
};

struct DetectorPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Field of `mode` at `p`, unit L2 norm in every transverse plane. The
/// envelope decays as exp(-(x^2+y^2)/w^2). `gouy_offset` shifts the Gouy
/// angle and only changes the global phase.
inline cplx hg_field(const HGMode& mode, const DetectorPoint& p, double gouy_offset = 0.0) {
  const double w = mode.width(p.z);
  const double r2 = p.x * p.x + p.y * p.y;
  const double amplitude = mode.norm_constant() / w *
                           hermite(mode.m(), kSqrt2 * p.x / w) *
                           hermite(mode.n(), kSqrt2 * p.y / w) * std::exp(-r2 / (w * w));
  const double curvature = mode.wave_number() * r2 / (2.0 * mode.curvature_radius(p.z));
  const double gouy = (mode.m() + mode.n() + 1) * (mode.gouy_phase(p.z) + gouy_offset);
  return amplitude * std::polar(1.0, -curvature - gouy);
}

/// Parity of the mode under y -> -y: even iff n is even.
inline Parity y_parity(const HGMode& mode) noexcept {
  return mode.n() % 2 == 0 ? Parity::Even : Parity::Odd;
}

/// Pump beam whose transverse profile W(x, y, Z) is transferred to the
/// two-photon coincidence amplitude.
struct PumpProfile {
  HGMode mode;
  double norm_constant;
  double wave_number;

  explicit PumpProfile(HGMode m)
      : mode(m), norm_constant(m.norm_constant()), wave_number(m.wave_number()) {}

  static PumpProfile gaussian(double waist = kDefaultWaist) {
    return PumpProfile(HGMode::gaussian(waist));
  }
  static PumpProfile hg01(double waist = kDefaultWaist) {
    return PumpProfile(HGMode::hg01(waist));
  }

  Parity parity() const noexcept { return y_parity(mode); }

  cplx profile(double x, double y, double z) const { return hg_field(mode, {x, y, z}); }
};

enum class PolarizationStructure : std::uint8_t { HVPlusVH, HVMinusVH, HHPlusVV, HHMinusVV };

constexpr std::string_view to_string(PolarizationStructure s) noexcept {
  switch (s) {
    case PolarizationStructure::HVPlusVH: return "hv+vh";
    case PolarizationStructure::HVMinusVH: return "hv-vh";
    case PolarizationStructure::HHPlusVV: return "hh+vv";
    case PolarizationStructure::HHMinusVV: return "hh-vv";
  }
  return "?";
}

constexpr PolarizationStructure polarization_structure(BellKind k) noexcept {
  switch (k) {
    case BellKind::PsiPlus: return PolarizationStructure::HVPlusVH;
    case BellKind::PsiMinus: return PolarizationStructure::HVMinusVH;
    case BellKind::PhiPlus: return PolarizationStructure::HHPlusVV;
    case BellKind::PhiMinus: return PolarizationStructure::HHMinusVV;
  }
  return PolarizationStructure::HVPlusVH;
}

struct CoincidenceAmplitude {
  cplx value;
  PolarizationStructure polarization;
};

/// Bracket W(c, Z) -/+ W(c', Z) with c the detection centroid and c' its
/// mirror image in y. psi+ takes the minus sign, psi- the plus sign, and
/// both phi states the minus sign.
inline cplx coincidence_bracket(BellKind bell, const PumpProfile& pump,
                                const DetectorPoint& r1, const DetectorPoint& r2) {
  const double cx = 0.5 * (r1.x + r2.x);
  const double cy = 0.5 * (r1.y + r2.y);
  const double z = r1.z;
  const cplx direct = pump.profile(cx, cy, z);
  const cplx mirrored = pump.profile(cx, -cy, z);
  return bell == BellKind::PsiMinus ? direct + mirrored : direct - mirrored;
}

/// Coincidence-detection amplitude for a polarization Bell state behind a
/// balanced, symmetric beam splitter, detectors in a common plane z = Z.
inline CoincidenceAmplitude coincidence_amplitude(BellKind bell, const PumpProfile& pump,
                                                  const DetectorPoint& r1,
                                                  const DetectorPoint& r2) {
  if (!(r1.z > 0.0) || !(r2.z > 0.0))
    throw std::invalid_argument("coincidence_amplitude: detector plane Z must be > 0");
  if (r1.z != r2.z)
    throw std::invalid_argument("coincidence_amplitude: detectors must share one plane");
  const double dx = r1.x - r2.x;
  const double dy = r1.y - r2.y;
  const cplx prefactor = std::polar(1.0, pump.wave_number / (2.0 * r1.z) * (dx * dx + dy * dy));
  return {prefactor * coincidence_bracket(bell, pump, r1, r2), polarization_structure(bell)};
}

}  // namespace bellsieve::hg
