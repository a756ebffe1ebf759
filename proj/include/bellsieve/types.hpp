#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bellsieve {

using cplx = std::complex<double>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr cplx kI{0.0, 1.0};

// Terms with |amplitude| below this are dropped after every state operation.
inline constexpr double kPruneTolerance = 1e-12;

// Transverse parity under y -> -y.
enum class Parity : std::uint8_t { Even, Odd };

constexpr int sign(Parity p) noexcept { return p == Parity::Even ? 1 : -1; }

constexpr Parity operator*(Parity a, Parity b) noexcept {
  return a == b ? Parity::Even : Parity::Odd;
}

constexpr std::string_view to_string(Parity p) noexcept {
  return p == Parity::Even ? "even" : "odd";
}

inline Parity parse_parity(std::string_view s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw std::invalid_argument("unknown parity '" + std::string(s) + "'");
}

enum class Polarization : std::uint8_t { H, V };

constexpr std::string_view to_string(Polarization p) noexcept {
  return p == Polarization::H ? "H" : "V";
}

inline Polarization parse_polarization(std::string_view s) {
  if (s == "H" || s == "h") return Polarization::H;
  if (s == "V" || s == "v") return Polarization::V;
  throw std::invalid_argument("unknown polarization '" + std::string(s) + "'");
}

enum class BellKind : std::uint8_t { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<BellKind, 4> kAllBellKinds{
    BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus};

constexpr std::string_view to_string(BellKind k) noexcept {
  switch (k) {
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
  }
  return "?";
}

inline BellKind parse_bell_kind(std::string_view s) {
  for (auto k : kAllBellKinds)
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown Bell state '" + std::string(s) + "'");
}

constexpr bool is_psi(BellKind k) noexcept {
  return k == BellKind::PsiPlus || k == BellKind::PsiMinus;
}

constexpr int relative_sign(BellKind k) noexcept {
  return (k == BellKind::PsiPlus || k == BellKind::PhiPlus) ? 1 : -1;
}

}  // namespace bellsieve
