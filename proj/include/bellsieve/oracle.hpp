#pragma once

// Dense reference for the circuit engine. Each element becomes an M x M
// single-photon matrix built from Jones algebra; the circuit product is
// lifted to the symmetric two-photon space through 2x2 permanents,
//   <kl| S |ij> = perm(U[{k,l},{i,j}]) / sqrt(mu(kl) mu(ij)),
// where mu is the product of occupation factorials.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsieve/optics.hpp"

namespace bellsieve::oracle {

inline constexpr std::size_t kMaxModes = 32;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class ModeBasis {
 public:
  ModeBasis(const Circuit& circuit, const TwoPhotonState& state) {
    std::set<std::string> paths(circuit.paths().begin(), circuit.paths().end());
    for (const auto& p : state.paths()) paths.insert(p);
    // Elements never change parity or temporal tag, so only the labels the
    // state carries are needed.
    std::set<int> tags;
    std::set<Parity> parities;
    for (const auto& [pair, amp] : state.terms())
      for (const auto* m : {&pair.first, &pair.second}) {
        tags.insert(m->temporal);
        parities.insert(m->parity);
      }
    if (tags.empty()) tags.insert(0);
    if (parities.empty()) parities.insert(Parity::Even);
    for (const auto& path : paths)
      for (auto pol : {Polarization::H, Polarization::V})
        for (auto par : parities)
          for (int t : tags) modes_.push_back({path, pol, par, t});
    if (modes_.size() > kMaxModes)
      throw std::length_error("oracle: " + std::to_string(modes_.size()) +
                              " modes exceed the dense cap of " + std::to_string(kMaxModes));
    for (std::size_t i = 0; i < modes_.size(); ++i) index_[modes_[i]] = i;
  }

  std::size_t size() const noexcept { return modes_.size(); }
  const PhotonMode& mode(std::size_t i) const { return modes_[i]; }
  std::size_t index(const PhotonMode& m) const { return index_.at(m); }

  /// Index of the symmetric basis vector {i, j}, i <= j.
  std::size_t pair_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t m = size();
    return i * m - i * (i - 1) / 2 + (j - i);
  }
  std::size_t pair_dimension() const noexcept { return size() * (size() + 1) / 2; }

 private:
  std::vector<PhotonMode> modes_;
  std::map<PhotonMode, std::size_t> index_;
};

namespace detail {

using Jones = Eigen::Matrix2cd;

inline Jones rotation(double deg) {
  const double th = deg * std::numbers::pi / 180.0;
  Jones r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

inline Jones waveplate_jones(const WavePlate& wp) {
  const double g = wp.kind == PlateKind::Half ? std::numbers::pi : std::numbers::pi / 2.0;
  Jones d = Jones::Zero();
  d(0, 0) = std::polar(1.0, -g / 2.0);
  d(1, 1) = std::polar(1.0, g / 2.0);
  const Jones r = rotation(wp.fast_axis_deg);
  return r * d * r.transpose();
}

inline int pidx(Polarization p) { return p == Polarization::H ? 0 : 1; }

inline double rsign(Parity p, bool flips) { return (flips && p == Parity::Odd) ? -1.0 : 1.0; }

/// Matrix of one element. Columns of modes the element does not act on are
/// identity columns.
inline Matrix element_matrix(const ModeBasis& basis, const Element& e) {
  const std::size_t m = basis.size();
  Matrix u = Matrix::Identity(Eigen::Index(m), Eigen::Index(m));
  auto at = [&](const std::string& path, Polarization pol, const PhotonMode& like) {
    return Eigen::Index(basis.index({path, pol, like.parity, like.temporal}));
  };
  for (std::size_t col = 0; col < m; ++col) {
    const PhotonMode& in = basis.mode(col);
    const auto c = Eigen::Index(col);
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      const bool one = in.path == bs->in1, two = in.path == bs->in2;
      if (!one && !two) continue;
      u.col(c).setZero();
      const cplx r = cplx(0.0, rsign(in.parity, bs->reflect_flips_y)) / std::sqrt(2.0);
      u(at(one ? bs->out1 : bs->out2, in.pol, in), c) += 1.0 / std::sqrt(2.0);
      u(at(one ? bs->out2 : bs->out1, in.pol, in), c) += r;
    } else if (const auto* pbs = std::get_if<PolarizingBS>(&e)) {
      const bool one = in.path == pbs->in1;
      const bool two = !pbs->in2.empty() && in.path == pbs->in2;
      if (!one && !two) continue;
      u.col(c).setZero();
      const Jones rot = rotation(pbs->basis_angle_deg);
      const Eigen::Vector2cd e_par = rot.col(0), e_perp = rot.col(1);
      const Jones pass = e_par * e_par.transpose();
      const Jones turn = e_perp * e_perp.transpose();
      const cplx r(0.0, rsign(in.parity, pbs->reflect_flips_y));
      const std::string& straight = one ? pbs->out_t : pbs->out_r;
      const std::string& turned = one ? pbs->out_r : pbs->out_t;
      const int k = pidx(in.pol);
      for (auto pol : {Polarization::H, Polarization::V}) {
        u(at(straight, pol, in), c) += pass(pidx(pol), k);
        u(at(turned, pol, in), c) += r * turn(pidx(pol), k);
      }
    } else if (const auto* wp = std::get_if<WavePlate>(&e)) {
      if (in.path != wp->path) continue;
      u.col(c).setZero();
      const Jones j = waveplate_jones(*wp);
      for (auto pol : {Polarization::H, Polarization::V})
        u(at(in.path, pol, in), c) += j(pidx(pol), pidx(in.pol));
    } else if (const auto* mir = std::get_if<Mirror>(&e)) {
      if (in.path == mir->path) u(c, c) = rsign(in.parity, mir->flips_y);
    }
  }
  return u;
}

}  // namespace detail

/// Product of the element matrices, last element leftmost.
inline Matrix circuit_matrix(const ModeBasis& basis, const Circuit& circuit) {
  const auto m = Eigen::Index(basis.size());
  Matrix u = Matrix::Identity(m, m);
  for (const auto& e : circuit.elements()) u = detail::element_matrix(basis, e) * u;
  return u;
}

/// Symmetric-space lift of a single-photon matrix.
inline Matrix symmetric_lift(const ModeBasis& basis, const Matrix& u) {
  const std::size_t m = basis.size();
  const auto dim = Eigen::Index(basis.pair_dimension());
  Matrix s = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k; l < m; ++l) {
          const auto ki = Eigen::Index(k), li = Eigen::Index(l);
          const auto ii = Eigen::Index(i), ji = Eigen::Index(j);
          const cplx perm = u(ki, ii) * u(li, ji) + u(ki, ji) * u(li, ii);
          const double mu = (i == j ? 2.0 : 1.0) * (k == l ? 2.0 : 1.0);
          s(Eigen::Index(basis.pair_index(k, l)), Eigen::Index(basis.pair_index(i, j))) =
              perm / std::sqrt(mu);
        }
  return s;
}

inline Vector to_vector(const ModeBasis& basis, const TwoPhotonState& state) {
  Vector v = Vector::Zero(Eigen::Index(basis.pair_dimension()));
  for (const auto& [pair, amp] : state.terms())
    v(Eigen::Index(basis.pair_index(basis.index(pair.first), basis.index(pair.second)))) = amp;
  return v;
}

inline TwoPhotonState from_vector(const ModeBasis& basis, const Vector& v,
                                  const TwoPhotonState& like) {
  TwoPhotonState out = like.empty_like();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      const cplx a = v(Eigen::Index(basis.pair_index(i, j)));
      if (std::abs(a) >= kPruneTolerance) out.set(ModePair::of(basis.mode(i), basis.mode(j)), a);
    }
  return out;
}

/// Runs `circuit` on `state` through the dense symmetric-space route.
inline TwoPhotonState dense_run(const Circuit& circuit, const TwoPhotonState& state) {
  const ModeBasis basis(circuit, state);
  const Matrix s = symmetric_lift(basis, circuit_matrix(basis, circuit));
  TwoPhotonState out = from_vector(basis, s * to_vector(basis, state), state);
  for (const auto& e : circuit.elements())
    if (const auto* d = std::get_if<Delay>(&e)) out.add_delay(d->path, d->delta);
  return out;
}

/// Compares run_circuit with the dense route within `tolerance`, up to a
/// global phase.
inline bool oracle_check(const Circuit& circuit, const TwoPhotonState& state,
                         double tolerance = 1e-9) {
  const ModeBasis basis(circuit, state);
  const Vector dense = symmetric_lift(basis, circuit_matrix(basis, circuit)) *
                       to_vector(basis, state);
  const Vector sparse = to_vector(basis, run_circuit(circuit, state));
  const cplx overlap = sparse.dot(dense);  // conjugates `sparse`
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  const double dn = dense.norm(), sn = sparse.norm();
  if (dn == 0.0 || sn == 0.0) return dn == sn;
  return (dense / dn - phase * sparse / sn).norm() <= tolerance;
}

}  // namespace bellsieve::oracle
