#pragma once

// Randomized invariants shared by the property tests and the acceptance run.
// Each check returns how many cases it ran and the first failure, if any.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bellsieve/oracle.hpp"
#include "reference.hpp"

namespace bellsieve::testing {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

/// Symmetric lift of random circuit matrices is unitary.
inline PropertyResult check_unitarity(std::uint64_t seed, std::size_t n) {
  PropertyResult r{"unitarity", 0, 0, {}};
  auto rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> npaths(2, 4), nel(1, 8);
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const auto c = random_circuit(rng, npaths(rng), nel(rng));
    const auto s = random_state(rng, c, 2);
    const oracle::ModeBasis basis(c, s);
    const auto u = oracle::circuit_matrix(basis, c);
    const auto lifted = oracle::symmetric_lift(basis, u);
    const auto id = oracle::Matrix::Identity(lifted.rows(), lifted.cols());
    const double e1 = (u.adjoint() * u - oracle::Matrix::Identity(u.rows(), u.cols())).norm();
    const double e2 = (lifted.adjoint() * lifted - id).norm();
    if (e1 > 1e-9 || e2 > 1e-9) r.fail("case " + std::to_string(k) + ": deviation " + std::to_string(std::max(e1, e2)));
  }
  return r;
}

/// Element-by-element norm preservation and normalized event distributions.
inline PropertyResult check_normalization(std::uint64_t seed, std::size_t n) {
  PropertyResult r{"normalization", 0, 0, {}};
  auto rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> npaths(2, 6), nel(1, 12), nterms(1, 6);
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const auto c = random_circuit(rng, npaths(rng), nel(rng));
    auto s = random_state(rng, c, nterms(rng));
    for (const auto& e : c.elements()) s = apply_element(s, e);
    if (std::abs(s.norm_squared() - 1.0) > 1e-9) {
      r.fail("case " + std::to_string(k) + ": norm " + std::to_string(s.norm_squared()));
      continue;
    }
    std::vector<Detector> dets;
    for (const auto& p : c.paths()) dets.push_back({p, p});
    double total = 0.0;
    for (const auto& [ev, p] : event_distribution(s, DetectorLayout(dets))) total += p;
    if (std::abs(total - 1.0) > 1e-9) r.fail("case " + std::to_string(k) + ": events sum " + std::to_string(total));
  }
  return r;
}

/// Joint transverse parity of a pumped state survives any circuit.
inline PropertyResult check_parity_conservation(std::uint64_t seed, std::size_t n) {
  PropertyResult r{"joint-parity conservation", 0, 0, {}};
  auto rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> npaths(2, 6), nel(1, 12);
  std::uniform_int_distribution<int> bell(0, 3);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const auto c = random_circuit(rng, npaths(rng), nel(rng));
    const Parity pump = coin(rng) ? Parity::Odd : Parity::Even;
    const auto in = attach_pump_parity(
        bell_state(kAllBellKinds[std::size_t(bell(rng))], c.paths()[0], c.paths()[1]), pump);
    const auto out = run_circuit(c, in);
    if (joint_parity(out) != std::optional<Parity>(pump))
      r.fail("case " + std::to_string(k) + ": parity not conserved");
  }
  return r;
}

/// A random polarization state of photons in paths "1","2", built by random
/// wave plates acting on a random Bell state.
inline TwoPhotonState random_polarization_state(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bell(0, 3);
  std::uniform_real_distribution<double> angle(0.0, 180.0);
  std::bernoulli_distribution coin(0.5);
  Circuit prep({"1", "2"}, {});
  for (int i = 0; i < 4; ++i)
    prep.add(WavePlate{coin(rng) ? "1" : "2", coin(rng) ? PlateKind::Half : PlateKind::Quarter,
                       angle(rng)});
  return run_circuit(prep, bell_state(kAllBellKinds[std::size_t(bell(rng))], "1", "2"));
}

/// P(cross) + P(bunched) = 1 at one BS and P_coinc(even) + P_coinc(odd) = 1.
inline PropertyResult check_pump_complementarity(std::uint64_t seed, std::size_t n) {
  PropertyResult r{"pump-parity complementarity", 0, 0, {}};
  auto rng = make_rng(seed);
  const auto setup = HomSetup::make(0.0);
  const auto cross = DetectionEvent::of("A", "B");
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const auto pol = random_polarization_state(rng);
    double coinc[2] = {0.0, 0.0};
    for (const auto pump : {Parity::Even, Parity::Odd}) {
      const auto dist = event_distribution(run_circuit(setup.circuit, attach_pump_parity(pol, pump)),
                                           setup.layout);
      const double pc = probability_of(dist, cross);
      const double pb = probability_of(dist, DetectionEvent::of("A", "A")) +
                        probability_of(dist, DetectionEvent::of("B", "B"));
      if (std::abs(pc + pb - 1.0) > 1e-9) r.fail("case " + std::to_string(k) + ": cross + bunched != 1");
      coinc[pump == Parity::Odd] = pc;
    }
    if (std::abs(coinc[0] + coinc[1] - 1.0) > 1e-9)
      r.fail("case " + std::to_string(k) + ": P_even + P_odd = " + std::to_string(coinc[0] + coinc[1]));
  }
  return r;
}

/// HOM curves on symmetric grids are mirror symmetric and monotone in |delta|.
inline PropertyResult check_hom_shape(std::uint64_t seed, std::size_t n) {
  PropertyResult r{"HOM symmetry/monotonicity", 0, 0, {}};
  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> bell(0, 3), npts(3, 15);
  std::uniform_real_distribution<double> fwhm(0.3e-9, 5e-9), span(50e-6, 1500e-6);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const auto kind = kAllBellKinds[std::size_t(bell(rng))];
    const Parity pump = coin(rng) ? Parity::Odd : Parity::Even;
    const auto model = OverlapModel::from_filter(hg::kPhotonWavelength, fwhm(rng));
    const int m = npts(rng);
    const double width = span(rng);
    std::vector<double> grid;
    for (int i = -m; i <= m; ++i) grid.push_back(width * i / m);
    const auto curve = hom_scan(kind, pump, grid, model);
    const double p0 = curve[std::size_t(m)].p_coinc;
    const double far = curve.back().p_coinc;
    const bool dip = p0 <= far;
    for (int i = 0; i <= m; ++i) {
      const double a = curve[std::size_t(m + i)].p_coinc, b = curve[std::size_t(m - i)].p_coinc;
      if (std::abs(a - b) > 1e-12) r.fail("case " + std::to_string(k) + ": asymmetric");
      if (i > 0) {
        const double prev = curve[std::size_t(m + i - 1)].p_coinc;
        if (dip ? a < prev - 1e-12 : a > prev + 1e-12)
          r.fail("case " + std::to_string(k) + ": not monotone");
      }
    }
  }
  return r;
}

/// Average success is nondecreasing in the overlap.
inline PropertyResult check_success_monotone(std::uint64_t seed, std::size_t n,
                                             const io::CircuitFile& file) {
  PropertyResult r{"success monotone in overlap", 0, 0, {}};
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<SourceInput> inputs;
  for (auto k : kAllBellKinds)
    inputs.push_back({std::string(to_string(k)), file.source(k), file.delayed_paths});
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    double o1 = unit(rng), o2 = unit(rng);
    if (o2 < o1) std::swap(o1, o2);
    const Parity pump = coin(rng) ? Parity::Odd : Parity::Even;
    const auto policy = coin(rng) ? UnassignedPolicy::Discard : UnassignedPolicy::CountAsError;
    const double s1 = success_probability(file.circuit, file.layout, pump, o1, inputs, {}, policy).average;
    const double s2 = success_probability(file.circuit, file.layout, pump, o2, inputs, {}, policy).average;
    if (s2 < s1 - 1e-12) r.fail("case " + std::to_string(k) + ": success decreased");
  }
  return r;
}

/// classify gives the same partition after renaming detector ids.
inline PropertyResult check_relabel_invariance(std::uint64_t seed, std::size_t n,
                                               const io::CircuitFile& file) {
  PropertyResult r{"classify relabeling invariance", 0, 0, {}};
  auto rng = make_rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::string> ids;
  for (const auto& d : file.layout.detectors()) ids.push_back(d.id);
  for (std::size_t k = 0; k < n; ++k, ++r.cases) {
    const Parity pump = coin(rng) ? Parity::Odd : Parity::Even;
    auto shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::map<std::string, std::string> rename;
    for (std::size_t i = 0; i < ids.size(); ++i) rename[ids[i]] = "d" + shuffled[i];
    std::vector<LabeledState> in;
    for (auto kind : kAllBellKinds)
      in.push_back({std::string(to_string(kind)), attach_pump_parity(file.source(kind), pump)});
    const auto a = classify(signature_table(file.circuit, in, file.layout));
    const auto b = classify(signature_table(file.circuit, in, file.layout.relabeled(rename)));
    auto canon = [](auto classes) {
      for (auto& c : classes) std::sort(c.begin(), c.end());
      std::sort(classes.begin(), classes.end());
      return classes;
    };
    if (canon(a.classes) != canon(b.classes)) r.fail("case " + std::to_string(k) + ": partition changed");
  }
  return r;
}

}  // namespace bellsieve::testing
