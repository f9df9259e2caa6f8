#pragma once

#include <random>

#include "quantum_state.hpp"

namespace blochsep {

/// Haar-distributed unit vector: normalized complex Gaussian.
template <class Rng>
CVector haar_ket(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

template <class Rng>
MultiState haar_pure_state(const DimsProfile& profile, Rng& rng) {
  return from_ket(profile, haar_ket(profile.total(), rng));
}

/// G G^dagger / Tr(G G^dagger) for a D x rank complex Gaussian G
/// (Hilbert-Schmidt measure when rank = D).
template <class Rng>
MultiState random_mixed_state(const DimsProfile& profile, Rng& rng, std::size_t rank = 0) {
  const auto d = static_cast<Eigen::Index>(profile.total());
  const auto r = rank == 0 ? d : static_cast<Eigen::Index>(rank);
  std::normal_distribution<double> normal;
  CMatrix g(d, r);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return MultiState(profile, std::move(m));
}

}  // namespace blochsep
