#pragma once

#include <cmath>
#include <vector>

#include "quantum_state.hpp"

namespace blochsep {

/// Product basis vector |digits>.
inline CVector basis_ket(const DimsProfile& profile, const std::vector<int>& digits) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(profile.total()));
  v(static_cast<Eigen::Index>(profile.basis_index(digits))) = 1.0;
  return v;
}

/// (|0...0> + |1...1>)/sqrt(2).
inline CVector ghz_ket(const DimsProfile& profile) {
  const std::vector<int> zeros(profile.parties(), 0);
  const std::vector<int> ones(profile.parties(), 1);
  return (basis_ket(profile, zeros) + basis_ket(profile, ones)) / std::sqrt(2.0);
}

/// Five qubits: x (|GHZ><GHZ| + |W4><W4|) + (1-2x)/32 I, where
/// |W4> = (|00001> + |00010> + |00100> + |01000>)/2.
/// Full correlation norm 20 x^2; PSD for -1/30 <= x <= 1/2.
inline StateFamily ghz_w_mixture_family() {
  const DimsProfile profile({2, 2, 2, 2, 2});
  CVector w = CVector::Zero(32);
  for (const auto& digits : std::vector<std::vector<int>>{
           {0, 0, 0, 0, 1}, {0, 0, 0, 1, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}})
    w += basis_ket(profile, digits);
  w /= 2.0;
  return white_noise_family(profile, {{1.0, ghz_ket(profile)}, {1.0, w}});
}

/// Dims (2,3,4,5): x |psi><psi| + (1-x)/120 I with
/// |psi> = (|0,0,0,4> + |1,0,0,0>)/sqrt(2). Full correlation norm 6 x^2.
inline StateFamily heterogeneous_cat_family() {
  const DimsProfile profile({2, 3, 4, 5});
  const CVector psi =
      (basis_ket(profile, {0, 0, 0, 4}) + basis_ket(profile, {1, 0, 0, 0})) / std::sqrt(2.0);
  return white_noise_family(profile, {{1.0, psi}});
}

}  // namespace blochsep
