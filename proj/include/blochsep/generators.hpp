#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace blochsep {

/// The d^2-1 generalized Gell-Mann matrices of SU(d), normalized so that
/// Tr(l_i l_j) = 2 delta_ij.
///
/// Order: symmetric E_jk + E_kj for j<k (lexicographic), then antisymmetric
/// -i(E_jk - E_kj) in the same pair order, then the diagonal family
/// sqrt(2/(l(l+1))) (sum_{j<=l} E_jj - l E_{l+1,l+1}) for l = 1..d-1.
/// For d = 2 this is (sigma_x, sigma_y, sigma_z).
class GeneratorSet {
 public:
  explicit GeneratorSet(int dim) : dim_(dim) {
    if (dim < 2) throw DomainError("local dimension must be at least 2");
    const auto d = static_cast<Eigen::Index>(dim);
    matrices_.reserve(static_cast<std::size_t>(d * d - 1));
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = j + 1; k < d; ++k) {
        CMatrix m = CMatrix::Zero(d, d);
        m(j, k) = 1.0;
        m(k, j) = 1.0;
        matrices_.push_back(std::move(m));
      }
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = j + 1; k < d; ++k) {
        CMatrix m = CMatrix::Zero(d, d);
        m(j, k) = Complex(0.0, -1.0);
        m(k, j) = Complex(0.0, 1.0);
        matrices_.push_back(std::move(m));
      }
    }
    for (Eigen::Index l = 1; l < d; ++l) {
      const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
      CMatrix m = CMatrix::Zero(d, d);
      for (Eigen::Index j = 0; j < l; ++j) m(j, j) = scale;
      m(l, l) = -scale * static_cast<double>(l);
      matrices_.push_back(std::move(m));
    }
  }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return matrices_.size(); }

  const CMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<CMatrix>& matrices() const noexcept { return matrices_; }

  auto begin() const noexcept { return matrices_.begin(); }
  auto end() const noexcept { return matrices_.end(); }

 private:
  int dim_;
  std::vector<CMatrix> matrices_;
};

inline GeneratorSet build_generators(int d) { return GeneratorSet(d); }

/// Worst-case deviations from the generator invariants.
struct GeneratorDefects {
  double hermitian = 0.0;  ///< max |M - M^dagger|
  double trace = 0.0;      ///< max |Tr M|
  double gram = 0.0;       ///< max |Tr(l_i l_j) - 2 delta_ij|
  bool count_ok = false;   ///< size == d^2 - 1

  bool within(double tolerance) const {
    return count_ok && hermitian <= tolerance && trace <= tolerance && gram <= tolerance;
  }
};

inline GeneratorDefects inspect(const GeneratorSet& set) {
  GeneratorDefects out;
  const auto d = static_cast<std::size_t>(set.dim());
  out.count_ok = set.size() == d * d - 1;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const CMatrix& a = set[i];
    out.hermitian = std::max(out.hermitian, (a - a.adjoint()).cwiseAbs().maxCoeff());
    out.trace = std::max(out.trace, std::abs(a.trace()));
    for (std::size_t j = 0; j < set.size(); ++j) {
      const double target = i == j ? 2.0 : 0.0;
      out.gram = std::max(out.gram, std::abs((a * set[j]).trace() - target));
    }
  }
  return out;
}

}  // namespace blochsep
