#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "types.hpp"

namespace blochsep {

/// Validation thresholds for density matrices.
struct Tolerances {
  double hermitian = 1e-10;
  double trace = 1e-10;
  double psd_floor = 1e-9;  ///< smallest eigenvalue must be >= -psd_floor
};

/// Local dimensions (d_1, ..., d_n) of an n-partite system.
class DimsProfile {
 public:
  /// Largest total dimension accepted for dense storage.
  static constexpr std::size_t kMaxTotal = std::size_t{1} << 14;

  explicit DimsProfile(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DomainError("dims profile needs at least one party");
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) throw DomainError("local dimension must be at least 2");
      total_ *= static_cast<std::size_t>(d);
      if (total_ > kMaxTotal)
        throw ResourceError("total dimension exceeds dense storage limit " +
                            std::to_string(kMaxTotal));
    }
    sorted_ = std::is_sorted(dims_.begin(), dims_.end());
  }

  std::size_t parties() const noexcept { return dims_.size(); }
  int dim(std::size_t party) const { return dims_.at(party); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t total() const noexcept { return total_; }
  /// True when d_1 <= ... <= d_n.
  bool sorted() const noexcept { return sorted_; }

  /// Basis stride of each party; party 0 varies slowest.
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(dims_.size());
    std::size_t acc = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
      s[i] = acc;
      acc *= static_cast<std::size_t>(dims_[i]);
    }
    return s;
  }

  /// Profile of the listed parties, in the listed order.
  DimsProfile restricted(std::span<const std::size_t> parties) const {
    std::vector<int> out;
    out.reserve(parties.size());
    for (std::size_t p : parties) out.push_back(dim(p));
    return DimsProfile(std::move(out));
  }

  /// Flat basis index of the product basis vector |digits[0], ..., digits[n-1]>.
  std::size_t basis_index(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) throw ShapeError("basis digit count differs from party count");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (digits[i] < 0 || digits[i] >= dims_[i]) throw DomainError("basis digit out of range");
      idx = idx * static_cast<std::size_t>(dims_[i]) + static_cast<std::size_t>(digits[i]);
    }
    return idx;
  }

  friend bool operator==(const DimsProfile& a, const DimsProfile& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
  bool sorted_ = true;
};

namespace detail {

/// Sorted, duplicate-free, in-range copy of `parties`.
inline PartySet normalized_subset(std::span<const std::size_t> parties, std::size_t n) {
  PartySet s(parties.begin(), parties.end());
  if (s.empty()) throw DomainError("party subset must be nonempty");
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw DomainError("party subset contains duplicates");
  if (s.back() >= n) throw DomainError("party index out of range");
  return s;
}

/// Offsets that split a flat basis index into a kept part and a traced part:
/// full = kept[a] + traced[t], both enumerated lexicographically.
struct SplitOffsets {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
};

inline std::vector<std::size_t> offsets_for(const DimsProfile& profile, const PartySet& parties) {
  const auto strides = profile.strides();
  std::vector<std::size_t> out{0};
  for (std::size_t p : parties) {
    const auto d = static_cast<std::size_t>(profile.dim(p));
    std::vector<std::size_t> next;
    next.reserve(out.size() * d);
    for (std::size_t base : out)
      for (std::size_t k = 0; k < d; ++k) next.push_back(base + k * strides[p]);
    out = std::move(next);
  }
  return out;
}

inline SplitOffsets split_offsets(const DimsProfile& profile, const PartySet& keep) {
  PartySet rest;
  for (std::size_t p = 0; p < profile.parties(); ++p)
    if (!std::binary_search(keep.begin(), keep.end(), p)) rest.push_back(p);
  return {offsets_for(profile, keep), offsets_for(profile, rest)};
}

inline void validate_density(const CMatrix& m, const Tolerances& tol) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermitian)
    throw InvariantError("hermitian", "density matrix is not Hermitian (max deviation " +
                                          std::to_string(herm) + ")");
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace)
    throw InvariantError("unit_trace", "density matrix trace is not 1 (trace " +
                                           std::to_string(tr.real()) + ")");
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd_floor)
    throw InvariantError("positive_semidefinite",
                         "density matrix is not positive semidefinite (min eigenvalue " +
                             std::to_string(min_eig) + ")");
}

}  // namespace detail

/// Density matrix over a product of local spaces, in the lexicographic
/// product basis with party 0 slowest-varying. Validated on construction.
class MultiState {
 public:
  MultiState(DimsProfile profile, CMatrix matrix, const Tolerances& tol = {})
      : profile_(std::move(profile)), matrix_(std::move(matrix)) {
    check_shape();
    detail::validate_density(matrix_, tol);
  }

  /// Skips the physics checks; for results of operations that preserve them.
  static MultiState trusted(DimsProfile profile, CMatrix matrix) {
    return MultiState(Unchecked{}, std::move(profile), std::move(matrix));
  }

  const DimsProfile& profile() const noexcept { return profile_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t parties() const noexcept { return profile_.parties(); }
  std::size_t total() const noexcept { return profile_.total(); }

 private:
  struct Unchecked {};
  MultiState(Unchecked, DimsProfile profile, CMatrix matrix)
      : profile_(std::move(profile)), matrix_(std::move(matrix)) {
    check_shape();
  }

  void check_shape() const {
    const auto d = static_cast<Eigen::Index>(profile_.total());
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw ShapeError("matrix size does not match the dims profile");
  }

  DimsProfile profile_;
  CMatrix matrix_;
};

/// Projector onto the normalized `amplitudes`.
inline MultiState from_ket(const DimsProfile& profile, const CVector& amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != profile.total())
    throw ShapeError("ket length " + std::to_string(amplitudes.size()) +
                     " does not match total dimension " + std::to_string(profile.total()));
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw DomainError("ket must be nonzero");
  const CVector v = amplitudes / norm;
  return MultiState::trusted(profile, v * v.adjoint());
}

inline MultiState maximally_mixed(const DimsProfile& profile) {
  const auto d = static_cast<Eigen::Index>(profile.total());
  return MultiState::trusted(profile, CMatrix::Identity(d, d) / static_cast<double>(d));
}

struct WeightedState {
  double weight;
  MultiState state;
};

/// sum_k w_k rho_k + (noise / D) I. Weights must be nonnegative and sum to 1.
inline MultiState mix(std::span<const WeightedState> terms, double white_noise_weight,
                      const Tolerances& tol = {}) {
  if (white_noise_weight < 0.0) throw DomainError("white noise weight must be nonnegative");
  if (terms.empty() && white_noise_weight == 0.0) throw DomainError("mixture is empty");
  double total = white_noise_weight;
  for (const auto& t : terms) {
    if (t.weight < 0.0) throw DomainError("mixture weights must be nonnegative");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > tol.trace)
    throw DomainError("mixture weights sum to " + std::to_string(total) + ", expected 1");
  if (terms.empty()) throw DomainError("pure white noise needs a profile; use maximally_mixed");
  const DimsProfile& profile = terms.front().state.profile();
  const auto d = static_cast<Eigen::Index>(profile.total());
  CMatrix m = CMatrix::Identity(d, d) * (white_noise_weight / static_cast<double>(d));
  for (const auto& t : terms) {
    if (!(t.state.profile() == profile)) throw ShapeError("mixture terms have different profiles");
    m += t.weight * t.state.matrix();
  }
  return MultiState(profile, std::move(m), tol);
}

inline MultiState mix(std::span<const WeightedState> terms, double white_noise_weight,
                      const DimsProfile& profile, const Tolerances& tol = {}) {
  if (terms.empty()) {
    if (std::abs(white_noise_weight - 1.0) > tol.trace)
      throw DomainError("mixture weights sum to " + std::to_string(white_noise_weight) +
                        ", expected 1");
    return maximally_mixed(profile);
  }
  return mix(terms, white_noise_weight, tol);
}

/// Reduced state on `keep` (any order; the result uses ascending party order).
inline MultiState partial_trace(const MultiState& state, std::span<const std::size_t> keep) {
  const PartySet kept = detail::normalized_subset(keep, state.parties());
  if (kept.size() == state.parties()) return state;
  const auto split = detail::split_offsets(state.profile(), kept);
  const auto dk = static_cast<Eigen::Index>(split.kept.size());
  const CMatrix& m = state.matrix();
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (std::size_t t : split.traced)
        acc += m(static_cast<Eigen::Index>(split.kept[a] + t),
                 static_cast<Eigen::Index>(split.kept[b] + t));
      out(a, b) = acc;
    }
  }
  return MultiState::trusted(state.profile().restricted(kept), std::move(out));
}

/// Tr(rho^2).
inline double purity(const MultiState& state) {
  // Hermitian input: Tr(rho rho^dagger) equals the squared Frobenius norm.
  return state.matrix().squaredNorm();
}

/// Reorders parties: party i of the result is party order[i] of the input.
inline MultiState permute_parties(const MultiState& state, std::span<const std::size_t> order) {
  const std::size_t n = state.parties();
  if (order.size() != n) throw ShapeError("permutation length differs from party count");
  PartySet check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < n; ++i)
    if (check[i] != i) throw DomainError("not a permutation of the parties");

  std::vector<int> dims(n);
  for (std::size_t i = 0; i < n; ++i) dims[i] = state.profile().dim(order[i]);
  DimsProfile target(dims);
  // Offsets of the input basis enumerated in the target party order.
  const auto src = detail::offsets_for(state.profile(), PartySet(order.begin(), order.end()));
  const auto d = static_cast<Eigen::Index>(src.size());
  CMatrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      out(a, b) = state.matrix()(static_cast<Eigen::Index>(src[a]), static_cast<Eigen::Index>(src[b]));
  return MultiState::trusted(std::move(target), std::move(out));
}

inline MultiState tensor_product(const MultiState& a, const MultiState& b) {
  std::vector<int> dims = a.profile().dims();
  dims.insert(dims.end(), b.profile().dims().begin(), b.profile().dims().end());
  DimsProfile profile(std::move(dims));
  const CMatrix& x = a.matrix();
  const CMatrix& y = b.matrix();
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return MultiState::trusted(std::move(profile), std::move(out));
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// One-parameter family x -> rho(x) with a declared valid range.
class StateFamily {
 public:
  using Builder = std::function<MultiState(double)>;

  StateFamily(DimsProfile profile, Builder builder, double x_min, double x_max)
      : profile_(std::move(profile)), builder_(std::move(builder)), x_min_(x_min), x_max_(x_max) {
    if (!(x_min_ <= x_max_)) throw DomainError("family range is empty");
  }

  const DimsProfile& profile() const noexcept { return profile_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }

  MultiState at(double x) const { return builder_(x); }

 private:
  DimsProfile profile_;
  Builder builder_;
  double x_min_;
  double x_max_;
};

struct WeightedKet {
  double weight;
  CVector ket;
};

/// rho(x) = x sigma + (1 - w x)/D I, sigma = sum_k w_k |k><k| over normalized
/// kets and w = sum_k w_k. The declared range is where rho(x) is PSD.
inline StateFamily white_noise_family(const DimsProfile& profile, std::vector<WeightedKet> terms,
                                      const Tolerances& tol = {}) {
  const auto d = static_cast<Eigen::Index>(profile.total());
  CMatrix sigma = CMatrix::Zero(d, d);
  double w = 0.0;
  for (const auto& t : terms) {
    if (t.weight < 0.0) throw DomainError("projector weights must be nonnegative");
    sigma += t.weight * from_ket(profile, t.ket).matrix();
    w += t.weight;
  }

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (!terms.empty()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sigma, Eigen::EigenvaluesOnly);
    auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    const double mu_min = snap(solver.eigenvalues().minCoeff());
    const double mu_max = snap(solver.eigenvalues().maxCoeff());
    const double dd = static_cast<double>(d);
    // eigenvalues of rho(x) are x*mu + (1 - w x)/D
    if (dd * mu_min - w < 0.0) hi = 1.0 / (w - dd * mu_min);
    if (dd * mu_max - w > 0.0) lo = -1.0 / (dd * mu_max - w);
  }

  auto builder = [profile, sigma, w, tol](double x) {
    const auto dim = static_cast<Eigen::Index>(profile.total());
    CMatrix m = x * sigma;
    m.diagonal().array() += (1.0 - w * x) / static_cast<double>(dim);
    return MultiState(profile, std::move(m), tol);
  };
  return StateFamily(profile, std::move(builder), lo, hi);
}

}  // namespace blochsep
