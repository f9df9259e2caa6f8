#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "generators.hpp"
#include "quantum_state.hpp"
#include "types.hpp"

namespace blochsep {

/// Real tensor t^{(S)}_{i_1...i_k} = Tr(rho l_{i_1} x ... x l_{i_k}) for a
/// party subset S, stored row-major over (d_{j_1}^2-1, ..., d_{j_k}^2-1).
class CorrelationTensor {
 public:
  CorrelationTensor(PartySet subset, std::vector<std::size_t> shape, std::vector<double> entries)
      : subset_(std::move(subset)), shape_(std::move(shape)), entries_(std::move(entries)) {
    if (subset_.size() != shape_.size()) throw ShapeError("tensor rank differs from subset size");
    std::size_t count = 1;
    for (std::size_t s : shape_) count *= s;
    if (count != entries_.size()) throw ShapeError("tensor entry count does not match its shape");
    for (double v : entries_) norm_sq_ += v * v;
  }

  const PartySet& subset() const noexcept { return subset_; }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  /// Sum of squared entries, accumulated in storage order.
  double norm_sq() const noexcept { return norm_sq_; }

  double at(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) throw ShapeError("tensor index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
      if (index[i] >= shape_[i]) throw DomainError("tensor index out of range");
      flat = flat * shape_[i] + index[i];
    }
    return entries_[flat];
  }

 private:
  PartySet subset_;
  std::vector<std::size_t> shape_;
  std::vector<double> entries_;
  double norm_sq_ = 0.0;
};

struct BlochOptions {
  /// Largest |Im Tr(rho O)| tolerated before the input is rejected.
  double imaginary_tolerance = 1e-10;
  /// all_tensors refuses systems with more parties than this.
  std::size_t max_parties = 6;
};

/// Keyed by the 0-based ascending subset.
using TensorMap = std::map<PartySet, CorrelationTensor>;

namespace detail {

/// Applies factors[0], factors[1], ... to the leading mode of a row-major
/// tensor, rotating each new mode to the back. After one pass over all modes
/// the result is row-major over (factors[0].rows(), factors[1].rows(), ...).
inline std::vector<Complex> cyclic_mode_products(std::vector<Complex> data,
                                                 const std::vector<CMatrix>& factors) {
  for (const CMatrix& f : factors) {
    const Eigen::Index lead = f.cols();
    const auto rest = static_cast<Eigen::Index>(data.size()) / lead;
    Eigen::Map<const RowCMatrix> in(data.data(), lead, rest);
    RowCMatrix out = (f * in).transpose();
    data.assign(out.data(), out.data() + out.size());
  }
  return data;
}

/// For each index a of a product space, the contribution of its digits to the
/// "paired" layout (a_1, b_1, a_2, b_2, ...): row part a_j*e_j, column part b_j.
struct PairedOffsets {
  std::vector<std::size_t> row;
  std::vector<std::size_t> col;
};

inline PairedOffsets paired_offsets(const std::vector<int>& dims) {
  std::vector<std::size_t> pstride(dims.size());
  std::size_t acc = 1;
  for (std::size_t j = dims.size(); j-- > 0;) {
    pstride[j] = acc;
    acc *= static_cast<std::size_t>(dims[j] * dims[j]);
  }
  PairedOffsets out{{0}, {0}};
  for (std::size_t j = 0; j < dims.size(); ++j) {
    const auto e = static_cast<std::size_t>(dims[j]);
    std::vector<std::size_t> row, col;
    row.reserve(out.row.size() * e);
    col.reserve(out.col.size() * e);
    for (std::size_t i = 0; i < out.row.size(); ++i)
      for (std::size_t k = 0; k < e; ++k) {
        row.push_back(out.row[i] + k * e * pstride[j]);
        col.push_back(out.col[i] + k * pstride[j]);
      }
    out.row = std::move(row);
    out.col = std::move(col);
  }
  return out;
}

/// Full-subset tensor of a state given directly on the subset's space.
inline std::vector<double> full_tensor_entries(const CMatrix& m, const std::vector<int>& dims,
                                               double imaginary_tolerance) {
  const auto offsets = paired_offsets(dims);
  const auto dk = static_cast<Eigen::Index>(offsets.row.size());
  std::vector<Complex> paired(static_cast<std::size_t>(dk * dk));
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b)
      paired[offsets.row[a] + offsets.col[b]] = m(a, b);

  // Tr(rho l) = sum_{a,b} rho_ab l_ba
  std::vector<CMatrix> factors;
  factors.reserve(dims.size());
  for (int e : dims) {
    const GeneratorSet gens(e);
    CMatrix f(static_cast<Eigen::Index>(gens.size()), e * e);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (int a = 0; a < e; ++a)
        for (int b = 0; b < e; ++b) f(static_cast<Eigen::Index>(i), a * e + b) = gens[i](b, a);
    factors.push_back(std::move(f));
  }
  const auto raw = cyclic_mode_products(std::move(paired), factors);

  std::vector<double> entries(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (std::abs(raw[i].imag()) > imaginary_tolerance)
      throw DomainError("correlation tensor entry has imaginary part " +
                        std::to_string(raw[i].imag()) + "; input is not Hermitian");
    entries[i] = raw[i].real();
  }
  return entries;
}

/// sum_i t_i l_{i_1} x ... x l_{i_k} on the subset's space.
inline CMatrix expand_tensor(const CorrelationTensor& t, const std::vector<int>& dims) {
  std::vector<CMatrix> factors;
  factors.reserve(dims.size());
  for (int e : dims) {
    const GeneratorSet gens(e);
    CMatrix f(e * e, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (int a = 0; a < e; ++a)
        for (int b = 0; b < e; ++b) f(a * e + b, static_cast<Eigen::Index>(i)) = gens[i](a, b);
    factors.push_back(std::move(f));
  }
  std::vector<Complex> coeffs(t.entries().begin(), t.entries().end());
  const auto paired = cyclic_mode_products(std::move(coeffs), factors);

  const auto offsets = paired_offsets(dims);
  const auto dk = static_cast<Eigen::Index>(offsets.row.size());
  CMatrix out(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) out(a, b) = paired[offsets.row[a] + offsets.col[b]];
  return out;
}

inline std::vector<std::size_t> tensor_shape(const std::vector<int>& dims) {
  std::vector<std::size_t> shape;
  shape.reserve(dims.size());
  for (int e : dims) shape.push_back(static_cast<std::size_t>(e * e - 1));
  return shape;
}

inline std::vector<PartySet> nonempty_subsets(std::size_t n) {
  std::vector<PartySet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    PartySet s;
    for (std::size_t p = 0; p < n; ++p)
      if (mask & (std::size_t{1} << p)) s.push_back(p);
    out.push_back(std::move(s));
  }
  return out;
}

inline void require_complete(const TensorMap& tensors, const DimsProfile& profile) {
  for (const auto& s : nonempty_subsets(profile.parties())) {
    const auto it = tensors.find(s);
    if (it == tensors.end()) throw DomainError("tensor map is missing a subset");
    if (it->second.shape() != tensor_shape(profile.restricted(s).dims()))
      throw ShapeError("tensor shape does not match the dims profile");
  }
}

}  // namespace detail

/// T^{(S)} of `state`. Evaluated on the reduced state over S.
inline CorrelationTensor correlation_tensor(const MultiState& state,
                                            std::span<const std::size_t> subset,
                                            const BlochOptions& options = {}) {
  PartySet s = detail::normalized_subset(subset, state.parties());
  const MultiState reduced = partial_trace(state, s);
  const auto& dims = reduced.profile().dims();
  auto entries = detail::full_tensor_entries(reduced.matrix(), dims, options.imaginary_tolerance);
  return CorrelationTensor(std::move(s), detail::tensor_shape(dims), std::move(entries));
}

/// T^{(1...n)}.
inline CorrelationTensor full_correlation_tensor(const MultiState& state,
                                                 const BlochOptions& options = {}) {
  PartySet all(state.parties());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return correlation_tensor(state, all, options);
}

/// One tensor per nonempty party subset.
inline TensorMap all_tensors(const MultiState& state, const BlochOptions& options = {}) {
  if (state.parties() > options.max_parties)
    throw ResourceError("all_tensors is capped at " + std::to_string(options.max_parties) +
                        " parties (max_parties)");
  TensorMap out;
  for (auto& s : detail::nonempty_subsets(state.parties())) {
    auto t = correlation_tensor(state, s, options);
    out.emplace(std::move(s), std::move(t));
  }
  return out;
}

/// Decomposition Tr(rho^2) = 1/D + sum_k x_k / 2^k, where x_k collects
/// (prod_{i not in S} 1/d_i) ||T^{(S)}||^2 over subsets with |S| = k.
struct PurityExpansion {
  double constant = 0.0;
  std::vector<double> aggregates;  ///< aggregates[k-1] = x_k

  double total() const {
    double sum = constant;
    double scale = 1.0;
    for (double x : aggregates) {
      scale *= 0.5;
      sum += scale * x;
    }
    return sum;
  }
};

inline PurityExpansion purity_expansion(const TensorMap& tensors, const DimsProfile& profile) {
  detail::require_complete(tensors, profile);
  PurityExpansion out;
  out.constant = 1.0 / static_cast<double>(profile.total());
  out.aggregates.assign(profile.parties(), 0.0);
  for (const auto& [subset, tensor] : tensors) {
    double weight = 1.0;
    for (std::size_t p = 0; p < profile.parties(); ++p)
      if (!std::binary_search(subset.begin(), subset.end(), p))
        weight /= static_cast<double>(profile.dim(p));
    out.aggregates[subset.size() - 1] += weight * tensor.norm_sq();
  }
  return out;
}

/// Rebuilds rho from its complete tensor set.
inline MultiState reconstruct(const TensorMap& tensors, const DimsProfile& profile,
                              const Tolerances& tol = {}) {
  detail::require_complete(tensors, profile);
  const auto d = static_cast<Eigen::Index>(profile.total());
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  for (const auto& [subset, tensor] : tensors) {
    double coef = std::ldexp(1.0, -static_cast<int>(subset.size()));
    for (std::size_t p = 0; p < profile.parties(); ++p)
      if (!std::binary_search(subset.begin(), subset.end(), p))
        coef /= static_cast<double>(profile.dim(p));
    const CMatrix local = detail::expand_tensor(tensor, profile.restricted(subset).dims());
    const auto split = detail::split_offsets(profile, subset);
    for (std::size_t a = 0; a < split.kept.size(); ++a)
      for (std::size_t b = 0; b < split.kept.size(); ++b) {
        const Complex v = coef * local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        for (std::size_t t : split.traced)
          rho(static_cast<Eigen::Index>(split.kept[a] + t),
              static_cast<Eigen::Index>(split.kept[b] + t)) += v;
      }
  }
  return MultiState(profile, std::move(rho), tol);
}

}  // namespace blochsep
