#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bloch.hpp"
#include "bounds.hpp"
#include "errors.hpp"
#include "partitions.hpp"
#include "quantum_state.hpp"
#include "surd.hpp"

namespace blochsep {

enum class BoundMode {
  contiguous,           ///< parties split in ascending-dimension order
  max_over_assignments  ///< largest bound over every valid assignment
};

inline const char* to_string(BoundMode m) {
  return m == BoundMode::contiguous ? "contiguous" : "max";
}

/// Product of the block factors, or nullopt when a block of size >= 3 fails
/// its dimension constraint.
inline std::optional<double> partition_bound(const Partition& partition) {
  double product = 1.0;
  for (const auto& dims : partition.block_dims()) {
    if (!block_constraint_ok(dims)) return std::nullopt;
    product *= block_factor(dims).value;
  }
  return product;
}

struct ShapeBound {
  std::optional<double> value;         ///< nullopt: no valid assignment
  std::optional<Partition> assignment; ///< the assignment achieving `value`
  std::vector<Partition> skipped;      ///< assignments failing a block constraint
};

inline ShapeBound shape_bound(const PartitionShape& shape, const DimsProfile& profile,
                              BoundMode mode) {
  ShapeBound out;
  if (mode == BoundMode::contiguous) {
    if (!profile.sorted()) throw DomainError("contiguous mode needs dims sorted ascending");
    Partition p = contiguous_partition(shape, profile);
    out.value = partition_bound(p);
    if (out.value)
      out.assignment = std::move(p);
    else
      out.skipped.push_back(std::move(p));
    return out;
  }

  std::string best_label;
  for (auto& p : enumerate_assignments(shape, profile)) {
    const auto v = partition_bound(p);
    if (!v) {
      out.skipped.push_back(std::move(p));
      continue;
    }
    std::string label = p.to_string();
    const bool better = !out.value || *v > *out.value * (1.0 + 1e-12);
    const bool tie = out.value && std::abs(*v - *out.value) <= 1e-12 * *out.value;
    if (better || (tie && label < best_label)) {
      out.value = *v;
      out.assignment = std::move(p);
      best_label = std::move(label);
    }
  }
  return out;
}

namespace detail {

/// Stable permutation listing parties in ascending dimension order.
inline std::vector<std::size_t> ascending_order(const DimsProfile& profile) {
  std::vector<std::size_t> order(profile.parties());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile.dim(a) < profile.dim(b);
  });
  return order;
}

inline DimsProfile sorted_profile(const DimsProfile& profile) {
  std::vector<int> dims = profile.dims();
  std::sort(dims.begin(), dims.end());
  return DimsProfile(std::move(dims));
}

/// Closed forms for four parties as tabulated alongside the general result,
/// including the (1,3) row whose numerator uses -2 d_4 instead of -d_2 - d_3.
inline std::optional<double> tabulated_four_party_bound(const PartitionShape& shape,
                                                        const std::vector<int>& sorted_dims) {
  if (sorted_dims.size() != 4) return std::nullopt;
  const double d1 = sorted_dims[0], d2 = sorted_dims[1], d3 = sorted_dims[2], d4 = sorted_dims[3];
  const auto& k = shape.parts();
  if (k == std::vector<int>{1, 3})
    return 16.0 * (d1 - 1.0) / d1 *
           (1.0 - (d2 * d3 + d2 * d4 + d3 * d4 - 2.0 * d4) / (d2 * d3 * d4 * d4));
  if (k == std::vector<int>{2, 2})
    return 16.0 * (d1 * d1 - 1.0) * (d3 * d3 - 1.0) / (d1 * d1 * d3 * d3);
  if (k == std::vector<int>{1, 1, 2})
    return 16.0 * (d1 - 1.0) * (d2 - 1.0) * (d3 * d3 - 1.0) / (d1 * d2 * d3 * d3);
  if (k == std::vector<int>{1, 1, 1, 1})
    return 16.0 * (d1 - 1.0) * (d2 - 1.0) * (d3 - 1.0) * (d4 - 1.0) / (d1 * d2 * d3 * d4);
  return std::nullopt;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::optional<std::string> exact_threshold(double bound, double coefficient) {
  if (coefficient <= 0.0) return std::nullopt;
  if (const auto q = rationalize(bound / coefficient)) return sqrt_of_rational(*q);
  return std::nullopt;
}

/// Notes for contiguous bounds that disagree with the four-party closed forms.
/// `coefficient` > 0 adds the implied thresholds.
inline std::vector<std::string> four_party_notes(const DimsProfile& sorted,
                                                 std::optional<double> coefficient) {
  std::vector<std::string> notes;
  if (sorted.parties() != 4) return notes;
  for (const auto& shape : enumerate_shapes(4)) {
    const auto canonical = shape_bound(shape, sorted, BoundMode::contiguous).value;
    const auto tabulated = tabulated_four_party_bound(shape, sorted.dims());
    if (!canonical || !tabulated) continue;
    if (std::abs(*canonical - *tabulated) <= 1e-12 * std::max(1.0, *canonical)) continue;
    std::string note = "shape " + shape.to_string() +
                       ": tabulated four-party closed form (numerator term -2*d4) gives " +
                       format_real(*tabulated) + ", per-block evaluation gives " +
                       format_real(*canonical) + "; the per-block value is used";
    if (coefficient && *coefficient > 0.0) {
      const auto alt = exact_threshold(*tabulated, *coefficient);
      const auto can = exact_threshold(*canonical, *coefficient);
      note += " (threshold " + (can ? *can : format_real(std::sqrt(*canonical / *coefficient))) +
              " instead of " + (alt ? *alt : format_real(std::sqrt(*tabulated / *coefficient))) + ")";
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

}  // namespace detail

struct ShapeRow {
  PartitionShape shape;
  std::optional<double> bound_contiguous;
  std::optional<double> bound_max;
  std::string contiguous_assignment;  ///< rendering in input party labels
  std::string best_assignment;        ///< rendering in input party labels
  bool excluded_contiguous = false;   ///< certainly not separable under the contiguous split
  bool excluded_any = false;          ///< certainly not separable under any split of this shape
  std::vector<std::string> skipped;   ///< assignments dropped by the block constraints
};

struct SeparabilityReport {
  DimsProfile profile;
  double norm_sq = 0.0;
  std::optional<double> full_bound;   ///< nullopt: full-system constraint violated
  std::vector<std::size_t> party_order;  ///< sorted position -> input party (0-based)
  std::vector<ShapeRow> rows;
  std::vector<std::string> notes;

  std::vector<PartitionShape> excluded(BoundMode mode) const {
    std::vector<PartitionShape> out;
    for (const auto& r : rows)
      if (mode == BoundMode::contiguous ? r.excluded_contiguous : r.excluded_any)
        out.push_back(r.shape);
    return out;
  }
};

struct ClassifyOptions {
  /// An exclusion needs norm_sq > bound + margin.
  double exclusion_margin = 1e-9;
  BlochOptions bloch;
};

/// Compares ||T^{(1..n)}||^2 with every shape bound. Never asserts separability.
inline SeparabilityReport classify(const MultiState& state, const ClassifyOptions& options = {}) {
  const DimsProfile& input = state.profile();
  if (input.parties() < 3) throw DomainError("classification needs at least 3 parties");

  SeparabilityReport report{input, 0.0, std::nullopt, detail::ascending_order(input), {}, {}};
  // The full-tensor norm is invariant under relabelling parties, so bounds are
  // evaluated on the ascending profile and assignments are mapped back.
  const DimsProfile sorted = detail::sorted_profile(input);
  const auto& labels = report.party_order;

  report.norm_sq = full_correlation_tensor(state, options.bloch).norm_sq();
  if (block_constraint_ok(sorted.dims())) report.full_bound = multi_party_factor(sorted.dims());
  else report.notes.push_back("full-system dimension constraint violated; full bound unavailable");
  if (!input.sorted()) {
    std::string order;
    for (std::size_t i = 0; i < labels.size(); ++i) order += (i ? "," : "") + std::to_string(labels[i] + 1);
    report.notes.push_back("parties reordered to ascending dimension: " + order);
  }

  for (const auto& shape : enumerate_shapes(static_cast<int>(input.parties()))) {
    ShapeRow row{shape, {}, {}, {}, {}, false, false, {}};
    const auto contiguous = shape_bound(shape, sorted, BoundMode::contiguous);
    const auto maximal = shape_bound(shape, sorted, BoundMode::max_over_assignments);
    row.bound_contiguous = contiguous.value;
    row.bound_max = maximal.value;
    if (contiguous.assignment) row.contiguous_assignment = contiguous.assignment->to_string(&labels);
    if (maximal.assignment) row.best_assignment = maximal.assignment->to_string(&labels);
    for (const auto& p : maximal.skipped) row.skipped.push_back(p.to_string(&labels));
    const double margin = options.exclusion_margin;
    row.excluded_contiguous = contiguous.value && report.norm_sq > *contiguous.value + margin;
    row.excluded_any = maximal.value && report.norm_sq > *maximal.value + margin;
    report.rows.push_back(std::move(row));
  }
  for (auto& note : detail::four_party_notes(sorted, std::nullopt)) report.notes.push_back(std::move(note));
  return report;
}

struct ThresholdEntry {
  std::optional<double> bound;   ///< nullopt: no valid assignment
  std::optional<double> x_star;  ///< nullopt: never excluded (or no bound)
  std::optional<std::string> exact;
  bool vacuous = false;          ///< x_star lies beyond the family's valid range
};

struct ThresholdRow {
  PartitionShape shape;
  ThresholdEntry contiguous;
  ThresholdEntry max;
};

struct ThresholdTable {
  double coefficient = 0.0;  ///< ||T^{(1..n)}(rho(x))||^2 = coefficient * x^2
  double x_min = 0.0;
  double x_max = 0.0;
  bool never_excluded = false;  ///< coefficient is zero
  std::vector<ThresholdRow> rows;
  std::vector<std::string> notes;

  const ThresholdRow* find(const PartitionShape& s) const {
    for (const auto& r : rows)
      if (r.shape == s) return &r;
    return nullptr;
  }
};

struct ThresholdOptions {
  double linearity_tolerance = 1e-9;
  /// Coefficients below this are treated as zero.
  double zero_coefficient = 1e-12;
  BlochOptions bloch;
};

/// Critical x* = sqrt(bound / c) per shape for a family whose full-tensor
/// norm is c x^2. The quadratic law is checked at two sample points first.
inline ThresholdTable noise_thresholds(const StateFamily& family, const ThresholdOptions& options = {}) {
  const DimsProfile& profile = family.profile();
  if (profile.parties() < 3) throw DomainError("thresholds need at least 3 parties");

  const double reach = std::min(family.x_max(), 1.0);
  if (!(reach > 0.0)) throw DomainError("family range contains no positive x");
  const double x0 = 0.5 * reach;
  const double x1 = 0.25 * reach;
  const double n0 = full_correlation_tensor(family.at(x0), options.bloch).norm_sq();
  const double n1 = full_correlation_tensor(family.at(x1), options.bloch).norm_sq();
  const double c0 = n0 / (x0 * x0);
  const double c1 = n1 / (x1 * x1);
  if (std::abs(c0 - c1) > options.linearity_tolerance * std::max(std::abs(c0), options.zero_coefficient))
    throw DomainError("family is not white-noise linear; use classify at fixed x");

  ThresholdTable table;
  table.coefficient = c0 < options.zero_coefficient ? 0.0 : c0;
  table.never_excluded = table.coefficient == 0.0;
  table.x_min = family.x_min();
  table.x_max = family.x_max();

  const DimsProfile sorted = detail::sorted_profile(profile);
  auto entry = [&](std::optional<double> bound) {
    ThresholdEntry e;
    e.bound = bound;
    if (!bound || table.never_excluded) return e;
    e.x_star = std::sqrt(*bound / table.coefficient);
    e.exact = detail::exact_threshold(*bound, table.coefficient);
    e.vacuous = *e.x_star > table.x_max * (1.0 + 1e-12);
    return e;
  };
  for (const auto& shape : enumerate_shapes(static_cast<int>(profile.parties()))) {
    table.rows.push_back({shape, entry(shape_bound(shape, sorted, BoundMode::contiguous).value),
                          entry(shape_bound(shape, sorted, BoundMode::max_over_assignments).value)});
  }
  if (table.never_excluded) table.notes.push_back("correlated part has zero full tensor; no shape is ever excluded");
  for (auto& note : detail::four_party_notes(sorted, table.coefficient)) table.notes.push_back(std::move(note));
  return table;
}

}  // namespace blochsep
