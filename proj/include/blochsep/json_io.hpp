#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bloch.hpp"
#include "bounds.hpp"
#include "classifier.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "partitions.hpp"
#include "quantum_state.hpp"

namespace blochsep::io {

using Json = nlohmann::ordered_json;

// Complex numbers travel as [re, im]; plain numbers are read as real.
inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw DomainError("complex value must be a number or [re, im]");
}

inline Json optional_number(std::optional<double> v) {
  return v && std::isfinite(*v) ? Json(*v) : Json(nullptr);
}

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw ShapeError("matrix must have " + std::to_string(dim) + " rows");
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != dim)
      throw ShapeError("matrix row must have " + std::to_string(dim) + " entries");
    for (Eigen::Index k = 0; k < d; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline CVector ket_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("ket must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline DimsProfile dims_from_json(const Json& spec) {
  if (!spec.contains("dims") || !spec["dims"].is_array())
    throw DomainError("state spec needs a \"dims\" array");
  return DimsProfile(spec["dims"].get<std::vector<int>>());
}

/// Reads {"dims": [...], "terms": [{"weight": w, "ket": [[re, im], ...]}],
/// "white_noise": w}. A precomputed {"dims", "matrix"} document is accepted too.
inline MultiState state_from_json(const Json& spec, const Tolerances& tol = {}) {
  const DimsProfile profile = dims_from_json(spec);
  if (spec.contains("matrix")) return MultiState(profile, matrix_from_json(spec["matrix"], profile.total()), tol);

  std::vector<WeightedState> terms;
  if (spec.contains("terms")) {
    if (!spec["terms"].is_array()) throw DomainError("\"terms\" must be an array");
    for (const Json& t : spec["terms"]) {
      if (!t.contains("ket")) throw DomainError("each term needs a \"ket\"");
      const double w = t.value("weight", 1.0);
      terms.push_back({w, from_ket(profile, ket_from_json(t["ket"]))});
    }
  }
  const double noise = spec.value("white_noise", 0.0);
  return mix(terms, noise, profile, tol);
}

/// Reads the same layout as a white-noise family: the terms form the
/// correlated part with their weights taken as given; "white_noise" is ignored.
inline StateFamily family_from_json(const Json& spec, const Tolerances& tol = {}) {
  const DimsProfile profile = dims_from_json(spec);
  if (!spec.contains("terms") || !spec["terms"].is_array())
    throw DomainError("family spec needs a \"terms\" array");
  std::vector<WeightedKet> terms;
  for (const Json& t : spec["terms"]) {
    if (!t.contains("ket")) throw DomainError("each term needs a \"ket\"");
    terms.push_back({t.value("weight", 1.0), ket_from_json(t["ket"])});
  }
  return white_noise_family(profile, std::move(terms), tol);
}

inline Json one_based(const PartySet& s) {
  Json out = Json::array();
  for (std::size_t p : s) out.push_back(p + 1);
  return out;
}

inline Json to_json(const CorrelationTensor& t) {
  Json j;
  j["subset"] = one_based(t.subset());
  j["shape"] = t.shape();
  j["entries"] = t.entries();
  j["norm_sq"] = t.norm_sq();
  return j;
}

inline Json tensors_to_json(const DimsProfile& profile, const TensorMap& tensors) {
  // Subsets by size, then lexicographically.
  std::vector<const CorrelationTensor*> order;
  for (const auto& [s, t] : tensors) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->subset().size() != b->subset().size()) return a->subset().size() < b->subset().size();
    return a->subset() < b->subset();
  });
  Json j;
  j["dims"] = profile.dims();
  j["tensors"] = Json::array();
  for (const auto* t : order) j["tensors"].push_back(to_json(*t));
  return j;
}

inline TensorMap tensors_from_json(const Json& doc) {
  if (!doc.contains("tensors") || !doc["tensors"].is_array())
    throw DomainError("decomposition needs a \"tensors\" array");
  TensorMap out;
  for (const Json& t : doc["tensors"]) {
    PartySet subset;
    for (const Json& p : t.at("subset")) {
      const auto v = p.get<long long>();
      if (v < 1) throw DomainError("subset labels are 1-based");
      subset.push_back(static_cast<std::size_t>(v - 1));
    }
    auto shape = t.at("shape").get<std::vector<std::size_t>>();
    auto entries = t.at("entries").get<std::vector<double>>();
    out.emplace(subset, CorrelationTensor(subset, std::move(shape), std::move(entries)));
  }
  return out;
}

inline Json state_to_json(const MultiState& s) {
  Json j;
  j["dims"] = s.profile().dims();
  j["matrix"] = matrix_to_json(s.matrix());
  return j;
}

inline Json generators_to_json(const GeneratorSet& g) {
  Json j;
  j["dim"] = g.dim();
  j["matrices"] = Json::array();
  for (const auto& m : g) j["matrices"].push_back(matrix_to_json(m));
  return j;
}

struct ModeSelection {
  bool contiguous = true;
  bool max = true;
};

inline Json to_json(const SeparabilityReport& r, ModeSelection modes = {}) {
  Json j;
  j["dims"] = r.profile.dims();
  j["norm_sq"] = r.norm_sq;
  j["full_bound"] = optional_number(r.full_bound);
  Json order = Json::array();
  for (std::size_t p : r.party_order) order.push_back(p + 1);
  j["party_order"] = std::move(order);
  j["shapes"] = Json::array();
  for (const auto& row : r.rows) {
    Json s;
    s["shape"] = row.shape.to_string();
    if (modes.contiguous) {
      s["bound_contiguous"] = optional_number(row.bound_contiguous);
      s["contiguous_assignment"] = row.contiguous_assignment;
    }
    if (modes.max) {
      s["bound_max"] = optional_number(row.bound_max);
      s["best_assignment"] = row.best_assignment;
    }
    if (modes.contiguous) s["excluded_contiguous"] = row.excluded_contiguous;
    if (modes.max) s["excluded_any"] = row.excluded_any;
    if (!row.skipped.empty()) s["skipped_assignments"] = row.skipped;
    j["shapes"].push_back(std::move(s));
  }
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const ThresholdEntry& e, bool never) {
  Json j;
  j["bound"] = optional_number(e.bound);
  j["x_star"] = optional_number(e.x_star);
  j["exact"] = e.exact ? Json(*e.exact) : Json(nullptr);
  j["vacuous"] = e.vacuous;
  if (never) j["never_excluded"] = true;
  return j;
}

inline Json to_json(const ThresholdTable& t, const DimsProfile& profile, ModeSelection modes = {}) {
  Json j;
  j["dims"] = profile.dims();
  j["coefficient"] = t.coefficient;
  j["x_range"] = Json::array({optional_number(t.x_min), optional_number(t.x_max)});
  j["never_excluded"] = t.never_excluded;
  j["shapes"] = Json::array();
  for (const auto& row : t.rows) {
    Json s;
    s["shape"] = row.shape.to_string();
    if (modes.contiguous) s["contiguous"] = to_json(row.contiguous, t.never_excluded);
    if (modes.max) s["max"] = to_json(row.max, t.never_excluded);
    j["shapes"].push_back(std::move(s));
  }
  j["notes"] = t.notes;
  return j;
}

/// Full-system bound, every distinct block factor that any partition of the
/// profile can use, and the per-shape products.
inline Json bounds_report(const DimsProfile& profile) {
  std::vector<int> sorted_dims = profile.dims();
  std::sort(sorted_dims.begin(), sorted_dims.end());
  const DimsProfile sorted(sorted_dims);
  const std::size_t n = sorted.parties();

  Json j;
  j["dims"] = profile.dims();
  j["sorted_dims"] = sorted_dims;
  const bool full_ok = block_constraint_ok(sorted_dims);
  j["full_constraint_ok"] = full_ok;
  j["full_bound"] = full_ok ? Json(block_factor(sorted_dims).value) : Json(nullptr);
  j["full_rule"] = n >= 3 ? "multi" : (n == 2 ? "pair" : "single");

  std::set<std::pair<std::size_t, std::vector<int>>> blocks;
  for (const auto& s : detail::nonempty_subsets(n)) {
    if (s.size() == n && n > 1) continue;
    std::vector<int> dims;
    for (std::size_t p : s) dims.push_back(sorted.dim(p));
    blocks.emplace(dims.size(), std::move(dims));
  }
  j["block_factors"] = Json::array();
  for (const auto& [size, dims] : blocks) {
    Json b;
    b["block_dims"] = dims;
    const bool ok = block_constraint_ok(dims);
    const BlockRule rule = size == 1 ? BlockRule::single : size == 2 ? BlockRule::pair : BlockRule::multi;
    b["rule"] = to_string(rule);
    b["constraint_ok"] = ok;
    b["value"] = ok ? Json(block_factor(dims).value) : Json(nullptr);
    j["block_factors"].push_back(std::move(b));
  }

  const auto labels = detail::ascending_order(profile);
  j["shapes"] = Json::array();
  if (n >= 2) {
    for (const auto& shape : enumerate_shapes(static_cast<int>(n))) {
      const auto c = shape_bound(shape, sorted, BoundMode::contiguous);
      const auto m = shape_bound(shape, sorted, BoundMode::max_over_assignments);
      Json s;
      s["shape"] = shape.to_string();
      s["bound_contiguous"] = optional_number(c.value);
      s["bound_max"] = optional_number(m.value);
      s["best_assignment"] = m.assignment ? Json(m.assignment->to_string(&labels)) : Json(nullptr);
      j["shapes"].push_back(std::move(s));
    }
  }
  return j;
}

}  // namespace blochsep::io
