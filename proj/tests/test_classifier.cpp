#include <gtest/gtest.h>

#include <random>

#include <blochsep/blochsep.hpp>

#include "oracles.hpp"

namespace {

using namespace blochsep;

const ShapeRow& row_of(const SeparabilityReport& r, const std::string& shape) {
  for (const auto& row : r.rows)
    if (row.shape.to_string() == shape) return row;
  throw std::runtime_error("missing shape " + shape);
}

std::vector<std::string> names(const std::vector<PartitionShape>& shapes) {
  std::vector<std::string> out;
  for (const auto& s : shapes) out.push_back(s.to_string());
  return out;
}

TEST(ShapeBound, HeterogeneousFourParty) {
  const DimsProfile p({2, 3, 4, 5});
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 1, 1, 1}), p, BoundMode::contiguous).value, 16.0 / 5.0, 1e-14);
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 1, 2}), p, BoundMode::contiguous).value, 5.0, 1e-14);
  EXPECT_NEAR(*shape_bound(PartitionShape({2, 2}), p, BoundMode::contiguous).value, 11.25, 1e-14);
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 3}), p, BoundMode::contiguous).value, 104.0 / 15.0, 1e-14);

  const auto best = shape_bound(PartitionShape({1, 1, 2}), p, BoundMode::max_over_assignments);
  EXPECT_NEAR(*best.value, 7.2, 1e-14);
  EXPECT_EQ(best.assignment->to_string(), "{3}{4}{1,2}");
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 3}), p, BoundMode::max_over_assignments).value, 10.0, 1e-13);
}

TEST(ShapeBound, FiveQubits) {
  const DimsProfile p(std::vector<int>(5, 2));
  EXPECT_NEAR(*shape_bound(PartitionShape({2, 3}), p, BoundMode::contiguous).value, 12.0, 1e-13);
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 2, 2}), p, BoundMode::contiguous).value, 9.0, 1e-13);
  EXPECT_NEAR(*shape_bound(PartitionShape({1, 4}), p, BoundMode::contiguous).value, 9.0, 1e-13);
}

TEST(ShapeBound, ContiguousNeedsSortedDims) {
  EXPECT_THROW(shape_bound(PartitionShape({1, 2}), DimsProfile({3, 2, 2}), BoundMode::contiguous), DomainError);
}

TEST(ShapeBound, SkipsConstraintViolations) {
  const DimsProfile p({2, 2, 2, 9});
  const auto c = shape_bound(PartitionShape({1, 3}), p, BoundMode::contiguous);
  EXPECT_FALSE(c.value.has_value());
  ASSERT_EQ(c.skipped.size(), 1u);
  const auto m = shape_bound(PartitionShape({1, 3}), p, BoundMode::max_over_assignments);
  EXPECT_EQ(m.skipped.size(), 3u);
  EXPECT_EQ(m.assignment->to_string(), "{4}{1,2,3}");
}

TEST(Classify, GhzWMixtureAtPointFour) {
  const auto r = classify(ghz_w_mixture_family().at(0.40));
  EXPECT_NEAR(r.norm_sq, 3.2, 1e-12);
  EXPECT_EQ(names(r.excluded(BoundMode::contiguous)), (std::vector<std::string>{"(1,1,1,1,1)", "(1,1,1,2)"}));
  EXPECT_EQ(names(r.excluded(BoundMode::max_over_assignments)), names(r.excluded(BoundMode::contiguous)));
  EXPECT_NEAR(*r.full_bound, 58.0 / 3.0, 1e-12);
}

TEST(Classify, GhzWMixtureRegression) {
  const auto fam = ghz_w_mixture_family();
  const std::vector<std::pair<double, std::size_t>> cases{{0.25, 1}, {0.40, 2}, {0.46, 3}, {0.49, 3}};
  for (const auto& [x, count] : cases) {
    const auto r = classify(fam.at(x));
    EXPECT_NEAR(r.norm_sq, 20 * x * x, 1e-9 * 20 * x * x);
    EXPECT_EQ(r.excluded(BoundMode::contiguous).size(), count) << x;
  }
}

TEST(Classify, MaximallyMixedExcludesNothing) {
  const auto r = classify(maximally_mixed(DimsProfile({2, 3, 2})));
  EXPECT_EQ(r.norm_sq, 0.0);
  EXPECT_TRUE(r.excluded(BoundMode::max_over_assignments).empty());
  EXPECT_EQ(r.party_order, (std::vector<std::size_t>{0, 2, 1}));
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.front().find("1,3,2"), std::string::npos);
}

TEST(Classify, CatStateAtPointEight) {
  const auto r = classify(heterogeneous_cat_family().at(0.80));
  EXPECT_NEAR(r.norm_sq, 3.84, 1e-12);
  EXPECT_EQ(names(r.excluded(BoundMode::contiguous)), (std::vector<std::string>{"(1,1,1,1)"}));
  EXPECT_EQ(names(r.excluded(BoundMode::max_over_assignments)), (std::vector<std::string>{"(1,1,1,1)"}));
  EXPECT_EQ(row_of(r, "(1,1,2)").contiguous_assignment, "{1}{2}{3,4}");
  EXPECT_EQ(row_of(r, "(1,1,2)").best_assignment, "{3}{4}{1,2}");
  bool noted = false;
  for (const auto& n : r.notes) noted |= n.find("(1,3)") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Classify, NeedsThreeParties) {
  EXPECT_THROW(classify(maximally_mixed(DimsProfile({2, 2}))), DomainError);
}

TEST(Classify, UnsortedDimsAreRelabelled) {
  // Same cat state with parties listed as (5,4,3,2).
  const auto base = heterogeneous_cat_family().at(0.8);
  const auto flipped = permute_parties(base, std::vector<std::size_t>{3, 2, 1, 0});
  const auto a = classify(base);
  const auto b = classify(flipped);
  EXPECT_NEAR(a.norm_sq, b.norm_sq, 1e-12);
  EXPECT_EQ(b.party_order, (std::vector<std::size_t>{3, 2, 1, 0}));
  EXPECT_EQ(row_of(b, "(1,1,2)").best_assignment, "{1}{2}{3,4}");
  EXPECT_EQ(row_of(b, "(1,1,2)").contiguous_assignment, "{3}{4}{1,2}");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].bound_max, b.rows[i].bound_max);
    EXPECT_EQ(a.rows[i].excluded_any, b.rows[i].excluded_any);
  }
}

TEST(Classify, MaxModeDominatesContiguous) {
  for (const auto& dims : std::vector<std::vector<int>>{{2, 3, 4, 5}, {2, 2, 3}, {2, 3, 3, 4}, {2, 2, 2, 3, 4}}) {
    const DimsProfile p(dims);
    for (const auto& shape : enumerate_shapes(static_cast<int>(dims.size()))) {
      const auto c = shape_bound(shape, p, BoundMode::contiguous).value;
      const auto m = shape_bound(shape, p, BoundMode::max_over_assignments).value;
      if (c) {
        ASSERT_TRUE(m);
        EXPECT_GE(*m, *c * (1 - 1e-12));
      }
    }
  }
}

TEST(Classify, RefinementNeverRaisesTheBound) {
  // Splitting a block cannot increase the bound of a concrete partition.
  const DimsProfile p({2, 2, 3, 3});
  for (const auto& coarse_shape : enumerate_shapes(4)) {
    for (const auto& coarse : enumerate_assignments(coarse_shape, p)) {
      const auto cb = partition_bound(coarse);
      if (!cb) continue;
      for (const auto& fine_shape : enumerate_shapes(4)) {
        if (fine_shape.blocks() <= coarse_shape.blocks()) continue;
        for (const auto& fine : enumerate_assignments(fine_shape, p)) {
          bool refines = true;
          for (const auto& fb : fine.blocks()) {
            bool inside = false;
            for (const auto& b : coarse.blocks())
              inside |= std::includes(b.begin(), b.end(), fb.begin(), fb.end());
            refines &= inside;
          }
          const auto fbv = partition_bound(fine);
          if (refines && fbv) {
            EXPECT_LE(*fbv, *cb * (1 + 1e-12)) << fine.to_string() << " " << coarse.to_string();
          }
        }
      }
    }
  }
}

class Soundness : public ::testing::TestWithParam<std::vector<int>> {};

TEST_P(Soundness, BlockProductStatesAreNeverExcludedFromTheirShape) {
  const DimsProfile profile(GetParam());
  const bool uniform = std::adjacent_find(GetParam().begin(), GetParam().end(), std::not_equal_to<>()) ==
                       GetParam().end();
  std::mt19937_64 rng(41);
  for (const auto& shape : enumerate_shapes(static_cast<int>(profile.parties()))) {
    const auto assignments = enumerate_assignments(shape, profile);
    const auto contiguous = contiguous_partition(shape, profile);
    for (int trial = 0; trial < 20; ++trial) {
      const auto& part = assignments[static_cast<std::size_t>(trial) % assignments.size()];
      if (!block_constraints_hold(part)) continue;
      std::vector<MultiState> blocks;
      const auto state = oracle::block_product_state(profile, part.blocks(), rng, &blocks);
      const auto report = classify(state);
      const auto& row = row_of(report, shape.to_string());
      EXPECT_FALSE(row.excluded_any) << part.to_string();
      if (uniform || part.blocks() == contiguous.blocks()) {
        EXPECT_FALSE(row.excluded_contiguous) << part.to_string();
      }

      double product = 1;
      for (const auto& b : blocks) product *= full_correlation_tensor(b).norm_sq();
      EXPECT_NEAR(report.norm_sq, product, 1e-10 * std::max(1.0, product));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Profiles, Soundness,
                         ::testing::Values(std::vector<int>{2, 2, 2}, std::vector<int>{2, 3, 4},
                                           std::vector<int>{2, 2, 2, 2}, std::vector<int>{2, 2, 3, 3}));

TEST(Thresholds, GhzWMixture) {
  const auto t = noise_thresholds(ghz_w_mixture_family());
  EXPECT_NEAR(t.coefficient, 20.0, 1e-10);
  EXPECT_NEAR(t.x_min, -1.0 / 30.0, 1e-12);
  EXPECT_NEAR(t.x_max, 0.5, 1e-12);
  const std::vector<std::tuple<std::string, double, std::string, bool>> expect{
      {"(1,1,1,1,1)", std::sqrt(5.0) / 10, "sqrt(5)/10", false},
      {"(1,1,1,2)", std::sqrt(15.0) / 10, "sqrt(15)/10", false},
      {"(1,1,3)", std::sqrt(5.0) / 5, "sqrt(5)/5", false},
      {"(1,2,2)", 3 * std::sqrt(5.0) / 10, "3*sqrt(5)/10", true},
      {"(1,4)", 3 * std::sqrt(5.0) / 10, "3*sqrt(5)/10", true},
      {"(2,3)", std::sqrt(15.0) / 5, "sqrt(15)/5", true}};
  for (const auto& [shape, x, exact, vacuous] : expect) {
    const auto* row = t.find(PartitionShape([&] {
      std::vector<int> parts;
      for (char ch : shape)
        if (ch >= '0' && ch <= '9') parts.push_back(ch - '0');
      return parts;
    }()));
    ASSERT_NE(row, nullptr) << shape;
    EXPECT_NEAR(*row->contiguous.x_star, x, 1e-12) << shape;
    EXPECT_EQ(*row->contiguous.exact, exact);
    EXPECT_EQ(row->contiguous.vacuous, vacuous) << shape;
    EXPECT_EQ(row->max.x_star, row->contiguous.x_star);
  }
}

TEST(Thresholds, CatFamily) {
  const auto t = noise_thresholds(heterogeneous_cat_family());
  EXPECT_NEAR(t.coefficient, 6.0, 1e-10);
  EXPECT_NEAR(t.x_max, 1.0, 1e-12);
  const auto* a = t.find(PartitionShape({1, 1, 1, 1}));
  const auto* b = t.find(PartitionShape({1, 1, 2}));
  const auto* c = t.find(PartitionShape({1, 3}));
  const auto* d = t.find(PartitionShape({2, 2}));
  EXPECT_NEAR(*a->contiguous.x_star, 2 * std::sqrt(30.0) / 15, 1e-12);
  EXPECT_NEAR(*b->contiguous.x_star, std::sqrt(30.0) / 6, 1e-12);
  EXPECT_NEAR(*c->contiguous.x_star, std::sqrt(52.0 / 45.0), 1e-12);
  EXPECT_NEAR(*d->contiguous.x_star, std::sqrt(30.0) / 4, 1e-12);
  EXPECT_FALSE(a->contiguous.vacuous);
  EXPECT_FALSE(b->contiguous.vacuous);
  EXPECT_TRUE(c->contiguous.vacuous);
  EXPECT_TRUE(d->contiguous.vacuous);
  EXPECT_EQ(*d->contiguous.exact, "sqrt(30)/4");
  EXPECT_NEAR(*b->max.x_star, std::sqrt(1.2), 1e-12);
  bool noted = false;
  for (const auto& n : t.notes) noted |= n.find("sqrt(263)/15") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Thresholds, ZeroCoefficientMeansNeverExcluded) {
  // Equal mixture of |000> and |100>: party 1 is maximally mixed, so the full tensor vanishes.
  const DimsProfile p({2, 2, 2});
  const auto zero = white_noise_family(p, {{0.5, basis_ket(p, {0, 0, 0})}, {0.5, basis_ket(p, {1, 0, 0})}});
  const auto t = noise_thresholds(zero);
  EXPECT_TRUE(t.never_excluded);
  EXPECT_EQ(t.coefficient, 0.0);
  for (const auto& row : t.rows) EXPECT_FALSE(row.contiguous.x_star.has_value());

  const auto product = white_noise_family(p, {{1.0, basis_ket(p, {0, 0, 0})}});
  EXPECT_NEAR(noise_thresholds(product).coefficient, 1.0, 1e-10);
}

TEST(Thresholds, RejectsNonLinearFamily) {
  const DimsProfile p({2, 2, 2});
  const auto ghz = from_ket(p, ghz_ket(p));
  const StateFamily quadratic(p, [ghz, p](double x) {
    const std::vector<WeightedState> terms{{x * x, ghz}};
    return mix(terms, 1 - x * x, p, Tolerances{});
  }, -1.0, 1.0);
  EXPECT_THROW(noise_thresholds(quadratic), DomainError);
}

TEST(Thresholds, CoarserShapesNeedMoreEntanglement) {
  const auto t = noise_thresholds(ghz_w_mixture_family());
  for (const auto& fine : t.rows)
    for (const auto& coarse : t.rows)
      if (fine.shape.blocks() > coarse.shape.blocks()) {
        EXPECT_LE(*fine.max.x_star, *coarse.max.x_star * (1 + 1e-12));
      }
}

}  // namespace
