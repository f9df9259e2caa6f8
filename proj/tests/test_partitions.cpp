#include <gtest/gtest.h>

#include <set>

#include <blochsep/blochsep.hpp>

#include "oracles.hpp"

namespace {

using namespace blochsep;

std::vector<std::string> rendered(const std::vector<PartitionShape>& shapes) {
  std::vector<std::string> out;
  for (const auto& s : shapes) out.push_back(s.to_string());
  return out;
}

TEST(Shapes, ThreeParties) {
  EXPECT_EQ(rendered(enumerate_shapes(3)), (std::vector<std::string>{"(1,1,1)", "(1,2)"}));
  EXPECT_EQ(rendered(enumerate_shapes(3, true)), (std::vector<std::string>{"(1,1,1)", "(1,2)", "(3)"}));
}

TEST(Shapes, FourPartiesOrderedByBlockCountThenLexicographic) {
  const auto s = rendered(enumerate_shapes(4));
  EXPECT_EQ(s, (std::vector<std::string>{"(1,1,1,1)", "(1,1,2)", "(1,3)", "(2,2)"}));
  const std::set<std::string> as_set(s.begin(), s.end());
  EXPECT_EQ(as_set, (std::set<std::string>{"(1,1,1,1)", "(1,1,2)", "(2,2)", "(1,3)"}));
}

TEST(Shapes, FiveParties) {
  EXPECT_EQ(rendered(enumerate_shapes(5)),
            (std::vector<std::string>{"(1,1,1,1,1)", "(1,1,1,2)", "(1,1,3)", "(1,2,2)", "(1,4)", "(2,3)"}));
}

TEST(Shapes, CountIsPartitionNumberMinusOne) {
  for (int n = 2; n <= 8; ++n) {
    const auto shapes = enumerate_shapes(n);
    EXPECT_EQ(static_cast<int>(shapes.size()), oracle::partition_count(n) - 1);
    for (std::size_t i = 1; i < shapes.size(); ++i)
      EXPECT_GE(shapes[i - 1].blocks(), shapes[i].blocks());
    for (const auto& s : shapes) {
      EXPECT_EQ(s.total(), n);
      EXPECT_FALSE(s.is_baseline());
    }
  }
}

TEST(Shapes, SortsAndRejects) {
  EXPECT_EQ(PartitionShape({2, 1, 2}).to_string(), "(1,2,2)");
  EXPECT_TRUE(PartitionShape({4}).is_baseline());
  EXPECT_THROW(PartitionShape({}), DomainError);
  EXPECT_THROW(PartitionShape({0, 2}), DomainError);
}

TEST(Assignments, Counts) {
  const DimsProfile p({2, 2, 2, 2});
  EXPECT_EQ(enumerate_assignments(PartitionShape({1, 1, 1, 1}), p).size(), 1u);
  EXPECT_EQ(enumerate_assignments(PartitionShape({2, 2}), p).size(), 3u);
  EXPECT_EQ(enumerate_assignments(PartitionShape({1, 1, 2}), p).size(), 6u);
  EXPECT_EQ(enumerate_assignments(PartitionShape({1, 3}), p).size(), 4u);
}

TEST(Assignments, MatchSetPartitionOracle) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const DimsProfile p(std::vector<int>(n, 2));
    std::map<std::vector<int>, std::set<std::vector<PartySet>>> by_shape;
    for (auto blocks : oracle::set_partitions(n)) {
      std::sort(blocks.begin(), blocks.end(), [](const PartySet& a, const PartySet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
      });
      by_shape[oracle::block_sizes(blocks)].insert(blocks);
    }
    for (const auto& shape : enumerate_shapes(static_cast<int>(n), true)) {
      const auto got = enumerate_assignments(shape, p);
      EXPECT_DOUBLE_EQ(static_cast<double>(got.size()), oracle::assignment_count(shape.parts()));
      std::set<std::vector<PartySet>> seen;
      for (const auto& a : got) {
        EXPECT_EQ(a.shape(), shape);
        seen.insert(a.blocks());
      }
      EXPECT_EQ(seen.size(), got.size());
      EXPECT_EQ(seen, by_shape[shape.parts()]) << shape.to_string();
    }
  }
}

TEST(Assignments, ShapeMustMatchPartyCount) {
  EXPECT_THROW(enumerate_assignments(PartitionShape({1, 2}), DimsProfile({2, 2})), DomainError);
}

TEST(Partition, ValidationAndRendering) {
  const DimsProfile p({2, 3, 4, 5});
  const Partition part({{3, 1}, {0}, {2}}, p);
  EXPECT_EQ(part.to_string(), "{1}{3}{2,4}");
  EXPECT_EQ(part.shape().to_string(), "(1,1,2)");
  EXPECT_EQ(part.block_dims(), (std::vector<std::vector<int>>{{2}, {4}, {3, 5}}));
  const std::vector<std::size_t> labels{3, 2, 1, 0};
  EXPECT_EQ(part.to_string(&labels), "{2}{4}{1,3}");
  EXPECT_THROW(Partition({{0, 1}, {1, 2, 3}}, p), DomainError);
  EXPECT_THROW(Partition({{0, 1}, {2}}, p), DomainError);
  EXPECT_THROW(Partition({{0, 1, 2, 7}}, p), DomainError);
}

TEST(Partition, Contiguous) {
  const DimsProfile p({2, 2, 3, 3, 4});
  EXPECT_EQ(contiguous_partition(PartitionShape({2, 1, 2}), p).to_string(), "{1}{2,3}{4,5}");
}

TEST(BlockChecks, Constraint) {
  const DimsProfile ok({2, 2, 2}), bad({2, 2, 5}), het({3, 4, 5});
  EXPECT_TRUE(block_constraints_hold(Partition({{0, 1, 2}}, ok)));
  EXPECT_FALSE(block_constraints_hold(Partition({{0, 1, 2}}, bad)));
  EXPECT_TRUE(block_constraints_hold(Partition({{0, 1, 2}}, het)));
  const auto checks = check_block_constraints(Partition({{0}, {1, 2}}, bad));
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_TRUE(checks[0].ok && checks[1].ok);
}

}  // namespace
