#include <gtest/gtest.h>

#include "stqp/ensemble.hpp"
#include "stqp/oracle.hpp"
#include "stqp/solver.hpp"
#include "test_support.hpp"

using namespace stqp;

namespace {

// Objective gap between a simplex point and a nearest grid point: the
// rounding moves at most n / grid of l1 mass.
double grid_gap(const SymmetricMatrix& q, std::size_t grid) {
  const double h = static_cast<double>(q.size()) / static_cast<double>(grid);
  return q.max_abs() * (2.0 * h + h * h);
}

}  // namespace

TEST(BruteForce, Examples) {
  EXPECT_NEAR(brute_force_stqp(SymmetricMatrix::identity(3)).value, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(brute_force_stqp(dyadic_matrix(4)).value, 16.0 / 15.0, 1e-15);
  const auto neg = brute_force_stqp(SymmetricMatrix::from_rows({{0, -1}, {-1, 0}}));
  EXPECT_NEAR(neg.value, -0.5, 1e-15);
  EXPECT_EQ(neg.support, (std::vector<std::size_t>{0, 1}));
}

TEST(BruteForce, Capacity) {
  EXPECT_THROW(brute_force_stqp(SymmetricMatrix::identity(5), 4), CapacityError);
  EXPECT_NO_THROW(brute_force_stqp(SymmetricMatrix::identity(4), 4));
}

TEST(BruteForce, TieBreakMatchesLocalEnumeration) {
  SymmetricMatrix flat(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) flat.set(i, j, 2.0);
  const auto b = brute_force_stqp(flat);
  const auto l = local_stqp(flat);
  EXPECT_EQ(b.support, l.support);
  EXPECT_EQ(b.support, std::vector<std::size_t>{0});
  EXPECT_TRUE(b.near_tie);
}

TEST(BruteForce, EqualsLocalOnSingleComponent) {
  std::size_t checked = 0;
  for (std::uint64_t t = 0; t < 500 && checked < 100; ++t) {
    const auto q = sample_matrix(GaussianWigner{0.1, 2.0}, 2 + t % 7, 8, t);
    if (build_defect_graph(q).components.size() != 1) continue;
    ++checked;
    const auto b = brute_force_stqp(q);
    const auto l = local_stqp(q);
    EXPECT_EQ(b.value, l.value);
    EXPECT_EQ(b.support, l.support);
    EXPECT_EQ(b.x, l.x);
  }
  EXPECT_EQ(checked, 100u);
}

TEST(Grid, Examples) {
  EXPECT_TRUE(grid_refine_check(SymmetricMatrix::identity(2), 0.5, 100));
  const auto g = grid_minimum(SymmetricMatrix::identity(2), 100);
  EXPECT_NEAR(g.value, 0.5, 1e-15);
  EXPECT_NEAR(g.point[0], 0.5, 1e-15);

  const auto neg = SymmetricMatrix::from_rows({{0, -1}, {-1, 0}});
  EXPECT_NEAR(grid_minimum(neg, 100).value, -0.5, 1e-15);
  EXPECT_TRUE(grid_refine_check(neg, brute_force_stqp(neg), 100));
  // A claimed value well below the true minimum is fine; one above it is caught.
  EXPECT_TRUE(grid_refine_check(neg, -0.6, 100));
  EXPECT_FALSE(grid_refine_check(neg, -0.4, 100));
  EXPECT_THROW(grid_refine_check(SymmetricMatrix::identity(7), 0.0, 4), DomainError);
}

TEST(Grid, AgreesWithBruteForceOnRandom3x3) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto q = ref::random_block(3, 700 + seed);
    const auto b = brute_force_stqp(q);
    EXPECT_TRUE(grid_refine_check(q, b, 200));
    const auto g = grid_minimum(q, 200);
    EXPECT_GE(g.value, b.value - 1e-12);
    EXPECT_LE(g.value - b.value, grid_gap(q, 200));
  }
}

TEST(Grid, AgreesWithBruteForceInHigherDimensions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 4 + seed % 3;
    const auto q = ref::random_block(n, 1300 + seed);
    const auto b = brute_force_stqp(q);
    const std::size_t grid = n == 6 ? 20 : 30;
    const auto g = grid_minimum(q, grid);
    EXPECT_GE(g.value, b.value - 1e-12);
    EXPECT_LE(g.value - b.value, grid_gap(q, grid));
  }
}
