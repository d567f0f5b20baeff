#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "stqp/defect.hpp"
#include "stqp/ensemble.hpp"
#include "test_support.hpp"

using namespace stqp;

namespace {

SymmetricMatrix with_offdiag(std::initializer_list<double> diag, double off) {
  auto q = SymmetricMatrix::diagonal(diag);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) q.set(i, j, off);
  return q;
}

}  // namespace

TEST(DiagMin, Examples) {
  auto a = diag_min(SymmetricMatrix::diagonal({3, 1, 2}));
  EXPECT_EQ(a.value, 1.0);
  EXPECT_EQ(a.index, 1u);
  auto b = diag_min(SymmetricMatrix::diagonal({5}));
  EXPECT_EQ(b.value, 5.0);
  EXPECT_EQ(b.index, 0u);
  auto c = diag_min(SymmetricMatrix::diagonal({2, 2, 3}));
  EXPECT_EQ(c.value, 2.0);
  EXPECT_EQ(c.index, 0u);
}

TEST(ShiftedEntry, Examples) {
  auto q = SymmetricMatrix::from_rows({{1.0, 1.0}, {1.0, 2.0}});
  EXPECT_EQ(shifted_entry(q, 1.0, 0, 1), 0.0);
  auto r = SymmetricMatrix::from_rows({{1.0, 0.3}, {0.3, 2.0}});
  EXPECT_DOUBLE_EQ(shifted_entry(r, 1.0, 0, 1), -0.7);
  const auto d = diag_min(r);
  EXPECT_EQ(shifted_entry(r, d.value, d.index, d.index), 0.0);
}

TEST(DefectGraph, AllOffDiagonalsBelowMinimumGiveOneComponent) {
  const auto d = build_defect_graph(with_offdiag({1, 2, 3}, 0.5));
  ASSERT_EQ(d.components.size(), 1u);
  EXPECT_EQ(d.components[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(d.edge_count, 3u);
  EXPECT_EQ(d.m_n, 1.0);
}

TEST(DefectGraph, IdentityIsConnected) {
  const auto d = build_defect_graph(SymmetricMatrix::identity(3));
  EXPECT_EQ(d.components.size(), 1u);
  EXPECT_EQ(max_component_size(d), 3u);
}

TEST(DefectGraph, LargeOffDiagonalsGiveSingletons) {
  const auto d = build_defect_graph(with_offdiag({1, 2, 3}, 10.0));
  EXPECT_EQ(d.components.size(), 3u);
  EXPECT_EQ(d.edge_count, 0u);
  EXPECT_EQ(max_component_size(d), 1u);
}

TEST(DefectGraph, TieWithMinimumIsNotAnEdge) {
  const auto d = build_defect_graph(with_offdiag({1, 2, 3, 4}, 1.0));
  EXPECT_EQ(d.edge_count, 0u);
  EXPECT_EQ(d.components.size(), 4u);
}

TEST(DefectGraph, MaxComponentSizeExamples) {
  auto q = with_offdiag({0, 0, 0, 0, 0, 0, 0}, 1.0);
  EXPECT_EQ(max_component_size(build_defect_graph(q)), 1u);
  q.set(2, 5, -1.0);
  const auto d = build_defect_graph(q);
  EXPECT_EQ(max_component_size(d), 2u);
  EXPECT_EQ(d.components[2], (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(max_component_size(build_defect_graph(with_offdiag({0, 0, 0, 0, 0, 0, 0}, -1.0))), 7u);
}

TEST(DefectGraph, ComponentsAreCanonicallyOrdered) {
  auto q = with_offdiag({0, 0, 0, 0, 0, 0}, 1.0);
  q.set(4, 1, -1.0);
  q.set(5, 0, -1.0);
  q.set(3, 5, -1.0);
  const auto d = build_defect_graph(q);
  ASSERT_EQ(d.components.size(), 3u);
  EXPECT_EQ(d.components[0], (std::vector<std::size_t>{0, 3, 5}));
  EXPECT_EQ(d.components[1], (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(d.components[2], (std::vector<std::size_t>{2}));
  EXPECT_EQ(d.component_of[3], 0u);
  EXPECT_EQ(d.component_of[4], 1u);
}

TEST(DefectGraph, RandomInstancesMatchBreadthFirstSearch) {
  const std::vector<EnsembleSpec> specs{Goe{}, GaussianWigner{1.0, 0.9}, HeavyTail{2.0, 2.0},
                                        EndpointPower{0.0, 1.0, 1.0}, ShiftedExponential{0.0, 1.0, 1.0}};
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto& spec = specs[t % specs.size()];
    const std::size_t n = 1 + t % 40;
    const auto q = sample_matrix(spec, n, 2024, t);
    const auto d = build_defect_graph(q);

    EXPECT_EQ(d.components, ref::bfs_components(q));

    std::size_t total = 0;
    std::vector<int> hits(n, 0);
    for (const auto& c : d.components) {
      total += c.size();
      for (auto v : c) ++hits[v];
    }
    EXPECT_EQ(total, n);
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

    double m = q(0, 0);
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, q(i, i));
    EXPECT_EQ(d.m_n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (d.component_of[i] != d.component_of[j]) EXPECT_GE(q(i, j), d.m_n);
  }
}

TEST(DisjointSets, UnionBySize) {
  DisjointSets s(6);
  EXPECT_TRUE(s.unite(0, 1));
  EXPECT_TRUE(s.unite(2, 3));
  EXPECT_TRUE(s.unite(1, 3));
  EXPECT_FALSE(s.unite(0, 2));
  EXPECT_EQ(s.set_size(2), 4u);
  EXPECT_EQ(s.find(0), s.find(3));
  EXPECT_NE(s.find(4), s.find(5));
}

TEST(MatrixText, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto q = sample_matrix(HeavyTail{1.5, 2.5}, 7, seed);
    std::stringstream io;
    write_matrix(io, q);
    EXPECT_EQ(read_matrix(io), q);
  }
}

TEST(MatrixText, AcceptsValidInput) {
  std::istringstream in("2\n0 -1\n-1e0 0.0\n");
  const auto q = read_matrix(in);
  EXPECT_EQ(q(0, 1), -1.0);
}

TEST(MatrixText, RejectsMalformedInput) {
  for (const char* text : {"", "0\n", "x\n", "2\n0 1\n2 0\n", "2\n0 1\n1\n", "2\n0 1 3\n1 0\n",
                           "2\n0 1\n", "2\n0 abc\nabc 0\n", "2\n0 1\n1 0\n5\n", "1\nnan\n", "1\ninf\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_matrix(in), FormatError) << "input: " << text;
  }
}
