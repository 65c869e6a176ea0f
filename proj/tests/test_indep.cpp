#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "permcontract/indep.hpp"

using namespace permcontract;
using gf::Elem;
using gf::Field;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;
}

// Plain branching on graphs of at most 64 vertices: a vertex of degree <= 1
// can always be taken, otherwise branch on a max-degree vertex.
std::size_t brute_mis(const std::vector<std::uint64_t>& nb, std::uint64_t live) {
  if (!live) return 0;
  int best_v = -1, best_deg = -1;
  for (std::uint64_t m = live; m; m &= m - 1) {
    int v = std::countr_zero(m);
    int deg = std::popcount(nb[v] & live);
    if (deg <= 1) return 1 + brute_mis(nb, live & ~(nb[v] | (std::uint64_t{1} << v)));
    if (deg > best_deg) {
      best_deg = deg;
      best_v = v;
    }
  }
  std::uint64_t bit = std::uint64_t{1} << best_v;
  return std::max(brute_mis(nb, live & ~bit), 1 + brute_mis(nb, live & ~(nb[best_v] | bit)));
}

std::size_t brute_mis(const CGraph& g) {
  std::vector<std::uint64_t> nb(g.n_vertices(), 0);
  for (auto [u, v] : g.edges()) {
    nb[u] |= std::uint64_t{1} << v;
    nb[v] |= std::uint64_t{1} << u;
  }
  std::uint64_t live = g.n_vertices() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n_vertices()) - 1;
  return brute_mis(nb, live);
}

std::size_t naive_min_hd(const PArray& a) {
  std::size_t best = a.n();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) best = std::min(best, hd(a[i], a[j]));
  return best;
}

CGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  return CGraph::from_edges(n, e);
}

}  // namespace

TEST(IndepSet, VerifiedRejectsEdges) {
  CGraph g = CGraph::from_edges(3, {{0, 1}});
  EXPECT_EQ(IndepSet::verified(g, {2, 0}, IndepMethod::Greedy).vertices(), (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(kind_of([&] { IndepSet::verified(g, {0, 1}, IndepMethod::Greedy); }), ErrorKind::IndependenceViolation);
  EXPECT_EQ(kind_of([&] { IndepSet::verified(g, {2, 2}, IndepMethod::Greedy); }), ErrorKind::IndependenceViolation);
  EXPECT_EQ(kind_of([&] { IndepSet::verified(g, {3}, IndepMethod::Greedy); }), ErrorKind::IndependenceViolation);
}

TEST(Heuristics, EdgelessGraphTakesEverything) {
  CGraph g(12);
  EXPECT_EQ(greedy_local_search(g).size(), 12u);
  IlsOptions o;
  o.stall_limit = 1000;
  EXPECT_EQ(iterated_local_search(g, o).size(), 12u);
}

TEST(Exact, MatchesBranchingOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::size_t n = 10 + seed % 30;
    double p = 0.08 + 0.02 * static_cast<double>(seed % 10);
    CGraph g = random_graph(n, p, seed);
    std::size_t want = brute_mis(g);
    IndepSet ls = greedy_local_search(g);
    IlsOptions o;
    o.seed = seed;
    o.stall_limit = 5000;
    IndepSet ils = iterated_local_search(g, o, &ls);
    EXPECT_LE(ls.size(), want);
    EXPECT_LE(ils.size(), want);
    ExactOptions eo;
    eo.time_budget_s = 30;
    IndepSet ex = exact_mis(g, eo, ils);
    EXPECT_EQ(ex.size(), want) << "seed " << seed;
    EXPECT_TRUE(ex.optimal());
  }
}

TEST(Heuristics, SeededRunsRepeat) {
  Field f = Field::of_order(13);
  CGraph g = pgl_p1_grid(f, f.one());
  IlsOptions o;
  o.seed = 42;
  o.stall_limit = 20000;
  IndepSet a = iterated_local_search(g, o);
  IndepSet b = iterated_local_search(g, o);
  EXPECT_EQ(a.vertices(), b.vertices());
  EXPECT_EQ(a.seed(), std::optional<std::uint64_t>{42});
}

class AffineSets : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(AffineSets, ClosedFormSizeAndDistance) {
  Field f = Field::of_order(GetParam());
  const std::size_t q = f.q();
  IndepSet s = agl_independent_set(f);
  EXPECT_EQ(s.size(), agl_expected_size(q));
  BoundResult b = agl_bound_array(f);
  EXPECT_EQ(b.n, q - 1);
  EXPECT_EQ(b.d, q - 3);
  EXPECT_EQ(b.size(), s.size());
  if (q <= 16) {
    EXPECT_EQ(naive_min_hd(b.array), q - 3);
  } else {
    EXPECT_EQ(b.witness.min_hd, q - 3);
  }
  EXPECT_EQ(b.claim(), "M(" + std::to_string(q - 1) + "," + std::to_string(q - 3) + ") >= " + std::to_string(s.size()));
}

INSTANTIATE_TEST_SUITE_P(Orders, AffineSets, ::testing::Values(7, 13, 16, 19, 25));

TEST(Affine, KnownSizes) {
  EXPECT_EQ(agl_expected_size(7), 24u);
  EXPECT_EQ(agl_expected_size(13), 84u);
  EXPECT_EQ(agl_expected_size(16), 90u);
  EXPECT_EQ(agl_bound_array(Field::of_order(7)).claim(), "M(6,4) >= 24");
  EXPECT_EQ(kind_of([] { agl_independent_set(Field::of_order(4)); }), ErrorKind::BadResidue);
}

TEST(Grid, ExactOptimumForSeven) {
  Field f = Field::of_order(7);
  CGraph g = pgl_p1_grid(f, f.one());
  std::size_t want = brute_mis(g);
  IndepSet s = p1_exact(f, 60);
  EXPECT_TRUE(s.optimal());
  EXPECT_EQ(s.size(), want);
  EXPECT_EQ(s.size(), 14u);
}

TEST(Lift, SizeAndDistance) {
  Field f = Field::of_order(7);
  IndepSet s = p1_exact(f, 60);
  LiftResult l = lift_to_pgl(f, s);
  EXPECT_EQ(l.lifted.size(), 6u * (s.size() + 7));
  EXPECT_EQ(l.bound.size(), 126u);
  EXPECT_EQ(l.bound.n, 7u);
  EXPECT_EQ(l.bound.d, 4u);
  EXPECT_GE(naive_min_hd(l.bound.array), 4u);
  // the lifted set is independent in the full contraction graph
  PArray lifted(8, l.lifted);
  EXPECT_EQ(build_graph(lifted).edge_count(), 0u);
  EXPECT_EQ(naive_min_hd(lifted), 6u);
  EXPECT_EQ(l.bound.method, "pgl-lift-exact-bnb");
}

TEST(Lift, ThirteenFromHeuristic) {
  Field f = Field::of_order(13);
  IndepSet s = p1_greedy(f, 1);
  LiftResult l = lift_to_pgl(f, s);
  EXPECT_EQ(l.bound.size(), 12u * (s.size() + 13));
  EXPECT_GE(l.bound.witness.min_hd, 10u);
}

TEST(Mathieu, ElevenContraction) {
  BoundResult b = mathieu_contract(11);
  EXPECT_EQ(b.n, 10u);
  EXPECT_EQ(b.d, 6u);
  EXPECT_EQ(b.size(), 7920u);
  EXPECT_EQ(b.witness.min_hd, 6u);
  EXPECT_EQ(b.claim(), "M(10,6) >= 7920");
  BoundResult p = project_bound(b);
  EXPECT_EQ(p.n, 9u);
  EXPECT_GE(p.size(), project_bound_arithmetic(10, 7920));
  EXPECT_GE(p.witness.min_hd, 6u);
  EXPECT_EQ(p.method, b.method + "-projected");
  EXPECT_EQ(kind_of([] { mathieu_contract(13); }), ErrorKind::UnsupportedDegree);
}

TEST(Mathieu, SampledContractionNotBelowExact) {
  BoundResult b = mathieu_contract(11, SweepMode::Sampled, 200000, 3);
  EXPECT_TRUE(b.sampled);
  EXPECT_GE(b.witness.min_hd, 6u);
}

TEST(Project, Arithmetic) {
  EXPECT_EQ(project_bound_arithmetic(11, 95040), 8640u);
  EXPECT_EQ(project_bound_arithmetic(10, 7920), 792u);
  EXPECT_EQ(project_bound_arithmetic(3, 7), 3u);
}

TEST(Table, SkipsAndReference) {
  Table1Options o;
  o.budget_s = 5;
  EXPECT_EQ(table1_row(11, o).status, "skipped: q not 1 mod 3");
  EXPECT_EQ(table1_row(16, o).status, "skipped: even q");
  EXPECT_EQ(table1_row(22, o).status, "skipped: not a prime power");
  EXPECT_EQ(table1_lookup(13)->k, 33u);
  EXPECT_EQ(table1_lookup(13)->bound, 552u);
  EXPECT_FALSE(table1_lookup(11).has_value());
  // every reference row satisfies bound = (q - 1)(k + q) except q = 313,
  // whose published bound is 8 above the identity
  std::vector<std::uint32_t> off;
  for (const auto& r : table1_reference())
    if (r.bound != (r.q - 1) * (r.k + r.q)) off.push_back(r.q);
  EXPECT_EQ(off, (std::vector<std::uint32_t>{313}));
}

TEST(Table, SevenRow) {
  Table1Options o;
  o.budget_s = 20;
  Table1Row r = table1_row(7, o);
  EXPECT_EQ(r.status, "verified");
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.k_found, 14u);
  EXPECT_EQ(r.bound_found, 126u);
  EXPECT_EQ(r.k_ref, std::optional<std::uint32_t>{13});
  std::vector<Table1Row> rows{r};
  std::string csv = table1_csv(rows);
  EXPECT_EQ(csv.rfind("q,k_found,k_paper,bound_found,bound_paper,optimal_flag,runtime_s,ratio,status\n7,14,13,126,120,1,", 0), 0u);
  EXPECT_NE(csv.find(",verified\n"), std::string::npos);
}

TEST(Table, RatioCheck) {
  std::vector<Table1Row> rows(3);
  rows[0].q = 7;
  rows[0].bound_found = 126;
  rows[1].q = 13;
  rows[1].bound_found = 624;
  rows[2].q = 19;
  rows[2].bound_found = 1000;  // 2.77 < 3.69
  EXPECT_FALSE(bound_ratio_nondecreasing(rows));
  rows[2].bound_found = 2000;
  EXPECT_TRUE(bound_ratio_nondecreasing(rows));
}
