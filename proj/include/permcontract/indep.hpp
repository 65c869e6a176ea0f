#pragma once

// Independent sets in contraction graphs and the permutation arrays they
// produce after contraction.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "permcontract/bsgs.hpp"
#include "permcontract/cgraph.hpp"
#include "permcontract/error.hpp"
#include "permcontract/gf.hpp"
#include "permcontract/groups.hpp"
#include "permcontract/perm.hpp"

namespace permcontract {

enum class IndepMethod { ClosedForm, Greedy, LocalSearch, IteratedLocalSearch, ExactBnb };

constexpr std::string_view to_string(IndepMethod m) {
  switch (m) {
    case IndepMethod::ClosedForm: return "closed-form";
    case IndepMethod::Greedy: return "greedy";
    case IndepMethod::LocalSearch: return "local-search";
    case IndepMethod::IteratedLocalSearch: return "iterated-local-search";
    case IndepMethod::ExactBnb: return "exact-bnb";
  }
  return "?";
}

class IndepSet {
 public:
  /// Checks pairwise non-adjacency against `g`.
  static IndepSet verified(const CGraph& g, std::vector<Vertex> vs, IndepMethod method, std::optional<std::uint64_t> seed = {},
                           bool optimal = false) {
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) fail(ErrorKind::IndependenceViolation, "repeated vertex");
    std::vector<bool> in(g.n_vertices(), false);
    for (Vertex v : vs) {
      if (v >= g.n_vertices()) fail(ErrorKind::IndependenceViolation, "vertex out of range");
      in[v] = true;
    }
    for (Vertex v : vs)
      for (Vertex u : g.neighbors(v))
        if (in[u]) fail(ErrorKind::IndependenceViolation, "adjacent pair " + std::to_string(v) + "," + std::to_string(u));
    IndepSet s;
    s.vertices_ = std::move(vs);
    s.method_ = method;
    s.seed_ = seed;
    s.optimal_ = optimal;
    return s;
  }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  IndepMethod method() const { return method_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  bool optimal() const { return optimal_; }

 private:
  std::vector<Vertex> vertices_;
  IndepMethod method_ = IndepMethod::Greedy;
  std::optional<std::uint64_t> seed_;
  bool optimal_ = false;
};

struct BoundResult {
  std::size_t n = 0;
  std::size_t d = 0;
  PArray array;
  HdWitness witness;  // exhaustive minimum, or sampled when `sampled` is set
  std::string method;
  std::optional<gf::FieldSpec> field;
  std::optional<std::uint64_t> seed;
  double runtime_s = 0;
  bool sampled = false;

  std::size_t size() const { return array.size(); }
  std::string claim() const {
    return "M(" + std::to_string(n) + "," + std::to_string(d) + ") >= " + std::to_string(size());
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Verified bound from an array: exhaustive minimum distance must reach d.
inline BoundResult certify_array(PArray a, std::size_t d, std::string method) {
  BoundResult b;
  b.n = a.n();
  b.d = d;
  b.witness = a.size() >= 2 ? a.min_hd() : HdWitness{a.n(), 0, 0};
  if (b.witness.min_hd < d)
    fail(ErrorKind::VerificationFailed, "array distance " + std::to_string(b.witness.min_hd) + " below " + std::to_string(d));
  b.array = std::move(a);
  b.method = std::move(method);
  return b;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// AGL(1,q)

/// Isolated vertices plus every other vertex around each cycle, walking from
/// the cycle's smallest vertex towards its smaller neighbor.
inline IndepSet agl_independent_set(const Field& f, const CGraph& g) {
  require_unit_residue(f);
  if (f.q() < 7) fail(ErrorKind::BadResidue, "AGL construction needs q >= 7");
  auto rep = components(g);
  std::vector<Vertex> pick;
  for (const auto& c : rep.components) {
    if (c.kind == ComponentKind::Isolated) {
      pick.push_back(c.smallest);
      continue;
    }
    if (c.kind != ComponentKind::Cycle)
      fail(ErrorKind::StructureViolation, "component at " + std::to_string(c.smallest) + " is not a cycle");
    std::vector<Vertex> walk{c.smallest};
    Vertex prev = c.smallest, cur = g.neighbors(c.smallest).front();
    while (cur != c.smallest) {
      walk.push_back(cur);
      const auto& nb = g.neighbors(cur);
      Vertex next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
    }
    for (std::size_t k = 0; k < walk.size() / 2; ++k) pick.push_back(walk[2 * k]);
  }
  return IndepSet::verified(g, std::move(pick), IndepMethod::ClosedForm);
}

inline IndepSet agl_independent_set(const Field& f) { return agl_independent_set(f, agl_graph(f)); }

inline std::size_t agl_expected_size(std::uint64_t q) { return q % 2 ? (q * q - 1) / 2 : (q - 1) * (q + 2) / 3; }

/// M(q-1, q-3) >= |I| from the contracted AGL independent set.
inline BoundResult agl_bound_array(const Field& f) {
  auto t0 = std::chrono::steady_clock::now();
  IndepSet s = agl_independent_set(f);
  PArray out(f.q() - 1);
  for (Vertex v : s.vertices()) out.push_back(contract_drop(affine_from_index(f, v).perm(f)));
  auto b = detail::certify_array(std::move(out), f.q() - 3, "agl-closed-form");
  b.field = f.spec();
  b.runtime_s = detail::seconds_since(t0);
  return b;
}

// ---------------------------------------------------------------------------
// Heuristics on arbitrary graphs

/// Solution state with per-vertex tightness (number of solution neighbors).
class SolutionState {
 public:
  explicit SolutionState(const CGraph& g) : g_(&g), in_(g.n_vertices(), false), tight_(g.n_vertices(), 0), pos_(g.n_vertices(), 0) {}

  void add(Vertex v) {
    in_[v] = true;
    pos_[v] = members_.size();
    members_.push_back(v);
    for (Vertex u : g_->neighbors(v)) ++tight_[u];
  }

  void remove(Vertex v) {
    in_[v] = false;
    Vertex back = members_.back();
    members_[pos_[v]] = back;
    pos_[back] = pos_[v];
    members_.pop_back();
    for (Vertex u : g_->neighbors(v)) --tight_[u];
  }

  bool in(Vertex v) const { return in_[v]; }
  bool free(Vertex v) const { return !in_[v] && tight_[v] == 0; }
  std::uint32_t tightness(Vertex v) const { return tight_[v]; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Vertex>& members() const { return members_; }
  std::vector<Vertex> sorted() const {
    auto v = members_;
    std::sort(v.begin(), v.end());
    return v;
  }

  /// Adds free vertices in index order.
  void fill() {
    for (Vertex v = 0; v < in_.size(); ++v)
      if (free(v)) add(v);
  }

  /// One (1,2)-swap around x if available: drop x, insert two non-adjacent
  /// neighbors whose only solution neighbor is x.
  bool try_swap(Vertex x) {
    std::vector<Vertex> cand;
    for (Vertex u : g_->neighbors(x))
      if (tight_[u] == 1) cand.push_back(u);
    if (cand.size() < 2) return false;
    for (std::size_t a = 0; a < cand.size(); ++a)
      for (std::size_t b = a + 1; b < cand.size(); ++b)
        if (!g_->has_edge(cand[a], cand[b])) {
          remove(x);
          add(cand[a]);
          add(cand[b]);
          for (Vertex u : g_->neighbors(x))
            if (free(u)) add(u);
          return true;
        }
    return false;
  }

  /// (1,2)-swaps until none applies or `cap` swaps have been made.
  void local_search(std::size_t cap) {
    fill();
    std::size_t swaps = 0;
    bool improved = true;
    while (improved && swaps < cap) {
      improved = false;
      for (std::size_t k = 0; k < members_.size() && swaps < cap; ++k)
        if (try_swap(members_[k])) {
          ++swaps;
          improved = true;
        }
    }
  }

 private:
  const CGraph* g_;
  std::vector<bool> in_;
  std::vector<std::uint32_t> tight_;
  std::vector<std::size_t> pos_;
  std::vector<Vertex> members_;
};

/// Greedy in vertex order, then (1,2)-swap local search capped at 50|V| swaps.
inline IndepSet greedy_local_search(const CGraph& g) {
  SolutionState s(g);
  s.local_search(50 * g.n_vertices());
  return IndepSet::verified(g, s.sorted(), IndepMethod::LocalSearch);
}

struct IlsOptions {
  std::uint64_t seed = 1;
  std::uint64_t max_iterations = std::uint64_t{1} << 40;
  std::uint64_t stall_limit = 500'000;  // stop after this many iterations without a gain
  double time_budget_s = 60;            // backstop only; the stall limit normally ends the run
  std::size_t target = 0;  // stop as soon as this size is reached (0: never)
};

/// Iterated local search: perturb by forcing a random outside vertex in,
/// repair with (1,2)-swaps, keep the best solution seen.
inline IndepSet iterated_local_search(const CGraph& g, const IlsOptions& opt, const IndepSet* start = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t nv = g.n_vertices();
  std::mt19937_64 rng(opt.seed);
  SolutionState cur(g);
  if (start)
    for (Vertex v : start->vertices()) cur.add(v);
  cur.local_search(50 * nv);
  std::vector<Vertex> best = cur.sorted();
  std::vector<Vertex> cur_saved = best;

  auto restore = [&](const std::vector<Vertex>& vs) {
    while (cur.size()) cur.remove(cur.members().back());
    for (Vertex v : vs) cur.add(v);
  };

  std::uint64_t last_gain = 0;
  for (std::uint64_t it = 0; it < opt.max_iterations && nv > 1; ++it) {
    if (opt.target && best.size() >= opt.target) break;
    if (best.size() == nv) break;  // nothing left outside
    if (it - last_gain > opt.stall_limit) break;
    if ((it & 63) == 0 && detail::seconds_since(t0) > opt.time_budget_s) break;
    const std::size_t before = cur.size();
    // Force one (occasionally two) outside vertices into the solution.
    int force = (rng() % 8 == 0) ? 2 : 1;
    for (int k = 0; k < force && cur.size() < nv; ++k) {
      Vertex v;
      do v = static_cast<Vertex>(rng() % nv);
      while (cur.in(v));
      for (Vertex u : g.neighbors(v))
        if (cur.in(u)) cur.remove(u);
      cur.add(v);
    }
    cur.local_search(nv);
    const std::size_t after = cur.size();
    if (after > best.size()) {
      best = cur.sorted();
      last_gain = it;
    }
    if (after >= before) {
      cur_saved = cur.sorted();
    } else {
      // Accept a worse solution with probability 1 / (1 + loss * gap).
      const double loss = static_cast<double>(before - after);
      const double gap = static_cast<double>(best.size() - after);
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      if (u01(rng) < 1.0 / (1.0 + loss * gap))
        cur_saved = cur.sorted();
      else
        restore(cur_saved);
    }
  }
  return IndepSet::verified(g, std::move(best), IndepMethod::IteratedLocalSearch, opt.seed);
}

// ---------------------------------------------------------------------------
// Exact search

struct ExactOptions {
  double time_budget_s = 60;
  std::optional<Vertex> forced;  // a vertex some maximum set is known to contain
};

namespace detail {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  std::optional<std::size_t> first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return std::nullopt;
  }
  bool any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w != 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      for (std::uint64_t w = w_[k]; w; w &= w - 1) fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
  }

 private:
  std::vector<std::uint64_t> w_;
};

/// Maximum clique in the complement graph (= maximum independent set) with
/// greedy-coloring bounds.
class MisSearch {
 public:
  MisSearch(const CGraph& g, double budget_s) : n_(g.n_vertices()), budget_s_(budget_s), t0_(std::chrono::steady_clock::now()) {
    // compl_[v]: vertices non-adjacent to v (the complement's neighborhood)
    compl_.assign(n_, Bitset(n_));
    adj_.assign(n_, Bitset(n_));
    for (Vertex v = 0; v < n_; ++v) {
      for (Vertex u = 0; u < n_; ++u)
        if (u != v) compl_[v].set(u);
      for (Vertex u : g.neighbors(v)) {
        compl_[v].reset(u);
        adj_[v].set(u);
      }
    }
  }

  /// Returns true when the search ran to completion.
  bool run(const Bitset& candidates, std::vector<Vertex> prefix, std::vector<Vertex> incumbent) {
    best_ = std::move(incumbent);
    cur_ = std::move(prefix);
    expand(candidates);
    return !timed_out_;
  }

  const std::vector<Vertex>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void color_sort(const Bitset& p, std::vector<Vertex>& order, std::vector<std::size_t>& bound) {
    order.clear();
    bound.clear();
    Bitset uncolored = p;
    std::size_t color = 0;
    while (uncolored.any()) {
      ++color;
      Bitset q = uncolored;
      // Vertices of one color are pairwise adjacent in the original graph,
      // so at most one of them can join an independent set.
      while (auto first = q.first()) {
        std::size_t v = *first;
        uncolored.reset(v);
        q = q & adj_[v];
        order.push_back(static_cast<Vertex>(v));
        bound.push_back(color);
      }
    }
  }

  void expand(Bitset p) {
    if (timed_out_) return;
    if ((++nodes_ & 1023) == 0 && seconds_since(t0_) > budget_s_) {
      timed_out_ = true;
      return;
    }
    std::vector<Vertex> order;
    std::vector<std::size_t> bound;
    color_sort(p, order, bound);
    for (std::size_t k = order.size(); k-- > 0;) {
      if (cur_.size() + bound[k] <= best_.size()) return;
      Vertex v = order[k];
      cur_.push_back(v);
      Bitset np = p & compl_[v];
      if (!np.any()) {
        if (cur_.size() > best_.size()) best_ = cur_;
      } else {
        expand(np);
      }
      cur_.pop_back();
      p.reset(v);
      if (timed_out_) return;
    }
  }

  std::size_t n_;
  double budget_s_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<Bitset> compl_, adj_;
  std::vector<Vertex> best_, cur_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace detail

/// Branch and bound for a maximum independent set, seeded with `incumbent`.
/// When the budget runs out the incumbent (or an improvement) comes back
/// with optimal() false.
inline IndepSet exact_mis(const CGraph& g, const ExactOptions& opt, const IndepSet& incumbent) {
  const std::size_t n = g.n_vertices();
  detail::MisSearch search(g, opt.time_budget_s);
  detail::Bitset cand(n);
  std::vector<Vertex> prefix;
  if (opt.forced) {
    prefix.push_back(*opt.forced);
    std::vector<bool> blocked(n, false);
    blocked[*opt.forced] = true;
    for (Vertex u : g.neighbors(*opt.forced)) blocked[u] = true;
    for (Vertex v = 0; v < n; ++v)
      if (!blocked[v]) cand.set(v);
  } else {
    for (Vertex v = 0; v < n; ++v) cand.set(v);
  }
  bool complete = search.run(cand, prefix, incumbent.vertices());
  return IndepSet::verified(g, search.best(), IndepMethod::ExactBnb, {}, complete);
}

// ---------------------------------------------------------------------------
// The grid P_1 of PGL(2,q)

/// Greedy plus (1,2)-swap local search on P_1. The seed drives a short
/// iterated phase, so the result never falls below plain local search.
inline IndepSet p1_greedy(const Field& f, std::uint64_t seed) {
  CGraph g = pgl_p1_grid(f, f.one());
  IndepSet ls = greedy_local_search(g);
  IlsOptions opt;
  opt.seed = seed;
  opt.stall_limit = 20 * g.n_vertices();
  opt.time_budget_s = 30;
  IndepSet ils = iterated_local_search(g, opt, &ls);
  return ils.size() > ls.size() ? ils : ls;
}

/// Exact maximum on P_1. The grid is vertex-transitive (translations of both
/// coordinates preserve (b - a)(j - i)), so the search may fix (0, 0).
inline IndepSet p1_exact(const Field& f, double time_budget_s, std::uint64_t seed = 1) {
  CGraph g = pgl_p1_grid(f, f.one());
  IndepSet inc = p1_greedy(f, seed);
  // Translate the incumbent so it contains (0,0); the forced search needs it.
  auto [i0, a0] = grid_coords(f, inc.vertices().front());
  std::vector<Vertex> shifted;
  for (Vertex v : inc.vertices()) {
    auto [i, a] = grid_coords(f, v);
    shifted.push_back(grid_vertex(f, f.sub(i, i0), f.sub(a, a0)));
  }
  IndepSet seeded = IndepSet::verified(g, std::move(shifted), inc.method(), inc.seed());
  ExactOptions opt;
  opt.time_budget_s = time_budget_s;
  opt.forced = grid_vertex(f, f.zero(), f.zero());
  return exact_mis(g, opt, seeded);
}

struct LiftResult {
  std::vector<Perm> lifted;  // the independent set in C_P(q), on q + 1 symbols
  BoundResult bound;         // contracted array on q symbols
};

/// Copies S into every component P_r via (i, a) -> a + r/(x - r i), adds the
/// q(q-1) maps fixing infinity, contracts, and verifies distance >= q - 3.
inline LiftResult lift_to_pgl(const Field& f, const IndepSet& s) {
  auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t q = f.q();
  const CGraph p1 = pgl_p1_grid(f, f.one());
  IndepSet::verified(p1, s.vertices(), s.method());
  LiftResult out;
  for (std::uint32_t r = 1; r < q; ++r) {
    const std::size_t first = out.lifted.size();
    for (Vertex v : s.vertices()) {
      auto [i, a] = grid_coords(f, v);
      out.lifted.push_back(p_form_perm(f, a, Elem{r}, f.mul(Elem{r}, i)));
    }
    // Re-check independence inside P_r on the permutations themselves.
    for (std::size_t x = first; x < out.lifted.size(); ++x)
      for (std::size_t y = x + 1; y < out.lifted.size(); ++y)
        if (is_contraction_edge(out.lifted[x], out.lifted[y]))
          fail(ErrorKind::IndependenceViolation, "lifted pair adjacent in P_" + std::to_string(r));
  }
  for (const auto& m : pgl_maps(f))
    if (m.c.index == 0) out.lifted.push_back(m.perm(f));
  const std::size_t expect = std::size_t{q - 1} * (s.size() + q);
  if (out.lifted.size() != expect) fail(ErrorKind::VerificationFailed, "lift size mismatch");
  PArray contracted(q);
  for (const auto& p : out.lifted) contracted.push_back(contract_drop(p));
  out.bound = detail::certify_array(std::move(contracted), q - 3, std::string("pgl-lift-") + std::string(to_string(s.method())));
  out.bound.field = f.spec();
  out.bound.seed = s.seed();
  out.bound.runtime_s = detail::seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------
// Mathieu groups

enum class SweepMode { Full, Sampled };

/// Contracts every element of M_n (n = 11, 12). The result has |G| distinct
/// rows and distance at least hd(G) - 2.
inline BoundResult mathieu_contract(std::size_t n, SweepMode mode = SweepMode::Full, std::uint64_t sample_pairs = 10'000'000,
                                    std::uint64_t seed = 1, std::span<const Perm> generators = {}) {
  if (n != 11 && n != 12) fail(ErrorKind::UnsupportedDegree, "contraction is materialized only for M11 and M12");
  auto t0 = std::chrono::steady_clock::now();
  BSGS g = mathieu(n, generators);
  auto elems = g.elements();
  std::size_t fix = 0;
  for (const auto& e : elems)
    if (!e.is_identity()) fix = std::max(fix, fixed_points(e));
  const std::size_t dist = n - fix;
  PArray out(n - 1);
  try {
    for (const auto& e : elems) out.push_back(contract_drop(e));
  } catch (const Error& e) {
    fail(ErrorKind::VerificationFailed, std::string("contracted rows collide: ") + e.what());
  }
  BoundResult b;
  b.n = n - 1;
  b.d = dist - 2;
  b.method = "mathieu-M" + std::to_string(n) + (mode == SweepMode::Full ? "-full" : "-sampled");
  if (mode == SweepMode::Full) {
    b = detail::certify_array(std::move(out), dist - 2, b.method);
  } else {
    b.witness = hd_rows_sampled(out.perms(), sample_pairs, seed);
    if (b.witness.min_hd < b.d) fail(ErrorKind::VerificationFailed, "sampled pair below " + std::to_string(b.d));
    b.array = std::move(out);
    b.sampled = true;
    b.seed = seed;
  }
  b.runtime_s = detail::seconds_since(t0);
  return b;
}

/// ceil(N / n): what one projection step guarantees.
inline std::uint64_t project_bound_arithmetic(std::uint64_t n, std::uint64_t size) { return (size + n - 1) / n; }

/// Keeps the largest class of the last position (ties: smallest symbol),
/// deletes that position and relabels; distance is re-verified.
inline BoundResult project_bound(const BoundResult& b) {
  auto t0 = std::chrono::steady_clock::now();
  if (b.n < 2) fail(ErrorKind::VerificationFailed, "nothing to project");
  const std::size_t pos = b.n - 1;
  auto parts = partition_by_position(b.array, pos);
  const PArray* best = nullptr;
  for (const auto& [sym, part] : parts)
    if (!best || part.size() > best->size()) best = &part;
  PArray out(b.n - 1);
  for (const auto& p : *best) out.push_back(delete_position(p, pos));
  auto r = detail::certify_array(std::move(out), b.d, b.method + "-projected");
  if (r.size() < project_bound_arithmetic(b.n, b.size())) fail(ErrorKind::VerificationFailed, "projection below ceil(N/n)");
  r.field = b.field;
  r.seed = b.seed;
  r.runtime_s = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// Table of grid bounds

struct Table1Ref {
  std::uint32_t q, k, bound;
};

/// Published independent-set sizes in P_1 and the resulting bounds.
inline const std::vector<Table1Ref>& table1_reference() {
  static const std::vector<Table1Ref> rows = {
      {7, 13, 120},        {13, 33, 552},       {19, 81, 1800},      {31, 122, 4590},     {37, 191, 8208},
      {43, 191, 9828},     {49, 226, 13200},    {61, 314, 22500},    {67, 340, 26862},    {73, 382, 32760},
      {79, 415, 38532},    {97, 535, 60672},    {103, 598, 71502},   {109, 637, 80568},   {121, 2613, 328080},
      {127, 768, 112770},  {139, 867, 138828},  {151, 945, 164400},  {157, 984, 177996},  {163, 1031, 193428},
      {169, 1069, 207984}, {181, 1174, 243900}, {193, 1262, 279360}, {199, 1310, 298782}, {211, 1403, 338940},
      {223, 1496, 381618}, {229, 1565, 409032}, {241, 1671, 458880}, {277, 1956, 616308}, {283, 2009, 646344},
      {289, 2045, 672192}, {307, 2197, 766224}, {313, 2272, 806528}, {331, 2396, 899910}, {337, 2462, 940464},
      {343, 2501, 972648},
  };
  return rows;
}

inline std::optional<Table1Ref> table1_lookup(std::uint32_t q) {
  for (const auto& r : table1_reference())
    if (r.q == q) return r;
  return std::nullopt;
}

struct Table1Options {
  double budget_s = 60;          // per row, split between heuristic and exact search
  std::uint64_t seed = 1;
  std::uint32_t exact_max_q = 13;  // exact search is attempted up to this q
  bool stop_at_reference = false;  // heuristic stops once the published k is reached
};

struct Table1Row {
  std::uint32_t q = 0;
  std::size_t k_found = 0;
  std::optional<std::uint32_t> k_ref;
  std::size_t bound_found = 0;
  std::optional<std::uint32_t> bound_ref;
  bool optimal = false;
  double runtime_s = 0;
  std::string status;  // "verified" or "skipped: ..."
  std::optional<IndepSet> set;
  std::optional<BoundResult> bound;

  double ratio() const { return k_ref && *k_ref ? static_cast<double>(k_found) / *k_ref : 0.0; }
};

inline Table1Row table1_row(std::uint32_t q, const Table1Options& opt) {
  Table1Row row;
  row.q = q;
  if (auto ref = table1_lookup(q)) {
    row.k_ref = ref->k;
    row.bound_ref = ref->bound;
  }
  auto pp = gf::prime_power(q);
  if (!pp) {
    row.status = "skipped: not a prime power";
    return row;
  }
  if (q % 2 == 0) {
    row.status = "skipped: even q";
    return row;
  }
  if (q % 3 != 1) {
    row.status = "skipped: q not 1 mod 3";
    return row;
  }
  auto t0 = std::chrono::steady_clock::now();
  Field f = Field::of_order(q);
  CGraph g = pgl_p1_grid(f, f.one());
  IlsOptions ils;
  ils.seed = opt.seed;
  ils.time_budget_s = q <= opt.exact_max_q ? opt.budget_s / 4 : opt.budget_s;
  if (opt.stop_at_reference && row.k_ref) ils.target = *row.k_ref;
  IndepSet start = greedy_local_search(g);
  IndepSet best = iterated_local_search(g, ils, &start);
  if (q <= opt.exact_max_q) {
    double left = std::max(0.5, opt.budget_s - detail::seconds_since(t0));
    auto [i0, a0] = grid_coords(f, best.vertices().front());
    std::vector<Vertex> shifted;
    for (Vertex v : best.vertices()) {
      auto [i, a] = grid_coords(f, v);
      shifted.push_back(grid_vertex(f, f.sub(i, i0), f.sub(a, a0)));
    }
    IndepSet seeded = IndepSet::verified(g, std::move(shifted), best.method(), best.seed());
    ExactOptions eo;
    eo.time_budget_s = left;
    eo.forced = grid_vertex(f, f.zero(), f.zero());
    IndepSet ex = exact_mis(g, eo, seeded);
    if (ex.size() >= best.size()) best = ex;
  }
  row.optimal = best.optimal();
  row.k_found = best.size();
  auto lift = lift_to_pgl(f, best);
  row.bound_found = lift.bound.size();
  row.bound = std::move(lift.bound);
  row.set = std::move(best);
  row.runtime_s = detail::seconds_since(t0);
  row.status = "verified";
  return row;
}

inline std::vector<Table1Row> table1_run(std::span<const std::uint32_t> qs, const Table1Options& opt) {
  std::vector<Table1Row> rows;
  for (auto q : qs) rows.push_back(table1_row(q, opt));
  return rows;
}

inline std::string table1_csv(std::span<const Table1Row> rows) {
  std::ostringstream os;
  os << "q,k_found,k_paper,bound_found,bound_paper,optimal_flag,runtime_s,ratio,status\n";
  for (const auto& r : rows) {
    os << r.q << ',' << r.k_found << ',' << (r.k_ref ? std::to_string(*r.k_ref) : "") << ',' << r.bound_found << ','
       << (r.bound_ref ? std::to_string(*r.bound_ref) : "") << ',' << (r.optimal ? 1 : 0) << ',';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.4f,", r.runtime_s, r.ratio());
    os << buf << r.status << '\n';
  }
  return os.str();
}

/// bound / q^2 never decreases as q grows, over rows that produced a bound.
inline bool bound_ratio_nondecreasing(std::span<const Table1Row> rows) {
  std::vector<std::pair<std::uint32_t, double>> pts;
  for (const auto& r : rows)
    if (r.bound_found) pts.emplace_back(r.q, static_cast<double>(r.bound_found) / (double(r.q) * r.q));
  std::sort(pts.begin(), pts.end());
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (pts[k].second < pts[k - 1].second) return false;
  return true;
}

}  // namespace permcontract
