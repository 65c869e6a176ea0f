#pragma once

// Contraction graphs: two permutations at minimum distance d are adjacent
// when contracting both loses the full 3 units of distance.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "permcontract/error.hpp"
#include "permcontract/gf.hpp"
#include "permcontract/groups.hpp"
#include "permcontract/parallel.hpp"
#include "permcontract/perm.hpp"

namespace permcontract {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

class CGraph {
 public:
  CGraph() = default;
  explicit CGraph(std::size_t n) : adj_(n) {}

  /// Edges may arrive in any order and in either orientation; duplicates
  /// collapse. Self-loops are rejected.
  static CGraph from_edges(std::size_t n, std::vector<Edge> edges) {
    CGraph g(n);
    for (auto& [u, v] : edges) {
      if (u == v) fail(ErrorKind::StructureViolation, "self-loop at " + std::to_string(u));
      if (u >= n || v >= n) fail(ErrorKind::StructureViolation, "edge endpoint out of range");
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& a : g.adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
  }

  std::size_t n_vertices() const { return adj_.size(); }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  bool has_edge(Vertex u, Vertex v) const { return std::binary_search(adj_[u].begin(), adj_[u].end(), v); }

  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adj_) s += a.size();
    return s / 2;
  }

  /// Edges with u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool operator==(const CGraph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
};

inline std::string to_edge_csv(const CGraph& g) {
  std::ostringstream os;
  os << "u,v\n";
  for (auto [u, v] : g.edges()) os << u << ',' << v << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Edge predicates

/// The closed characterization: with F the last symbol, pi(F) != F,
/// sigma(F) != F, sigma(pi^-1(F)) = pi(F) and pi(sigma^-1(F)) = sigma(F).
inline bool is_contraction_edge(const Perm& pi, const Perm& sigma) {
  require_same_n(pi, sigma);
  const std::size_t F = pi.size() - 1;
  const Symbol pf = pi[F], sf = sigma[F];
  if (pf == F || sf == F) return false;
  std::size_t pi_inv_f = 0, sigma_inv_f = 0;
  for (std::size_t x = 0; x <= F; ++x) {
    if (pi[x] == F) pi_inv_f = x;
    if (sigma[x] == F) sigma_inv_f = x;
  }
  return sigma[pi_inv_f] == pf && pi[sigma_inv_f] == sf;
}

/// Adjacency straight from the definition, for an array of minimum distance d.
inline bool is_contraction_edge_definitional(const Perm& pi, const Perm& sigma, std::size_t d) {
  require_same_n(pi, sigma);
  if (d < 3) return false;
  return hd(contract_full(pi), contract_full(sigma)) == d - 3 && hd(pi, sigma) == d;
}

namespace detail {

struct EdgeKeys {
  std::vector<Symbol> image_f, preimage_f;

  explicit EdgeKeys(std::span<const Perm> perms) {
    for (const auto& p : perms) {
      const std::size_t F = p.size() - 1;
      image_f.push_back(p[F]);
      std::size_t inv = 0;
      while (p[inv] != F) ++inv;
      preimage_f.push_back(static_cast<Symbol>(inv));
    }
  }
};

template <typename Pred>
CGraph build_pairwise(std::span<const Perm> perms, Pred&& pred) {
  const std::size_t n = perms.size();
  const unsigned workers = thread_count();
  std::vector<std::vector<Edge>> found(workers);
  parallel_blocks(n, 64, workers, [&](unsigned w, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (pred(i, j)) found[w].emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
  });
  std::vector<Edge> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  return CGraph::from_edges(n, std::move(all));
}

}  // namespace detail

/// Contraction graph of an arbitrary array by the O(N^2) pairwise test.
inline CGraph build_graph(const PArray& a) {
  if (a.size() < 2) return CGraph(a.size());
  const std::size_t d = a.min_hd().min_hd;
  const std::size_t F = a.n() - 1;
  detail::EdgeKeys k(a.perms());
  return detail::build_pairwise(a.perms(), [&](std::size_t i, std::size_t j) {
    if (k.image_f[i] == F || k.image_f[j] == F) return false;
    if (a[j][k.preimage_f[i]] != k.image_f[i] || a[i][k.preimage_f[j]] != k.image_f[j]) return false;
    return hd(a[i], a[j]) == d;
  });
}

/// Same graph, but every pair is tested by contracting and measuring.
inline CGraph build_graph_definitional(const PArray& a) {
  if (a.size() < 2) return CGraph(a.size());
  const std::size_t d = a.min_hd().min_hd;
  std::vector<Perm> c;
  for (const auto& p : a) c.push_back(contract_full(p));
  return detail::build_pairwise(a.perms(), [&](std::size_t i, std::size_t j) {
    return d >= 3 && hd(c[i], c[j]) == d - 3 && hd(a[i], a[j]) == d;
  });
}

// ---------------------------------------------------------------------------
// AGL(1,q)

inline void require_unit_residue(const Field& f) {
  if (f.q() % 3 != 1) fail(ErrorKind::BadResidue, "q = " + std::to_string(f.q()) + " is not 1 mod 3");
}

/// The last symbol as a field element.
inline Elem last_point(const Field& f) { return Elem{f.q() - 1}; }

/// The two neighbors of pi(x) = a x + r, for t1 a root of t^2 + t + 1:
/// slope a t1 with offset (a - t1)F + r(1 + t1), and the same with 1/t1.
inline std::pair<AffineMap, AffineMap> agl_neighbors(const Field& f, const AffineMap& pi, Elem t1) {
  const Elem F = last_point(f);
  if (pi(f, F) == F) fail(ErrorKind::IsolatedVertex, "map fixes the last point");
  auto make = [&](Elem t) {
    Elem slope = f.mul(pi.a, t);
    Elem offset = f.add(f.mul(f.sub(pi.a, t), F), f.mul(pi.b, f.add(f.one(), t)));
    return AffineMap{slope, offset};
  };
  return {make(t1), make(f.inv(t1))};
}

/// Contraction graph of AGL(1,q) from the closed-form neighbors; vertices
/// follow agl_enumerate's order.
inline CGraph agl_graph(const Field& f) {
  require_unit_residue(f);
  const Elem t1 = solve_unit_quadratic(f).first;
  const Elem F = last_point(f);
  const std::size_t n = std::size_t{f.q()} * (f.q() - 1);
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    AffineMap pi = affine_from_index(f, v);
    if (pi(f, F) == F) continue;
    auto [s1, s2] = agl_neighbors(f, pi, t1);
    edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(s1.agl_index(f)));
    edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(s2.agl_index(f)));
  }
  return CGraph::from_edges(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// PGL(2,q)

/// Contraction graph of PGL(2,q) from the P-form adjacency rule; vertices
/// follow pgl_enumerate's order. Maps with c = 0 fix infinity and are isolated.
inline CGraph pgl_graph(const Field& f) {
  const std::uint32_t q = f.q();
  auto maps = pgl_maps(f);
  // (k, r, i) -> vertex
  std::vector<Vertex> at(std::size_t{q} * q * q, ~Vertex{0});
  auto key = [q](const PForm& p) { return (std::size_t{p.k.index} * q + p.r.index) * q + p.i.index; };
  std::vector<PForm> forms(maps.size());
  for (std::size_t v = 0; v < maps.size(); ++v) {
    if (maps[v].c.index == 0) continue;
    forms[v] = alpha_map(f, maps[v]);
    at[key(forms[v])] = static_cast<Vertex>(v);
  }
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < maps.size(); ++v) {
    if (maps[v].c.index == 0) continue;
    const PForm& p = forms[v];
    for (std::uint32_t j = 0; j < q; ++j) {
      if (j == p.i.index) continue;
      Elem b = f.add(p.k, f.div(p.r, f.sub(Elem{j}, p.i)));
      Vertex u = at[key(PForm{b, p.r, Elem{j}})];
      if (v < u) edges.emplace_back(static_cast<Vertex>(v), u);
    }
  }
  return CGraph::from_edges(maps.size(), std::move(edges));
}

/// Grid vertex (i, a) stands for a + r/(x - i).
inline Vertex grid_vertex(const Field& f, Elem i, Elem a) { return i.index * f.q() + a.index; }
inline std::pair<Elem, Elem> grid_coords(const Field& f, Vertex v) { return {Elem{v / f.q()}, Elem{v % f.q()}}; }

namespace detail {
inline CGraph p_grid(const Field& f, Elem r) {
  if (r.index == 0) fail(ErrorKind::ZeroR, "grid needs r != 0");
  const std::uint32_t q = f.q();
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < q; ++i)
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t j = i + 1; j < q; ++j) {
        Elem b = f.add(Elem{a}, f.div(r, f.sub(Elem{j}, Elem{i})));
        edges.emplace_back(grid_vertex(f, Elem{i}, Elem{a}), grid_vertex(f, Elem{j}, b));
      }
  return CGraph::from_edges(std::size_t{q} * q, std::move(edges));
}
}  // namespace detail

/// The component P_r on the q x q grid: (i,a) ~ (j,b) iff (b - a)(j - i) = r.
inline CGraph pgl_p1_grid(const Field& f, Elem r) {
  if (f.p() == 2) fail(ErrorKind::EvenCharacteristic, "grid structure needs odd q");
  require_unit_residue(f);
  return detail::p_grid(f, r);
}

// ---------------------------------------------------------------------------
// Components

enum class ComponentKind { Isolated, Cycle, Other };

struct Component {
  ComponentKind kind;
  std::size_t size;
  Vertex smallest;
};

struct ComponentReport {
  std::size_t n_vertices = 0;
  std::size_t isolated_count = 0;
  std::vector<Component> components;  // ordered by smallest vertex

  std::map<std::size_t, std::size_t> cycles() const {
    std::map<std::size_t, std::size_t> h;
    for (const auto& c : components)
      if (c.kind == ComponentKind::Cycle) ++h[c.size];
    return h;
  }

  std::size_t other_count() const {
    return static_cast<std::size_t>(
        std::count_if(components.begin(), components.end(), [](const Component& c) { return c.kind == ComponentKind::Other; }));
  }

  std::size_t nontrivial_count() const { return components.size() - isolated_count; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["isolated"] = isolated_count;
    nlohmann::json cyc = nlohmann::json::object();
    for (auto [len, count] : cycles()) cyc[std::to_string(len)] = count;
    j["cycles"] = cyc;
    nlohmann::json other = nlohmann::json::array();
    for (const auto& c : components)
      if (c.kind == ComponentKind::Other) other.push_back({{"size", c.size}, {"smallest", c.smallest}});
    j["other"] = other;
    return j;
  }
};

inline ComponentReport components(const CGraph& g) {
  ComponentReport r;
  r.n_vertices = g.n_vertices();
  std::vector<bool> seen(g.n_vertices(), false);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < g.n_vertices(); ++s) {
    if (seen[s]) continue;
    queue.assign(1, s);
    seen[s] = true;
    bool all_deg2 = true;
    for (std::size_t k = 0; k < queue.size(); ++k) {
      Vertex v = queue[k];
      all_deg2 = all_deg2 && g.degree(v) == 2;
      for (Vertex u : g.neighbors(v))
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
    }
    Component c{ComponentKind::Other, queue.size(), s};
    if (queue.size() == 1)
      c.kind = ComponentKind::Isolated;
    else if (all_deg2)
      c.kind = ComponentKind::Cycle;
    r.isolated_count += c.kind == ComponentKind::Isolated;
    r.components.push_back(c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// PGL structure checks

struct PglStructureReport {
  std::uint32_t q = 0;
  bool guaranteed = false;  // q >= 13: failures are violations, not observations
  bool degree = false;
  bool matching = false;
  bool neighborhoods = false;
  bool connected = false;
  bool phi = false;
  bool components = false;
  std::size_t level_pairs_checked = 0;
  std::size_t isolated = 0;
  std::size_t nontrivial_components = 0;
  std::vector<std::uint32_t> phi_r;  // the r values tested
  std::string witness;

  bool all() const { return degree && matching && neighborhoods && connected && phi && components; }
};

inline PglStructureReport verify_pgl_structure(const Field& f) {
  if (f.p() == 2) fail(ErrorKind::EvenCharacteristic, "PGL structure checks need odd q");
  require_unit_residue(f);
  const std::uint32_t q = f.q();
  PglStructureReport rep;
  rep.q = q;
  rep.guaranteed = q >= 13;
  auto note = [&](const std::string& w) {
    if (rep.witness.empty()) rep.witness = w;
  };

  const CGraph g = detail::p_grid(f, f.one());
  const std::size_t nv = g.n_vertices();

  rep.degree = true;
  for (Vertex v = 0; v < nv && rep.degree; ++v)
    if (g.degree(v) != q - 1) {
      rep.degree = false;
      note("degree " + std::to_string(g.degree(v)) + " at vertex " + std::to_string(v));
    }

  // Each level pair (B_i, B_j) must induce a perfect matching.
  rep.matching = true;
  for (std::uint32_t i = 0; i < q; ++i)
    for (std::uint32_t j = i + 1; j < q; ++j) {
      ++rep.level_pairs_checked;
      std::vector<int> hits_j(q, 0);
      for (std::uint32_t a = 0; a < q; ++a) {
        int hits = 0;
        for (Vertex u : g.neighbors(grid_vertex(f, Elem{i}, Elem{a})))
          if (u / q == j) {
            ++hits;
            ++hits_j[u % q];
          }
        if (hits != 1) {
          rep.matching = false;
          note("level pair (" + std::to_string(i) + "," + std::to_string(j) + ") not a matching at a=" + std::to_string(a));
        }
      }
      if (std::any_of(hits_j.begin(), hits_j.end(), [](int h) { return h != 1; })) {
        rep.matching = false;
        note("level pair (" + std::to_string(i) + "," + std::to_string(j) + ") uncovered on the far side");
      }
    }

  // Every neighborhood induces a 2-regular graph.
  rep.neighborhoods = true;
  std::vector<Vertex> mark(nv, ~Vertex{0});
  for (Vertex v = 0; v < nv; ++v) {
    for (Vertex u : g.neighbors(v)) mark[u] = v;
    for (Vertex u : g.neighbors(v)) {
      std::size_t inside = 0;
      for (Vertex w : g.neighbors(u)) inside += mark[w] == v;
      if (inside != 2) {
        if (rep.neighborhoods) note("neighborhood of " + std::to_string(v) + " has degree " + std::to_string(inside) + " at " + std::to_string(u));
        rep.neighborhoods = false;
      }
    }
  }

  {
    auto c = components(g);
    rep.connected = c.components.size() == 1;
    if (!rep.connected) note("P_1 has " + std::to_string(c.components.size()) + " components");
  }

  // phi: (i, a) in P_1 -> (r i, a) in P_r maps edges onto edges.
  rep.phi = true;
  for (std::uint32_t r = 2; r < q && rep.phi_r.size() < 3; ++r) {
    rep.phi_r.push_back(r);
    const CGraph gr = detail::p_grid(f, Elem{r});
    auto phi = [&](Vertex v) {
      auto [i, a] = grid_coords(f, v);
      return grid_vertex(f, f.mul(Elem{r}, i), a);
    };
    bool ok = gr.edge_count() == g.edge_count();
    for (auto [u, v] : g.edges())
      if (!gr.has_edge(phi(u), phi(v))) {
        if (ok) note("phi_" + std::to_string(r) + " breaks edge " + std::to_string(u) + "-" + std::to_string(v));
        ok = false;
        break;
      }
    rep.phi = rep.phi && ok;
  }

  {
    auto c = components(pgl_graph(f));
    rep.isolated = c.isolated_count;
    rep.nontrivial_components = c.nontrivial_count();
    bool sizes = std::all_of(c.components.begin(), c.components.end(),
                             [&](const Component& k) { return k.kind == ComponentKind::Isolated || k.size == nv; });
    rep.components = rep.isolated == std::size_t{q} * (q - 1) && rep.nontrivial_components == q - 1 && sizes;
    if (!rep.components)
      note("C_P has " + std::to_string(rep.isolated) + " isolated and " + std::to_string(rep.nontrivial_components) + " other components");
  }

  if (rep.guaranteed && !rep.all()) fail(ErrorKind::StructureViolation, rep.witness);
  return rep;
}

// ---------------------------------------------------------------------------
// The path through the levels B_{g^k}

struct PathCoeffs {
  Elem g;
  std::vector<Elem> alpha;  // alpha[k-1] = alpha_k, k = 1..q-1
  std::vector<Elem> beta;   // beta[k-1] = beta_k
  bool betas_distinct = false;
};

/// Roots of x^2 - x + 1, which the path generator must avoid.
inline std::vector<Elem> unit_root_exclusions(const Field& f) {
  auto [t1, t2] = solve_unit_quadratic(f);
  std::vector<Elem> out{f.neg(t1), f.neg(t2)};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Smallest generator that is not a root of x^2 - x + 1.
inline Elem path_generator(const Field& f) {
  auto avoid = unit_root_exclusions(f);
  return find_generator(f, avoid);
}

/// Closed forms for the vertices (g^k, alpha_k) and (0, beta_k) of P_1,
/// each checked against the grid adjacency rule.
inline PathCoeffs path_coeffs(const Field& f, Elem g) {
  if (!f.is_generator(g)) fail(ErrorKind::VerificationFailed, "element " + std::to_string(g.index) + " is not a generator");
  const Elem one = f.one();
  if (f.add(f.sub(f.mul(g, g), g), one).index == 0)
    fail(ErrorKind::GeneratorIsUnitRoot, "generator is a root of x^2 - x + 1");
  const std::uint32_t q = f.q();
  const Elem gm1 = f.sub(g, one);
  const Elem w = f.add(f.sub(f.mul(g, g), g), one);  // g^2 - g + 1
  PathCoeffs pc;
  pc.g = g;
  Elem geo = f.zero();  // 1 + g + ... + g^{k-3}, built up as k grows
  for (std::uint32_t k = 1; k < q; ++k) {
    Elem gk = f.pow(g, k);
    Elem gk1 = f.pow(g, std::int64_t{k} - 1);
    Elem alpha, beta;
    if (k == 1) {
      alpha = f.inv(g);
      beta = f.zero();
    } else if (k == 2) {
      alpha = f.inv(gm1);
      beta = f.div(w, f.mul(gk, gm1));
    } else {
      geo = f.add(geo, f.pow(g, std::int64_t{k} - 3));
      alpha = f.div(f.add(gk1, geo), f.mul(gm1, gk1));
      // 1 + ... + g^{k-2} = geo + g^{k-2}
      Elem geo2 = f.add(geo, f.pow(g, std::int64_t{k} - 2));
      beta = f.div(f.mul(w, geo2), f.mul(gk, gm1));
    }
    pc.alpha.push_back(alpha);
    pc.beta.push_back(beta);
  }
  // (b - a)(j - i) = 1 along the path and to the level B_0.
  for (std::uint32_t k = 1; k < q; ++k) {
    Elem gk = f.pow(g, k);
    if (f.mul(f.sub(pc.beta[k - 1], pc.alpha[k - 1]), f.neg(gk)) != one)
      fail(ErrorKind::StructureViolation, "(g^k, alpha_k) not adjacent to (0, beta_k) at k=" + std::to_string(k));
    if (k + 1 < q && f.mul(f.sub(pc.alpha[k], pc.alpha[k - 1]), f.sub(f.pow(g, k + 1), gk)) != one)
      fail(ErrorKind::StructureViolation, "path edge broken at k=" + std::to_string(k));
  }
  auto sorted = pc.beta;
  std::sort(sorted.begin(), sorted.end());
  pc.betas_distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  return pc;
}

struct PartitionCheck {
  Vertex u = 0;                 // the vertex of B_0 outside Z
  std::size_t h_size = 0;       // |Z u N(Z)|
  std::size_t h_prime_size = 0; // |{u} u N(u)|
  bool partition = false;
};

/// Z = {(0, beta_k)} and its neighbors, against the leftover vertex u of B_0
/// and its neighbors: the two pieces should split the grid.
inline PartitionCheck claim_partition(const Field& f, const PathCoeffs& pc) {
  const std::uint32_t q = f.q();
  const CGraph g = pgl_p1_grid(f, f.one());
  std::vector<int> side(std::size_t{q} * q, 0);  // bit 1: H, bit 2: H'
  std::vector<bool> in_z(q, false);
  for (Elem b : pc.beta) {
    Vertex z = grid_vertex(f, f.zero(), b);
    in_z[b.index] = true;
    side[z] |= 1;
    for (Vertex w : g.neighbors(z)) side[w] |= 1;
  }
  PartitionCheck out;
  std::size_t leftovers = 0;
  for (std::uint32_t a = 0; a < q; ++a)
    if (!in_z[a]) {
      out.u = grid_vertex(f, f.zero(), Elem{a});
      ++leftovers;
    }
  side[out.u] |= 2;
  for (Vertex w : g.neighbors(out.u)) side[w] |= 2;
  bool disjoint_cover = leftovers == 1;
  for (int s : side) {
    out.h_size += (s & 1) != 0;
    out.h_prime_size += (s & 2) != 0;
    disjoint_cover = disjoint_cover && (s == 1 || s == 2);
  }
  out.partition = disjoint_cover && out.h_size == std::size_t{q} * (q - 1) && out.h_prime_size == q;
  return out;
}

}  // namespace permcontract
