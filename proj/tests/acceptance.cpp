// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "permcontract/permcontract.hpp"

using namespace permcontract;
using gf::Elem;
using gf::Field;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void time_limit(Outcome& o, std::chrono::steady_clock::time_point t0, double limit_s) {
  double t = since(t0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1fs", t);
  o.detail << "time " << buf << " (limit " << limit_s << "s)";
  o.require(t <= limit_s, "runtime");
}

const std::vector<std::uint64_t> kAglOrders{7, 13, 19, 25, 31, 16, 64};

void affine_sizes(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (auto q : kAglOrders) {
    BoundResult b = agl_bound_array(Field::of_order(q));
    std::size_t want = q % 2 ? (q * q - 1) / 2 : (q - 1) * (q + 2) / 3;
    // independent exhaustive re-sweep of the emitted rows
    HdWitness w = hd_rows(b.array.perms());
    o.detail << "q=" << q << ":" << b.size() << "@" << w.min_hd << " ";
    o.require(b.size() == want, "size at q=" + std::to_string(q));
    o.require(w.min_hd >= q - 3, "distance at q=" + std::to_string(q));
  }
  time_limit(o, t0, 10);
}

void affine_census(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (auto q : kAglOrders) {
    ComponentReport r = components(agl_graph(Field::of_order(q)));
    const std::size_t len = q % 2 ? 6 : 3;
    bool ok = r.isolated_count == q - 1 && r.other_count() == 0 && r.cycles().size() == 1 && r.cycles().count(len) &&
              r.cycles().at(len) * len == (q - 1) * (q - 1);
    o.detail << "q=" << q << ":" << r.to_json().dump() << " ";
    o.require(ok, "census at q=" + std::to_string(q));
  }
  time_limit(o, t0, 5);
}

void projective_structure(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t q : {13, 25}) {
    PglStructureReport r = verify_pgl_structure(Field::of_order(q));
    o.detail << "q=" << q << ": level pairs " << r.level_pairs_checked << ", isolated " << r.isolated << ", components "
             << r.nontrivial_components << "; ";
    o.require(r.all(), "structure at q=" + std::to_string(q) + " " + r.witness);
    o.require(r.level_pairs_checked == q * (q - 1) / 2, "level pair count");
  }
  time_limit(o, t0, 60);
}

std::vector<Table1Row> g_rows;  // shared with the asymptotic check

void table_rows(Outcome& o) {
  Table1Options opt;
  opt.seed = 1;
  for (std::uint32_t q : {7u, 13u, 19u, 31u, 37u}) {
    auto t0 = std::chrono::steady_clock::now();
    // the desk rows get their own budget: exact search for q <= 13 runs until
    // it proves optimality or the budget ends
    opt.budget_s = q == 13 ? 120 : 600;
    Table1Row r = table1_row(q, opt);
    const double t = since(t0);
    const std::size_t kp = r.k_ref.value_or(0);
    std::size_t min_hd = r.bound ? hd_rows(r.bound->array.perms()).min_hd : 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", t);
    o.detail << "q=" << q << ": k=" << r.k_found << (r.optimal ? " (optimal)" : "") << " vs " << kp << ", bound " << r.bound_found
             << "@" << min_hd << ", " << buf << "; ";
    o.require(r.status == "verified", "row status at q=" + std::to_string(q));
    o.require(min_hd >= q - 3, "distance at q=" + std::to_string(q));
    o.require(t <= 600, "10-minute budget at q=" + std::to_string(q));
    if (q == 7) {
      o.require(r.k_found == 13, "k = 13 at q=7 (exhaustive search proves the maximum is " + std::to_string(r.k_found) + ")");
      o.require(r.bound_found == 120, "array size 120 at q=7 (lift of the maximum gives " + std::to_string(r.bound_found) + ")");
    } else if (q == 13) {
      o.require(r.k_found >= 33, "k >= 33 at q=13");
      o.require(r.bound_found >= 552, "array size >= 552 at q=13");
    } else {
      o.require(10 * r.k_found >= 9 * kp, "k >= 0.9 * " + std::to_string(kp) + " at q=" + std::to_string(q));
    }
    g_rows.push_back(std::move(r));
  }
}

void mathieu_orders(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t want[] = {7920, 95040, 443520, 10200960, 244823040};
  std::size_t k = 0;
  for (std::size_t n : {11, 12, 22, 23, 24}) {
    std::vector<Perm> gens;
    for (const auto& t : mathieu_generator_text(n)) gens.push_back(Perm::from_cycles(t, n));
    std::uint64_t got = BSGS::schreier_sims(n, gens).order();
    o.detail << "M" << n << "=" << got << " ";
    o.require(got == want[k++], "order of M" + std::to_string(n));
  }
  time_limit(o, t0, 5);
}

void m12_contraction(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  BoundResult b = mathieu_contract(12, SweepMode::Full);
  o.detail << b.claim() << " (min " << b.witness.min_hd << "), ";
  o.require(b.size() == 95040 && b.n == 11, "95040 rows on 11 symbols");
  o.require(b.witness.min_hd >= 6, "exhaustive minimum distance >= 6");
  BoundResult p = project_bound(b);
  o.detail << p.claim() << " (min " << p.witness.min_hd << "), ";
  o.require(p.n == 10 && p.size() >= 8640 && p.witness.min_hd >= 6, "projected M(10,6) >= 8640");
  BoundResult s = mathieu_contract(12, SweepMode::Sampled, 10'000'000, 1);
  o.detail << "sampled 1e7 pairs: min " << s.witness.min_hd << "; ";
  o.require(s.witness.min_hd >= 6, "sampled screen finds no pair below 6");
  time_limit(o, t0, 30 * 60);
}

void m24_structure(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  BSGS g = mathieu(24);
  OctadCensus c = octad_scan(g);
  const std::uint64_t steiner = detail::binomial(24, 5) / detail::binomial(8, 5);
  o.detail << c.subsets << " subsets, " << c.octad_count << " of order 16, histogram";
  for (auto [ord, k] : c.histogram) o.detail << " " << ord << "x" << k;
  o.detail << ", divisible by 3: " << c.divisible_by_3 << "; ";
  o.require(c.subsets == 735471, "all eight-subsets scanned");
  o.require(c.violations == 0, "orders only in {1, 16}");
  o.require(c.octad_count == 759 && c.octad_count == steiner, "759 octads");
  o.require(c.divisible_by_3 == 0, "no order divisible by 3");
  BSGS m12 = mathieu(12);
  std::size_t pts[] = {0, 1, 2, 3};
  StructureReport q8 = structure_probe(m12.pointwise_stabilizer(pts));
  o.detail << "M12 four-point stabilizer: order " << q8.order << ", abelian " << q8.abelian << ", involutions " << q8.involution_count
           << "; ";
  o.require(q8.q8_signature(), "Q8 signature");
  std::uint64_t n1 = mathieu_order(24), n2 = project_bound_arithmetic(24, n1), n3 = project_bound_arithmetic(23, n2);
  o.detail << "arithmetic: M(23,14) >= " << n1 << ", M(22,14) >= " << n2 << ", M(21,14) >= " << n3 << " (structural, not array-materialized); ";
  time_limit(o, t0, 60 * 60);
}

void number_theory(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  for (std::uint64_t p = 3; p <= 97; p += 2)
    for (std::uint64_t q = p + 2; q <= 97; q += 2) {
      if (!gf::is_prime(p) || !gf::is_prime(q)) continue;
      ++pairs;
      int sign = ((p - 1) / 2) * ((q - 1) / 2) % 2 ? -1 : 1;
      o.require(gf::legendre(static_cast<std::int64_t>(p), q) * gf::legendre(static_cast<std::int64_t>(q), p) == sign,
                "reciprocity for " + std::to_string(p) + "," + std::to_string(q));
    }
  std::size_t primes = 0;
  for (std::uint64_t p = 5; p <= 500; ++p) {
    if (!gf::is_prime(p)) continue;
    ++primes;
    // brute-force square test as the oracle
    bool square = false;
    for (std::uint64_t x = 1; x < p && !square; ++x) square = (x * x) % p == p - 3;
    o.require(square == (p % 3 == 1), "-3 dichotomy at " + std::to_string(p));
    o.require((gf::legendre(-3, p) == 1) == square, "Legendre symbol of -3 at " + std::to_string(p));
  }
  std::size_t fields = 0;
  for (std::uint64_t q : {4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 31, 64}) {
    Field f = Field::of_order(q);
    ++fields;
    std::vector<Elem> roots;
    for (std::uint32_t x = 0; x < q; ++x) {
      Elem e{x};
      if (f.add(f.add(f.mul(e, e), e), f.one()).index == 0) roots.push_back(e);
    }
    // the constructions need two distinct roots; in characteristic 3 the
    // polynomial is (t - 1)^2 and the sweep finds only the double root 1
    bool solver_ok = true;
    try {
      auto [t1, t2] = solve_unit_quadratic(f);
      solver_ok = roots == std::vector<Elem>{t1, t2};
    } catch (const Error& e) {
      solver_ok = e.kind() == ErrorKind::NoRoots && roots.size() < 2;
    }
    o.require((roots.size() == 2) == (q % 3 == 1), "two distinct roots iff q = 1 mod 3 at q=" + std::to_string(q));
    if (q % 3 == 0) o.require(roots == std::vector<Elem>{f.one()}, "double root 1 at q=" + std::to_string(q));
    if (q % 3 == 2) o.require(roots.empty(), "no roots at q=" + std::to_string(q));
    o.require(solver_ok, "solver agrees with the root sweep at q=" + std::to_string(q));
  }
  o.detail << pairs << " prime pairs, " << primes << " primes, " << fields << " fields; ";
  time_limit(o, t0, 5);
}

void asymptotic(Outcome& o) {
  o.require(!g_rows.empty(), "rows from the table run");
  for (const auto& r : g_rows) {
    if (!r.bound) continue;
    bool identity = r.bound_found == std::size_t{r.q - 1} * (r.k_found + r.q) && r.bound->size() == r.bound_found;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(r.bound_found) / (double(r.q) * r.q));
    o.detail << "q=" << r.q << ": " << r.bound_found << " = " << r.q - 1 << "*(" << r.k_found << "+" << r.q << "), /q^2=" << buf << "; ";
    o.require(identity, "(q-1)(k+q) identity at q=" + std::to_string(r.q));
  }
  o.require(bound_ratio_nondecreasing(g_rows), "bound/q^2 nondecreasing");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "AGL array sizes and distance", affine_sizes},
      {2, "AGL component census", affine_census},
      {3, "PGL structure checks", projective_structure},
      {4, "P_1 independent sets and lifted arrays", table_rows},
      {5, "Mathieu group orders", mathieu_orders},
      {6, "M12 contraction", m12_contraction},
      {7, "M24 octad census and M12 Q8 stabilizer", m24_structure},
      {8, "quadratic residues and t^2+t+1", number_theory},
      {9, "lifted bound identity and growth", asymptotic},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail.str() << std::endl;
  }
  return failures ? 1 : 0;
}
