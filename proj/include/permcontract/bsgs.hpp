#pragma once

// Stabilizer chains (base and strong generating set) built by the
// deterministic Schreier-Sims algorithm, plus the Mathieu-group tooling.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "permcontract/error.hpp"
#include "permcontract/perm.hpp"

namespace permcontract {

class BSGS {
 public:
  BSGS() = default;

  /// Schreier-Sims from `generators`. The base starts with `prefix` and is
  /// then extended by the smallest point moved by a generator that fixes the
  /// base built so far.
  static BSGS schreier_sims(std::size_t n, std::span<const Perm> generators, std::span<const std::size_t> prefix = {}) {
    BSGS g;
    g.n_ = n;
    g.base_.assign(prefix.begin(), prefix.end());
    std::vector<Perm> gens;
    for (const auto& p : generators) {
      if (p.size() != n) fail(ErrorKind::MismatchedN, "generator degree differs from n");
      if (!p.is_identity()) gens.push_back(p);
    }
    for (const auto& p : gens) {
      bool fixes_base = std::all_of(g.base_.begin(), g.base_.end(), [&](std::size_t b) { return p[b] == b; });
      if (fixes_base) g.base_.push_back(first_moved(p));
    }
    g.levels_.resize(g.base_.size());
    for (std::size_t l = 0; l < g.base_.size(); ++l) {
      for (const auto& p : gens)
        if (g.fixes_prefix(p, l)) g.levels_[l].gens.push_back(p);
      g.rebuild_orbit(l);
    }
    g.run();
    return g;
  }

  std::size_t degree() const { return n_; }
  const std::vector<std::size_t>& base() const { return base_; }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& lv : levels_) o *= lv.orbit.size();
    return o;
  }

  std::vector<std::size_t> transversal_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& lv : levels_) out.push_back(lv.orbit.size());
    return out;
  }

  std::vector<Perm> strong_generators() const { return levels_.empty() ? std::vector<Perm>{} : levels_.front().gens; }

  bool contains(const Perm& p) const {
    if (p.size() != n_) return false;
    auto [h, lvl] = strip(p, 0);
    return lvl == levels_.size() && h.is_identity();
  }

  /// BSGS of the subgroup fixing every point of `points`.
  BSGS pointwise_stabilizer(std::span<const std::size_t> points) const {
    auto gens = strong_generators();
    BSGS full = schreier_sims(n_, gens, points);
    BSGS out;
    out.n_ = n_;
    const std::size_t k = points.size();
    out.base_.assign(full.base_.begin() + static_cast<std::ptrdiff_t>(k), full.base_.end());
    out.levels_.assign(full.levels_.begin() + static_cast<std::ptrdiff_t>(k), full.levels_.end());
    // Drop trailing levels with trivial orbits.
    while (!out.levels_.empty() && out.levels_.back().orbit.size() == 1) {
      out.levels_.pop_back();
      out.base_.pop_back();
    }
    return out;
  }

  /// Every element, as transversal products with level 0 outermost.
  std::vector<Perm> elements(std::uint64_t cap = 1'000'000) const {
    if (order() > cap)
      fail(ErrorKind::OrderExceedsCap, "order " + std::to_string(order()) + " exceeds cap " + std::to_string(cap));
    std::vector<Perm> out;
    out.reserve(order());
    enumerate(0, Perm::identity(n_), out);
    return out;
  }

  /// Uniform random element; `next` yields 64-bit random words.
  template <typename Rng>
  Perm random_element(Rng&& next) const {
    Perm g = Perm::identity(n_);
    for (const auto& lv : levels_) {
      const auto& pts = lv.orbit;
      std::size_t pick = static_cast<std::size_t>(next() % pts.size());
      g = compose(lv.rep_of(pts[pick]), g);
    }
    return g;
  }

  /// Orbit of `point` under the strong generators, sorted.
  std::vector<std::size_t> orbit(std::size_t point) const {
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> out{point};
    seen[point] = true;
    auto gens = strong_generators();
    for (std::size_t k = 0; k < out.size(); ++k)
      for (const auto& s : gens) {
        std::size_t y = s[out[k]];
        if (!seen[y]) {
          seen[y] = true;
          out.push_back(y);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Level {
    std::vector<Perm> gens;
    std::vector<std::size_t> orbit;     // BFS order, base point first
    std::vector<std::int32_t> slot;     // point -> index into reps, -1 if outside orbit
    std::vector<Perm> reps, inv_reps;   // reps[k] maps the base point to orbit[k]

    const Perm& rep_of(std::size_t pt) const { return reps[static_cast<std::size_t>(slot[pt])]; }
    const Perm& inv_rep_of(std::size_t pt) const { return inv_reps[static_cast<std::size_t>(slot[pt])]; }
  };

  static std::size_t first_moved(const Perm& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) return i;
    return p.size();
  }

  bool fixes_prefix(const Perm& p, std::size_t len) const {
    for (std::size_t k = 0; k < len; ++k)
      if (p[base_[k]] != base_[k]) return false;
    return true;
  }

  void rebuild_orbit(std::size_t l) {
    Level& lv = levels_[l];
    lv.orbit.assign(1, base_[l]);
    lv.slot.assign(n_, -1);
    lv.reps.assign(1, Perm::identity(n_));
    lv.slot[base_[l]] = 0;
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      std::size_t gamma = lv.orbit[k];
      for (const auto& s : lv.gens) {
        std::size_t delta = s[gamma];
        if (lv.slot[delta] >= 0) continue;
        lv.slot[delta] = static_cast<std::int32_t>(lv.reps.size());
        lv.reps.push_back(compose(lv.reps[k], s));
        lv.orbit.push_back(delta);
      }
    }
    lv.inv_reps.clear();
    for (const auto& r : lv.reps) lv.inv_reps.push_back(inverse(r));
  }

  /// Sifts g through levels from..end. Returns the residue and the level at
  /// which sifting stopped (levels_.size() when it passed every level).
  std::pair<Perm, std::size_t> strip(Perm g, std::size_t from) const {
    for (std::size_t l = from; l < levels_.size(); ++l) {
      std::size_t beta = g[base_[l]];
      if (levels_[l].slot[beta] < 0) return {std::move(g), l};
      g = compose(g, levels_[l].inv_rep_of(beta));
    }
    return {std::move(g), levels_.size()};
  }

  void run() {
    std::size_t i = levels_.size();
    while (i-- > 0) {
      bool restart = false;
      for (std::size_t k = 0; k < levels_[i].orbit.size() && !restart; ++k) {
        const std::size_t beta = levels_[i].orbit[k];
        for (std::size_t s = 0; s < levels_[i].gens.size() && !restart; ++s) {
          const Perm& gen = levels_[i].gens[s];
          std::size_t gamma = gen[beta];
          Perm schreier = compose(compose(levels_[i].reps[k], gen), levels_[i].inv_rep_of(gamma));
          if (schreier.is_identity()) continue;
          auto [h, j] = strip(std::move(schreier), i + 1);
          if (j == levels_.size() && h.is_identity()) continue;
          if (j == levels_.size()) {
            base_.push_back(first_moved(h));
            levels_.emplace_back();
          }
          // h fixes base points 0..j-1, so it joins levels i+1..j.
          const std::size_t top = std::min(j, levels_.size() - 1);
          for (std::size_t l = i + 1; l <= top; ++l) {
            levels_[l].gens.push_back(h);
            rebuild_orbit(l);
          }
          i = top + 1;  // loop decrement resumes at level `top`
          restart = true;
        }
      }
    }
  }

  void enumerate(std::size_t l, const Perm& suffix, std::vector<Perm>& out) const {
    if (l == levels_.size()) {
      out.push_back(suffix);
      return;
    }
    std::vector<std::size_t> pts = levels_[l].orbit;
    std::sort(pts.begin(), pts.end());
    for (std::size_t pt : pts) enumerate(l + 1, compose(levels_[l].rep_of(pt), suffix), out);
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> base_;
  std::vector<Level> levels_;
};

inline std::uint64_t element_order(const Perm& p) {
  std::uint64_t o = 1;
  for (auto len : cycle_type(p)) o = std::lcm<std::uint64_t>(o, len);
  return o;
}

// ---------------------------------------------------------------------------
// Mathieu groups

inline std::uint64_t mathieu_order(std::size_t n) {
  switch (n) {
    case 11: return 7920;
    case 12: return 95040;
    case 22: return 443520;
    case 23: return 10200960;
    case 24: return 244823040;
    default: fail(ErrorKind::UnsupportedDegree, "no Mathieu group of degree " + std::to_string(n));
  }
}

/// Standard generators in 1-indexed cycle notation (the convention of the
/// GAP library's MathieuGroup).
inline std::vector<std::string> mathieu_generator_text(std::size_t n) {
  switch (n) {
    case 11:
      return {"(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"};
    case 12:
      return {"(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)", "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"};
    case 22:
      return {"(1,2,3,4,5,6,7,8,9,10,11)(12,13,14,15,16,17,18,19,20,21,22)",
              "(1,4,5,9,3)(2,8,10,7,6)(12,15,16,20,14)(13,19,21,18,17)",
              "(1,21)(2,10,8,6)(3,13,4,17)(5,19,9,18)(11,22)(12,14,16,20)"};
    case 23:
      return {"(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
              "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)"};
    case 24:
      return {"(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
              "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
              "(1,24)(2,23)(3,12)(4,16)(5,18)(6,10)(7,20)(8,14)(9,21)(11,17)(13,22)(15,19)"};
    default:
      fail(ErrorKind::UnsupportedDegree, "no Mathieu group of degree " + std::to_string(n));
  }
}

/// Generators for degree n from a text file: one cycle-notation generator per
/// line, '#' comments. Optional "[M<n>]" section headers select a group.
inline std::vector<Perm> parse_generator_text(std::string_view text, std::size_t n) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<Perm> all, section;
  bool has_sections = false, in_section = false;
  const std::string want = "[M" + std::to_string(n) + "]";
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    if (line.front() == '[') {
      has_sections = true;
      in_section = line == want;
      continue;
    }
    if (has_sections) {
      if (in_section) section.push_back(Perm::from_cycles(line, n));
    } else {
      all.push_back(Perm::from_cycles(line, n));
    }
  }
  auto& out = has_sections ? section : all;
  if (out.empty()) fail(ErrorKind::ParseError, "no generators for degree " + std::to_string(n));
  return out;
}

/// Mathieu group of degree n; order and transitivity are checked.
inline BSGS mathieu(std::size_t n, std::span<const Perm> generators = {}) {
  const std::uint64_t want = mathieu_order(n);
  std::vector<Perm> gens(generators.begin(), generators.end());
  if (gens.empty())
    for (const auto& t : mathieu_generator_text(n)) gens.push_back(Perm::from_cycles(t, n));
  BSGS g = BSGS::schreier_sims(n, gens);
  if (g.order() != want)
    fail(ErrorKind::VerificationFailed,
         "M" + std::to_string(n) + " generators give order " + std::to_string(g.order()) + ", expected " + std::to_string(want));
  if (g.orbit(0).size() != n) fail(ErrorKind::VerificationFailed, "M" + std::to_string(n) + " generators are not transitive");
  return g;
}

/// The group as a permutation array, in transversal-product order.
inline PArray enumerate_group(const BSGS& g, std::uint64_t cap = 1'000'000) { return PArray(g.degree(), g.elements(cap)); }

// ---------------------------------------------------------------------------
// Probes

struct StructureReport {
  std::uint64_t order = 1;
  bool abelian = true;
  std::uint64_t exponent = 1;
  std::uint64_t involution_count = 0;

  bool q8_signature() const { return order == 8 && !abelian && involution_count == 1; }
  bool elementary_abelian_2() const { return abelian && (order == 1 || exponent == 2); }
};

inline StructureReport structure_probe(const BSGS& g, std::uint64_t cap = 10'000) {
  if (g.order() > cap) fail(ErrorKind::OrderExceedsProbeCap, "order " + std::to_string(g.order()) + " exceeds probe cap");
  StructureReport r;
  r.order = g.order();
  auto gens = g.strong_generators();
  for (std::size_t a = 0; a < gens.size() && r.abelian; ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      if (compose(gens[a], gens[b]) != compose(gens[b], gens[a])) {
        r.abelian = false;
        break;
      }
  for (const auto& e : g.elements(cap)) {
    auto o = element_order(e);
    r.exponent = std::lcm(r.exponent, o);
    r.involution_count += o == 2;
  }
  return r;
}

/// splitmix64; seeds are recorded so sampled checks can be replayed.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t operator()() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

struct FixedPointSample {
  std::size_t max_fixed = 0;
  std::uint64_t samples = 0;
  std::uint64_t nonidentity = 0;
};

/// Largest fixed-point count over seeded random nonidentity elements.
inline FixedPointSample sample_max_fixed_points(const BSGS& g, std::uint64_t samples, std::uint64_t seed) {
  FixedPointSample out;
  SplitMix64 rng{seed};
  out.samples = samples;
  for (std::uint64_t k = 0; k < samples; ++k) {
    Perm e = g.random_element(rng);
    if (e.is_identity()) continue;
    ++out.nonidentity;
    out.max_fixed = std::max(out.max_fixed, fixed_points(e));
  }
  return out;
}

/// Exhaustive version over all elements.
inline std::size_t max_fixed_points(const BSGS& g, std::uint64_t cap = 1'000'000) {
  std::size_t best = 0;
  for (const auto& e : g.elements(cap))
    if (!e.is_identity()) best = std::max(best, fixed_points(e));
  return best;
}

// ---------------------------------------------------------------------------
// Octad census

struct OctadCensus {
  std::uint64_t subsets = 0;
  std::uint64_t octad_count = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // stabilizer order -> subsets
  std::uint64_t divisible_by_3 = 0;
  std::uint64_t violations = 0;                      // orders outside {1, 16}
  std::vector<std::size_t> first_octad;

  bool clean() const { return violations == 0 && divisible_by_3 == 0; }
};

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct OctadScanner {
  std::size_t n;
  std::size_t size;
  std::uint64_t list_threshold;
  OctadCensus census;
  std::vector<std::size_t> chosen;

  void leaf(std::uint64_t order, std::uint64_t multiplicity) {
    census.subsets += multiplicity;
    census.histogram[order] += multiplicity;
    if (order % 3 == 0) census.divisible_by_3 += multiplicity;
    if (order == 16) {
      census.octad_count += multiplicity;
      if (census.first_octad.empty()) census.first_octad = chosen;
    } else if (order != 1) {
      census.violations += multiplicity;
    }
  }

  std::size_t next_point() const { return chosen.empty() ? 0 : chosen.back() + 1; }

  void descend_list(const std::vector<Perm>& elems) {
    if (chosen.size() == size) return leaf(elems.size(), 1);
    if (elems.size() == 1) {
      // Trivial group: every completion has a trivial stabilizer.
      return leaf(1, binomial(n - next_point(), size - chosen.size()));
    }
    const std::size_t need = size - chosen.size();
    for (std::size_t x = next_point(); x + need <= n; ++x) {
      std::vector<Perm> child;
      for (const auto& e : elems)
        if (e[x] == x) child.push_back(e);
      chosen.push_back(x);
      descend_list(child);
      chosen.pop_back();
    }
  }

  void descend(const BSGS& g) {
    if (chosen.size() == size) return leaf(g.order(), 1);
    if (g.order() <= list_threshold) return descend_list(g.elements(list_threshold));
    const std::size_t need = size - chosen.size();
    for (std::size_t x = next_point(); x + need <= n; ++x) {
      std::size_t pt[1] = {x};
      BSGS child = g.pointwise_stabilizer(pt);
      chosen.push_back(x);
      descend(child);
      chosen.pop_back();
    }
  }
};

}  // namespace detail

/// Pointwise stabilizer orders of every `size`-subset (8 for octads),
/// computed down a shared chain: each subset extends its prefix's stabilizer.
inline OctadCensus octad_scan(const BSGS& g, std::size_t size = 8, std::uint64_t list_threshold = 1000) {
  detail::OctadScanner s{g.degree(), size, list_threshold, {}, {}};
  s.descend(g);
  return s.census;
}

}  // namespace permcontract
