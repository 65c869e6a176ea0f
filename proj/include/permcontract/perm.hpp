#pragma once

// Permutations as image strings over 0..n-1. The last symbol n-1 is the
// distinguished symbol F used by contraction.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "permcontract/error.hpp"
#include "permcontract/parallel.hpp"

namespace permcontract {

using Symbol = std::uint16_t;

class Perm {
 public:
  Perm() = default;

  /// Validates that `images` is a bijection on 0..n-1.
  explicit Perm(std::vector<Symbol> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Symbol s : images_) {
      if (s >= images_.size() || seen[s]) fail(ErrorKind::NotAPermutation, "image string is not a bijection");
      seen[s] = true;
    }
  }

  static Perm identity(std::size_t n) {
    std::vector<Symbol> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Symbol>(i);
    return Perm(std::move(v), Unchecked{});
  }

  /// 1-indexed cycle notation, e.g. "(1,2,3)(4,5)"; "()" is the identity.
  static Perm from_cycles(std::string_view text, std::size_t n) {
    std::vector<Symbol> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Symbol>(i);
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
      if (text[pos] != '(') fail(ErrorKind::ParseError, "expected '(' in cycle notation");
      ++pos;
      std::vector<std::size_t> cyc;
      for (;;) {
        skip_ws();
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail(ErrorKind::ParseError, "expected a point in cycle notation");
        std::size_t pt = std::stoul(std::string(text.substr(start, pos - start)));
        if (pt < 1 || pt > n) fail(ErrorKind::ParseError, "cycle point out of range");
        cyc.push_back(pt - 1);
        skip_ws();
        if (pos < text.size() && text[pos] == ',') ++pos;
      }
      for (std::size_t k = 0; k < cyc.size(); ++k) v[cyc[k]] = static_cast<Symbol>(cyc[(k + 1) % cyc.size()]);
      skip_ws();
    }
    return Perm(std::move(v));
  }

  std::size_t size() const { return images_.size(); }
  Symbol operator[](std::size_t x) const { return images_[x]; }
  Symbol last() const { return images_.back(); }
  std::span<const Symbol> images() const { return images_; }
  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  auto operator<=>(const Perm&) const = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(images_[i]);
    }
    return s;
  }

 private:
  struct Unchecked {};
  Perm(std::vector<Symbol> images, Unchecked) : images_(std::move(images)) {}

  friend Perm compose(const Perm&, const Perm&);
  friend Perm inverse(const Perm&);
  friend Perm contract_full(const Perm&);
  friend Perm contract_drop(const Perm&);
  friend Perm delete_position(const Perm&, std::size_t);

  std::vector<Symbol> images_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Symbol s : p.images()) {
      h ^= s;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline void require_same_n(const Perm& a, const Perm& b) {
  if (a.size() != b.size())
    fail(ErrorKind::MismatchedN, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " symbols");
}

/// Number of positions where the image strings differ.
inline std::size_t hd(const Perm& a, const Perm& b) {
  require_same_n(a, b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// Left-to-right product: apply `a` first, then `b`.
inline Perm compose(const Perm& a, const Perm& b) {
  require_same_n(a, b);
  std::vector<Symbol> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = b[a[i]];
  return Perm(std::move(v), Perm::Unchecked{});
}

inline Perm inverse(const Perm& a) {
  std::vector<Symbol> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[a[i]] = static_cast<Symbol>(i);
  return Perm(std::move(v), Perm::Unchecked{});
}

/// Disjoint-cycle lengths in ascending order, fixed points included as 1s.
inline std::vector<std::size_t> cycle_type(const Perm& a) {
  std::vector<std::size_t> out;
  std::vector<bool> seen(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = a[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t fixed_points(const Perm& a) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += a[i] == i;
  return c;
}

/// Swaps the symbols F and a(F) in the image string; the result ends in F.
inline Perm contract_full(const Perm& a) {
  const std::size_t f = a.size() - 1;
  std::vector<Symbol> v(a.images_);
  Symbol img = a[f];
  if (img != f) {
    for (std::size_t i = 0; i < f; ++i)
      if (v[i] == f) {
        v[i] = img;
        break;
      }
    v[f] = static_cast<Symbol>(f);
  }
  return Perm(std::move(v), Perm::Unchecked{});
}

/// contract_full with the trailing F dropped: a permutation of 0..n-2.
inline Perm contract_drop(const Perm& a) {
  Perm full = contract_full(a);
  full.images_.pop_back();
  return full;
}

/// Removes position `pos` and relabels the remaining symbols densely.
inline Perm delete_position(const Perm& a, std::size_t pos) {
  Symbol removed = a[pos];
  std::vector<Symbol> v;
  v.reserve(a.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != pos) v.push_back(static_cast<Symbol>(a[i] > removed ? a[i] - 1 : a[i]));
  return Perm(std::move(v), Perm::Unchecked{});
}

// ---------------------------------------------------------------------------

struct HdWitness {
  std::size_t min_hd = 0;
  std::size_t first = 0;
  std::size_t second = 0;

  bool operator==(const HdWitness&) const = default;
};

namespace detail {

/// Rows packed for word-wide comparison. n <= 16 uses 4-bit symbols in a
/// single word; n <= 256 uses 8-bit symbols.
struct PackedRows {
  std::size_t rows = 0;
  std::size_t words = 0;
  unsigned bits = 8;
  std::vector<std::uint64_t> data;

  static PackedRows pack(std::span<const Perm> perms, std::size_t n) {
    PackedRows pr;
    pr.rows = perms.size();
    pr.bits = n <= 16 ? 4 : 8;
    const std::size_t per_word = 64 / pr.bits;
    pr.words = (n + per_word - 1) / per_word;
    pr.data.assign(pr.rows * pr.words, 0);
    for (std::size_t r = 0; r < pr.rows; ++r)
      for (std::size_t i = 0; i < n; ++i)
        pr.data[r * pr.words + i / per_word] |= std::uint64_t{perms[r][i]} << (pr.bits * (i % per_word));
    return pr;
  }
};

inline unsigned nonzero_nibbles(std::uint64_t t) {
  t |= t >> 1;
  t |= t >> 2;
  return static_cast<unsigned>(std::popcount(t & 0x1111111111111111ull));
}

inline unsigned nonzero_bytes(std::uint64_t t) {
  constexpr std::uint64_t lo7 = 0x7F7F7F7F7F7F7F7Full;
  return static_cast<unsigned>(std::popcount((((t & lo7) + lo7) | t) & ~lo7));
}

template <std::size_t W, unsigned Bits>
inline unsigned packed_distance(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  unsigned d = 0;
  const std::size_t w = W ? W : words;
  for (std::size_t k = 0; k < w; ++k) {
    if constexpr (Bits == 4)
      d += nonzero_nibbles(a[k] ^ b[k]);
    else
      d += nonzero_bytes(a[k] ^ b[k]);
  }
  return d;
}

template <std::size_t W, unsigned Bits>
HdWitness sweep_rows(const PackedRows& pr, std::size_t begin, std::size_t end, std::size_t start_min) {
  HdWitness best{start_min, 0, 0};
  bool found = false;
  const std::uint64_t* base = pr.data.data();
  const std::size_t words = pr.words;
  for (std::size_t i = begin; i < end; ++i) {
    const std::uint64_t* a = base + i * words;
    for (std::size_t j = i + 1; j < pr.rows; ++j) {
      unsigned d = packed_distance<W, Bits>(a, base + j * words, words);
      if (d < best.min_hd) {
        best = {d, i, j};
        found = true;
      }
    }
  }
  if (!found) best = {start_min, static_cast<std::size_t>(-1), static_cast<std::size_t>(-1)};
  return best;
}

inline HdWitness sweep_dispatch(const PackedRows& pr, std::size_t begin, std::size_t end, std::size_t start_min) {
  if (pr.bits == 4) return sweep_rows<1, 4>(pr, begin, end, start_min);
  switch (pr.words) {
    case 3: return sweep_rows<3, 8>(pr, begin, end, start_min);
    case 4: return sweep_rows<4, 8>(pr, begin, end, start_min);
    case 5: return sweep_rows<5, 8>(pr, begin, end, start_min);
    default: return sweep_rows<0, 8>(pr, begin, end, start_min);
  }
}

inline bool witness_less(const HdWitness& a, const HdWitness& b) {
  return std::tie(a.min_hd, a.first, a.second) < std::tie(b.min_hd, b.first, b.second);
}

}  // namespace detail

/// Exact minimum pairwise distance of a list of same-size permutations with
/// the lexicographically first pair attaining it.
inline HdWitness hd_rows(std::span<const Perm> rows) {
  if (rows.size() < 2) fail(ErrorKind::TooFewPerms, "need at least two permutations");
  const std::size_t n = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != n) fail(ErrorKind::MismatchedN, "rows differ in length");

  if (n > 256) {
    HdWitness best{n + 1, 0, 0};
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        std::size_t d = hd(rows[i], rows[j]);
        if (d < best.min_hd) best = {d, i, j};
      }
    return best;
  }

  auto pr = detail::PackedRows::pack(rows, n);
  const unsigned workers = thread_count();
  std::vector<HdWitness> local(workers, HdWitness{n + 1, static_cast<std::size_t>(-1), 0});
  // Row i costs N-1-i pairs, so blocks stay small to balance the tail.
  const std::size_t block = std::max<std::size_t>(1, rows.size() / (64 * workers));
  parallel_blocks(rows.size(), block, workers, [&](unsigned w, std::size_t b, std::size_t e) {
    auto r = detail::sweep_dispatch(pr, b, e, n + 1);
    if (r.first != static_cast<std::size_t>(-1) && detail::witness_less(r, local[w])) local[w] = r;
  });
  HdWitness best = local[0];
  for (const auto& l : local)
    if (detail::witness_less(l, best)) best = l;
  return best;
}

/// Minimum over `pairs` uniformly sampled distinct pairs (seeded); an upper
/// bound on the true minimum, used as a fast screening mode.
inline HdWitness hd_rows_sampled(std::span<const Perm> rows, std::uint64_t pairs, std::uint64_t seed) {
  if (rows.size() < 2) fail(ErrorKind::TooFewPerms, "need at least two permutations");
  const std::size_t n = rows.front().size();
  auto pr = detail::PackedRows::pack(rows, n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
  HdWitness best{n + 1, 0, 0};
  for (std::uint64_t k = 0; k < pairs; ++k) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    std::size_t d = hd(rows[i], rows[j]);
    if (d < best.min_hd || (d == best.min_hd && std::pair(i, j) < std::pair(best.first, best.second)))
      best = {d, i, j};
  }
  return best;
}

// ---------------------------------------------------------------------------

/// Ordered permutation array on a common symbol set with no repeated rows.
class PArray {
 public:
  explicit PArray(std::size_t n = 0) : n_(n) {}

  PArray(std::size_t n, std::vector<Perm> perms) : n_(n) {
    perms_.reserve(perms.size());
    seen_.reserve(perms.size());
    for (auto& p : perms) push_back(std::move(p));
  }

  void push_back(Perm p) {
    if (p.size() != n_) fail(ErrorKind::MismatchedN, "row has " + std::to_string(p.size()) + " symbols, array " + std::to_string(n_));
    if (!seen_.insert(p).second) fail(ErrorKind::DuplicatePerm, "duplicate row " + p.to_string());
    perms_.push_back(std::move(p));
    cached_.reset();
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return perms_.size(); }
  bool empty() const { return perms_.empty(); }
  const Perm& operator[](std::size_t i) const { return perms_[i]; }
  std::span<const Perm> perms() const { return perms_; }
  auto begin() const { return perms_.begin(); }
  auto end() const { return perms_.end(); }
  bool contains(const Perm& p) const { return seen_.count(p) > 0; }

  /// Cached exhaustive minimum distance.
  const HdWitness& min_hd() const {
    if (!cached_) cached_ = hd_rows(perms_);
    return *cached_;
  }

 private:
  std::size_t n_;
  std::vector<Perm> perms_;
  std::unordered_set<Perm, PermHash> seen_;
  mutable std::optional<HdWitness> cached_;
};

inline HdWitness hd_array(const PArray& a) { return a.min_hd(); }

inline PArray contract_array(const PArray& a) {
  PArray out(a.n() - 1);
  for (const auto& p : a) out.push_back(contract_drop(p));
  return out;
}

/// Groups rows by their image at `pos`, keyed by symbol.
inline std::map<Symbol, PArray> partition_by_position(const PArray& a, std::size_t pos) {
  if (pos >= a.n()) fail(ErrorKind::MismatchedN, "position out of range");
  std::map<Symbol, PArray> out;
  for (const auto& p : a) {
    auto [it, _] = out.try_emplace(p[pos], a.n());
    it->second.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// .parr text format: header `n=<n> count=<N>`, then one image string per line.

inline void write_parr(std::ostream& os, std::size_t n, std::span<const Perm> rows) {
  os << "n=" << n << " count=" << rows.size() << '\n';
  for (const auto& r : rows) os << r.to_string() << '\n';
}

inline void write_parr(std::ostream& os, const PArray& a) { write_parr(os, a.n(), a.perms()); }

inline std::string to_parr_string(const PArray& a) {
  std::ostringstream os;
  write_parr(os, a);
  return os.str();
}

inline void write_parr_file(const std::string& path, const PArray& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::ParseError, "cannot open " + path + " for writing");
  write_parr(os, a);
}

struct ParrRows {
  std::size_t n = 0;
  std::vector<Perm> rows;
};

/// Parses rows without rejecting duplicates, so verification can report them.
inline ParrRows read_parr_rows(std::istream& is) {
  ParrRows out;
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::ParseError, "empty array file");
  std::size_t count = 0;
  {
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    if (a.rfind("n=", 0) != 0 || b.rfind("count=", 0) != 0) fail(ErrorKind::ParseError, "bad header '" + line + "'");
    try {
      out.n = std::stoul(a.substr(2));
      count = std::stoul(b.substr(6));
    } catch (const std::logic_error&) {
      fail(ErrorKind::ParseError, "bad header '" + line + "'");
    }
    std::string extra;
    if (hs >> extra) fail(ErrorKind::ParseError, "trailing header text");
  }
  if (out.n == 0 || out.n > 65536) fail(ErrorKind::ParseError, "bad symbol count");
  out.rows.reserve(count);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<Symbol> v;
    v.reserve(out.n);
    long long x;
    while (ls >> x) {
      if (x < 0 || x >= static_cast<long long>(out.n)) fail(ErrorKind::ParseError, "symbol out of range");
      v.push_back(static_cast<Symbol>(x));
    }
    if (!ls.eof()) fail(ErrorKind::ParseError, "non-numeric symbol in '" + line + "'");
    if (v.size() != out.n) fail(ErrorKind::ParseError, "row has wrong length");
    try {
      out.rows.emplace_back(std::move(v));
    } catch (const Error&) {
      fail(ErrorKind::ParseError, "row is not a permutation: '" + line + "'");
    }
  }
  if (out.rows.size() != count) fail(ErrorKind::ParseError, "header count disagrees with row count");
  return out;
}

inline PArray read_parr(std::istream& is) {
  auto r = read_parr_rows(is);
  return PArray(r.n, std::move(r.rows));
}

inline PArray read_parr_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::ParseError, "cannot open " + path);
  return read_parr(is);
}

}  // namespace permcontract
