#pragma once

// AGL(1,q) and PGL(2,q) as permutation arrays. Symbols are canonical field
// indices 0..q-1; PGL arrays add the point at infinity as symbol q.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permcontract/error.hpp"
#include "permcontract/gf.hpp"
#include "permcontract/perm.hpp"

namespace permcontract {

using gf::Elem;
using gf::Field;

/// x -> a x + b, a != 0.
struct AffineMap {
  Elem a, b;

  Elem operator()(const Field& f, Elem x) const { return f.add(f.mul(a, x), b); }

  Perm perm(const Field& f) const {
    std::vector<Symbol> v(f.q());
    for (std::uint32_t x = 0; x < f.q(); ++x) v[x] = static_cast<Symbol>((*this)(f, Elem{x}).index);
    return Perm(std::move(v));
  }

  /// Position in agl_enumerate's ordering.
  std::size_t agl_index(const Field& f) const { return std::size_t{a.index - 1} * f.q() + b.index; }

  bool operator==(const AffineMap&) const = default;
};

inline AffineMap affine_from_index(const Field& f, std::size_t idx) {
  return {Elem{static_cast<std::uint32_t>(idx / f.q() + 1)}, Elem{static_cast<std::uint32_t>(idx % f.q())}};
}

/// All q(q-1) affine maps, slope-major in canonical order.
inline PArray agl_enumerate(const Field& f) {
  PArray out(f.q());
  for (std::uint32_t a = 1; a < f.q(); ++a)
    for (std::uint32_t b = 0; b < f.q(); ++b) out.push_back(AffineMap{Elem{a}, Elem{b}}.perm(f));
  return out;
}

/// x -> (a x + b)/(c x + d) on GF(q) u {inf}, ad != bc.
struct MobiusMap {
  Elem a, b, c, d;

  /// Scales so the first nonzero coefficient is one.
  MobiusMap normalized(const Field& f) const {
    Elem lead = a.index ? a : (b.index ? b : c);
    Elem s = f.inv(lead);
    return {f.mul(a, s), f.mul(b, s), f.mul(c, s), f.mul(d, s)};
  }

  Perm perm(const Field& f) const {
    const std::uint32_t q = f.q();
    if (f.mul(a, d) == f.mul(b, c)) fail(ErrorKind::VerificationFailed, "singular Mobius map");
    std::vector<Symbol> v(q + 1);
    for (std::uint32_t xi = 0; xi < q; ++xi) {
      Elem x{xi};
      Elem den = f.add(f.mul(c, x), d);
      v[xi] = den.index == 0 ? static_cast<Symbol>(q) : static_cast<Symbol>(f.div(f.add(f.mul(a, x), b), den).index);
    }
    v[q] = c.index == 0 ? static_cast<Symbol>(q) : static_cast<Symbol>(f.div(a, c).index);
    return Perm(std::move(v));
  }

  bool operator==(const MobiusMap&) const = default;
};

/// All (q+1)q(q-1) Mobius maps, one normalized representative each, in
/// lexicographic order of (a, b, c, d).
inline std::vector<MobiusMap> pgl_maps(const Field& f) {
  const std::uint32_t q = f.q();
  std::vector<MobiusMap> out;
  out.reserve(std::size_t{q + 1} * q * (q - 1));
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      for (std::uint32_t c = 0; c < q; ++c) {
        // the first nonzero coefficient must be one
        if (a > 1 || (a == 0 && b > 1) || (a == 0 && b == 0 && c != 1)) continue;
        for (std::uint32_t d = 0; d < q; ++d) {
          MobiusMap m{Elem{a}, Elem{b}, Elem{c}, Elem{d}};
          if (f.mul(m.a, m.d) != f.mul(m.b, m.c)) out.push_back(m);
        }
      }
  return out;
}

inline PArray pgl_enumerate(const Field& f) {
  PArray out(f.q() + 1);
  for (const auto& m : pgl_maps(f)) out.push_back(m.perm(f));
  return out;
}

/// x -> K + r/(x - i), with inf -> K and i -> inf.
struct PForm {
  Elem k, r, i;

  bool operator==(const PForm&) const = default;
};

inline Perm p_form_perm(const Field& f, const PForm& pf) {
  if (pf.r.index == 0) fail(ErrorKind::ZeroR, "P-form needs r != 0");
  const std::uint32_t q = f.q();
  std::vector<Symbol> v(q + 1);
  for (std::uint32_t xi = 0; xi < q; ++xi) {
    Elem x{xi};
    v[xi] = x == pf.i ? static_cast<Symbol>(q) : static_cast<Symbol>(f.add(pf.k, f.div(pf.r, f.sub(x, pf.i))).index);
  }
  v[q] = static_cast<Symbol>(pf.k.index);
  return Perm(std::move(v));
}

inline Perm p_form_perm(const Field& f, Elem k, Elem r, Elem i) { return p_form_perm(f, PForm{k, r, i}); }

/// K = a/c, r = (bc - ad)/c^2, i = -d/c; defined only when c != 0.
inline PForm alpha_map(const Field& f, const MobiusMap& m) {
  if (m.c.index == 0) fail(ErrorKind::ZeroC, "alpha is defined only for c != 0");
  Elem cinv = f.inv(m.c);
  Elem k = f.mul(m.a, cinv);
  Elem r = f.mul(f.sub(f.mul(m.b, m.c), f.mul(m.a, m.d)), f.mul(cinv, cinv));
  Elem i = f.neg(f.mul(m.d, cinv));
  return {k, r, i};
}

/// The P-form of a permutation of GF(q) u {inf} that moves inf, read off its
/// image string: K = pi(inf), i = pi^-1(inf), r = (pi(x) - K)(x - i) at any
/// other x. Returns nothing for permutations fixing inf.
inline std::optional<PForm> read_p_form(const Field& f, const Perm& p) {
  const std::uint32_t q = f.q();
  if (p.size() != q + 1 || p.last() == q) return std::nullopt;
  Elem k{p.last()};
  std::uint32_t pole = 0;
  while (p[pole] != q) ++pole;
  Elem i{pole};
  Elem x{pole == 0 ? 1u : 0u};
  Elem r = f.mul(f.sub(Elem{p[x.index]}, k), f.sub(x, i));
  return PForm{k, r, i};
}

}  // namespace permcontract
