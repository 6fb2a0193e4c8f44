#pragma once

// Schouten bracket of algebroid multivectors (polynomials in xi1..xin):
// the derived bracket {{U, mu}, V} on T*[2]E[1], checked against the
// graded Leibniz recursion seeded by [[e_i, e_j]] = c_ij^k e_k and
// [[e_i, f]] = rho(e_i)(f).

#include <vector>

#include "modcls/algebroid.hpp"
#include "modcls/courant.hpp"
#include "modcls/error.hpp"
#include "modcls/superalg.hpp"

namespace modcls {

namespace detail {

inline int shifted_sign(int a, int b) { return ((a - 1) * b) % 2 ? -1 : 1; }

struct Factor {
  SuperPoly value;
  int degree;
  int index;  // frame index for degree 1, -1 for a function
  ScalarField function;
};

inline std::vector<Factor> factors(const SkewAlgebroid& A, const SuperPoly::Term& term) {
  std::vector<Factor> out;
  out.push_back({SuperPoly::scalar(A.multivector_table(), term.second), 0, -1, term.second});
  for (int i = 0; i < A.rank(); ++i)
    if (term.first.odd & (1u << i)) out.push_back({A.xi(i), 1, i, ScalarField()});
  return out;
}

/// [[a, b]] for single factors.
inline SuperPoly factor_bracket(const SkewAlgebroid& A, const Factor& a, const Factor& b) {
  const TablePtr& t = A.multivector_table();
  if (a.degree == 0 && b.degree == 0) return SuperPoly(t);
  if (a.degree == 1 && b.degree == 0)
    return SuperPoly::scalar(t, anchor_apply(A, frame_section(A, a.index), b.function));
  if (a.degree == 0 && b.degree == 1)
    return -SuperPoly::scalar(t, anchor_apply(A, frame_section(A, b.index), a.function));
  return section_to_multivector(A, bracket_sections(A, frame_section(A, a.index), frame_section(A, b.index)));
}

/// [[g, V]] for a single factor g, by the derivation rule in the second slot.
inline SuperPoly factor_with(const SkewAlgebroid& A, const Factor& g, const SuperPoly& V) {
  const TablePtr& t = A.multivector_table();
  SuperPoly out(t);
  for (const auto& term : V.terms()) {
    const std::vector<Factor> fs = factors(A, term);
    for (std::size_t p = 0; p < fs.size(); ++p) {
      SuperPoly prod = SuperPoly::scalar(t, ScalarField(1));
      int prefix = 0;
      for (std::size_t q = 0; q < p; ++q) {
        prod = prod * fs[q].value;
        prefix += fs[q].degree;
      }
      prod = prod * factor_bracket(A, g, fs[p]);
      for (std::size_t q = p + 1; q < fs.size(); ++q) prod = prod * fs[q].value;
      out += ScalarField(shifted_sign(g.degree, prefix)) * prod;
    }
  }
  return out;
}

inline SuperPoly schouten_leibniz(const SkewAlgebroid& A, const SuperPoly& U, const SuperPoly& V) {
  const TablePtr& t = A.multivector_table();
  SuperPoly out(t);
  for (int v = 0; v <= A.rank(); ++v) {
    std::vector<SuperPoly::Term> part;
    for (const auto& term : V.terms())
      if (term.first.odd_degree() == v) part.push_back(term);
    if (part.empty()) continue;
    const SuperPoly Vv = SuperPoly::from_terms(t, std::move(part));
    for (const auto& term : U.terms()) {
      const int u = term.first.odd_degree();
      // [[U_term, Vv]] = -(-1)^{(u-1)(v-1)} [[Vv, U_term]], expanded over the factors of U_term.
      const std::vector<Factor> fs = factors(A, term);
      SuperPoly swapped(t);
      for (std::size_t p = 0; p < fs.size(); ++p) {
        SuperPoly prod = SuperPoly::scalar(t, ScalarField(1));
        int prefix = 0;
        for (std::size_t q = 0; q < p; ++q) {
          prod = prod * fs[q].value;
          prefix += fs[q].degree;
        }
        // [[Vv, b]] = -(-1)^{(v-1)(|b|-1)} [[b, Vv]]
        const int flip = -shifted_sign(v, fs[p].degree - 1);
        prod = prod * (ScalarField(flip) * factor_with(A, fs[p], Vv));
        for (std::size_t q = p + 1; q < fs.size(); ++q) prod = prod * fs[q].value;
        swapped += ScalarField(shifted_sign(v, prefix)) * prod;
      }
      out += ScalarField(-shifted_sign(u, v - 1)) * swapped;
    }
  }
  return out;
}

inline SuperPoly schouten_derived(const SkewAlgebroid& A, const SuperPoly& U, const SuperPoly& V) {
  const SymplecticSpace2 s = SymplecticSpace2::split(A.chart(), A.rank());
  const SuperPoly mu = mu_from_algebroid(A, s);
  const SuperPoly r =
      poisson_bracket(poisson_bracket(from_multivector_table(U, s), mu, s), from_multivector_table(V, s), s);
  return to_multivector_table(r, s, A.multivector_table());
}

}  // namespace detail

/// [[U, V]]; the derived-bracket value, asserted equal to the Leibniz recursion.
inline SuperPoly schouten(const SkewAlgebroid& A, const SuperPoly& U, const SuperPoly& V) {
  if (U.is_zero() || V.is_zero()) return SuperPoly(A.multivector_table());
  require_same_table(A.multivector_table(), U.table());
  require_same_table(A.multivector_table(), V.table());
  SuperPoly derived = detail::schouten_derived(A, U, V);
  SuperPoly recursive = detail::schouten_leibniz(A, U, V);
  if (derived != recursive)
    throw InternalError("Schouten bracket: derived " + format(derived) + " != recursion " + format(recursive));
  return derived;
}

}  // namespace modcls
