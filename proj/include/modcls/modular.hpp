#pragma once

// Modular cocycles of skew algebroids, characteristic forms for a rescaled
// density, bounded exactness, and modular classes of morphisms.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modcls/algebroid.hpp"
#include "modcls/error.hpp"
#include "modcls/linalg.hpp"
#include "modcls/superalg.hpp"

namespace modcls {

/// A y-linear representative sum_i a_i(x) y^i of a degree-1 class.
class Cocycle1 {
 public:
  Cocycle1(std::shared_ptr<const SkewAlgebroid> algebroid, SuperPoly rep)
      : algebroid_(std::move(algebroid)), rep_(std::move(rep)) {
    if (rep_.is_zero()) rep_ = SuperPoly(algebroid_->form_table());
    require_same_table(algebroid_->form_table(), rep_.table());
    for (const auto& [m, c] : rep_.terms())
      if (m.odd_degree() != 1) throw MathError("cocycle representative is not linear in y");
    if (is_lie(*algebroid_) && !differential(*algebroid_, rep_).is_zero())
      throw MathError("cocycle representative is not closed");
  }

  Cocycle1(const SkewAlgebroid& algebroid, SuperPoly rep)
      : Cocycle1(std::make_shared<const SkewAlgebroid>(algebroid), std::move(rep)) {}

  const SkewAlgebroid& algebroid() const { return *algebroid_; }
  const std::shared_ptr<const SkewAlgebroid>& algebroid_ptr() const { return algebroid_; }
  const SuperPoly& rep() const { return rep_; }
  ScalarField coefficient(int i) const { return rep_.coefficient(SuperMonomial{1u << i, {}}); }

 private:
  std::shared_ptr<const SkewAlgebroid> algebroid_;
  SuperPoly rep_;
};

namespace detail {

/// (sum_k c_ik^k + sum_a d rho_i^a / d x^a) y^i.
inline SuperPoly modular_closed_form(const SkewAlgebroid& A) {
  SuperPoly out(A.form_table());
  for (int i = 0; i < A.rank(); ++i) {
    ScalarField a;
    for (int k = 0; k < A.rank(); ++k) a += A.c(i, k, k);
    for (int b = 0; b < A.base_dim(); ++b) a += A.rho(i, b).partial(b);
    out += a * A.y(i);
  }
  return out;
}

inline SuperPoly modular_divergence(const SkewAlgebroid& A) { return divergence(de_rham_field(A)); }

/// Coefficient of the top monomial when `v` is a multiple of it.
inline ScalarField top_coefficient(const SuperPoly& v, std::uint32_t top) {
  ScalarField coeff;
  for (const auto& [m, c] : v.terms()) {
    if (m.odd != top || !m.even.is_one()) throw InternalError("expected a multiple of the top element");
    coeff = c;
  }
  return coeff;
}

}  // namespace detail

/// Divergence of the de Rham field for the coordinate density; checked against
/// the closed-form coefficient expression.
inline Cocycle1 modular_cocycle(const SkewAlgebroid& A) {
  SuperPoly by_divergence = detail::modular_divergence(A);
  SuperPoly closed = detail::modular_closed_form(A);
  if (by_divergence != closed)
    throw InternalError("modular cocycle: divergence " + format(by_divergence) + " != closed form " + format(closed));
  return Cocycle1(A, by_divergence);
}

/// phi(e_i) from nabla_{e_i} sigma = phi(e_i) sigma, sigma = g e_1^...^e_n (x) dx^1^...^dx^m:
/// the Lie derivative of the top multivector (frame brackets, Leibniz), the Lie
/// derivative of the coordinate volume along rho(e_i) (Cartan formula on TM), and
/// the gauge term rho(e_i)(g)/g. Valid where g != 0.
inline Cocycle1 characteristic_form(const SkewAlgebroid& A, const ScalarField& gauge) {
  if (gauge.is_zero()) throw MathError("zero gauge factor");
  const int n = A.rank(), m = A.base_dim();
  SkewAlgebroid tangent(A.chart(), m);
  for (int a = 0; a < m; ++a) tangent.set_anchor(a, a, ScalarField(1));
  SuperPoly volume = SuperPoly::scalar(tangent.form_table(), ScalarField(1));
  for (int a = 0; a < m; ++a) volume = volume * tangent.y(a);
  const std::uint32_t top_e = n ? ((n == 32 ? 0u : (1u << n)) - 1u) : 0u;
  const std::uint32_t top_x = m ? ((1u << m) - 1u) : 0u;

  SuperPoly out(A.form_table());
  for (int i = 0; i < n; ++i) {
    const Section ei = frame_section(A, i);
    // L_{e_i}(e_1^...^e_n) = sum_k e_1^...^[e_i, e_k]^...^e_n
    SuperPoly lie_top(A.multivector_table());
    for (int k = 0; k < n; ++k) {
      SuperPoly wedge = SuperPoly::scalar(A.multivector_table(), ScalarField(1));
      for (int l = 0; l < n; ++l)
        wedge = wedge * (l == k ? section_to_multivector(A, bracket_sections(A, ei, frame_section(A, k))) : A.xi(l));
      lie_top += wedge;
    }
    Section anchor(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) anchor[static_cast<std::size_t>(a)] = A.rho(i, a);
    const SuperPoly lie_volume = lie_derivative_form(tangent, anchor, volume);

    ScalarField phi = detail::top_coefficient(lie_top, top_e) + detail::top_coefficient(lie_volume, top_x);
    phi += anchor_apply(A, ei, gauge) / gauge;
    out += phi * A.y(i);
  }
  return Cocycle1(A, out);
}

/// Bounded exactness verdict: either a witness f with d f = alpha, or "none
/// of total degree <= bound".
struct ExactnessResult {
  bool exact = false;
  int bound = 0;
  ScalarField witness;
};

inline int default_exactness_bound(const Cocycle1& alpha) {
  int deg = 0;
  for (const auto& [m, c] : alpha.rep().terms())
    deg = std::max(deg, static_cast<int>(c.numerator().total_degree()));
  return deg + 2;
}

/// Searches a polynomial f(x) of total degree <= bound with d f = alpha by
/// solving the linear system on the coefficients of f over Q.
inline ExactnessResult is_exact(const Cocycle1& alpha, int bound) {
  if (bound < 0) throw MathError("degree bound must be nonnegative");
  const SkewAlgebroid& A = alpha.algebroid();
  const int n = A.rank(), m = A.base_dim();
  for (int i = 0; i < n; ++i)
    if (!alpha.coefficient(i).is_polynomial())
      throw MathError("exactness test needs polynomial coefficients; " + form_generator_name(i) +
                      " has coefficient " + format(alpha.coefficient(i), A.chart()));

  // Unknowns: coefficients of all monomials of degree 1..bound (constants are closed).
  std::vector<Monomial> basis;
  {
    std::vector<Monomial> layer{Monomial{}};
    for (int d = 1; d <= bound && m > 0; ++d) {
      std::vector<Monomial> next;
      for (const auto& mono : layer) {
        int last = 0;
        for (int a = 0; a < m; ++a)
          if (mono.exponent(a)) last = a;
        for (int a = last; a < m; ++a) next.push_back(mono * Monomial::variable(a));
      }
      basis.insert(basis.end(), next.begin(), next.end());
      layer = std::move(next);
    }
  }

  // Equation i: D_i * rho(e_i)(f) = D_i * alpha_i with D_i clearing the anchor denominators.
  std::map<std::pair<int, Monomial>, std::size_t> rows;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(basis.size());
  std::vector<std::pair<std::size_t, Rational>> rhs;
  auto row_of = [&](int i, const Monomial& mono) {
    auto [it, inserted] = rows.try_emplace({i, mono}, rows.size());
    return it->second;
  };
  for (int i = 0; i < n; ++i) {
    Polynomial denom(Rational(1));
    for (int a = 0; a < m; ++a) {
      const Polynomial& d = A.rho(i, a).denominator();
      if (!d.is_one()) denom = exact_quotient(denom * d, gcd(denom, d));
    }
    std::vector<Polynomial> anchor(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
      anchor[static_cast<std::size_t>(a)] = exact_quotient(A.rho(i, a).numerator() * denom, A.rho(i, a).denominator());
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const Polynomial mono = Polynomial::monomial(basis[col], Rational(1));
      Polynomial image;
      for (int a = 0; a < m; ++a)
        if (!anchor[static_cast<std::size_t>(a)].is_zero())
          image = image + anchor[static_cast<std::size_t>(a)] * mono.partial(a);
      for (const auto& t : image.terms()) columns[col].push_back({row_of(i, t.mono), t.coeff});
    }
    const Polynomial target = alpha.coefficient(i).numerator() * denom;
    for (const auto& t : target.terms()) rhs.push_back({row_of(i, t.mono), t.coeff});
  }

  ExactnessResult result;
  result.bound = bound;
  Matrix<Rational> a(rows.size(), std::vector<Rational>(basis.size()));
  std::vector<Rational> b(rows.size());
  for (std::size_t col = 0; col < basis.size(); ++col)
    for (const auto& [r, v] : columns[col]) a[r][col] += v;
  for (const auto& [r, v] : rhs) b[r] += v;
  if (rows.empty()) {
    result.exact = true;
    return result;
  }
  auto x = solve(a, b);
  if (!x) return result;
  std::vector<Polynomial::Term> terms;
  for (std::size_t col = 0; col < basis.size(); ++col)
    if ((*x)[col] != 0) terms.push_back({basis[col], (*x)[col]});
  result.exact = true;
  result.witness = ScalarField(Polynomial::from_terms(std::move(terms)));
  if (differential(A, SuperPoly::scalar(A.form_table(), result.witness)) != alpha.rep())
    throw InternalError("exactness witness does not reproduce the cocycle");
  return result;
}

inline ExactnessResult is_exact(const Cocycle1& alpha) { return is_exact(alpha, default_exactness_bound(alpha)); }

/// Mod(Phi) = mod(source) - Phi^*(mod(target)).
inline Cocycle1 modular_class_of_morphism(const AlgebroidMorphism& phi) {
  Verdict v = is_morphism(phi);
  if (!v) throw MathError("not an algebroid morphism: intertwining fails on " + v.where);
  const Cocycle1 src = modular_cocycle(phi.source());
  const Cocycle1 dst = modular_cocycle(phi.target());
  return Cocycle1(phi.source(), src.rep() - pullback(phi, dst.rep()));
}

}  // namespace modcls
