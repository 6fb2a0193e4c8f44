#pragma once

// Degree-2 symplectic spaces {x, zeta, p} with constant odd pairing, the
// graded Poisson bracket, cubic Hamiltonians, derived (Dorfman) brackets, and
// the split case T*[2]E[1] with zeta = (y, xi).
//
// Conventions (fixed by {{xi_i, mu}, xi_j} = c_ij^k xi_k and {{xi_i, mu}, x^a} = rho_i^a):
//   {x^a, p_b} = delta, {zeta^i, zeta^j} = g^{ij}, split: {y^i, xi_j} = delta,
//   {F, G} = dF/dx dG/dp - dF/dp dG/dx + (-1)^{|F|+1} dF/dzeta^i g^{ij} dG/dzeta^j (left partials),
//   mu = 1/2 c_ij^k y^j y^i xi_k - rho_i^b y^i p_b,
//   the Hamiltonian vector field is d_H = {H, .}.

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

class SymplecticSpace2 {
 public:
  /// General space: odd generators with the symmetric invertible pairing g (g_ij).
  SymplecticSpace2(const BaseChart& chart, const std::vector<std::string>& odd_names, Matrix<Rational> g)
      : g_(std::move(g)) {
    const std::size_t n = odd_names.size();
    if (g_.size() != n) throw InputError("pairing matrix size does not match the odd generators");
    for (std::size_t i = 0; i < n; ++i) {
      if (g_[i].size() != n) throw InputError("pairing matrix is not square");
      for (std::size_t j = 0; j < n; ++j)
        if (g_[i][j] != g_[j][i]) throw InputError("pairing matrix is not symmetric");
    }
    auto inv = inverse(g_);
    if (!inv) throw InputError("pairing matrix is not invertible");
    ginv_ = std::move(*inv);
    std::vector<GeneratorSpec> odd, even;
    for (const auto& name : odd_names) odd.push_back({name, {0, 1}});
    for (int a = 0; a < chart.dim(); ++a) even.push_back({momentum_name(a), {1, 1}});
    table_ = make_table(chart, std::move(odd), std::move(even));
  }

  /// T*[2]E[1] for a rank-n bundle: zeta = (y1..yn, xi1..xin), {y^i, xi_j} = delta.
  static SymplecticSpace2 split(const BaseChart& chart, int n) {
    SymplecticSpace2 s;
    s.split_rank_ = n;
    const std::size_t N = static_cast<std::size_t>(2 * n);
    s.g_.assign(N, std::vector<Rational>(N, Rational(0)));
    for (int i = 0; i < n; ++i) {
      s.g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
      s.g_[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i)] = 1;
    }
    s.ginv_ = s.g_;
    std::vector<GeneratorSpec> odd, even;
    for (int i = 0; i < n; ++i) odd.push_back({form_generator_name(i), {0, 1}});
    for (int i = 0; i < n; ++i) odd.push_back({multivector_generator_name(i), {1, 0}});
    for (int a = 0; a < chart.dim(); ++a) even.push_back({momentum_name(a), {1, 1}});
    s.table_ = make_table(chart, std::move(odd), std::move(even));
    return s;
  }

  const TablePtr& table() const { return table_; }
  const BaseChart& chart() const { return table_->chart(); }
  int odd_count() const { return table_->odd_count(); }
  int base_dim() const { return table_->base_dim(); }
  const Matrix<Rational>& pairing() const { return g_; }
  const Rational& pairing_inverse(int i, int j) const {
    return ginv_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
  }

  bool is_split() const { return split_rank_.has_value(); }
  /// Rank n of E in the split case.
  int rank() const {
    if (!split_rank_) throw MathError("symplectic space is not split");
    return *split_rank_;
  }

  SuperPoly x(int a) const { return SuperPoly::scalar(table_, ScalarField::variable(a)); }
  SuperPoly p(int a) const { return SuperPoly::even_generator(table_, a); }
  SuperPoly zeta(int i) const { return SuperPoly::odd_generator(table_, i); }
  SuperPoly y(int i) const { return SuperPoly::odd_generator(table_, y_index(i)); }
  SuperPoly xi(int i) const { return SuperPoly::odd_generator(table_, xi_index(i)); }
  int y_index(int i) const {
    if (i < 0 || i >= rank()) throw MathError("frame index out of range");
    return i;
  }
  int xi_index(int i) const {
    if (i < 0 || i >= rank()) throw MathError("frame index out of range");
    return rank() + i;
  }
  std::uint32_t y_mask() const { return (1u << rank()) - 1u; }
  std::uint32_t xi_mask() const { return y_mask() << rank(); }

  friend bool operator==(const SymplecticSpace2& a, const SymplecticSpace2& b) {
    return same_table(a.table_, b.table_) && a.g_ == b.g_ && a.split_rank_ == b.split_rank_;
  }

 private:
  SymplecticSpace2() = default;

  TablePtr table_;
  Matrix<Rational> g_;
  Matrix<Rational> ginv_;
  std::optional<int> split_rank_;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace2>;

inline SpacePtr make_split_space(const BaseChart& chart, int n) {
  return std::make_shared<const SymplecticSpace2>(SymplecticSpace2::split(chart, n));
}

// ---------------------------------------------------------------------------
// Poisson bracket
// ---------------------------------------------------------------------------

namespace detail {

inline SuperPoly parity_part(const SuperPoly& f, int parity) {
  std::vector<SuperPoly::Term> out;
  for (const auto& t : f.terms())
    if (t.first.parity() == parity) out.push_back(t);
  return SuperPoly::from_terms(f.table(), std::move(out));
}

}  // namespace detail

inline SuperPoly poisson_bracket(const SuperPoly& F, const SuperPoly& G, const SymplecticSpace2& space) {
  const TablePtr& t = space.table();
  if (F.is_zero() || G.is_zero()) return SuperPoly(t);
  require_same_table(t, F.table());
  require_same_table(t, G.table());
  SuperPoly out(t);
  for (int a = 0; a < space.base_dim(); ++a) {
    SuperPoly fx = partial_base(F, a), gp = partial_even(G, a);
    if (!fx.is_zero() && !gp.is_zero()) out += fx * gp;
    SuperPoly fp = partial_even(F, a), gx = partial_base(G, a);
    if (!fp.is_zero() && !gx.is_zero()) out -= fp * gx;
  }
  const int N = space.odd_count();
  std::vector<SuperPoly> dG(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) dG[static_cast<std::size_t>(j)] = left_partial_odd(G, j);
  for (int parity : {0, 1}) {
    SuperPoly Fp = detail::parity_part(F, parity);
    if (Fp.is_zero()) continue;
    SuperPoly acc(t);
    for (int i = 0; i < N; ++i) {
      SuperPoly dFi = left_partial_odd(Fp, i);
      if (dFi.is_zero()) continue;
      for (int j = 0; j < N; ++j) {
        const Rational& gij = space.pairing_inverse(i, j);
        if (gij == 0 || dG[static_cast<std::size_t>(j)].is_zero()) continue;
        acc += ScalarField(gij) * (dFi * dG[static_cast<std::size_t>(j)]);
      }
    }
    out = parity ? out + acc : out - acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

class Hamiltonian {
 public:
  Hamiltonian(SpacePtr space, SuperPoly value) : space_(std::move(space)), value_(std::move(value)) {
    if (value_.is_zero()) value_ = SuperPoly(space_->table());
    require_same_table(space_->table(), value_.table());
    for (const auto& [m, c] : value_.terms())
      if (m.degree() != 3) throw MathError("Hamiltonian is not homogeneous of degree 3");
  }

  const SymplecticSpace2& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SuperPoly& value() const { return value_; }

 private:
  SpacePtr space_;
  SuperPoly value_;
};

inline SuperPoly poisson_bracket(const SuperPoly& F, const SuperPoly& G, const Hamiltonian& H) {
  return poisson_bracket(F, G, H.space());
}

/// {H, H}; zero iff H is homological.
inline SuperPoly hamiltonian_square(const Hamiltonian& H) { return poisson_bracket(H.value(), H.value(), H); }

/// [X, Y]_H = {{X, H}, Y}.
inline SuperPoly derived_bracket(const SuperPoly& X, const SuperPoly& Y, const Hamiltonian& H) {
  return poisson_bracket(poisson_bracket(X, H.value(), H), Y, H);
}

/// rho(X)(f) = {{X, H}, f}.
inline SuperPoly anchor_apply(const SuperPoly& X, const SuperPoly& f, const Hamiltonian& H) {
  return derived_bracket(X, f, H);
}

/// The Hamiltonian vector field d_H = {H, .} as a derivation of the whole table.
inline SuperVectorField hamiltonian_field(const Hamiltonian& H) {
  const SymplecticSpace2& s = H.space();
  const TablePtr& t = s.table();
  std::vector<SuperPoly> base, odd, even;
  for (int a = 0; a < s.base_dim(); ++a) base.push_back(poisson_bracket(H.value(), s.x(a), s));
  for (int i = 0; i < s.odd_count(); ++i) odd.push_back(poisson_bracket(H.value(), s.zeta(i), s));
  for (int a = 0; a < s.base_dim(); ++a) even.push_back(poisson_bracket(H.value(), s.p(a), s));
  return SuperVectorField(t, 1, std::move(base), std::move(odd), std::move(even));
}

// ---------------------------------------------------------------------------
// Split spaces
// ---------------------------------------------------------------------------

/// mu = 1/2 c_ij^k y^j y^i xi_k - rho_i^b y^i p_b on T*[2]E[1].
inline SuperPoly mu_from_algebroid(const SkewAlgebroid& A, const SymplecticSpace2& space) {
  if (space.rank() != A.rank() || space.chart() != A.chart())
    throw MathError("algebroid does not match the split space");
  SuperPoly out(space.table());
  const int n = A.rank();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!A.c(i, j, k).is_zero()) out -= A.c(i, j, k) * (space.y(i) * space.y(j) * space.xi(k));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < A.base_dim(); ++b)
      if (!A.rho(i, b).is_zero()) out -= A.rho(i, b) * (space.y(i) * space.p(b));
  return out;
}

inline Hamiltonian algebroid_hamiltonian(const SkewAlgebroid& A, const SpacePtr& space) {
  return Hamiltonian(space, mu_from_algebroid(A, *space));
}

/// Monomial-type classification of a split cubic Hamiltonian.
struct BidegreeParts {
  SuperPoly mu;     // y y xi, y p
  SuperPoly gamma;  // xi xi y, xi p
  SuperPoly phi;    // y y y
  SuperPoly psi;    // xi xi xi
};

inline BidegreeParts bidegree_split(const Hamiltonian& H) {
  const SymplecticSpace2& s = H.space();
  if (!s.is_split()) throw MathError("bidegree split needs a split space");
  std::vector<SuperPoly::Term> mu, gamma, phi, psi;
  for (const auto& term : H.value().terms()) {
    const int ny = std::popcount(term.first.odd & s.y_mask());
    const int nxi = std::popcount(term.first.odd & s.xi_mask());
    const int np = static_cast<int>(term.first.even.degree());
    if ((ny == 2 && nxi == 1) || (ny == 1 && np == 1)) mu.push_back(term);
    else if ((ny == 1 && nxi == 2) || (nxi == 1 && np == 1)) gamma.push_back(term);
    else if (ny == 3) phi.push_back(term);
    else if (nxi == 3) psi.push_back(term);
    else throw InternalError("unclassified cubic monomial");
  }
  const TablePtr& t = s.table();
  return {SuperPoly::from_terms(t, std::move(mu)), SuperPoly::from_terms(t, std::move(gamma)),
          SuperPoly::from_terms(t, std::move(phi)), SuperPoly::from_terms(t, std::move(psi))};
}

namespace detail {

inline bool only_x_and_y(const SuperPoly& f, const SymplecticSpace2& s) {
  for (const auto& [m, c] : f.terms())
    if ((m.odd & s.xi_mask()) || !m.even.is_one()) return false;
  return true;
}

}  // namespace detail

/// gamma = psi = 0, cross-checked against projectability of {H, x^a} and {H, y^i}.
inline bool is_projectable(const Hamiltonian& H) {
  const BidegreeParts parts = bidegree_split(H);
  const bool by_parts = parts.gamma.is_zero() && parts.psi.is_zero();
  const SymplecticSpace2& s = H.space();
  bool by_field = true;
  for (int a = 0; a < s.base_dim() && by_field; ++a)
    by_field = detail::only_x_and_y(poisson_bracket(H.value(), s.x(a), s), s);
  for (int i = 0; i < s.rank() && by_field; ++i)
    by_field = detail::only_x_and_y(poisson_bracket(H.value(), s.y(i), s), s);
  if (by_parts != by_field) throw InternalError("projectability criteria disagree");
  return by_parts;
}

/// Moves a function of (x, y) on the split space to the form table {x; y1..yn}.
inline SuperPoly to_form_table(const SuperPoly& f, const SymplecticSpace2& s, const TablePtr& forms) {
  if (!detail::only_x_and_y(f, s)) throw MathError("function depends on xi or p");
  std::vector<SuperPoly::Term> out(f.terms().begin(), f.terms().end());
  for (auto& t : out) t.first.even = Monomial{};
  return SuperPoly::from_terms(forms, std::move(out));
}

/// Pullback along T*[2]E[1] -> E[1]: the form table embedded into the split space.
inline SuperPoly from_form_table(const SuperPoly& f, const SymplecticSpace2& s) {
  if (f.table()->odd_count() != s.rank() || f.table()->even_count() != 0 || f.table()->chart() != s.chart())
    throw MathError("form does not live on E");
  std::vector<SuperPoly::Term> out(f.terms().begin(), f.terms().end());
  return SuperPoly::from_terms(s.table(), std::move(out));
}

/// Multivectors in xi1..xin embedded into the split space.
inline SuperPoly from_multivector_table(const SuperPoly& v, const SymplecticSpace2& s) {
  if (v.table()->odd_count() != s.rank() || v.table()->even_count() != 0 || v.table()->chart() != s.chart())
    throw MathError("multivector does not live on E");
  std::vector<SuperPoly::Term> out(v.terms().begin(), v.terms().end());
  for (auto& t : out) t.first.odd <<= s.rank();
  return SuperPoly::from_terms(s.table(), std::move(out));
}

/// Inverse of from_multivector_table; rejects y and p.
inline SuperPoly to_multivector_table(const SuperPoly& f, const SymplecticSpace2& s, const TablePtr& multivectors) {
  std::vector<SuperPoly::Term> out(f.terms().begin(), f.terms().end());
  for (auto& t : out) {
    if ((t.first.odd & s.y_mask()) || !t.first.even.is_one()) throw MathError("function depends on y or p");
    t.first.odd >>= s.rank();
  }
  return SuperPoly::from_terms(multivectors, std::move(out));
}

struct Projection {
  SuperVectorField field;  // on {x; y1..yn}
  bool homological = false;
};

/// d_E: the components {H, x^a} and {H, y^i} restricted to (x, y).
inline Projection project_to_E(const Hamiltonian& H) {
  if (!is_projectable(H)) throw MathError("Hamiltonian is not projectable");
  const SymplecticSpace2& s = H.space();
  const SkewAlgebroid shape(s.chart(), s.rank());
  const TablePtr& forms = shape.form_table();
  std::vector<SuperPoly> base, odd;
  for (int a = 0; a < s.base_dim(); ++a) base.push_back(to_form_table(poisson_bracket(H.value(), s.x(a), s), s, forms));
  for (int i = 0; i < s.rank(); ++i) odd.push_back(to_form_table(poisson_bracket(H.value(), s.y(i), s), s, forms));
  Projection out{SuperVectorField(forms, 1, std::move(base), std::move(odd), {}), false};
  out.homological = hamiltonian_square(H).is_zero();
  return out;
}

/// The algebroid (c, rho) read from the projected field.
inline SkewAlgebroid projected_algebroid(const Hamiltonian& H) { return algebroid_from_field(project_to_E(H).field); }

/// phi_hat = sum_{i<j<k} f_ijk y^i y^j y^k.
inline SuperPoly yyy_term(const SymplecticSpace2& s, int i, int j, int k, const ScalarField& f) {
  return f * (s.y(i) * s.y(j) * s.y(k));
}

}  // namespace modcls
