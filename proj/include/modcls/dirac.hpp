#pragma once

// Dirac structures in split projectable Courant algebroids H = mu + phi:
// bivectors and their graphs, the exp(X_P) gauge transform, the
// quasi-Poisson condition, the twisted algebroid on E*, algebroids induced on
// Dirac frames, and relative modular classes.
//
// A bivector is P = sum_{i<j} P^{ij} xi_i xi_j and P#(alpha)^j = alpha_i P^{ij}.
// The yyy part phi_hat of H is paired with the section 2 phi_hat of Lambda^3 E*,
// so that the gauge identity reads
//   1/2{P,{P,mu}} + 1/6{P,{P,{P,phi_hat}}} = -1/2([[P,P]] + (Lambda^3 P#)(2 phi_hat)),
// where (Lambda^3 P#) substitutes y^i -> P^{ij} xi_j.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modcls/algebroid.hpp"
#include "modcls/courant.hpp"
#include "modcls/error.hpp"
#include "modcls/linalg.hpp"
#include "modcls/modular.hpp"
#include "modcls/schouten.hpp"
#include "modcls/superalg.hpp"

namespace modcls {

class Bivector {
 public:
  Bivector(SpacePtr space, Matrix<ScalarField> P) : space_(std::move(space)), P_(std::move(P)) {
    const std::size_t n = static_cast<std::size_t>(space_->rank());
    if (P_.size() != n) throw MathError("bivector matrix has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      if (P_[i].size() != n) throw MathError("bivector matrix is not square");
      for (std::size_t j = 0; j < n; ++j)
        if (P_[i][j] != -P_[j][i]) throw MathError("bivector matrix is not antisymmetric");
    }
  }

  /// Zero bivector on the space.
  explicit Bivector(SpacePtr space)
      : Bivector(space, Matrix<ScalarField>(static_cast<std::size_t>(space->rank()),
                                            std::vector<ScalarField>(static_cast<std::size_t>(space->rank())))) {}

  const SymplecticSpace2& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int rank() const { return space_->rank(); }
  const Matrix<ScalarField>& matrix() const { return P_; }
  const ScalarField& operator()(int i, int j) const {
    return P_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
  }

  Bivector operator-() const {
    Matrix<ScalarField> m = P_;
    for (auto& row : m)
      for (auto& v : row) v = -v;
    return Bivector(space_, std::move(m));
  }

  /// sum_{i<j} P^{ij} xi_i xi_j on the split space.
  SuperPoly value() const {
    SuperPoly out(space_->table());
    for (int i = 0; i < rank(); ++i)
      for (int j = i + 1; j < rank(); ++j)
        if (!(*this)(i, j).is_zero()) out += (*this)(i, j) * (space_->xi(i) * space_->xi(j));
    return out;
  }

  SuperPoly as_multivector(const SkewAlgebroid& A) const {
    return to_multivector_table(value(), *space_, A.multivector_table());
  }

  Section sharp(const Section& alpha) const {
    if (alpha.size() != P_.size()) throw MathError("covector has the wrong length");
    Section out(P_.size());
    for (std::size_t i = 0; i < P_.size(); ++i)
      for (std::size_t j = 0; j < P_.size(); ++j)
        if (!alpha[i].is_zero() && !P_[i][j].is_zero()) out[j] += alpha[i] * P_[i][j];
    return out;
  }

  /// (Lambda^k P#): y^i -> P^{ij} xi_j on a function of the split space.
  SuperPoly sharp_substitute(const SuperPoly& f) const {
    const SymplecticSpace2& s = *space_;
    std::vector<SuperPoly> odd, even;
    for (int i = 0; i < rank(); ++i) {
      SuperPoly img(s.table());
      for (int j = 0; j < rank(); ++j)
        if (!(*this)(i, j).is_zero()) img += (*this)(i, j) * s.xi(j);
      odd.push_back(img);
    }
    for (int i = 0; i < rank(); ++i) odd.push_back(s.xi(i));
    for (int a = 0; a < s.base_dim(); ++a) even.push_back(s.p(a));
    return substitute(f, s.table(), odd, even);
  }

 private:
  SpacePtr space_;
  Matrix<ScalarField> P_;
};

// ---------------------------------------------------------------------------
// Dirac frames
// ---------------------------------------------------------------------------

class DiracFrame {
 public:
  DiracFrame(SpacePtr space, std::vector<SuperPoly> sections) : space_(std::move(space)), D_(std::move(sections)) {
    const int n = space_->rank();
    if (static_cast<int>(D_.size()) != n)
      throw MathError("a Dirac frame needs " + std::to_string(n) + " sections, got " + std::to_string(D_.size()));
    for (auto& d : D_) {
      if (d.is_zero()) d = SuperPoly(space_->table());
      require_same_table(space_->table(), d.table());
      for (const auto& [m, c] : d.terms())
        if (m.odd_degree() != 1 || !m.even.is_one()) throw MathError("frame section is not linear in y and xi");
    }
    if (rank(coefficients()) != n) throw MathError("frame sections are dependent");
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        SuperPoly pairing = poisson_bracket(D_[static_cast<std::size_t>(a)], D_[static_cast<std::size_t>(b)], *space_);
        if (!pairing.is_zero())
          throw MathError("frame is not isotropic: {D" + std::to_string(a + 1) + ", D" + std::to_string(b + 1) +
                          "} = " + format(pairing));
      }
  }

  const SymplecticSpace2& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int size() const { return static_cast<int>(D_.size()); }
  const SuperPoly& section(int a) const { return D_.at(static_cast<std::size_t>(a)); }
  const std::vector<SuperPoly>& sections() const { return D_; }

  /// Coefficient of odd generator k (y1..yn, xi1..xin) in D_a.
  ScalarField coefficient(int a, int k) const { return section(a).coefficient(SuperMonomial{1u << k, {}}); }
  /// n x 2n matrix in the column order y1..yn, xi1..xin.
  Matrix<ScalarField> coefficients() const {
    const int n = space_->rank();
    Matrix<ScalarField> out(static_cast<std::size_t>(n), std::vector<ScalarField>(static_cast<std::size_t>(2 * n)));
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < 2 * n; ++k) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = coefficient(a, k);
    return out;
  }
  /// The E-components X_a^i.
  Matrix<ScalarField> projection() const {
    const int n = space_->rank();
    Matrix<ScalarField> out(static_cast<std::size_t>(n), std::vector<ScalarField>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = coefficient(a, n + i);
    return out;
  }

 private:
  SpacePtr space_;
  std::vector<SuperPoly> D_;
};

/// D_a = y^a + sum_j P^{aj} xi_j.
inline DiracFrame graph_frame(const Bivector& P) {
  const SymplecticSpace2& s = P.space();
  std::vector<SuperPoly> D;
  for (int a = 0; a < P.rank(); ++a) {
    SuperPoly d = s.y(a);
    for (int j = 0; j < P.rank(); ++j)
      if (!P(a, j).is_zero()) d += P(a, j) * s.xi(j);
    D.push_back(d);
  }
  return DiracFrame(P.space_ptr(), std::move(D));
}

/// The E-frame (xi_1, ..., xi_n).
inline DiracFrame tangent_frame(const SpacePtr& s) {
  std::vector<SuperPoly> D;
  for (int i = 0; i < s->rank(); ++i) D.push_back(s->xi(i));
  return DiracFrame(s, std::move(D));
}

// ---------------------------------------------------------------------------
// Gauge transform
// ---------------------------------------------------------------------------

namespace detail {

/// Largest count of y and p factors over the terms of f.
inline int y_p_weight(const SuperPoly& f, const SymplecticSpace2& s) {
  int w = 0;
  for (const auto& [m, c] : f.terms())
    w = std::max(w, std::popcount(m.odd & s.y_mask()) + static_cast<int>(m.even.degree()));
  return w;
}

inline std::vector<int> all_momenta(const SymplecticSpace2& s) {
  std::vector<int> out;
  for (int a = 0; a < s.base_dim(); ++a) out.push_back(a);
  return out;
}

}  // namespace detail

/// sum_k (1/k!) {P, ...{P, F}...}; {P, .} lowers the y- plus p-weight, so the series is finite.
inline SuperPoly gauge_transform(const SuperPoly& F, const Bivector& P) {
  const SymplecticSpace2& s = P.space();
  if (F.is_zero()) return SuperPoly(s.table());
  const SuperPoly Pv = P.value();
  const int guard = detail::y_p_weight(F, s) + 1;
  SuperPoly out = F, term = F;
  for (int k = 1;; ++k) {
    term = ScalarField(Rational(1, k)) * poisson_bracket(Pv, term, s);
    if (term.is_zero()) break;
    if (k > guard) throw InternalError("gauge transform series did not terminate");
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-Poisson condition
// ---------------------------------------------------------------------------

struct QuasiPoissonResult {
  bool ok = false;
  SuperPoly obstruction;  // xi-cubic
};

namespace detail {

inline void require_projectable(const Hamiltonian& H) {
  if (!H.space().is_split() || !is_projectable(H)) throw MathError("Hamiltonian is not projectable");
}

inline void require_matching(const Bivector& P, const Hamiltonian& H) {
  if (!(P.space() == H.space())) throw MathError("bivector and Hamiltonian live on different spaces");
}

/// 1/2{P,{P,mu}} + 1/6{P,{P,{P,phi}}}, read as exp(X_P) H restricted to y = p = 0.
inline SuperPoly gauge_obstruction(const Bivector& P, const Hamiltonian& H) {
  const SymplecticSpace2& s = H.space();
  return restrict_to_zero(gauge_transform(H.value(), P), s.y_mask(), all_momenta(s));
}

/// -1/2([[P,P]] + (Lambda^3 P#)(2 phi)).
inline SuperPoly schouten_obstruction(const Bivector& P, const Hamiltonian& H) {
  const SymplecticSpace2& s = H.space();
  const SkewAlgebroid A = projected_algebroid(H);
  const SuperPoly Pm = P.as_multivector(A);
  const SuperPoly PP = from_multivector_table(schouten(A, Pm, Pm), s);
  const SuperPoly wedge = P.sharp_substitute(ScalarField(2) * bidegree_split(H).phi);
  return ScalarField(Rational(-1, 2)) * (PP + wedge);
}

}  // namespace detail

inline QuasiPoissonResult quasi_poisson_check(const Bivector& P, const Hamiltonian& H) {
  detail::require_projectable(H);
  detail::require_matching(P, H);
  SuperPoly gauge = detail::gauge_obstruction(P, H);
  SuperPoly schouten_side = detail::schouten_obstruction(P, H);
  if (gauge != schouten_side)
    throw InternalError("quasi-Poisson paths disagree: " + format(gauge) + " vs " + format(schouten_side));
  return {gauge.is_zero(), std::move(gauge)};
}

/// The yyy part phi_hat with [[P,P]] + (Lambda^3 P#)(2 phi_hat) = 0, solved over the function field.
inline std::optional<SuperPoly> solve_quasi_poisson_phi(const Bivector& P, const SkewAlgebroid& A) {
  const SymplecticSpace2& s = P.space();
  const int n = P.rank();
  const SuperPoly Pm = P.as_multivector(A);
  const SuperPoly target = -from_multivector_table(schouten(A, Pm, Pm), s);
  std::vector<SuperPoly> unknowns;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) unknowns.push_back(s.y(i) * s.y(j) * s.y(k));
  std::vector<SuperPoly> images;
  for (const auto& u : unknowns) images.push_back(P.sharp_substitute(ScalarField(2) * u));
  // rows: xi-cubic monomials
  std::vector<SuperMonomial> monos;
  auto row_of = [&](const SuperMonomial& m) {
    for (std::size_t r = 0; r < monos.size(); ++r)
      if (monos[r] == m) return r;
    monos.push_back(m);
    return monos.size() - 1;
  };
  for (const auto& img : images)
    for (const auto& [m, c] : img.terms()) row_of(m);
  for (const auto& [m, c] : target.terms()) row_of(m);
  Matrix<ScalarField> a(monos.size(), std::vector<ScalarField>(unknowns.size()));
  std::vector<ScalarField> b(monos.size());
  for (std::size_t col = 0; col < images.size(); ++col)
    for (const auto& [m, c] : images[col].terms()) a[row_of(m)][col] = c;
  for (const auto& [m, c] : target.terms()) b[row_of(m)] = c;
  if (monos.empty()) return SuperPoly(s.table());
  auto x = solve(a, b);
  if (!x) return std::nullopt;
  SuperPoly phi(s.table());
  for (std::size_t col = 0; col < unknowns.size(); ++col)
    if (!(*x)[col].is_zero()) phi += (*x)[col] * unknowns[col];
  return phi;
}

// ---------------------------------------------------------------------------
// Twisted algebroid on E*
// ---------------------------------------------------------------------------

inline void require_quasi_poisson(const Bivector& P, const Hamiltonian& H) {
  QuasiPoissonResult q = quasi_poisson_check(P, H);
  if (!q.ok) throw MathError("bivector is not quasi-Poisson: obstruction " + format(q.obstruction));
}

/// mu' = {P, mu} + 1/2{P, {P, phi}}, of monomial types xi xi y and xi p.
inline Hamiltonian twisted_hamiltonian(const Bivector& P, const Hamiltonian& H) {
  require_quasi_poisson(P, H);
  const SymplecticSpace2& s = H.space();
  const BidegreeParts parts = bidegree_split(H);
  const SuperPoly Pv = P.value();
  const SuperPoly mu_prime = poisson_bracket(Pv, parts.mu, s) +
                             ScalarField(Rational(1, 2)) * poisson_bracket(Pv, poisson_bracket(Pv, parts.phi, s), s);
  for (const auto& [m, c] : mu_prime.terms()) {
    const int ny = std::popcount(m.odd & s.y_mask()), nxi = std::popcount(m.odd & s.xi_mask());
    const int np = static_cast<int>(m.even.degree());
    if (!((ny == 1 && nxi == 2 && np == 0) || (ny == 0 && nxi == 1 && np == 1)))
      throw InternalError("twisted Hamiltonian has a term outside xi xi y, xi p");
  }
  return Hamiltonian(H.space_ptr(), mu_prime);
}

/// (E*, [.,.]_{P,phi}) in the frame e^a <-> y^a: brackets and anchors of the y's under mu'.
inline SkewAlgebroid cotangent_algebroid(const Bivector& P, const Hamiltonian& H) {
  const Hamiltonian mu_prime = twisted_hamiltonian(P, H);
  const SymplecticSpace2& s = H.space();
  const int n = s.rank();
  SkewAlgebroid out(s.chart(), n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const SuperPoly br = derived_bracket(s.y(a), s.y(b), mu_prime);
      for (const auto& [m, c] : br.terms())
        if (m.odd_degree() != 1 || (m.odd & s.xi_mask()) || !m.even.is_one())
          throw InternalError("bracket of covectors left E*");
      for (int g = 0; g < n; ++g) out.set_structure(a, b, g, br.coefficient(SuperMonomial{1u << g, {}}));
    }
    for (int c = 0; c < s.base_dim(); ++c) {
      const SuperPoly r = anchor_apply(s.y(a), s.x(c), mu_prime);
      out.set_anchor(a, c, r.scalar_part());
    }
  }
  return out;
}

namespace detail {

inline SuperPoly covector_in_space(const SymplecticSpace2& s, const Section& alpha) {
  SuperPoly out(s.table());
  for (int i = 0; i < s.rank(); ++i)
    if (!alpha[static_cast<std::size_t>(i)].is_zero()) out += alpha[static_cast<std::size_t>(i)] * s.y(i);
  return out;
}

inline Section covector_of(const SymplecticSpace2& s, const SuperPoly& f) {
  Section out(static_cast<std::size_t>(s.rank()));
  for (const auto& [m, c] : f.terms()) {
    if (m.odd_degree() != 1 || (m.odd & s.xi_mask()) || !m.even.is_one())
      throw InternalError("expected a section of E*");
    out[static_cast<std::size_t>(std::countr_zero(m.odd))] = c;
  }
  return out;
}

/// L_{P#a} b - L_{P#b} a - d(P(a, b)) - phi_hat(P#a, P#b, .) on (E, mu).
inline Section twisted_bracket_cartan(const Bivector& P, const Hamiltonian& H, const Section& alpha,
                                      const Section& beta) {
  const SymplecticSpace2& s = H.space();
  const SkewAlgebroid A = projected_algebroid(H);
  const SuperPoly a = covector_to_form(A, alpha), b = covector_to_form(A, beta);
  const Section u = P.sharp(alpha), v = P.sharp(beta);
  ScalarField pab;
  for (int j = 0; j < P.rank(); ++j) pab += u[static_cast<std::size_t>(j)] * beta[static_cast<std::size_t>(j)];
  const SuperPoly phi = to_form_table(bidegree_split(H).phi, s, A.form_table());
  const SuperPoly out = lie_derivative_form(A, u, b) - lie_derivative_form(A, v, a) -
                        differential(A, SuperPoly::scalar(A.form_table(), pab)) -
                        interior_product(A, v, interior_product(A, u, phi));
  return form_to_covector(A, out);
}

inline Section twisted_bracket_derived(const Bivector& P, const Hamiltonian& H, const Section& alpha,
                                       const Section& beta) {
  const SymplecticSpace2& s = H.space();
  const Hamiltonian mu_prime = twisted_hamiltonian(P, H);
  return covector_of(s, derived_bracket(covector_in_space(s, alpha), covector_in_space(s, beta), mu_prime));
}

}  // namespace detail

/// [alpha, beta]_{P,phi}: the Cartan-calculus formula, asserted equal to the derived bracket under mu'.
inline Section twisted_bracket(const Bivector& P, const Hamiltonian& H, const Section& alpha, const Section& beta) {
  detail::require_projectable(H);
  detail::require_matching(P, H);
  if (static_cast<int>(alpha.size()) != P.rank() || static_cast<int>(beta.size()) != P.rank())
    throw MathError("covector has the wrong length");
  Section cartan = detail::twisted_bracket_cartan(P, H, alpha, beta);
  Section derived = detail::twisted_bracket_derived(P, H, alpha, beta);
  if (cartan != derived) throw InternalError("twisted bracket paths disagree");
  return derived;
}

// ---------------------------------------------------------------------------
// Induced algebroids and relative modular classes
// ---------------------------------------------------------------------------

struct InducedAlgebroid {
  std::optional<SkewAlgebroid> algebroid;  // set when the frame is closed
  ScalarField minor;  // frame minor used to solve for coordinates; results hold where it is nonzero
  // closure failure certificate
  int alpha = -1, beta = -1;
  SuperPoly bracket;
  SuperPoly residual;

  bool closed() const { return algebroid.has_value(); }
};

/// [D_a, D_b]_H = C_ab^g D_g and rho(D_a) = {{D_a, H}, x}.
inline InducedAlgebroid induced_algebroid(const DiracFrame& D, const Hamiltonian& H) {
  if (!(D.space() == H.space())) throw MathError("frame and Hamiltonian live on different spaces");
  const SymplecticSpace2& s = H.space();
  const int n = D.size();
  const Matrix<ScalarField> C = D.coefficients();
  const Echelon<ScalarField> e = row_reduce(C);
  Matrix<ScalarField> M(static_cast<std::size_t>(n), std::vector<ScalarField>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      M[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] =
          C[static_cast<std::size_t>(a)][static_cast<std::size_t>(e.pivot_columns[static_cast<std::size_t>(k)])];
  const auto Minv = inverse(M);
  if (!Minv) throw InternalError("frame minor is singular");

  InducedAlgebroid out;
  out.minor = determinant(M);
  SkewAlgebroid A(s.chart(), n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const SuperPoly br = derived_bracket(D.section(a), D.section(b), H);
      std::vector<ScalarField> coeff(static_cast<std::size_t>(n));
      for (int g = 0; g < n; ++g)
        for (int k = 0; k < n; ++k) {
          const ScalarField bk =
              br.coefficient(SuperMonomial{1u << e.pivot_columns[static_cast<std::size_t>(k)], {}});
          if (!bk.is_zero())
            coeff[static_cast<std::size_t>(g)] +=
                bk * (*Minv)[static_cast<std::size_t>(k)][static_cast<std::size_t>(g)];
        }
      SuperPoly residual = br;
      for (int g = 0; g < n; ++g)
        if (!coeff[static_cast<std::size_t>(g)].is_zero()) residual -= coeff[static_cast<std::size_t>(g)] * D.section(g);
      if (!residual.is_zero()) {
        out.alpha = a;
        out.beta = b;
        out.bracket = br;
        out.residual = residual;
        return out;
      }
      for (int g = 0; g < n; ++g) A.set_structure(a, b, g, coeff[static_cast<std::size_t>(g)]);
    }
    for (int c = 0; c < s.base_dim(); ++c) A.set_anchor(a, c, anchor_apply(D.section(a), s.x(c), H).scalar_part());
  }
  out.algebroid = std::move(A);
  return out;
}

struct RelativeModularClass {
  Cocycle1 cls;
  ScalarField minor;
};

/// Mod(pi) = mod(D) - pi^* mod(E) for the projection pi: D_a -> X_a.
inline RelativeModularClass relative_modular_class(const DiracFrame& D, const Hamiltonian& H) {
  detail::require_projectable(H);
  InducedAlgebroid induced = induced_algebroid(D, H);
  if (!induced.closed())
    throw MathError("frame is not closed under the bracket: [D" + std::to_string(induced.alpha + 1) + ", D" +
                    std::to_string(induced.beta + 1) + "] has residual " + format(induced.residual));
  const SkewAlgebroid E = projected_algebroid(H);
  AlgebroidMorphism pi(*induced.algebroid, E, D.projection());
  Verdict v = is_morphism(pi);
  if (!v) throw InternalError("projection of the Dirac frame is not a morphism at " + v.where);
  return {modular_class_of_morphism(pi), induced.minor};
}

/// mod(E*_{P,phi}) + P#(mod E), with P# acting by y^i -> P^{ij} y^j on the E* side.
inline Cocycle1 graph_modular_formula(const Bivector& P, const Hamiltonian& H) {
  const SkewAlgebroid Estar = cotangent_algebroid(P, H);
  const SkewAlgebroid E = projected_algebroid(H);
  const Cocycle1 modE = modular_cocycle(E);
  SuperPoly out = modular_cocycle(Estar).rep();
  for (int i = 0; i < P.rank(); ++i)
    for (int j = 0; j < P.rank(); ++j)
      if (!P(i, j).is_zero() && !modE.coefficient(i).is_zero()) out += (modE.coefficient(i) * P(i, j)) * Estar.y(j);
  return Cocycle1(Estar, out);
}

/// Relative class of the graph of P, asserted equal to mod(E*) + P#(mod E).
inline Cocycle1 relative_modular_class_of_graph(const Bivector& P, const Hamiltonian& H) {
  const DiracFrame D = graph_frame(P);
  const InducedAlgebroid induced = induced_algebroid(D, H);
  const SkewAlgebroid Estar = cotangent_algebroid(P, H);
  if (!induced.closed() || !(*induced.algebroid == Estar))
    throw InternalError("algebroid induced on the graph differs from the twisted algebroid on E*");
  RelativeModularClass r = relative_modular_class(D, H);
  Cocycle1 formula = graph_modular_formula(P, H);
  if (r.cls.rep() != formula.rep())
    throw InternalError("relative modular class paths disagree: " + format(r.cls.rep()) + " vs " +
                        format(formula.rep()));
  return r.cls;
}

/// P#: (E*, [.,.]_{P,phi}) -> (E, mu) checked with is_morphism.
inline Verdict verify_morphism_cor53(const Bivector& P, const Hamiltonian& H) {
  const SkewAlgebroid Estar = cotangent_algebroid(P, H);
  const SkewAlgebroid E = projected_algebroid(H);
  return is_morphism(AlgebroidMorphism(Estar, E, P.matrix()));
}

}  // namespace modcls
