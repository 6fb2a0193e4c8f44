#pragma once

// Skew algebroids over a single chart: structure functions c_ij^k, anchor
// rho_i^a, the de Rham field on forms (polynomials in y^i), Cartan calculus on
// forms and sections, and base-preserving morphisms.
//
// Frame index i is 0-based in the API; generator names are 1-based (y1, xi1).
// Forms live on the table {x; y1..yn}, multivectors on {x; xi1..xin} with the
// fixed correspondence e_i <-> xi_i.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modcls/error.hpp"
#include "modcls/linalg.hpp"
#include "modcls/scalar.hpp"
#include "modcls/superalg.hpp"

namespace modcls {

inline std::string form_generator_name(int i) { return "y" + std::to_string(i + 1); }
inline std::string multivector_generator_name(int i) { return "xi" + std::to_string(i + 1); }
inline std::string momentum_name(int a) { return "p" + std::to_string(a + 1); }

/// A section sum_i f_i e_i, given by its frame coefficients.
using Section = std::vector<ScalarField>;

/// Outcome of a structural check; on failure `where` names the offending
/// component or generator and `witness` is the nonzero residual.
struct Verdict {
  bool ok = true;
  std::string where;
  SuperPoly witness;

  explicit operator bool() const { return ok; }
};

class SkewAlgebroid {
 public:
  SkewAlgebroid(BaseChart chart, int rank)
      : chart_(std::move(chart)),
        rank_(rank),
        c_(static_cast<std::size_t>(rank * rank * rank)),
        rho_(static_cast<std::size_t>(rank * chart_.dim())) {
    if (rank < 0) throw InputError("negative algebroid rank");
    std::vector<GeneratorSpec> ys, xis;
    for (int i = 0; i < rank; ++i) {
      ys.push_back({form_generator_name(i), {0, 1}});
      xis.push_back({multivector_generator_name(i), {1, 0}});
    }
    forms_ = make_table(chart_, std::move(ys));
    multivectors_ = make_table(chart_, std::move(xis));
  }

  const BaseChart& chart() const { return chart_; }
  int rank() const { return rank_; }
  int base_dim() const { return chart_.dim(); }

  /// Table {x; y1..yn} of E-forms.
  const TablePtr& form_table() const { return forms_; }
  /// Table {x; xi1..xin} of E-multivectors.
  const TablePtr& multivector_table() const { return multivectors_; }

  const ScalarField& c(int i, int j, int k) const { return c_[index(i, j, k)]; }
  const ScalarField& rho(int i, int a) const {
    check_frame(i);
    if (a < 0 || a >= base_dim()) throw InputError("anchor coordinate index out of range");
    return rho_[static_cast<std::size_t>(i * base_dim() + a)];
  }

  /// Sets c_ij^k and, by antisymmetry, c_ji^k = -value.
  void set_structure(int i, int j, int k, const ScalarField& value) {
    if (i == j) {
      if (!value.is_zero()) throw InputError("c_ii^k must vanish");
      return;
    }
    c_[index(i, j, k)] = value;
    c_[index(j, i, k)] = -value;
  }

  void set_anchor(int i, int a, const ScalarField& value) {
    rho(i, a);
    rho_[static_cast<std::size_t>(i * base_dim() + a)] = value;
  }

  /// Frame bracket [e_i, e_j] = sum_k c_ij^k e_k.
  Section frame_bracket(int i, int j) const {
    Section s(static_cast<std::size_t>(rank_));
    for (int k = 0; k < rank_; ++k) s[static_cast<std::size_t>(k)] = c(i, j, k);
    return s;
  }

  SuperPoly y(int i) const { return SuperPoly::odd_generator(forms_, i); }
  SuperPoly xi(int i) const { return SuperPoly::odd_generator(multivectors_, i); }

  friend bool operator==(const SkewAlgebroid& a, const SkewAlgebroid& b) {
    return a.chart_ == b.chart_ && a.rank_ == b.rank_ && a.c_ == b.c_ && a.rho_ == b.rho_;
  }

 private:
  void check_frame(int i) const {
    if (i < 0 || i >= rank_) throw InputError("frame index out of range");
  }
  std::size_t index(int i, int j, int k) const {
    check_frame(i);
    check_frame(j);
    check_frame(k);
    return static_cast<std::size_t>((i * rank_ + j) * rank_ + k);
  }

  BaseChart chart_;
  int rank_;
  std::vector<ScalarField> c_;
  std::vector<ScalarField> rho_;
  TablePtr forms_;
  TablePtr multivectors_;
};

// ---------------------------------------------------------------------------
// de Rham field
// ---------------------------------------------------------------------------

/// d = 1/2 c_ij^k y^j y^i d/dy^k + rho_i^b y^i d/dx^b.
inline SuperVectorField de_rham_field(const SkewAlgebroid& A) {
  const TablePtr& t = A.form_table();
  const int n = A.rank(), m = A.base_dim();
  std::vector<SuperPoly> base, odd, even;
  for (int b = 0; b < m; ++b) {
    std::vector<SuperPoly::Term> terms;
    for (int i = 0; i < n; ++i) terms.push_back({SuperMonomial{1u << i, {}}, A.rho(i, b)});
    base.push_back(SuperPoly::from_terms(t, std::move(terms)));
  }
  for (int k = 0; k < n; ++k) {
    // 1/2 sum_{i,j} c_ij^k y^j y^i = -sum_{i<j} c_ij^k y^i y^j
    std::vector<SuperPoly::Term> terms;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) terms.push_back({SuperMonomial{(1u << i) | (1u << j), {}}, -A.c(i, j, k)});
    odd.push_back(SuperPoly::from_terms(t, std::move(terms)));
  }
  return SuperVectorField(t, 1, std::move(base), std::move(odd), std::move(even));
}

inline SuperPoly differential(const SkewAlgebroid& A, const SuperPoly& form) {
  require_same_table(A.form_table(), form.table());
  return apply_field(de_rham_field(A), form);
}

/// Reads (c, rho) back from a degree-1 odd field on {x; y1..yn}; throws if the
/// field is not of algebroid type.
inline SkewAlgebroid algebroid_from_field(const SuperVectorField& d) {
  const GeneratorTable& t = *d.table();
  if (t.even_count() != 0) throw MathError("field does not live on a form table");
  const int n = t.odd_count(), m = t.base_dim();
  SkewAlgebroid A(t.chart(), n);
  if (!same_table(A.form_table(), d.table())) throw MathError("field generators are not y1..yn");
  for (int b = 0; b < m; ++b) {
    for (const auto& [mono, coeff] : d.base(b).terms()) {
      if (mono.odd_degree() != 1) throw MathError("anchor component is not linear in y");
      A.set_anchor(std::countr_zero(mono.odd), b, coeff);
    }
  }
  for (int k = 0; k < n; ++k) {
    for (const auto& [mono, coeff] : d.odd(k).terms()) {
      if (mono.odd_degree() != 2) throw MathError("structure component is not quadratic in y");
      const int i = std::countr_zero(mono.odd);
      const int j = std::countr_zero(mono.odd & (mono.odd - 1));
      A.set_structure(i, j, k, -coeff);
    }
  }
  return A;
}

/// Jacobi test: [d, d] = 0. The certificate is the first nonzero component of [d, d].
inline Verdict is_lie(const SkewAlgebroid& A) {
  const SuperVectorField d = de_rham_field(A);
  const SuperVectorField dd = commutator(d, d);
  const GeneratorTable& t = *dd.table();
  for (int b = 0; b < t.base_dim(); ++b)
    if (!dd.base(b).is_zero()) return {false, "d/d" + t.chart().name(b), dd.base(b)};
  for (int k = 0; k < t.odd_count(); ++k)
    if (!dd.odd(k).is_zero()) return {false, "d/d" + t.odd(k).name, dd.odd(k)};
  return {true, {}, SuperPoly(A.form_table())};
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

inline void check_section(const SkewAlgebroid& A, const Section& X) {
  if (static_cast<int>(X.size()) != A.rank()) throw MathError("section has the wrong number of components");
}

inline Section frame_section(const SkewAlgebroid& A, int i) {
  Section s(static_cast<std::size_t>(A.rank()));
  s.at(static_cast<std::size_t>(i)) = ScalarField(1);
  return s;
}

/// rho(X)(f).
inline ScalarField anchor_apply(const SkewAlgebroid& A, const Section& X, const ScalarField& f) {
  check_section(A, X);
  ScalarField out;
  for (int a = 0; a < A.base_dim(); ++a) {
    ScalarField va;
    for (int i = 0; i < A.rank(); ++i) va += X[static_cast<std::size_t>(i)] * A.rho(i, a);
    if (!va.is_zero()) out += va * f.partial(a);
  }
  return out;
}

/// [X, Y] from bilinearity, antisymmetry and the anchored Leibniz rule.
inline Section bracket_sections(const SkewAlgebroid& A, const Section& X, const Section& Y) {
  check_section(A, X);
  check_section(A, Y);
  const int n = A.rank();
  Section out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const ScalarField& xi = X[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const ScalarField& yj = Y[static_cast<std::size_t>(j)];
      if (!xi.is_zero() && !yj.is_zero()) {
        const ScalarField f = xi * yj;
        for (int k = 0; k < n; ++k)
          if (!A.c(i, j, k).is_zero()) out[static_cast<std::size_t>(k)] += f * A.c(i, j, k);
      }
    }
  }
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += anchor_apply(A, X, Y[static_cast<std::size_t>(j)]);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] -= anchor_apply(A, Y, X[static_cast<std::size_t>(i)]);
  return out;
}

/// Section X = sum f_i e_i as the multivector sum f_i xi_i.
inline SuperPoly section_to_multivector(const SkewAlgebroid& A, const Section& X) {
  check_section(A, X);
  SuperPoly out(A.multivector_table());
  for (int i = 0; i < A.rank(); ++i) out += X[static_cast<std::size_t>(i)] * A.xi(i);
  return out;
}

inline Section multivector_to_section(const SkewAlgebroid& A, const SuperPoly& v) {
  require_same_table(A.multivector_table(), v.table());
  Section s(static_cast<std::size_t>(A.rank()));
  for (const auto& [m, c] : v.terms()) {
    if (m.odd_degree() != 1) throw MathError("multivector is not of degree 1");
    s[static_cast<std::size_t>(std::countr_zero(m.odd))] = c;
  }
  return s;
}

/// Covector sum a_i y^i as a degree-1 form, and back.
inline SuperPoly covector_to_form(const SkewAlgebroid& A, const Section& a) {
  check_section(A, a);
  SuperPoly out(A.form_table());
  for (int i = 0; i < A.rank(); ++i) out += a[static_cast<std::size_t>(i)] * A.y(i);
  return out;
}

inline Section form_to_covector(const SkewAlgebroid& A, const SuperPoly& form) {
  require_same_table(A.form_table(), form.table());
  Section s(static_cast<std::size_t>(A.rank()));
  for (const auto& [m, c] : form.terms()) {
    if (m.odd_degree() != 1) throw MathError("form is not of degree 1");
    s[static_cast<std::size_t>(std::countr_zero(m.odd))] = c;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Cartan calculus on forms
// ---------------------------------------------------------------------------

/// i_X = sum_i X_i d/dy^i (left derivatives); omega(X, Y) = i_Y i_X omega.
inline SuperPoly interior_product(const SkewAlgebroid& A, const Section& X, const SuperPoly& form) {
  check_section(A, X);
  require_same_table(A.form_table(), form.table());
  SuperPoly out(A.form_table());
  for (int i = 0; i < A.rank(); ++i)
    if (!X[static_cast<std::size_t>(i)].is_zero()) out += X[static_cast<std::size_t>(i)] * left_partial_odd(form, i);
  return out;
}

/// L_X = i_X d + d i_X.
inline SuperPoly lie_derivative_form(const SkewAlgebroid& A, const Section& X, const SuperPoly& form) {
  return interior_product(A, X, differential(A, form)) + differential(A, interior_product(A, X, form));
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// Base-preserving bundle map Phi(e_i^src) = sum_j phi[i][j] e_j^dst.
class AlgebroidMorphism {
 public:
  AlgebroidMorphism(std::shared_ptr<const SkewAlgebroid> source, std::shared_ptr<const SkewAlgebroid> target,
                    Matrix<ScalarField> matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (source_->chart() != target_->chart()) throw InputError("morphism between algebroids over different charts");
    if (static_cast<int>(matrix_.size()) != source_->rank()) throw InputError("morphism matrix has the wrong row count");
    for (const auto& row : matrix_)
      if (static_cast<int>(row.size()) != target_->rank()) throw InputError("morphism matrix has the wrong column count");
  }

  AlgebroidMorphism(const SkewAlgebroid& source, const SkewAlgebroid& target, Matrix<ScalarField> matrix)
      : AlgebroidMorphism(std::make_shared<const SkewAlgebroid>(source), std::make_shared<const SkewAlgebroid>(target),
                          std::move(matrix)) {}

  static AlgebroidMorphism identity(const SkewAlgebroid& A) {
    return AlgebroidMorphism(A, A, identity_matrix<ScalarField>(static_cast<std::size_t>(A.rank())));
  }

  const SkewAlgebroid& source() const { return *source_; }
  const SkewAlgebroid& target() const { return *target_; }
  const Matrix<ScalarField>& matrix() const { return matrix_; }
  const ScalarField& entry(int i, int j) const {
    return matrix_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
  }

 private:
  std::shared_ptr<const SkewAlgebroid> source_;
  std::shared_ptr<const SkewAlgebroid> target_;
  Matrix<ScalarField> matrix_;
};

/// Phi^*: y_dst^j -> sum_i phi_i^j y_src^i, extended as an algebra morphism.
inline SuperPoly pullback(const AlgebroidMorphism& phi, const SuperPoly& form) {
  const SkewAlgebroid& src = phi.source();
  const SkewAlgebroid& dst = phi.target();
  require_same_table(dst.form_table(), form.table());
  std::vector<SuperPoly> images;
  for (int j = 0; j < dst.rank(); ++j) {
    SuperPoly img(src.form_table());
    for (int i = 0; i < src.rank(); ++i)
      if (!phi.entry(i, j).is_zero()) img += phi.entry(i, j) * src.y(i);
    images.push_back(std::move(img));
  }
  return substitute(form, src.form_table(), images, {});
}

/// Checks Phi^* d_dst = d_src Phi^* on x^a and on y_dst^j.
inline Verdict is_morphism(const AlgebroidMorphism& phi) {
  const SkewAlgebroid& src = phi.source();
  const SkewAlgebroid& dst = phi.target();
  for (int a = 0; a < src.base_dim(); ++a) {
    SuperPoly xa = SuperPoly::scalar(dst.form_table(), ScalarField::variable(a));
    SuperPoly lhs = pullback(phi, differential(dst, xa));
    SuperPoly rhs = differential(src, pullback(phi, xa));
    if (lhs != rhs) return {false, src.chart().name(a), lhs - rhs};
  }
  for (int j = 0; j < dst.rank(); ++j) {
    SuperPoly lhs = pullback(phi, differential(dst, dst.y(j)));
    SuperPoly rhs = differential(src, pullback(phi, dst.y(j)));
    if (lhs != rhs) return {false, form_generator_name(j), lhs - rhs};
  }
  return {true, {}, SuperPoly(src.form_table())};
}

// ---------------------------------------------------------------------------
// Frame changes
// ---------------------------------------------------------------------------

/// The same algebroid in the frame e'_i = sum_a M[i][a] e_a (M invertible over the function field).
inline SkewAlgebroid change_frame(const SkewAlgebroid& A, const Matrix<ScalarField>& M) {
  const int n = A.rank();
  auto inv = inverse(M);
  if (!inv) throw MathError("frame change matrix is singular");
  std::vector<Section> rows;
  for (int i = 0; i < n; ++i) rows.push_back(M.at(static_cast<std::size_t>(i)));
  SkewAlgebroid B(A.chart(), n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < A.base_dim(); ++a)
      B.set_anchor(i, a, anchor_apply(A, rows[static_cast<std::size_t>(i)], ScalarField::variable(a)));
    for (int j = i + 1; j < n; ++j) {
      const Section br = bracket_sections(A, rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
      // br = sum_a b_a e_a = sum_k c'_k e'_k, so c' = b * M^{-1}.
      for (int k = 0; k < n; ++k) {
        ScalarField ck;
        for (int a = 0; a < n; ++a) ck += br[static_cast<std::size_t>(a)] * (*inv)[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
        B.set_structure(i, j, k, ck);
      }
    }
  }
  return B;
}

}  // namespace modcls
