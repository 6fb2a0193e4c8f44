#include <gtest/gtest.h>

#include "modcls/algebroid.hpp"
#include "support/generators.hpp"

using namespace modcls;
using namespace modcls::test_support;

namespace {

SuperPoly form(const SkewAlgebroid& A, const char* text) { return parse_super(text, A.form_table()); }

Section section(std::initializer_list<ScalarField> v) { return Section(v); }

ScalarField x(int a) { return ScalarField::variable(a); }

}  // namespace

TEST(DeRham, Aff1) {
  SkewAlgebroid A = aff1();
  SuperVectorField d = de_rham_field(A);
  EXPECT_EQ(d.parity(), 1);
  EXPECT_EQ(d.odd(1), form(A, "-y1*y2"));
  EXPECT_TRUE(d.odd(0).is_zero());
  EXPECT_TRUE(d.base(0).is_zero());
}

TEST(DeRham, TangentAndZero) {
  const BaseChart chart = BaseChart::standard(3);
  SkewAlgebroid T = tangent(chart);
  SuperVectorField d = de_rham_field(T);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(d.base(a), T.y(a));
    EXPECT_TRUE(d.odd(a).is_zero());
  }
  EXPECT_TRUE(de_rham_field(SkewAlgebroid(chart, 2)).is_zero());
}

TEST(DeRham, RoundTripThroughField) {
  Gen gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3);
    EXPECT_EQ(algebroid_from_field(de_rham_field(A)), A);
  }
}

TEST(IsLie, Sl2) { EXPECT_TRUE(is_lie(sl2()).ok); }

namespace {

Section jacobiator(const SkewAlgebroid& A) {
  auto br = [&](const Section& a, const Section& b) { return bracket_sections(A, a, b); };
  Section e1 = frame_section(A, 0), e2 = frame_section(A, 1), e3 = frame_section(A, 2);
  Section j1 = br(e1, br(e2, e3)), j2 = br(e2, br(e3, e1)), j3 = br(e3, br(e1, e2));
  for (int k = 0; k < 3; ++k) j1[k] += j2[k] + j3[k];
  return j1;
}

bool is_zero_section(const Section& s) {
  for (const auto& v : s)
    if (!v.is_zero()) return false;
  return true;
}

}  // namespace

TEST(IsLie, SemidirectProductIsLie) {
  // [e1,e2] = e3, [e1,e3] = e2: e1 acts on the abelian span of e2, e3, so Jacobi holds.
  SkewAlgebroid A(BaseChart::standard(1), 3);
  A.set_structure(0, 1, 2, ScalarField(1));
  A.set_structure(0, 2, 1, ScalarField(1));
  EXPECT_TRUE(is_zero_section(jacobiator(A)));
  EXPECT_TRUE(is_lie(A).ok);
}

TEST(IsLie, JacobiFailureCertificate) {
  // [e1,e2] = e3, [e2,e3] = e2, [e1,e3] = e1: Jacobiator 2 e3.
  SkewAlgebroid A(BaseChart::standard(1), 3);
  A.set_structure(0, 1, 2, ScalarField(1));
  A.set_structure(1, 2, 1, ScalarField(1));
  A.set_structure(0, 2, 0, ScalarField(1));
  Section jac = jacobiator(A);
  EXPECT_EQ(jac, (Section{ScalarField(0), ScalarField(0), ScalarField(2)}));
  Verdict v = is_lie(A);
  ASSERT_FALSE(v.ok);
  EXPECT_EQ(*v.witness.homogeneous_degree(), 3);
  EXPECT_EQ(v.where, "d/dy3");
}

TEST(IsLie, RankTwoZeroAnchorAlwaysLie) {
  Gen gen(32);
  for (int trial = 0; trial < 50; ++trial) {
    SkewAlgebroid A(BaseChart::standard(2), 2);
    for (int k = 0; k < 2; ++k) A.set_structure(0, 1, k, gen.scalar(2, 2, true));
    EXPECT_TRUE(is_lie(A).ok);
  }
}

TEST(Sections, BracketExamples) {
  SkewAlgebroid A = sl2();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(bracket_sections(A, frame_section(A, i), frame_section(A, j)), A.frame_bracket(i, j));
  SkewAlgebroid T = tangent(BaseChart::standard(2));
  EXPECT_EQ(bracket_sections(T, frame_section(T, 0), section({0, x(0)})), frame_section(T, 1));
  Gen gen(33);
  for (int trial = 0; trial < 20; ++trial) {
    SkewAlgebroid B = random_skew_algebroid(gen, BaseChart::standard(2), 3);
    Section X = {gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    for (const auto& v : bracket_sections(B, X, X)) EXPECT_TRUE(v.is_zero());
  }
}

TEST(Sections, AnchoredLeibniz) {
  Gen gen(34);
  for (int trial = 0; trial < 30; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3);
    Section X = {gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    Section Y = {gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    ScalarField f = gen.scalar(2);
    Section fY = Y;
    for (auto& v : fY) v = f * v;
    Section lhs = bracket_sections(A, X, fY), base = bracket_sections(A, X, Y);
    const ScalarField rf = anchor_apply(A, X, f);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(lhs[k], rf * Y[k] + f * base[k]);
  }
}

TEST(Cartan, InteriorProduct) {
  SkewAlgebroid A = aff1();
  EXPECT_EQ(interior_product(A, frame_section(A, 0), form(A, "y1*y2")), form(A, "y2"));
  EXPECT_EQ(interior_product(A, frame_section(A, 1), form(A, "y1*y2")), form(A, "-y1"));
  Gen gen(35);
  SkewAlgebroid B(BaseChart::standard(2), 4);
  for (int trial = 0; trial < 20; ++trial) {
    Section X = {gen.scalar(2), gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    SuperPoly w = gen.super_poly(B.form_table(), 4);
    EXPECT_TRUE(interior_product(B, X, interior_product(B, X, w)).is_zero());
  }
}

TEST(Cartan, LieDerivative) {
  SkewAlgebroid T = tangent(BaseChart::standard(2));
  EXPECT_EQ(lie_derivative_form(T, frame_section(T, 0), form(T, "x1*y2")), form(T, "y2"));
  EXPECT_TRUE(lie_derivative_form(T, section({0, 0}), form(T, "x1*y2 + y1")).is_zero());
  Gen gen(36);
  for (int trial = 0; trial < 30; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3);
    Section X = {gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    ScalarField f = gen.scalar(2, 2, true);
    EXPECT_EQ(lie_derivative_form(A, X, SuperPoly::scalar(A.form_table(), f)),
              SuperPoly::scalar(A.form_table(), anchor_apply(A, X, f)));
  }
}

TEST(Cartan, DifferentialOnFormsAgreesWithBracket) {
  // d alpha (X, Y) = rho(X) alpha(Y) - rho(Y) alpha(X) - alpha([X, Y]) with omega(X, Y) = i_Y i_X omega.
  Gen gen(37);
  for (int trial = 0; trial < 30; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3);
    Section alpha = {gen.scalar(2), gen.scalar(2), gen.scalar(2)};
    Section X = {gen.scalar(1), gen.scalar(1), gen.scalar(1)};
    Section Y = {gen.scalar(1), gen.scalar(1), gen.scalar(1)};
    SuperPoly a = covector_to_form(A, alpha);
    auto pair = [&](const Section& s) {
      ScalarField v;
      for (int i = 0; i < 3; ++i) v += alpha[i] * s[i];
      return v;
    };
    SuperPoly lhs = interior_product(A, Y, interior_product(A, X, differential(A, a)));
    ScalarField rhs = anchor_apply(A, X, pair(Y)) - anchor_apply(A, Y, pair(X)) - pair(bracket_sections(A, X, Y));
    EXPECT_EQ(lhs, SuperPoly::scalar(A.form_table(), rhs));
  }
}

TEST(Morphism, PullbackExamples) {
  SkewAlgebroid A = aff1();
  SuperPoly w = form(A, "x1 + x1*y1 + y1*y2");
  EXPECT_EQ(pullback(AlgebroidMorphism::identity(A), w), w);
  Matrix<ScalarField> zero(2, std::vector<ScalarField>(2));
  EXPECT_EQ(pullback(AlgebroidMorphism(A, A, zero), w), form(A, "x1"));
  Gen gen(38);
  SkewAlgebroid src(BaseChart::standard(2), 2), dst(BaseChart::standard(2), 3);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix<ScalarField> M(2, std::vector<ScalarField>(3));
    for (auto& row : M)
      for (auto& v : row) v = gen.scalar(2);
    AlgebroidMorphism phi(src, dst, M);
    SuperPoly a = gen.super_poly(dst.form_table(), 3), b = gen.super_poly(dst.form_table(), 3);
    EXPECT_EQ(pullback(phi, a * b), pullback(phi, a) * pullback(phi, b));
  }
}

TEST(Morphism, Checks) {
  SkewAlgebroid A = aff1();
  EXPECT_TRUE(is_morphism(AlgebroidMorphism::identity(A)).ok);
  EXPECT_TRUE(is_morphism(AlgebroidMorphism::identity(sl2())).ok);
  for (int t : {2, -3, 5}) {
    Matrix<ScalarField> M = {{ScalarField(1), ScalarField(0)}, {ScalarField(0), ScalarField(t)}};
    EXPECT_TRUE(is_morphism(AlgebroidMorphism(A, A, M)).ok);
  }
  SkewAlgebroid T = tangent(BaseChart::standard(2));
  Matrix<ScalarField> zero(2, std::vector<ScalarField>(2));
  Verdict v = is_morphism(AlgebroidMorphism(T, T, zero));
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.where, "x1");
}

TEST(Morphism, FrameChangeIsAnIsomorphism) {
  // Phi(e'_i) = sum_a M[i][a] e_a maps the changed frame algebroid onto the original.
  Gen gen(39);
  const BaseChart chart = BaseChart::standard(3);
  for (int trial = 0; trial < 20; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, chart, 3);
    Matrix<ScalarField> M = unipotent(gen, 3, 3);
    SkewAlgebroid B = change_frame(A, M);
    EXPECT_TRUE(is_morphism(AlgebroidMorphism(B, A, M)).ok);
  }
}

TEST(AlgebroidProperty, DifferentialIsADerivation) {
  Gen gen(40);
  for (int trial = 0; trial < 50; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3, 2, true);
    SuperPoly a = gen.super_poly(A.form_table(), 3, 1, 3, gen.uniform(0, 3));
    SuperPoly b = gen.super_poly(A.form_table(), 3);
    SuperPoly rhs = differential(A, a) * b;
    rhs = (*a.parity()) ? rhs - a * differential(A, b) : rhs + a * differential(A, b);
    EXPECT_EQ(differential(A, a * b), rhs);
  }
}

TEST(AlgebroidProperty, LieAlgebroidsSquareToZero) {
  Gen gen(41);
  for (int trial = 0; trial < 40; ++trial) {
    SkewAlgebroid A = random_lie_algebroid(gen, BaseChart::standard(3));
    ASSERT_TRUE(is_lie(A).ok);
    SuperPoly w = gen.super_poly(A.form_table(), 3, 2);
    EXPECT_TRUE(differential(A, differential(A, w)).is_zero());
  }
}
