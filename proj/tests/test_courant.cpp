#include <gtest/gtest.h>

#include "modcls/courant.hpp"
#include "support/courant_instances.hpp"
#include "support/generators.hpp"

using namespace modcls;
using namespace modcls::test_support;

namespace {

int sign(int a, int b) { return ((a & b) & 1) ? -1 : 1; }

}  // namespace

TEST(Poisson, CanonicalPairs) {
  SpacePtr s = make_split_space(BaseChart::standard(2), 2);
  const SuperPoly one = SuperPoly::scalar(s->table(), ScalarField(1));
  EXPECT_EQ(poisson_bracket(s->x(0), s->p(0), *s), one);
  EXPECT_EQ(poisson_bracket(s->p(0), s->x(0), *s), -one);
  EXPECT_TRUE(poisson_bracket(s->x(0), s->p(1), *s).is_zero());
  EXPECT_EQ(poisson_bracket(s->y(0), s->xi(0), *s), one);
  EXPECT_EQ(poisson_bracket(s->xi(0), s->y(0), *s), one);
  EXPECT_TRUE(poisson_bracket(s->y(0), s->y(1), *s).is_zero());
  EXPECT_TRUE(poisson_bracket(s->y(0), s->xi(1), *s).is_zero());
}

TEST(Poisson, GeneralPairing) {
  Matrix<Rational> g = {{Rational(2), Rational(0)}, {Rational(0), Rational(1)}};
  SymplecticSpace2 s(BaseChart::standard(1), {"z1", "z2"}, g);
  EXPECT_EQ(poisson_bracket(s.zeta(0), s.zeta(0), s), SuperPoly::scalar(s.table(), ScalarField(Rational(1, 2))));
  EXPECT_THROW(SymplecticSpace2(BaseChart::standard(1), {"z1", "z2"}, Matrix<Rational>{{1, 1}, {1, 1}}), InputError);
  EXPECT_THROW(SymplecticSpace2(BaseChart::standard(1), {"z1", "z2"}, Matrix<Rational>{{1, 1}, {0, 1}}), InputError);
}

TEST(PoissonProperty, GradedAntisymmetryAndJacobi) {
  Gen gen(61);
  SpacePtr s = make_split_space(BaseChart::standard(2), 2);
  const TablePtr& t = s->table();
  for (int trial = 0; trial < 40; ++trial) {
    const int pf = gen.uniform(0, 1), pg = gen.uniform(0, 1), pk = gen.uniform(0, 1);
    SuperPoly F = gen.super_poly_of_parity(t, pf, 3), G = gen.super_poly_of_parity(t, pg, 3);
    SuperPoly K = gen.super_poly_of_parity(t, pk, 3);
    EXPECT_EQ(poisson_bracket(F, G, *s), ScalarField(-sign(pf, pg)) * poisson_bracket(G, F, *s));
    EXPECT_EQ(poisson_bracket(F, poisson_bracket(G, K, *s), *s),
              poisson_bracket(poisson_bracket(F, G, *s), K, *s) +
                  ScalarField(sign(pf, pg)) * poisson_bracket(G, poisson_bracket(F, K, *s), *s));
  }
}

TEST(PoissonProperty, LeibnizRule) {
  Gen gen(62);
  SymplecticSpace2 s(BaseChart::standard(2), {"z1", "z2", "z3"},
                     Matrix<Rational>{{1, 0, 1}, {0, 2, 0}, {1, 0, 3}});
  for (int trial = 0; trial < 30; ++trial) {
    const int pf = gen.uniform(0, 1), pg = gen.uniform(0, 1);
    SuperPoly F = gen.super_poly_of_parity(s.table(), pf, 3), G = gen.super_poly_of_parity(s.table(), pg, 3);
    SuperPoly K = gen.super_poly(s.table(), 3);
    EXPECT_EQ(poisson_bracket(F, G * K, s),
              poisson_bracket(F, G, s) * K + ScalarField(sign(pf, pg)) * (G * poisson_bracket(F, K, s)));
  }
}

TEST(Courant, AnchorAndBracketSigns) {
  Gen gen(63);
  for (int trial = 0; trial < 20; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), gen.uniform(1, 3), 2, true);
    SpacePtr s = make_split_space(A.chart(), A.rank());
    Hamiltonian H = algebroid_hamiltonian(A, s);
    for (int i = 0; i < A.rank(); ++i) {
      for (int a = 0; a < A.base_dim(); ++a)
        EXPECT_EQ(anchor_apply(s->xi(i), s->x(a), H), SuperPoly::scalar(s->table(), A.rho(i, a)));
      for (int j = 0; j < A.rank(); ++j) {
        SuperPoly expected(s->table());
        for (int k = 0; k < A.rank(); ++k) expected += A.c(i, j, k) * s->xi(k);
        EXPECT_EQ(derived_bracket(s->xi(i), s->xi(j), H), expected);
      }
    }
  }
}

TEST(Courant, HamiltonianActsAsDifferential) {
  Gen gen(64);
  for (int trial = 0; trial < 20; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3, 1);
    SpacePtr s = make_split_space(A.chart(), A.rank());
    const SuperPoly mu = mu_from_algebroid(A, *s);
    SuperPoly omega = gen.super_poly(A.form_table(), 3);
    EXPECT_EQ(poisson_bracket(mu, from_form_table(omega, *s), *s), from_form_table(differential(A, omega), *s));
  }
}

TEST(Courant, MuRoundTrip) {
  Gen gen(65);
  for (int trial = 0; trial < 30; ++trial) {
    SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(3), gen.uniform(1, 4), 2, true);
    SpacePtr s = make_split_space(A.chart(), A.rank());
    Hamiltonian H = algebroid_hamiltonian(A, s);
    ASSERT_TRUE(is_projectable(H));
    EXPECT_EQ(projected_algebroid(H), A);
    EXPECT_EQ(project_to_E(H).field, de_rham_field(A));
  }
}

TEST(Courant, HomologicalIffLie) {
  Gen gen(66);
  int lie = 0, not_lie = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SkewAlgebroid A = trial % 2 ? random_lie_algebroid(gen, BaseChart::standard(3))
                                : random_skew_algebroid(gen, BaseChart::standard(2), 3, 1);
    SpacePtr s = make_split_space(A.chart(), A.rank());
    const bool homological = hamiltonian_square(algebroid_hamiltonian(A, s)).is_zero();
    EXPECT_EQ(homological, is_lie(A).ok);
    (homological ? lie : not_lie)++;
  }
  EXPECT_GT(lie, 10);
  EXPECT_GT(not_lie, 10);
}

TEST(Courant, TwistedR4) {
  SkewAlgebroid T = tangent(BaseChart::standard(4));
  SpacePtr s = make_split_space(T.chart(), 4);
  const SuperPoly mu = mu_from_algebroid(T, *s);
  // exact twist d(x1 x2 y3 y4) versus x1 y2 y3 y4 with d = y1 y2 y3 y4
  const SuperPoly exact = from_form_table(differential(T, parse_super("x1*x2*y3*y4", T.form_table())), *s);
  EXPECT_TRUE(hamiltonian_square(Hamiltonian(s, mu + exact)).is_zero());
  const SuperPoly open = yyy_term(*s, 1, 2, 3, ScalarField::variable(0));
  const SuperPoly sq = hamiltonian_square(Hamiltonian(s, mu + open));
  EXPECT_EQ(sq, ScalarField(2) * (s->y(0) * s->y(1) * s->y(2) * s->y(3)));
  Projection p = project_to_E(Hamiltonian(s, mu + open));
  EXPECT_FALSE(p.homological);
}

TEST(Courant, BidegreeSplitAndProjectability) {
  SpacePtr s = make_split_space(BaseChart::standard(1), 3);
  SuperPoly mu = s->y(0) * s->y(1) * s->xi(2) + s->y(0) * s->p(0);
  SuperPoly gamma = s->xi(0) * s->xi(1) * s->y(2) + s->xi(0) * s->p(0);
  SuperPoly phi = s->y(0) * s->y(1) * s->y(2);
  SuperPoly psi = s->xi(0) * s->xi(1) * s->xi(2);
  BidegreeParts parts = bidegree_split(Hamiltonian(s, mu + gamma + phi + psi));
  EXPECT_EQ(parts.mu, mu);
  EXPECT_EQ(parts.gamma, gamma);
  EXPECT_EQ(parts.phi, phi);
  EXPECT_EQ(parts.psi, psi);
  EXPECT_TRUE(is_projectable(Hamiltonian(s, mu + phi)));
  EXPECT_FALSE(is_projectable(Hamiltonian(s, mu + s->xi(0) * s->p(0))));
  EXPECT_FALSE(is_projectable(Hamiltonian(s, mu + psi)));
  EXPECT_FALSE(is_projectable(Hamiltonian(s, mu + s->xi(0) * s->xi(1) * s->y(2))));
  EXPECT_THROW(project_to_E(Hamiltonian(s, psi)), MathError);
  EXPECT_THROW(Hamiltonian(s, s->y(0) * s->y(1)), MathError);
}

TEST(CourantProperty, LeibnizInvarianceAndSymmetricPart) {
  Gen gen(67);
  for (int trial = 0; trial < 25; ++trial) {
    Hamiltonian H = random_homological(gen, BaseChart::standard(2));
    ASSERT_TRUE(hamiltonian_square(H).is_zero());
    const SymplecticSpace2& s = H.space();
    const TablePtr& t = s.table();
    SuperPoly X = degree_one(gen, t), Y = degree_one(gen, t), Z = degree_one(gen, t);
    auto br = [&](const SuperPoly& a, const SuperPoly& b) { return derived_bracket(a, b, H); };
    auto pair = [&](const SuperPoly& a, const SuperPoly& b) { return poisson_bracket(a, b, s); };
    EXPECT_EQ(br(X, br(Y, Z)), br(br(X, Y), Z) + br(Y, br(X, Z)));
    EXPECT_EQ(anchor_apply(X, pair(Y, Z), H), pair(br(X, Y), Z) + pair(Y, br(X, Z)));
    EXPECT_EQ(br(X, Y) + br(Y, X), poisson_bracket(H.value(), pair(X, Y), s));
    const SuperPoly f = SuperPoly::scalar(t, gen.scalar(2, 2));
    EXPECT_EQ(br(X, f * Y), f * br(X, Y) + anchor_apply(X, f, H) * Y);
    // anchor is a bracket homomorphism on functions
    const SuperPoly g = SuperPoly::scalar(t, gen.scalar(2, 2));
    EXPECT_EQ(anchor_apply(br(X, Y), g, H),
              anchor_apply(X, anchor_apply(Y, g, H), H) - anchor_apply(Y, anchor_apply(X, g, H), H));
  }
}

TEST(CourantProperty, QuadraticLieAlgebra) {
  // so(3) with the identity pairing: H = -z1 z2 z3 is homological with [z1, z2] = z3.
  SpacePtr s = std::make_shared<const SymplecticSpace2>(
      BaseChart::standard(1), std::vector<std::string>{"z1", "z2", "z3"},
      Matrix<Rational>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  Hamiltonian H(s, -(s->zeta(0) * s->zeta(1) * s->zeta(2)));
  EXPECT_TRUE(hamiltonian_square(H).is_zero());
  EXPECT_EQ(derived_bracket(s->zeta(0), s->zeta(1), H), s->zeta(2));
  EXPECT_EQ(derived_bracket(s->zeta(1), s->zeta(0), H), -s->zeta(2));
  EXPECT_THROW(bidegree_split(H), MathError);
}

TEST(Courant, CovectorsHaveZeroAnchor) {
  Gen gen(68);
  SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 2, 2);
  SpacePtr s = make_split_space(A.chart(), 2);
  Hamiltonian H = algebroid_hamiltonian(A, s);
  const SuperPoly f = SuperPoly::scalar(s->table(), gen.scalar(2, 2));
  EXPECT_TRUE(anchor_apply(s->y(0), f, H).is_zero());
  EXPECT_TRUE(anchor_apply(s->xi(0), SuperPoly::scalar(s->table(), ScalarField(5)), H).is_zero());
}

TEST(Courant, ClassicalDorfmanOracle) {
  // [X + a, Y + b] = [X, Y] + L_X b - i_Y d a on TM + T*M.
  Gen gen(69);
  SkewAlgebroid T = tangent(BaseChart::standard(3));
  SpacePtr s = make_split_space(T.chart(), 3);
  Hamiltonian H = algebroid_hamiltonian(T, s);
  auto as_vector = [&](const Section& X) {
    SuperPoly out(s->table());
    for (int i = 0; i < 3; ++i) out += X[static_cast<std::size_t>(i)] * s->xi(i);
    return out;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Section X(3), Y(3);
    for (auto& v : X) v = gen.scalar(3, 2);
    for (auto& v : Y) v = gen.scalar(3, 2);
    SuperPoly a = gen.super_poly(T.form_table(), 1, 2, 3, 1), b = gen.super_poly(T.form_table(), 1, 2, 3, 1);
    const SuperPoly lhs = derived_bracket(as_vector(X) + from_form_table(a, *s), as_vector(Y) + from_form_table(b, *s), H);
    const SuperPoly oracle = as_vector(bracket_sections(T, X, Y)) +
                             from_form_table(lie_derivative_form(T, X, b) - interior_product(T, Y, differential(T, a)), *s);
    EXPECT_EQ(lhs, oracle);
  }
}

TEST(CourantProperty, ProjectionRelatedness) {
  Gen gen(70);
  for (int trial = 0; trial < 25; ++trial) {
    Hamiltonian H = random_homological(gen, BaseChart::standard(2));
    const SymplecticSpace2& s = H.space();
    const Projection proj = project_to_E(H);
    ASSERT_TRUE(proj.homological);
    EXPECT_TRUE(commutator(proj.field, proj.field).is_zero());
    SuperPoly F = gen.super_poly(proj.field.table(), 3);
    EXPECT_EQ(poisson_bracket(H.value(), from_form_table(F, s), s), from_form_table(apply_field(proj.field, F), s));
  }
}
