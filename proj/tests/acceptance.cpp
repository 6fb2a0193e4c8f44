// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <sys/wait.h>

#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "modcls/cli.hpp"
#include "modcls/courant.hpp"
#include "modcls/dirac.hpp"
#include "modcls/modular.hpp"
#include "support/courant_instances.hpp"
#include "support/dirac_instances.hpp"
#include "support/generators.hpp"

using namespace modcls;
using namespace modcls::test_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
};

SuperPoly adjoint_trace(const SkewAlgebroid& A) {
  SuperPoly out(A.form_table());
  for (int i = 0; i < A.rank(); ++i) {
    ScalarField tr;
    for (int k = 0; k < A.rank(); ++k) tr += bracket_sections(A, frame_section(A, i), frame_section(A, k))[k];
    out += tr * A.y(i);
  }
  return out;
}

Outcome sign_convention() {
  Outcome o;
  Gen gen(1001);
  for (int trial = 0; trial < 40; ++trial) {
    const SkewAlgebroid A = random_lie_algebroid(gen, BaseChart::standard(2));
    SpacePtr s = make_split_space(A.chart(), A.rank());
    const Hamiltonian H = algebroid_hamiltonian(A, s);
    for (int i = 0; i < A.rank(); ++i) {
      for (int a = 0; a < A.base_dim(); ++a)
        o.require(anchor_apply(s->xi(i), s->x(a), H) == SuperPoly::scalar(s->table(), A.rho(i, a)), "anchor");
      for (int j = 0; j < A.rank(); ++j) {
        SuperPoly expected(s->table());
        for (int k = 0; k < A.rank(); ++k) expected += A.c(i, j, k) * s->xi(k);
        o.require(derived_bracket(s->xi(i), s->xi(j), H) == expected, "bracket");
      }
    }
  }
  o.note = o.pass ? "40 random Lie algebroids" : o.note;
  return o;
}

Outcome three_paths() {
  Outcome o;
  Gen gen(1002);
  for (int trial = 0; trial < 100; ++trial) {
    const SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(3), gen.uniform(1, 4), 2, true);
    const SuperPoly closed = detail::modular_closed_form(A);
    o.require(detail::modular_divergence(A) == closed, "divergence path differs");
    o.require(characteristic_form(A, ScalarField(1)).rep() == closed, "connection path differs");
  }
  if (o.pass) o.note = "100 random skew algebroids";
  return o;
}

Outcome fixed_values() {
  Outcome o;
  o.require(modular_cocycle(tangent(BaseChart::standard(3))).rep().is_zero(), "TM");
  const SkewAlgebroid A = aff1();
  o.require(modular_cocycle(A).rep() == A.y(0), "aff(1)");
  o.require(modular_cocycle(sl2()).rep().is_zero(), "sl2");
  Gen gen(1003);
  int checked = 0;
  while (checked < 25) {
    const SkewAlgebroid L = random_lie_algebra(gen, BaseChart::standard(1));
    if (!is_lie(L)) continue;
    o.require(modular_cocycle(L).rep() == adjoint_trace(L), "adjoint trace");
    ++checked;
  }
  if (o.pass) o.note = "TM = 0, aff(1) = y1, sl2 = 0, 25 adjoint-trace checks";
  return o;
}

Outcome gauge_law() {
  Outcome o;
  Gen gen(1004);
  for (int trial = 0; trial < 50; ++trial) {
    const SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(2), 3, 2, true);
    const ScalarField g = ScalarField(gen.nonzero_polynomial(2, 2));
    const SuperPoly diff = characteristic_form(A, g).rep() - characteristic_form(A, ScalarField(1)).rep();
    o.require(diff == g.inverse() * differential(A, SuperPoly::scalar(A.form_table(), g)), "gauge law");
  }
  if (o.pass) o.note = "50 random gauges";
  return o;
}

Outcome divergence_leibniz() {
  Outcome o;
  Gen gen(1005);
  const TablePtr t = make_table(BaseChart({"x1", "x2"}), {{"y1", {0, 1}}, {"y2", {0, 1}}, {"y3", {0, 1}}},
                                {{"p1", {1, 1}}, {"p2", {1, 1}}});
  for (int trial = 0; trial < 100; ++trial) {
    const SuperVectorField X = gen.vector_field(t, gen.uniform(0, 1));
    const SuperVectorField Y = gen.vector_field(t, gen.uniform(0, 1));
    const SuperPoly a = apply_field(X, divergence(Y)), b = apply_field(Y, divergence(X));
    o.require(divergence(commutator(X, Y)) == ((X.parity() & Y.parity()) ? a + b : a - b), "identity");
  }
  if (o.pass) o.note = "100 random pairs";
  return o;
}

Outcome closedness() {
  Outcome o;
  Gen gen(1006);
  for (int trial = 0; trial < 50; ++trial) {
    const SkewAlgebroid A = random_lie_algebroid(gen, BaseChart::standard(3));
    o.require(is_lie(A).ok, "generator produced a non-Lie algebroid");
    o.require(differential(A, modular_cocycle(A).rep()).is_zero(), "modular cocycle not closed");
  }
  // [e1,e2] = x2 e1, rho(e1) = d/dx2
  SkewAlgebroid B(BaseChart::standard(2), 2);
  B.set_structure(0, 1, 0, ScalarField::variable(1));
  B.set_anchor(0, 1, ScalarField(1));
  o.require(!is_lie(B).ok && !differential(B, modular_cocycle(B).rep()).is_zero(), "counterexample");
  if (o.pass) o.note = "50 Lie algebroids closed; non-Lie counterexample not closed";
  return o;
}

Outcome courant_equivalence() {
  Outcome o;
  Gen gen(1007);
  int lie = 0, other = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const SkewAlgebroid A = trial % 2 ? random_lie_algebroid(gen, BaseChart::standard(3))
                                      : random_skew_algebroid(gen, BaseChart::standard(2), 3, 1);
    SpacePtr s = make_split_space(A.chart(), A.rank());
    const Hamiltonian H = algebroid_hamiltonian(A, s);
    const bool homological = hamiltonian_square(H).is_zero();
    o.require(homological == is_lie(projected_algebroid(H)).ok, "equivalence");
    (homological ? lie : other)++;
  }
  o.require(lie > 0 && other > 0, "both directions exercised");
  const SkewAlgebroid T = tangent(BaseChart::standard(4));
  SpacePtr s = make_split_space(T.chart(), 4);
  const SuperPoly mu = mu_from_algebroid(T, *s);
  const SuperPoly closed = from_form_table(differential(T, parse_super("x1*x2*y3*y4", T.form_table())), *s);
  const SuperPoly open = yyy_term(*s, 1, 2, 3, ScalarField::variable(0));
  o.require(hamiltonian_square(Hamiltonian(s, mu + closed)).is_zero(), "closed twist");
  o.require(!hamiltonian_square(Hamiltonian(s, mu + open)).is_zero(), "non-closed twist");
  if (o.pass)
    o.note = std::to_string(lie) + " homological / " + std::to_string(other) + " not; R^4 closed vs open twist";
  return o;
}

Outcome derived_bracket_identities() {
  Outcome o;
  Gen gen(1008);
  for (int trial = 0; trial < 25; ++trial) {
    const Hamiltonian H = random_homological(gen, BaseChart::standard(2));
    o.require(hamiltonian_square(H).is_zero(), "H not homological");
    const SymplecticSpace2& s = H.space();
    const TablePtr& t = s.table();
    const SuperPoly X = degree_one(gen, t), Y = degree_one(gen, t), Z = degree_one(gen, t);
    auto br = [&](const SuperPoly& a, const SuperPoly& b) { return derived_bracket(a, b, H); };
    auto pair = [&](const SuperPoly& a, const SuperPoly& b) { return poisson_bracket(a, b, s); };
    o.require(br(X, br(Y, Z)) == br(br(X, Y), Z) + br(Y, br(X, Z)), "Loday");
    o.require(anchor_apply(X, pair(Y, Z), H) == pair(br(X, Y), Z) + pair(Y, br(X, Z)), "invariance");
    const SuperPoly f = SuperPoly::scalar(t, gen.scalar(2, 2));
    o.require(br(X, f * Y) == f * br(X, Y) + anchor_apply(X, f, H) * Y, "anchored Leibniz");
  }
  if (o.pass) o.note = "25 random homological Hamiltonians";
  return o;
}

Outcome master_identity() {
  Outcome o;
  Gen gen(1009);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.uniform(2, 4);
    const SkewAlgebroid A = random_skew_algebroid(gen, BaseChart::standard(3), n, 1, trial % 4 == 0);
    SpacePtr s = make_split_space(A.chart(), n);
    const Bivector P(s, random_antisymmetric(gen, n, 3, 2));
    const SuperPoly mu = mu_from_algebroid(A, *s);
    SuperPoly phi(s->table());
    if (n >= 3) phi = from_form_table(gen.super_poly(A.form_table(), 3, 1, 3, 3), *s);
    const Hamiltonian H(s, mu + phi);
    const SuperPoly Pv = P.value();
    auto br = [&](const SuperPoly& f) { return poisson_bracket(Pv, f, *s); };
    const SuperPoly lhs = ScalarField(Rational(1, 2)) * br(br(mu)) + ScalarField(Rational(1, 6)) * br(br(br(phi)));
    const SuperPoly rhs = ScalarField(Rational(-1, 2)) *
                          (from_multivector_table(schouten(A, P.as_multivector(A), P.as_multivector(A)), *s) +
                           P.sharp_substitute(ScalarField(2) * phi));
    o.require(lhs == rhs, "identity");
  }
  if (o.pass) o.note = "100 random (P, phi, mu)";
  return o;
}

std::vector<QuasiPoissonInstance> instances(unsigned seed, int count) {
  Gen gen(seed);
  std::vector<QuasiPoissonInstance> out{r4_instance()};
  for (int i = 0; i < count; ++i) out.push_back(random_instance(gen));
  return out;
}

Outcome sharp_morphism() {
  Outcome o;
  const auto qs = instances(1010, 20);
  for (const auto& q : qs) {
    o.require(quasi_poisson_check(q.P, q.H).ok, q.label + ": not quasi-Poisson");
    o.require(verify_morphism_cor53(q.P, q.H).ok, q.label);
  }
  if (o.pass) o.note = std::to_string(qs.size()) + " instances including the R^4 twisted instance";
  return o;
}

Outcome relative_class() {
  Outcome o;
  const auto qs = instances(1011, 20);
  for (const auto& q : qs) {
    const RelativeModularClass r = relative_modular_class(graph_frame(q.P), q.H);
    o.require(r.cls.rep() == graph_modular_formula(q.P, q.H).rep(), q.label);
  }
  if (o.pass) o.note = std::to_string(qs.size()) + " instances";
  return o;
}

Outcome relatedness() {
  Outcome o;
  Gen gen(1012);
  for (int trial = 0; trial < 25; ++trial) {
    const Hamiltonian H = random_homological(gen, BaseChart::standard(2));
    const SymplecticSpace2& s = H.space();
    const Projection proj = project_to_E(H);
    const SuperPoly F = gen.super_poly(proj.field.table(), 3);
    o.require(poisson_bracket(H.value(), from_form_table(F, s), s) == from_form_table(apply_field(proj.field, F), s),
              "d_E and d_H not related");
  }
  int frames = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const QuasiPoissonInstance q = random_instance(gen);
    const DiracFrame G = graph_frame(q.P);
    const int n = G.size();
    const Matrix<ScalarField> M = unipotent(gen, n, q.algebroid.base_dim());
    std::vector<SuperPoly> sections;
    for (int a = 0; a < n; ++a) {
      SuperPoly d(q.space->table());
      for (int b = 0; b < n; ++b)
        if (!M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].is_zero())
          d += M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * G.section(b);
      sections.push_back(d);
    }
    std::vector<DiracFrame> list{G, DiracFrame(q.space, sections)};
    if (bidegree_split(q.H).phi.is_zero()) list.push_back(tangent_frame(q.space));
    const SkewAlgebroid E = projected_algebroid(q.H);
    for (const DiracFrame& D : list) {
      const InducedAlgebroid induced = induced_algebroid(D, q.H);
      o.require(induced.closed(), q.label + ": frame not closed");
      if (!induced.closed()) continue;
      o.require(is_morphism(AlgebroidMorphism(*induced.algebroid, E, D.projection())).ok, q.label);
      ++frames;
    }
  }
  if (o.pass) o.note = "25 homological Hamiltonians, " + std::to_string(frames) + " Dirac frames";
  return o;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome golden_corpus() {
  Outcome o;
  const std::string dir = MODCLS_GOLDEN_DIR;
  std::ifstream cases(dir + "/cases.txt");
  std::string line;
  int count = 0;
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name, word;
    int expected_exit = 0;
    fields >> name >> expected_exit;
    std::string command = "cd " + shell_quote(dir) + " && " + shell_quote(MODCLS_BINARY);
    while (fields >> word) command += " " + shell_quote(word);
    command += " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
      o.require(false, "cannot run " + name);
      continue;
    }
    std::string out;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, got);
    const int status = pclose(pipe);
    const int exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.require(exit == expected_exit, name + ": exit " + std::to_string(exit));
    o.require(out == read_file(dir + "/expected/" + name + ".out"), name + ": report differs");
    ++count;
  }
  o.require(count > 0, "no golden cases");
  if (o.pass) o.note = std::to_string(count) + " golden cases (sl2, aff(1), TM, twisted R^4, input errors)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sign conventions of the derived bracket and anchor", sign_convention},
      {"modular class: divergence, closed form and connection paths agree", three_paths},
      {"modular class fixed values and adjoint-trace oracle", fixed_values},
      {"gauge law for the characteristic form", gauge_law},
      {"divergence of a commutator", divergence_leibniz},
      {"modular cocycle closed on Lie algebroids", closedness},
      {"{H,H} = 0 iff Jacobi", courant_equivalence},
      {"Loday, invariance and anchored Leibniz for derived brackets", derived_bracket_identities},
      {"quasi-Poisson master identity", master_identity},
      {"P# is a morphism on quasi-Poisson instances", sharp_morphism},
      {"relative modular class of a graph: two paths", relative_class},
      {"projection relatedness and Dirac frame morphisms", relatedness},
      {"CLI golden corpus", golden_corpus},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << ". " << criteria[i].first
              << " (" << o.note << ")" << std::endl;
  }
  return all ? 0 : 1;
}
