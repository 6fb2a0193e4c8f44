#pragma once

// Verb dispatch for the command-line front end. A report is a list of
// `KEY: value` lines. Exit status: 0 the property holds, 1 it fails (a
// certificate is printed), 2 input error.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modcls/courant.hpp"
#include "modcls/dirac.hpp"
#include "modcls/error.hpp"
#include "modcls/modular.hpp"
#include "modcls/problem.hpp"

namespace modcls {

struct Command {
  std::string verb;
  std::vector<std::string> args;
  std::optional<std::string> gauge;
  std::optional<int> bound;
};

struct Report {
  std::string out;
  std::string err;
  int exit = 0;
};

enum ExitStatus { kExitOk = 0, kExitFail = 1, kExitInput = 2 };

namespace cli {

/// Bad command-line input (unknown verb, undeclared name, unparsable argument).
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

class Writer {
 public:
  void line(const std::string& s) { text_ += s + "\n"; }
  Report done(int exit) const { return {text_, {}, exit}; }

 private:
  std::string text_;
};

inline std::string article(const std::string& noun) {
  return (std::string("aeiou").find(noun[0]) != std::string::npos ? "an " : "a ") + noun;
}

inline std::string arg_label(int position, const std::string& text) {
  if (position == 0) return "--gauge '" + text + "'";
  return "argument " + std::to_string(position) + " '" + text + "'";
}

template <class F>
auto parse_argument(const std::string& text, int position, F&& parse) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(arg_label(position, text) + ", column " + std::to_string(e.column()) + ": " + e.message());
  } catch (const InputError& e) {
    throw UsageError(arg_label(position, text) + ": " + e.what());
  } catch (const MathError& e) {
    throw UsageError(arg_label(position, text) + ": " + e.what());
  }
}

template <class Map>
const typename Map::mapped_type& lookup(const ProblemFile& file, const Map& map, const std::string& name,
                                        const std::string& kind, int position) {
  auto it = map.find(name);
  if (it != map.end()) return it->second;
  if (auto k = file.kind_of(name))
    throw UsageError(arg_label(position, name) + ": is " + article(*k) + ", expected " + article(kind));
  throw UsageError(arg_label(position, name) + ": undeclared " + kind);
}

inline bool is_constant(const ScalarField& f) { return f.is_polynomial() && f.numerator().is_constant(); }

/// sum_g c_g * symbols_g, e.g. "x1*D3 - (x1 + 1)*D2".
inline std::string combination(const std::vector<ScalarField>& coeff, const std::vector<std::string>& symbols,
                               const BaseChart& chart) {
  std::string out;
  for (std::size_t g = 0; g < coeff.size(); ++g) {
    const ScalarField& c = coeff[g];
    if (c.is_zero()) continue;
    const std::string& sym = symbols[g];
    bool negative = false;
    std::string term;
    if (c == ScalarField(1)) {
      term = sym;
    } else if (c == ScalarField(-1)) {
      term = sym;
      negative = true;
    } else {
      std::string s = format(c, chart);
      const bool simple = s.find_first_of(" /") == std::string::npos;
      if (simple && s[0] == '-') {
        negative = true;
        s.erase(0, 1);
      }
      term = (simple ? s : "(" + s + ")") + "*" + sym;
    }
    if (out.empty()) out = negative ? "-" + term : term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

inline void expect_args(const Command& cmd, std::size_t n, const std::string& usage) {
  if (cmd.args.size() != n) throw UsageError("usage: " + cmd.verb + " " + usage);
}

inline void same_algebroid(const std::string& a, const std::string& b, const std::string& what) {
  if (a != b) throw UsageError(what + " live on different algebroids ('" + a + "' and '" + b + "')");
}

/// A section of E + E*: linear in y and xi with function coefficients.
inline SuperPoly parse_section(const std::string& text, int position, const SymplecticSpace2& s) {
  return parse_argument(text, position, [&](const std::string& t) {
    SuperPoly f = parse_super(t, s.table());
    for (const auto& [m, c] : f.terms())
      if (m.odd_degree() != 1 || !m.even.is_one()) throw MathError("not a section (expected a combination of y, xi)");
    return f;
  });
}

/// A section of E*: linear in y.
inline Section parse_covector(const std::string& text, int position, const SymplecticSpace2& s) {
  const SuperPoly f = parse_argument(text, position, [&](const std::string& t) {
    SuperPoly g = parse_super(t, s.table());
    for (const auto& [m, c] : g.terms())
      if (m.odd_degree() != 1 || (m.odd & s.xi_mask()) || !m.even.is_one())
        throw MathError("not a covector (expected a combination of y)");
    return g;
  });
  return detail::covector_of(s, f);
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

inline Report check_jacobi(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<algebroid>");
  const auto& A = *lookup(file, file.algebroids, cmd.args[0], "algebroid", 1).algebroid;
  Writer w;
  const Verdict v = is_lie(A);
  if (v) {
    w.line("JACOBI: OK");
    return w.done(kExitOk);
  }
  w.line("JACOBI: FAIL, [d, d] has " + v.where + " component " + format(v.witness));
  return w.done(kExitFail);
}

inline Report modular(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<algebroid> [--gauge <expr>]");
  const auto& A = *lookup(file, file.algebroids, cmd.args[0], "algebroid", 1).algebroid;
  Writer w;
  if (cmd.gauge) {
    const ScalarField g =
        parse_argument(*cmd.gauge, 0, [&](const std::string& t) { return parse_scalar(t, A.chart()); });
    if (g.is_zero()) throw UsageError("--gauge: the gauge factor must be nonzero");
    w.line("MODULAR COCYCLE: " + format(characteristic_form(A, g).rep()));
    if (!is_constant(g)) w.line("VALID WHERE: " + format(g, A.chart()) + " != 0");
  } else {
    w.line("MODULAR COCYCLE: " + format(modular_cocycle(A).rep()));
  }
  return w.done(kExitOk);
}

inline Report exact(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 2, "<algebroid> <cocycle> [--bound <d>]");
  const auto& entry = lookup(file, file.algebroids, cmd.args[0], "algebroid", 1);
  const Cocycle1 alpha = parse_argument(cmd.args[1], 2, [&](const std::string& t) {
    return Cocycle1(entry.algebroid, parse_super(t, entry.algebroid->form_table()));
  });
  if (cmd.bound && *cmd.bound < 0) throw UsageError("--bound must be nonnegative");
  const ExactnessResult r = cmd.bound ? is_exact(alpha, *cmd.bound) : is_exact(alpha);
  Writer w;
  if (r.exact) {
    w.line("EXACT: YES, f = " + format(r.witness, entry.algebroid->chart()));
    return w.done(kExitOk);
  }
  w.line("EXACT: NO, no polynomial f of degree <= " + std::to_string(r.bound) + " with d f = " + format(alpha.rep()));
  return w.done(kExitFail);
}

inline void morphism_verdict(Writer& w, const Verdict& v) {
  if (v) w.line("MORPHISM: OK");
  else w.line("MORPHISM: FAIL, intertwining fails on " + v.where + ", residual = " + format(v.witness));
}

inline Report morphism_check(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<morphism>");
  const auto& phi = *lookup(file, file.morphisms, cmd.args[0], "morphism", 1).morphism;
  Writer w;
  const Verdict v = is_morphism(phi);
  morphism_verdict(w, v);
  return w.done(v ? kExitOk : kExitFail);
}

inline Report morphism_mod(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<morphism>");
  const auto& phi = *lookup(file, file.morphisms, cmd.args[0], "morphism", 1).morphism;
  Writer w;
  const Verdict v = is_morphism(phi);
  if (!v) {
    morphism_verdict(w, v);
    return w.done(kExitFail);
  }
  w.line("MODULAR CLASS: " + format(modular_class_of_morphism(phi).rep()));
  return w.done(kExitOk);
}

inline Report courant_check(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<hamiltonian>");
  const auto& H = *lookup(file, file.hamiltonians, cmd.args[0], "hamiltonian", 1).hamiltonian;
  Writer w;
  const SuperPoly sq = hamiltonian_square(H);
  if (sq.is_zero()) {
    w.line("COURANT: OK");
    return w.done(kExitOk);
  }
  w.line("COURANT: FAIL, {H,H} = " + format(sq));
  return w.done(kExitFail);
}

inline Report dorfman(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 3, "<hamiltonian> <section> <section>");
  const auto& H = *lookup(file, file.hamiltonians, cmd.args[0], "hamiltonian", 1).hamiltonian;
  const SuperPoly X = parse_section(cmd.args[1], 2, H.space());
  const SuperPoly Y = parse_section(cmd.args[2], 3, H.space());
  Writer w;
  w.line("DORFMAN: " + format(derived_bracket(X, Y, H)));
  return w.done(kExitOk);
}

inline bool projectable_report(Writer& w, const Hamiltonian& H) {
  if (is_projectable(H)) return true;
  const BidegreeParts parts = bidegree_split(H);
  std::string line = "PROJECTABLE: NO";
  if (!parts.gamma.is_zero()) line += ", gamma = " + format(parts.gamma);
  if (!parts.psi.is_zero()) line += ", psi = " + format(parts.psi);
  w.line(line);
  return false;
}

inline Report projectable(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<hamiltonian>");
  const auto& H = *lookup(file, file.hamiltonians, cmd.args[0], "hamiltonian", 1).hamiltonian;
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  w.line("PROJECTABLE: YES");
  return w.done(kExitOk);
}

inline Report project(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 1, "<hamiltonian>");
  const auto& H = *lookup(file, file.hamiltonians, cmd.args[0], "hamiltonian", 1).hamiltonian;
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  const Projection p = project_to_E(H);
  const SymplecticSpace2& s = H.space();
  for (int a = 0; a < s.base_dim(); ++a) w.line("d(" + s.chart().name(a) + ") = " + format(p.field.base(a)));
  for (int i = 0; i < s.rank(); ++i) w.line("d(" + form_generator_name(i) + ") = " + format(p.field.odd(i)));
  w.line(std::string("HOMOLOGICAL: ") + (p.homological ? "YES" : "NO"));
  return w.done(kExitOk);
}

struct BivectorAndHamiltonian {
  const Bivector& P;
  const Hamiltonian& H;
};

inline BivectorAndHamiltonian bivector_pair(const ProblemFile& file, const Command& cmd) {
  const auto& P = lookup(file, file.bivectors, cmd.args[0], "bivector", 1);
  const auto& H = lookup(file, file.hamiltonians, cmd.args[1], "hamiltonian", 2);
  same_algebroid(P.algebroid, H.algebroid, "bivector and hamiltonian");
  return {*P.bivector, *H.hamiltonian};
}

inline Report quasi_poisson(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 2, "<bivector> <hamiltonian>");
  const auto [P, H] = bivector_pair(file, cmd);
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  const QuasiPoissonResult r = quasi_poisson_check(P, H);
  if (r.ok) {
    w.line("QUASI-POISSON: OK");
    return w.done(kExitOk);
  }
  w.line("QUASI-POISSON: FAIL, obstruction = " + format(r.obstruction));
  return w.done(kExitFail);
}

inline Report twisted(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 4, "<bivector> <hamiltonian> <covector> <covector>");
  const auto [P, H] = bivector_pair(file, cmd);
  const Section a = parse_covector(cmd.args[2], 3, H.space());
  const Section b = parse_covector(cmd.args[3], 4, H.space());
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  w.line("TWISTED BRACKET: " + format(detail::covector_in_space(H.space(), twisted_bracket(P, H, a, b))));
  return w.done(kExitOk);
}

inline bool induced_report(Writer& w, const DiracFrame& D, const Hamiltonian& H, InducedAlgebroid& out) {
  out = induced_algebroid(D, H);
  if (!out.closed()) {
    w.line("DIRAC: FAIL, [D" + std::to_string(out.alpha + 1) + ", D" + std::to_string(out.beta + 1) +
           "] = " + format(out.bracket) + " leaves the frame, residual = " + format(out.residual));
    return false;
  }
  return true;
}

inline void valid_where(Writer& w, const ScalarField& minor, const BaseChart& chart) {
  if (!is_constant(minor)) w.line("VALID WHERE: " + format(minor, chart) + " != 0");
}

inline Report dirac_check(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 2, "<frame> <hamiltonian>");
  const auto& F = lookup(file, file.frames, cmd.args[0], "frame", 1);
  const auto& He = lookup(file, file.hamiltonians, cmd.args[1], "hamiltonian", 2);
  same_algebroid(F.algebroid, He.algebroid, "frame and hamiltonian");
  const DiracFrame& D = *F.frame;
  const Hamiltonian& H = *He.hamiltonian;
  Writer w;
  InducedAlgebroid induced;
  if (!induced_report(w, D, H, induced)) return w.done(kExitFail);
  w.line("DIRAC: OK");
  const SkewAlgebroid& A = *induced.algebroid;
  const BaseChart& chart = A.chart();
  std::vector<std::string> frame, partials;
  for (int g = 0; g < A.rank(); ++g) frame.push_back("D" + std::to_string(g + 1));
  for (int c = 0; c < A.base_dim(); ++c) partials.push_back("d/d" + chart.name(c));
  for (int a = 0; a < A.rank(); ++a)
    for (int b = a + 1; b < A.rank(); ++b) {
      std::vector<ScalarField> c;
      for (int g = 0; g < A.rank(); ++g) c.push_back(A.c(a, b, g));
      w.line("BRACKET: [" + frame[static_cast<std::size_t>(a)] + ", " + frame[static_cast<std::size_t>(b)] +
             "] = " + combination(c, frame, chart));
    }
  for (int a = 0; a < A.rank(); ++a) {
    std::vector<ScalarField> r;
    for (int c = 0; c < A.base_dim(); ++c) r.push_back(A.rho(a, c));
    w.line("ANCHOR: rho(" + frame[static_cast<std::size_t>(a)] + ") = " + combination(r, partials, chart));
  }
  valid_where(w, induced.minor, chart);
  return w.done(kExitOk);
}

inline Report relative_modular(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 2, "<frame-or-bivector> <hamiltonian>");
  const auto& He = lookup(file, file.hamiltonians, cmd.args[1], "hamiltonian", 2);
  const Hamiltonian& H = *He.hamiltonian;
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  InducedAlgebroid induced;
  if (auto it = file.bivectors.find(cmd.args[0]); it != file.bivectors.end()) {
    same_algebroid(it->second.algebroid, He.algebroid, "bivector and hamiltonian");
    const Bivector& P = *it->second.bivector;
    if (!induced_report(w, graph_frame(P), H, induced)) return w.done(kExitFail);
    w.line("RELATIVE MODULAR CLASS: " + format(relative_modular_class_of_graph(P, H).rep()));
    return w.done(kExitOk);
  }
  const auto& F = lookup(file, file.frames, cmd.args[0], "frame or bivector", 1);
  same_algebroid(F.algebroid, He.algebroid, "frame and hamiltonian");
  if (!induced_report(w, *F.frame, H, induced)) return w.done(kExitFail);
  const RelativeModularClass r = relative_modular_class(*F.frame, H);
  w.line("RELATIVE MODULAR CLASS: " + format(r.cls.rep()));
  valid_where(w, r.minor, H.space().chart());
  return w.done(kExitOk);
}

inline Report verify_cor53(const ProblemFile& file, const Command& cmd) {
  expect_args(cmd, 2, "<bivector> <hamiltonian>");
  const auto [P, H] = bivector_pair(file, cmd);
  Writer w;
  if (!projectable_report(w, H)) return w.done(kExitFail);
  const QuasiPoissonResult qp = quasi_poisson_check(P, H);
  if (!qp.ok) {
    w.line("QUASI-POISSON: FAIL, obstruction = " + format(qp.obstruction));
    return w.done(kExitFail);
  }
  const Verdict v = verify_morphism_cor53(P, H);
  if (v) {
    w.line("SHARP MORPHISM: OK");
    return w.done(kExitOk);
  }
  w.line("SHARP MORPHISM: FAIL, intertwining fails on " + v.where + ", residual = " + format(v.witness));
  return w.done(kExitFail);
}

}  // namespace cli

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> names = {
      "check-jacobi", "modular",       "exact",           "morphism-check", "morphism-mod",
      "courant-check", "dorfman",      "projectable",     "project",        "quasi-poisson",
      "twisted-bracket", "dirac-check", "relative-modular", "verify-cor53"};
  return names;
}

/// Runs one verb. Input errors are thrown as InputError; mathematical
/// precondition failures as MathError.
inline Report run_command(const ProblemFile& file, const Command& cmd) {
  using namespace cli;
  if (cmd.verb == "check-jacobi") return check_jacobi(file, cmd);
  if (cmd.verb == "modular") return modular(file, cmd);
  if (cmd.verb == "exact") return exact(file, cmd);
  if (cmd.verb == "morphism-check") return morphism_check(file, cmd);
  if (cmd.verb == "morphism-mod") return morphism_mod(file, cmd);
  if (cmd.verb == "courant-check") return courant_check(file, cmd);
  if (cmd.verb == "dorfman") return dorfman(file, cmd);
  if (cmd.verb == "projectable") return projectable(file, cmd);
  if (cmd.verb == "project") return project(file, cmd);
  if (cmd.verb == "quasi-poisson") return quasi_poisson(file, cmd);
  if (cmd.verb == "twisted-bracket") return twisted(file, cmd);
  if (cmd.verb == "dirac-check") return dirac_check(file, cmd);
  if (cmd.verb == "relative-modular") return relative_modular(file, cmd);
  if (cmd.verb == "verify-cor53") return verify_cor53(file, cmd);
  throw UsageError("unknown verb '" + cmd.verb + "'");
}

/// Parses `text` (named `source` in messages) and runs `cmd`, mapping errors to
/// `error: ...` on the error stream and the exit-status contract.
inline Report run(std::string_view source, std::string_view text, const Command& cmd) {
  try {
    const ProblemFile file = parse_problem(text);
    return run_command(file, cmd);
  } catch (const ParseError& e) {
    return {{}, "error: " + std::string(source) + ":" + e.what() + "\n", kExitInput};
  } catch (const InputError& e) {
    return {{}, "error: " + std::string(e.what()) + "\n", kExitInput};
  } catch (const MathError& e) {
    return {{}, "error: " + std::string(e.what()) + "\n", kExitFail};
  } catch (const InternalError& e) {
    return {{}, "internal error: " + std::string(e.what()) + "\n", kExitFail};
  }
}

}  // namespace modcls
