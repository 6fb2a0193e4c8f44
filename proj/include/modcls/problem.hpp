#pragma once

// Problem files: a line-oriented declaration format.
//
//   # comment
//   [chart]                        coords = x1 x2 ...
//   [algebroid NAME]               rank = n, c i j k = <expr> (i < j), rho i a = <expr>
//   [morphism NAME: SRC -> DST]    phi i j = <expr>
//   [hamiltonian NAME on ALG]      phi i j k = <expr> (i < j < k, the y^i y^j y^k part), term = <cubic expr>
//   [bivector NAME on ALG]         P i j = <expr> (i < j)
//   [frame NAME on ALG]            D a = <expr linear in y, xi>
//
// Indices are 1-based. Names are declared before use and are unique across kinds.

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modcls/algebroid.hpp"
#include "modcls/courant.hpp"
#include "modcls/dirac.hpp"
#include "modcls/error.hpp"
#include "modcls/parser.hpp"
#include "modcls/scalar.hpp"
#include "modcls/superalg.hpp"

namespace modcls {

struct AlgebroidEntry {
  std::shared_ptr<const SkewAlgebroid> algebroid;
  SpacePtr space;  // T*[2]E[1]
};

struct MorphismEntry {
  std::string source, target;
  std::shared_ptr<const AlgebroidMorphism> morphism;
};

struct HamiltonianEntry {
  std::string algebroid;
  std::shared_ptr<const Hamiltonian> hamiltonian;
};

struct BivectorEntry {
  std::string algebroid;
  std::shared_ptr<const Bivector> bivector;
};

struct FrameEntry {
  std::string algebroid;
  std::shared_ptr<const DiracFrame> frame;
};

struct ProblemFile {
  std::optional<BaseChart> chart;
  std::map<std::string, AlgebroidEntry> algebroids;
  std::map<std::string, MorphismEntry> morphisms;
  std::map<std::string, HamiltonianEntry> hamiltonians;
  std::map<std::string, BivectorEntry> bivectors;
  std::map<std::string, FrameEntry> frames;

  /// Kind of a declared name ("algebroid", ...), or nullopt.
  std::optional<std::string> kind_of(const std::string& name) const {
    if (algebroids.count(name)) return "algebroid";
    if (morphisms.count(name)) return "morphism";
    if (hamiltonians.count(name)) return "hamiltonian";
    if (bivectors.count(name)) return "bivector";
    if (frames.count(name)) return "frame";
    return std::nullopt;
  }
};

namespace detail {

struct Line {
  int number = 0;
  std::string text;  // comment stripped
};

inline bool is_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Whitespace-separated tokens with their 1-based columns.
inline std::vector<std::pair<std::string, int>> tokenize(std::string_view s, int first_column) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    out.push_back({std::string(s.substr(start, i - start)), first_column + static_cast<int>(start)});
  }
  return out;
}

class ProblemParser {
 public:
  explicit ProblemParser(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      lines_.push_back({number, raw});
    }
  }

  ProblemFile parse() {
    for (const Line& line : lines_) {
      const auto first = line.text.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const int col = static_cast<int>(first) + 1;
      if (line.text[first] == '[') {
        finish_section();
        open_section(line, col);
      } else {
        entry(line, col);
      }
    }
    finish_section();
    if (!file_.chart) throw ParseError("missing [chart] section", 1, 1);
    return std::move(file_);
  }

 private:
  enum class Kind { None, Chart, Algebroid, Morphism, Hamiltonian, Bivector, Frame };

  struct Entry {
    std::vector<int> indices;
    std::string rhs;
    SourceLocation where;
    SourceLocation key;
  };

  [[noreturn]] static void fail(const std::string& msg, SourceLocation at) { throw ParseError(msg, at.line, at.column); }

  void open_section(const Line& line, int col) {
    const auto close = line.text.find(']', static_cast<std::size_t>(col - 1));
    if (close == std::string::npos) fail("missing ']'", {line.number, col});
    const auto rest = line.text.find_first_not_of(" \t", close + 1);
    if (rest != std::string::npos) fail("unexpected text after section header", {line.number, static_cast<int>(rest) + 1});
    const std::string inner = line.text.substr(static_cast<std::size_t>(col), close - static_cast<std::size_t>(col));
    auto tokens = tokenize(inner, col + 1);
    header_ = {line.number, col};
    entries_.clear();
    seen_keys_.clear();
    rank_.reset();
    if (tokens.empty()) fail("empty section header", header_);
    const std::string kind = tokens[0].first;
    auto at = [&](std::size_t i) { return SourceLocation{line.number, tokens[i].second}; };
    auto declare = [&](std::size_t i) {
      std::string name = tokens[i].first;
      if (kind == "morphism" && !name.empty() && name.back() == ':') name.pop_back();
      if (!is_name(name)) fail("invalid name '" + name + "'", at(i));
      if (auto k = file_.kind_of(name)) fail("'" + name + "' is already declared as a " + *k, at(i));
      if (file_.chart && file_.chart->index_of(name)) fail("'" + name + "' is a coordinate name", at(i));
      name_ = name;
    };
    auto need_chart = [&] {
      if (!file_.chart) fail("[chart] must come before [" + kind + "]", header_);
    };
    auto algebroid_ref = [&](std::size_t i) {
      if (!file_.algebroids.count(tokens[i].first)) fail("undeclared algebroid '" + tokens[i].first + "'", at(i));
      return tokens[i].first;
    };
    if (kind == "chart") {
      if (tokens.size() != 1) fail("[chart] takes no arguments", at(1));
      if (file_.chart || chart_seen_) fail("duplicate [chart] section", header_);
      chart_seen_ = true;
      kind_ = Kind::Chart;
    } else if (kind == "algebroid") {
      need_chart();
      if (tokens.size() != 2) fail("expected [algebroid NAME]", header_);
      declare(1);
      kind_ = Kind::Algebroid;
    } else if (kind == "morphism") {
      need_chart();
      // [morphism NAME: SRC -> DST] (the colon may be detached)
      std::vector<std::pair<std::string, int>> t;
      for (auto& tok : tokens) {
        if (tok.first != ":" && tok.first.size() > 1 && tok.first.back() == ':' && t.size() == 1) {
          t.push_back({tok.first.substr(0, tok.first.size() - 1), tok.second});
          t.push_back({":", tok.second + static_cast<int>(tok.first.size()) - 1});
        } else {
          t.push_back(tok);
        }
      }
      tokens = t;
      if (tokens.size() != 6 || tokens[2].first != ":" || tokens[4].first != "->")
        fail("expected [morphism NAME: SRC -> DST]", header_);
      declare(1);
      source_ = algebroid_ref(3);
      target_ = algebroid_ref(5);
      kind_ = Kind::Morphism;
    } else if (kind == "hamiltonian" || kind == "bivector" || kind == "frame") {
      need_chart();
      if (tokens.size() != 4 || tokens[2].first != "on") fail("expected [" + kind + " NAME on ALGEBROID]", header_);
      declare(1);
      source_ = algebroid_ref(3);
      kind_ = kind == "hamiltonian" ? Kind::Hamiltonian : kind == "bivector" ? Kind::Bivector : Kind::Frame;
    } else {
      fail("unknown section '" + kind + "'", at(0));
    }
  }

  void entry(const Line& line, int col) {
    if (kind_ == Kind::None) fail("entry outside of a section", {line.number, col});
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'", {line.number, col});
    auto keys = tokenize(std::string_view(line.text).substr(0, eq), 1);
    const auto rhs_start = line.text.find_first_not_of(" \t", eq + 1);
    if (rhs_start == std::string::npos) fail("missing value after '='", {line.number, static_cast<int>(eq) + 2});
    Entry e;
    e.rhs = line.text.substr(rhs_start);
    while (!e.rhs.empty() && std::isspace(static_cast<unsigned char>(e.rhs.back()))) e.rhs.pop_back();
    e.where = {line.number, static_cast<int>(rhs_start) + 1};
    e.key = {line.number, keys.front().second};
    const std::string key = keys.front().first;
    for (std::size_t i = 1; i < keys.size(); ++i) {
      const std::string& tok = keys[i].first;
      int v = 0;
      bool ok = !tok.empty() && tok.size() < 4;
      for (char c : tok) ok = ok && std::isdigit(static_cast<unsigned char>(c));
      if (ok) v = std::stoi(tok);
      if (!ok || v < 1) fail("expected a positive index, got '" + tok + "'", {line.number, keys[i].second});
      e.indices.push_back(v);
    }
    std::string signature = key;
    for (int v : e.indices) signature += " " + std::to_string(v);
    if (!seen_keys_.insert(signature).second) fail("duplicate entry '" + signature + "'", e.key);
    entries_.push_back({key, std::move(e)});
  }

  static void arity(const std::string& key, const Entry& e, std::size_t n) {
    if (e.indices.size() != n)
      fail("'" + key + "' takes " + std::to_string(n) + " indices", e.key);
  }

  static void bound(int v, int hi, const std::string& what, const Entry& e) {
    if (v > hi) fail(what + " index " + std::to_string(v) + " exceeds " + std::to_string(hi), e.key);
  }

  ScalarField scalar(const Entry& e) const {
    try {
      return parse_scalar(e.rhs, *file_.chart, e.where);
    } catch (const MathError& err) {
      fail(err.what(), e.where);
    }
  }

  SuperPoly super(const Entry& e, const TablePtr& t) const {
    try {
      return parse_super(e.rhs, t, e.where);
    } catch (const MathError& err) {
      fail(err.what(), e.where);
    }
  }

  void finish_section() {
    switch (kind_) {
      case Kind::None: break;
      case Kind::Chart: finish_chart(); break;
      case Kind::Algebroid: finish_algebroid(); break;
      case Kind::Morphism: finish_morphism(); break;
      case Kind::Hamiltonian: finish_hamiltonian(); break;
      case Kind::Bivector: finish_bivector(); break;
      case Kind::Frame: finish_frame(); break;
    }
    kind_ = Kind::None;
  }

  void finish_chart() {
    std::optional<BaseChart> chart;
    for (const auto& [key, e] : entries_) {
      if (key != "coords") fail("unknown key '" + key + "' in [chart]", e.key);
      arity(key, e, 0);
      std::vector<std::string> names;
      for (auto& tok : tokenize(e.rhs, e.where.column)) names.push_back(tok.first);
      try {
        chart = BaseChart(names);
      } catch (const InputError& err) {
        fail(err.what(), e.where);
      }
      for (const auto& n : names)
        if (n.size() > 1 && (n[0] == 'y' || n[0] == 'p' || n.rfind("xi", 0) == 0)) {
          bool digits = true;
          for (std::size_t i = n[0] == 'x' ? 2 : 1; i < n.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(n[i]));
          if (digits) fail("coordinate name '" + n + "' clashes with a generator name", e.where);
        }
    }
    if (!chart) fail("[chart] needs 'coords = ...'", header_);
    file_.chart = std::move(chart);
  }

  void finish_algebroid() {
    const int m = file_.chart->dim();
    std::optional<SkewAlgebroid> A;
    for (const auto& [key, e] : entries_) {
      if (key == "rank") {
        arity(key, e, 0);
        if (A) fail("duplicate rank", e.key);
        int n = 0;
        bool ok = !e.rhs.empty() && e.rhs.size() < 3;
        for (char c : e.rhs) ok = ok && std::isdigit(static_cast<unsigned char>(c));
        if (ok) n = std::stoi(e.rhs);
        if (!ok || n < 1 || n > 8) fail("rank must be an integer between 1 and 8", e.where);
        A.emplace(*file_.chart, n);
        continue;
      }
      if (!A) fail("'rank = n' must come first", e.key);
      const int n = A->rank();
      if (key == "c") {
        arity(key, e, 3);
        if (e.indices[0] >= e.indices[1]) fail("structure functions are given for i < j only", e.key);
        for (int v : e.indices) bound(v, n, "frame", e);
        A->set_structure(e.indices[0] - 1, e.indices[1] - 1, e.indices[2] - 1, scalar(e));
      } else if (key == "rho") {
        arity(key, e, 2);
        bound(e.indices[0], n, "frame", e);
        bound(e.indices[1], m, "coordinate", e);
        A->set_anchor(e.indices[0] - 1, e.indices[1] - 1, scalar(e));
      } else {
        fail("unknown key '" + key + "' in [algebroid]", e.key);
      }
    }
    if (!A) fail("[algebroid " + name_ + "] needs 'rank = n'", header_);
    const int n = A->rank();
    file_.algebroids[name_] = {std::make_shared<const SkewAlgebroid>(std::move(*A)), make_split_space(*file_.chart, n)};
  }

  void finish_morphism() {
    const auto& src = file_.algebroids.at(source_);
    const auto& dst = file_.algebroids.at(target_);
    Matrix<ScalarField> M(static_cast<std::size_t>(src.algebroid->rank()),
                          std::vector<ScalarField>(static_cast<std::size_t>(dst.algebroid->rank())));
    for (const auto& [key, e] : entries_) {
      if (key != "phi") fail("unknown key '" + key + "' in [morphism]", e.key);
      arity(key, e, 2);
      bound(e.indices[0], src.algebroid->rank(), "source frame", e);
      bound(e.indices[1], dst.algebroid->rank(), "target frame", e);
      M[static_cast<std::size_t>(e.indices[0] - 1)][static_cast<std::size_t>(e.indices[1] - 1)] = scalar(e);
    }
    file_.morphisms[name_] = {source_, target_,
                              std::make_shared<const AlgebroidMorphism>(src.algebroid, dst.algebroid, std::move(M))};
  }

  void finish_hamiltonian() {
    const auto& alg = file_.algebroids.at(source_);
    const SymplecticSpace2& s = *alg.space;
    const int n = alg.algebroid->rank();
    SuperPoly H = mu_from_algebroid(*alg.algebroid, s);
    for (const auto& [key, e] : entries_) {
      if (key == "phi") {
        arity(key, e, 3);
        if (!(e.indices[0] < e.indices[1] && e.indices[1] < e.indices[2])) fail("3-form entries need i < j < k", e.key);
        for (int v : e.indices) bound(v, n, "frame", e);
        H += yyy_term(s, e.indices[0] - 1, e.indices[1] - 1, e.indices[2] - 1, scalar(e));
      } else if (key == "term") {
        arity(key, e, 0);
        const SuperPoly t = super(e, s.table());
        for (const auto& [mono, c] : t.terms())
          if (mono.degree() != 3) fail("term is not cubic", e.where);
        H += t;
      } else {
        fail("unknown key '" + key + "' in [hamiltonian]", e.key);
      }
    }
    file_.hamiltonians[name_] = {source_, std::make_shared<const Hamiltonian>(alg.space, H)};
  }

  void finish_bivector() {
    const auto& alg = file_.algebroids.at(source_);
    const int n = alg.algebroid->rank();
    Matrix<ScalarField> P(static_cast<std::size_t>(n), std::vector<ScalarField>(static_cast<std::size_t>(n)));
    for (const auto& [key, e] : entries_) {
      if (key != "P") fail("unknown key '" + key + "' in [bivector]", e.key);
      arity(key, e, 2);
      if (e.indices[0] >= e.indices[1]) fail("bivector entries are given for i < j only", e.key);
      for (int v : e.indices) bound(v, n, "frame", e);
      const ScalarField v = scalar(e);
      P[static_cast<std::size_t>(e.indices[0] - 1)][static_cast<std::size_t>(e.indices[1] - 1)] = v;
      P[static_cast<std::size_t>(e.indices[1] - 1)][static_cast<std::size_t>(e.indices[0] - 1)] = -v;
    }
    file_.bivectors[name_] = {source_, std::make_shared<const Bivector>(alg.space, std::move(P))};
  }

  void finish_frame() {
    const auto& alg = file_.algebroids.at(source_);
    const int n = alg.algebroid->rank();
    std::vector<SuperPoly> D(static_cast<std::size_t>(n));
    std::vector<bool> given(static_cast<std::size_t>(n));
    for (const auto& [key, e] : entries_) {
      if (key != "D") fail("unknown key '" + key + "' in [frame]", e.key);
      arity(key, e, 1);
      bound(e.indices[0], n, "frame", e);
      D[static_cast<std::size_t>(e.indices[0] - 1)] = super(e, alg.space->table());
      given[static_cast<std::size_t>(e.indices[0] - 1)] = true;
    }
    for (int a = 0; a < n; ++a)
      if (!given[static_cast<std::size_t>(a)]) fail("frame " + name_ + " is missing 'D " + std::to_string(a + 1) + "'", header_);
    try {
      file_.frames[name_] = {source_, std::make_shared<const DiracFrame>(alg.space, std::move(D))};
    } catch (const MathError& err) {
      fail(err.what(), header_);
    }
  }

  std::vector<Line> lines_;
  ProblemFile file_;
  Kind kind_ = Kind::None;
  SourceLocation header_;
  std::string name_, source_, target_;
  std::vector<std::pair<std::string, Entry>> entries_;
  std::set<std::string> seen_keys_;
  std::optional<int> rank_;
  bool chart_seen_ = false;
};

}  // namespace detail

inline ProblemFile parse_problem(std::string_view text) { return detail::ProblemParser(text).parse(); }

}  // namespace modcls
