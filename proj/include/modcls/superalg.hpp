#pragma once

// Supercommutative polynomial algebra in odd degree-1 and even degree-2
// generators over ScalarField, graded derivations, and the coordinate
// (Berezinian) divergence.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modcls/error.hpp"
#include "modcls/parser.hpp"
#include "modcls/scalar.hpp"

namespace modcls {

inline constexpr int kMaxOddGenerators = 32;
inline constexpr int kMaxEvenGenerators = kMaxBaseDim;

struct Bidegree {
  int first = 0;
  int second = 0;
  friend Bidegree operator+(Bidegree a, Bidegree b) { return {a.first + b.first, a.second + b.second}; }
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

struct GeneratorSpec {
  std::string name;
  Bidegree bidegree;
};

enum class GeneratorKind { Base, Odd, Even };

struct GeneratorRef {
  GeneratorKind kind;
  int index;
};

/// Base chart plus ordered odd (degree 1) and even (degree 2) generators.
class GeneratorTable {
 public:
  GeneratorTable(BaseChart chart, std::vector<GeneratorSpec> odd, std::vector<GeneratorSpec> even)
      : chart_(std::move(chart)), odd_(std::move(odd)), even_(std::move(even)) {
    if (static_cast<int>(odd_.size()) > kMaxOddGenerators) throw InputError("too many odd generators");
    if (static_cast<int>(even_.size()) > kMaxEvenGenerators) throw InputError("too many even generators");
    std::set<std::string> seen(chart_.names().begin(), chart_.names().end());
    for (const auto* list : {&odd_, &even_}) {
      for (const auto& g : *list) {
        if (!is_identifier(g.name)) throw InputError("invalid generator name '" + g.name + "'");
        if (!seen.insert(g.name).second) throw InputError("duplicate generator name '" + g.name + "'");
      }
    }
    for (const auto& g : odd_)
      if (g.bidegree.first + g.bidegree.second != 1) throw InputError("odd generator bidegree must have total 1");
    for (const auto& g : even_)
      if (g.bidegree.first + g.bidegree.second != 2) throw InputError("even generator bidegree must have total 2");
  }

  const BaseChart& chart() const { return chart_; }
  int base_dim() const { return chart_.dim(); }
  int odd_count() const { return static_cast<int>(odd_.size()); }
  int even_count() const { return static_cast<int>(even_.size()); }
  const GeneratorSpec& odd(int i) const { return odd_.at(static_cast<std::size_t>(i)); }
  const GeneratorSpec& even(int i) const { return even_.at(static_cast<std::size_t>(i)); }

  std::optional<GeneratorRef> find(const std::string& name) const {
    if (auto a = chart_.index_of(name)) return GeneratorRef{GeneratorKind::Base, *a};
    for (int i = 0; i < odd_count(); ++i)
      if (odd_[static_cast<std::size_t>(i)].name == name) return GeneratorRef{GeneratorKind::Odd, i};
    for (int i = 0; i < even_count(); ++i)
      if (even_[static_cast<std::size_t>(i)].name == name) return GeneratorRef{GeneratorKind::Even, i};
    return std::nullopt;
  }

  friend bool operator==(const GeneratorTable& a, const GeneratorTable& b) {
    if (a.chart_ != b.chart_ || a.odd_.size() != b.odd_.size() || a.even_.size() != b.even_.size()) return false;
    for (std::size_t i = 0; i < a.odd_.size(); ++i)
      if (a.odd_[i].name != b.odd_[i].name || !(a.odd_[i].bidegree == b.odd_[i].bidegree)) return false;
    for (std::size_t i = 0; i < a.even_.size(); ++i)
      if (a.even_[i].name != b.even_[i].name || !(a.even_[i].bidegree == b.even_[i].bidegree)) return false;
    return true;
  }

 private:
  BaseChart chart_;
  std::vector<GeneratorSpec> odd_;
  std::vector<GeneratorSpec> even_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

inline TablePtr make_table(BaseChart chart, std::vector<GeneratorSpec> odd, std::vector<GeneratorSpec> even = {}) {
  return std::make_shared<const GeneratorTable>(std::move(chart), std::move(odd), std::move(even));
}

inline bool same_table(const TablePtr& a, const TablePtr& b) { return a == b || (a && b && *a == *b); }

inline void require_same_table(const TablePtr& a, const TablePtr& b) {
  if (!same_table(a, b)) throw MathError("generator-table mismatch");
}

/// Odd part as a bitmask (bit i = odd generator i), even part as a packed monomial.
struct SuperMonomial {
  std::uint32_t odd = 0;
  Monomial even;

  int odd_degree() const { return std::popcount(odd); }
  int degree() const { return odd_degree() + 2 * static_cast<int>(even.degree()); }
  int parity() const { return odd_degree() & 1; }

  /// Canonical order: odd length, then odd index list lexicographically, then even part (grlex).
  friend bool operator<(const SuperMonomial& a, const SuperMonomial& b) {
    const int la = a.odd_degree(), lb = b.odd_degree();
    if (la != lb) return la < lb;
    if (a.odd != b.odd) {
      std::uint32_t x = a.odd, y = b.odd;
      while (x && y) {
        const int i = std::countr_zero(x), j = std::countr_zero(y);
        if (i != j) return i < j;
        x &= x - 1;
        y &= y - 1;
      }
    }
    return a.even < b.even;
  }
  friend bool operator==(const SuperMonomial& a, const SuperMonomial& b) { return a.odd == b.odd && a.even == b.even; }
};

namespace detail {

// Sign of moving the odd monomial b past a: product a*b = sign * (a|b) in canonical order.
inline int koszul_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  while (b) {
    const int j = std::countr_zero(b);
    swaps += std::popcount(j + 1 >= 32 ? 0u : (a >> (j + 1)));
    b &= b - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

}  // namespace detail

class SuperPoly {
 public:
  using Term = std::pair<SuperMonomial, ScalarField>;

  SuperPoly() = default;
  explicit SuperPoly(TablePtr table) : table_(std::move(table)) {}

  static SuperPoly scalar(TablePtr table, const ScalarField& c) {
    SuperPoly p(std::move(table));
    if (!c.is_zero()) p.terms_.push_back({SuperMonomial{}, c});
    return p;
  }

  static SuperPoly odd_generator(TablePtr table, int i, const ScalarField& c = ScalarField(1)) {
    if (i < 0 || i >= table->odd_count()) throw MathError("odd generator index out of range");
    SuperPoly p(std::move(table));
    if (!c.is_zero()) p.terms_.push_back({SuperMonomial{1u << i, Monomial{}}, c});
    return p;
  }

  static SuperPoly even_generator(TablePtr table, int i, const ScalarField& c = ScalarField(1)) {
    if (i < 0 || i >= table->even_count()) throw MathError("even generator index out of range");
    SuperPoly p(std::move(table));
    if (!c.is_zero()) p.terms_.push_back({SuperMonomial{0, Monomial::variable(i)}, c});
    return p;
  }

  static SuperPoly generator(TablePtr table, const std::string& name) {
    auto ref = table->find(name);
    if (!ref) throw MathError("unknown generator '" + name + "'");
    switch (ref->kind) {
      case GeneratorKind::Base: return scalar(table, ScalarField::variable(ref->index));
      case GeneratorKind::Odd: return odd_generator(table, ref->index);
      case GeneratorKind::Even: return even_generator(table, ref->index);
    }
    return SuperPoly(table);
  }

  /// Builds from arbitrary terms: repeated monomials are summed, zeros dropped.
  static SuperPoly from_terms(TablePtr table, std::vector<Term> terms) {
    std::map<SuperMonomial, ScalarField> acc;
    for (auto& [m, c] : terms) {
      auto [it, inserted] = acc.try_emplace(m, c);
      if (!inserted) it->second += c;
    }
    SuperPoly p(std::move(table));
    for (auto& [m, c] : acc)
      if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
    return p;
  }

  const TablePtr& table() const { return table_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of a given monomial (zero if absent).
  ScalarField coefficient(const SuperMonomial& m) const {
    for (const auto& [k, c] : terms_)
      if (k == m) return c;
    return {};
  }

  /// Degree-0 part.
  ScalarField scalar_part() const { return coefficient(SuperMonomial{}); }

  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      if (!d) d = m.degree();
      else if (*d != m.degree()) return std::nullopt;
    }
    return d ? d : std::optional<int>(0);
  }

  /// Parity if all terms share it (zero counts as even).
  std::optional<int> parity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
      if (!p) p = m.parity();
      else if (*p != m.parity()) return std::nullopt;
    }
    return p ? p : std::optional<int>(0);
  }

  /// Homogeneous component of the given total degree.
  SuperPoly degree_part(int d) const {
    SuperPoly r(table_);
    for (const auto& t : terms_)
      if (t.first.degree() == d) r.terms_.push_back(t);
    return r;
  }

  SuperPoly operator-() const {
    SuperPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend SuperPoly operator+(const SuperPoly& a, const SuperPoly& b) { return merge(a, b, false); }
  friend SuperPoly operator-(const SuperPoly& a, const SuperPoly& b) { return merge(a, b, true); }
  SuperPoly& operator+=(const SuperPoly& o) { return *this = *this + o; }
  SuperPoly& operator-=(const SuperPoly& o) { return *this = *this - o; }

  friend SuperPoly operator*(const ScalarField& c, const SuperPoly& a) {
    SuperPoly r(a.table_);
    if (c.is_zero()) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& [m, k] : a.terms_) r.terms_.push_back({m, c * k});
    return r;
  }

  /// Supercommutative product with Koszul signs.
  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
    const TablePtr& t = pick_table(a, b);
    if (a.is_zero() || b.is_zero()) return SuperPoly(t);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if (ma.odd & mb.odd) continue;
        const int s = detail::koszul_sign(ma.odd, mb.odd);
        ScalarField c = ca * cb;
        if (s < 0) c = -c;
        out.push_back({SuperMonomial{ma.odd | mb.odd, ma.even * mb.even}, std::move(c)});
      }
    }
    return from_terms(t, std::move(out));
  }

  SuperPoly pow(unsigned e) const {
    SuperPoly r = scalar(table_, ScalarField(1));
    for (unsigned k = 0; k < e; ++k) r = r * *this;
    return r;
  }

  friend bool operator==(const SuperPoly& a, const SuperPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    if (!a.terms_.empty()) require_same_table(a.table_, b.table_);
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].first == b.terms_[i].first) || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
  }
  friend bool operator!=(const SuperPoly& a, const SuperPoly& b) { return !(a == b); }

 private:
  static const TablePtr& pick_table(const SuperPoly& a, const SuperPoly& b) {
    if (!a.table_) return b.table_;
    if (!b.table_) return a.table_;
    require_same_table(a.table_, b.table_);
    return a.table_;
  }

  static SuperPoly merge(const SuperPoly& a, const SuperPoly& b, bool subtract) {
    SuperPoly r(pick_table(a, b));
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        Term t = b.terms_[j++];
        if (subtract) t.second = -t.second;
        r.terms_.push_back(std::move(t));
      } else {
        ScalarField c = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].first, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  TablePtr table_;
  std::vector<Term> terms_;  // ascending canonical order, nonzero coefficients
};

// ---------------------------------------------------------------------------
// Partial derivatives (left convention for odd generators)
// ---------------------------------------------------------------------------

/// Left derivative in odd generator k: d/dtheta (theta w) = w.
inline SuperPoly left_partial_odd(const SuperPoly& f, int k) {
  if (k < 0 || k >= f.table()->odd_count()) throw MathError("odd generator index out of range");
  const std::uint32_t bit = 1u << k;
  std::vector<SuperPoly::Term> out;
  for (const auto& [m, c] : f.terms()) {
    if (!(m.odd & bit)) continue;
    const bool negative = std::popcount(m.odd & (bit - 1)) & 1;
    out.push_back({SuperMonomial{m.odd & ~bit, m.even}, negative ? -c : c});
  }
  return SuperPoly::from_terms(f.table(), std::move(out));
}

inline SuperPoly partial_even(const SuperPoly& f, int k) {
  if (k < 0 || k >= f.table()->even_count()) throw MathError("even generator index out of range");
  std::vector<SuperPoly::Term> out;
  for (const auto& [m, c] : f.terms()) {
    const unsigned e = m.even.exponent(k);
    if (!e) continue;
    Monomial ev = m.even;
    ev.set(k, e - 1);
    out.push_back({SuperMonomial{m.odd, ev}, ScalarField(Rational(e)) * c});
  }
  return SuperPoly::from_terms(f.table(), std::move(out));
}

inline SuperPoly partial_base(const SuperPoly& f, int a) {
  if (a < 0 || a >= f.table()->base_dim()) throw MathError("base coordinate index out of range");
  std::vector<SuperPoly::Term> out;
  for (const auto& [m, c] : f.terms()) {
    ScalarField d = c.partial(a);
    if (!d.is_zero()) out.push_back({m, std::move(d)});
  }
  return SuperPoly::from_terms(f.table(), std::move(out));
}

inline SuperPoly left_partial(const SuperPoly& f, const GeneratorRef& g) {
  switch (g.kind) {
    case GeneratorKind::Base: return partial_base(f, g.index);
    case GeneratorKind::Odd: return left_partial_odd(f, g.index);
    case GeneratorKind::Even: return partial_even(f, g.index);
  }
  return SuperPoly(f.table());
}

/// Left graded derivative by generator (or coordinate) name.
inline SuperPoly left_partial(const SuperPoly& f, const std::string& name) {
  auto g = f.table()->find(name);
  if (!g) throw MathError("unknown generator '" + name + "'");
  return left_partial(f, *g);
}

// ---------------------------------------------------------------------------
// Substitution and restriction
// ---------------------------------------------------------------------------

/// Algebra morphism fixing base coordinates: odd generator i -> odd_images[i],
/// even generator k -> even_images[k]; images live over `target`.
inline SuperPoly substitute(const SuperPoly& f, const TablePtr& target, const std::vector<SuperPoly>& odd_images,
                            const std::vector<SuperPoly>& even_images) {
  if (static_cast<int>(odd_images.size()) != f.table()->odd_count() ||
      static_cast<int>(even_images.size()) != f.table()->even_count())
    throw MathError("substitution does not cover the generator table");
  SuperPoly result(target);
  for (const auto& [m, c] : f.terms()) {
    SuperPoly t = SuperPoly::scalar(target, c);
    for (std::uint32_t bits = m.odd; bits && !t.is_zero(); bits &= bits - 1)
      t = t * odd_images[static_cast<std::size_t>(std::countr_zero(bits))];
    for (int k = 0; k < f.table()->even_count() && !t.is_zero(); ++k)
      for (unsigned e = m.even.exponent(k); e > 0; --e) t = t * even_images[static_cast<std::size_t>(k)];
    result += t;
  }
  return result;
}

/// Drops every term containing one of the listed generators (restriction to their zero locus).
inline SuperPoly restrict_to_zero(const SuperPoly& f, std::uint32_t odd_mask, const std::vector<int>& even_indices) {
  std::vector<SuperPoly::Term> out;
  for (const auto& t : f.terms()) {
    if (t.first.odd & odd_mask) continue;
    bool hit = false;
    for (int k : even_indices) hit = hit || t.first.even.exponent(k) != 0;
    if (!hit) out.push_back(t);
  }
  return SuperPoly::from_terms(f.table(), std::move(out));
}

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

/// X = sum_a g_a d/dx^a + sum_theta h_theta d/dtheta + sum_p h_p d/dp.
class SuperVectorField {
 public:
  SuperVectorField(TablePtr table, int parity)
      : table_(std::move(table)),
        parity_(parity & 1),
        base_(static_cast<std::size_t>(table_->base_dim()), SuperPoly(table_)),
        odd_(static_cast<std::size_t>(table_->odd_count()), SuperPoly(table_)),
        even_(static_cast<std::size_t>(table_->even_count()), SuperPoly(table_)) {}

  SuperVectorField(TablePtr table, int parity, std::vector<SuperPoly> base, std::vector<SuperPoly> odd,
                   std::vector<SuperPoly> even)
      : table_(std::move(table)), parity_(parity & 1), base_(std::move(base)), odd_(std::move(odd)), even_(std::move(even)) {
    if (static_cast<int>(base_.size()) != table_->base_dim() || static_cast<int>(odd_.size()) != table_->odd_count() ||
        static_cast<int>(even_.size()) != table_->even_count())
      throw MathError("vector field component count does not match the table");
    validate();
  }

  const TablePtr& table() const { return table_; }
  int parity() const { return parity_; }

  const SuperPoly& base(int a) const { return base_.at(static_cast<std::size_t>(a)); }
  const SuperPoly& odd(int i) const { return odd_.at(static_cast<std::size_t>(i)); }
  const SuperPoly& even(int k) const { return even_.at(static_cast<std::size_t>(k)); }

  void set_base(int a, SuperPoly c) { base_.at(static_cast<std::size_t>(a)) = std::move(c); validate(); }
  void set_odd(int i, SuperPoly c) { odd_.at(static_cast<std::size_t>(i)) = std::move(c); validate(); }
  void set_even(int k, SuperPoly c) { even_.at(static_cast<std::size_t>(k)) = std::move(c); validate(); }

  /// Degree if all components agree on one (degree(component) - degree(coordinate)).
  std::optional<int> degree() const {
    std::optional<int> d;
    bool consistent = true;
    auto visit = [&](const SuperPoly& c, int coord_degree) {
      for (const auto& [m, k] : c.terms()) {
        const int v = m.degree() - coord_degree;
        if (!d) d = v;
        else if (*d != v) consistent = false;
      }
    };
    for (const auto& c : base_) visit(c, 0);
    for (const auto& c : odd_) visit(c, 1);
    for (const auto& c : even_) visit(c, 2);
    if (!consistent) return std::nullopt;
    return d;
  }

  bool is_zero() const {
    for (const auto* list : {&base_, &odd_, &even_})
      for (const auto& c : *list)
        if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const SuperVectorField& a, const SuperVectorField& b) {
    require_same_table(a.table_, b.table_);
    if (a.is_zero() && b.is_zero()) return true;
    return a.parity_ == b.parity_ && a.base_ == b.base_ && a.odd_ == b.odd_ && a.even_ == b.even_;
  }

 private:
  void validate() const {
    auto check = [&](const SuperPoly& c, int coord_parity) {
      if (c.is_zero()) return;
      require_same_table(table_, c.table());
      auto p = c.parity();
      if (!p || *p != ((parity_ + coord_parity) & 1))
        throw MathError("vector field component parity inconsistent with the declared parity");
    };
    for (const auto& c : base_) check(c, 0);
    for (const auto& c : odd_) check(c, 1);
    for (const auto& c : even_) check(c, 0);
  }

  TablePtr table_;
  int parity_;
  std::vector<SuperPoly> base_;
  std::vector<SuperPoly> odd_;
  std::vector<SuperPoly> even_;
};

/// X(f), components multiplied on the left of left partials.
inline SuperPoly apply_field(const SuperVectorField& X, const SuperPoly& f) {
  require_same_table(X.table(), f.table());
  const auto& t = *X.table();
  SuperPoly r(X.table());
  for (int a = 0; a < t.base_dim(); ++a)
    if (!X.base(a).is_zero()) r += X.base(a) * partial_base(f, a);
  for (int i = 0; i < t.odd_count(); ++i)
    if (!X.odd(i).is_zero()) r += X.odd(i) * left_partial_odd(f, i);
  for (int k = 0; k < t.even_count(); ++k)
    if (!X.even(k).is_zero()) r += X.even(k) * partial_even(f, k);
  return r;
}

/// Graded commutator [X, Y] = XY - (-1)^{|X||Y|} YX.
inline SuperVectorField commutator(const SuperVectorField& X, const SuperVectorField& Y) {
  require_same_table(X.table(), Y.table());
  const auto& t = *X.table();
  const bool flip = (X.parity() & Y.parity()) != 0;
  auto component = [&](const SuperPoly& xu, const SuperPoly& yu) {
    SuperPoly a = apply_field(X, yu);
    SuperPoly b = apply_field(Y, xu);
    return flip ? a + b : a - b;
  };
  std::vector<SuperPoly> base, odd, even;
  for (int a = 0; a < t.base_dim(); ++a) base.push_back(component(X.base(a), Y.base(a)));
  for (int i = 0; i < t.odd_count(); ++i) odd.push_back(component(X.odd(i), Y.odd(i)));
  for (int k = 0; k < t.even_count(); ++k) even.push_back(component(X.even(k), Y.even(k)));
  return SuperVectorField(X.table(), X.parity() + Y.parity(), std::move(base), std::move(odd), std::move(even));
}

/// Coordinate divergence for the standard Berezinian gauge:
/// sum over even coordinates (x and p) of d g/d u, minus (-1)^{|X|} times the
/// sum over odd coordinates of the left derivative d h/d theta.
inline SuperPoly divergence(const SuperVectorField& X) {
  const auto& t = *X.table();
  SuperPoly even_sum(X.table()), odd_sum(X.table());
  for (int a = 0; a < t.base_dim(); ++a) even_sum += partial_base(X.base(a), a);
  for (int k = 0; k < t.even_count(); ++k) even_sum += partial_even(X.even(k), k);
  for (int i = 0; i < t.odd_count(); ++i) odd_sum += left_partial_odd(X.odd(i), i);
  return X.parity() ? even_sum + odd_sum : even_sum - odd_sum;
}

/// Divergence with respect to the density rescaled by the nonzero factor g:
/// div(X) + X(g)/g.
inline SuperPoly gauge_divergence(const SuperVectorField& X, const ScalarField& g) {
  if (g.is_zero()) throw MathError("zero gauge factor");
  SuperPoly xg = apply_field(X, SuperPoly::scalar(X.table(), g));
  return divergence(X) + g.inverse() * xg;
}

// ---------------------------------------------------------------------------
// Printing and parsing
// ---------------------------------------------------------------------------

inline std::string format_generators(const SuperMonomial& m, const GeneratorTable& t) {
  std::string out;
  for (std::uint32_t bits = m.odd; bits; bits &= bits - 1) {
    if (!out.empty()) out += '*';
    out += t.odd(std::countr_zero(bits)).name;
  }
  for (int k = 0; k < t.even_count(); ++k) {
    const unsigned e = m.even.exponent(k);
    if (!e) continue;
    if (!out.empty()) out += '*';
    out += t.even(k).name;
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

/// Canonical text: terms in canonical order, each as coefficient*generators.
inline std::string format(const SuperPoly& f) {
  if (f.is_zero()) return "0";
  const GeneratorTable& t = *f.table();
  const BaseChart& chart = t.chart();
  if (f.terms().size() == 1 && f.terms()[0].first == SuperMonomial{}) return format(f.terms()[0].second, chart);
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    const std::string gens = format_generators(m, t);
    const bool single = c.is_polynomial() && c.numerator().terms().size() == 1;
    std::string s;
    if (single) {
      std::string cs = format(c, chart);
      if (gens.empty()) s = cs;
      else if (cs == "1") s = gens;
      else if (cs == "-1") s = "-" + gens;
      else s = cs + "*" + gens;
    } else {
      s = "(" + format(c, chart) + ")";
      if (!gens.empty()) s += "*" + gens;
    }
    if (first) out += s;
    else if (s[0] == '-') out += " - " + s.substr(1);
    else out += " + " + s;
    first = false;
  }
  return out;
}

/// Identifiers are base coordinates or generators; division only by scalars.
struct SuperSemantics {
  using Value = SuperPoly;
  TablePtr table;

  std::optional<Value> identifier(const std::string& name) const {
    if (!table->find(name)) return std::nullopt;
    return SuperPoly::generator(table, name);
  }
  Value constant(const Rational& c) const { return SuperPoly::scalar(table, ScalarField(c)); }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const {
    const ScalarField s = b.scalar_part();
    if (b.terms().size() > (s.is_zero() ? 0u : 1u)) throw MathError("division by a non-scalar expression");
    if (s.is_zero()) throw MathError("division by the zero element");
    return s.inverse() * a;
  }
};

inline SuperPoly parse_super(std::string_view text, const TablePtr& table, SourceLocation origin = {}) {
  SuperSemantics sem{table};
  return ExpressionParser<SuperSemantics>(text, sem, origin).parse();
}

}  // namespace modcls
