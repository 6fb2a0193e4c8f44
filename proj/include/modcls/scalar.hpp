#pragma once

// Exact coefficient field: rational functions over Q in the base coordinates.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modcls/error.hpp"

namespace modcls {

using Rational = mpq_class;

/// Maximum number of base coordinates supported by the packed monomial.
inline constexpr int kMaxBaseDim = 8;

// ---------------------------------------------------------------------------
// Monomial: exponents of x^1..x^8 packed one byte each, x^1 in the high byte,
// so that comparing packed words of equal total degree is lexicographic.
// ---------------------------------------------------------------------------
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(int index, unsigned power = 1) {
    Monomial m;
    m.set(index, power);
    return m;
  }

  unsigned exponent(int index) const {
    return static_cast<unsigned>((packed_ >> shift(index)) & 0xffu);
  }

  void set(int index, unsigned power) {
    if (index < 0 || index >= kMaxBaseDim) throw MathError("monomial variable index out of range");
    if (power > 255) throw MathError("monomial exponent exceeds 255");
    degree_ = degree_ - exponent(index) + power;
    packed_ &= ~(std::uint64_t{0xff} << shift(index));
    packed_ |= std::uint64_t{power} << shift(index);
  }

  unsigned degree() const { return degree_; }
  bool is_one() const { return packed_ == 0; }

  bool divides(const Monomial& other) const {
    for (int i = 0; i < kMaxBaseDim; ++i)
      if (exponent(i) > other.exponent(i)) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxBaseDim; ++i) {
      const unsigned e = a.exponent(i) + b.exponent(i);
      if (e) r.set(i, e);
    }
    return r;
  }

  // Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxBaseDim; ++i) {
      const unsigned e = a.exponent(i) - b.exponent(i);
      if (e) r.set(i, e);
    }
    return r;
  }

  /// Graded-lexicographic order.
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.packed_ < b.packed_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.packed_ == b.packed_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.packed_ != b.packed_; }

 private:
  static int shift(int index) { return 8 * (kMaxBaseDim - 1 - index); }

  std::uint64_t packed_ = 0;
  unsigned degree_ = 0;
};

// ---------------------------------------------------------------------------
// Polynomial over Q, terms sorted by descending grlex order, no zero terms.
// ---------------------------------------------------------------------------
class Polynomial {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial{}, c});
  }
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static Polynomial variable(int index) {
    Polynomial p;
    p.terms_.push_back({Monomial::variable(index), Rational(1)});
    return p;
  }

  static Polynomial monomial(const Monomial& m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({m, c});
    if (!p.terms_.empty()) p.terms_.back().coeff.canonicalize();
    return p;
  }

  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static Polynomial from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return b.mono < a.mono; });
    Polynomial p;
    for (auto& t : terms) {
      t.coeff.canonicalize();
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff += t.coeff;
      } else {
        if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const { return is_zero() ? Rational(0) : terms_[0].coeff; }
  bool is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1; }

  const Term& leading() const { return terms_.front(); }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  unsigned degree_in(int var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
    return d;
  }

  bool involves(int var) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.exponent(var) != 0; });
  }

  /// Highest variable index occurring, or -1 for constants.
  int last_variable() const {
    int v = -1;
    for (const auto& t : terms_)
      for (int i = kMaxBaseDim - 1; i > v; --i)
        if (t.mono.exponent(i)) { v = i; break; }
    return v;
  }

  /// Coefficient of var^k, as a polynomial free of var.
  Polynomial coefficient_in(int var, unsigned k) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (t.mono.exponent(var) == k) {
        Monomial m = t.mono;
        m.set(var, 0);
        out.push_back({m, t.coeff});
      }
    }
    return from_terms(std::move(out));
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coeff);
    if (b.is_constant()) return a.scaled(b.terms_[0].coeff);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.push_back({s.mono * t.mono, Rational(s.coeff * t.coeff)});
    return from_terms(std::move(out));
  }

  Polynomial scaled(const Rational& c) const {
    if (c == 0) return {};
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  Polynomial times_monomial(const Monomial& m, const Rational& c) const {
    if (c == 0) return {};
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, Rational(t.coeff * c)});
    return r;  // multiplication by a monomial preserves the order
  }

  Polynomial pow(unsigned e) const {
    Polynomial result(1), base = *this;
    while (e) {
      if (e & 1u) result = result * base;
      e >>= 1u;
      if (e) base = base * base;
    }
    return result;
  }

  Polynomial partial(int var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      const unsigned e = t.mono.exponent(var);
      if (!e) continue;
      Monomial m = t.mono;
      m.set(var, e - 1);
      out.push_back({m, Rational(t.coeff * e)});
    }
    return from_terms(std::move(out));
  }

  /// Leading coefficient normalized to 1 (zero stays zero).
  Polynomial monic() const {
    if (is_zero()) return {};
    Rational inv = 1 / leading().coeff;
    return scaled(inv);
  }

  /// Exact quotient a / b; throws if b does not divide a.
  friend Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw MathError("polynomial division by zero");
    if (b.is_constant()) return a.scaled(1 / b.terms_[0].coeff);
    std::vector<Term> q;
    Polynomial r = a;
    const Term& lb = b.leading();
    while (!r.is_zero()) {
      const Term& lr = r.leading();
      if (!lb.mono.divides(lr.mono)) throw MathError("inexact polynomial division");
      Monomial m = lr.mono / lb.mono;
      Rational c = lr.coeff / lb.coeff;
      q.push_back({m, c});
      r = r - b.times_monomial(m, c);
    }
    return from_terms(std::move(q));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Total order used only for canonical container ordering.
  friend int compare(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = a.terms_[i];
      const auto& t = b.terms_[i];
      if (s.mono != t.mono) return s.mono < t.mono ? -1 : 1;
      if (s.coeff != t.coeff) return s.coeff < t.coeff ? -1 : 1;
    }
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
  }

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && b.terms_[j].mono < a.terms_[i].mono)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || a.terms_[i].mono < b.terms_[j].mono) {
        Term t = b.terms_[j++];
        if (subtract) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
      } else {
        Rational c = subtract ? Rational(a.terms_[i].coeff - b.terms_[j].coeff)
                              : Rational(a.terms_[i].coeff + b.terms_[j].coeff);
        if (c != 0) r.terms_.push_back({a.terms_[i].mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

namespace detail {

// Pseudo-remainder of a by b viewed as univariate polynomials in var.
inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
  const unsigned db = b.degree_in(var);
  const Polynomial lcb = b.coefficient_in(var, db);
  while (!a.is_zero()) {
    const unsigned da = a.degree_in(var);
    if (da < db) break;
    Polynomial lca = a.coefficient_in(var, da);
    a = lcb * a - (lca * b).times_monomial(Monomial::variable(var, da - db), Rational(1));
  }
  return a;
}

Polynomial gcd_impl(const Polynomial& a, const Polynomial& b);

// gcd of the coefficients of p viewed in var.
inline Polynomial content_in(const Polynomial& p, int var) {
  Polynomial g;
  for (unsigned k = 0, d = p.degree_in(var); k <= d; ++k) {
    Polynomial c = p.coefficient_in(var, k);
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

inline Polynomial primitive_part_in(const Polynomial& p, int var) {
  if (p.is_zero()) return p;
  return exact_quotient(p, content_in(p, var));
}

// Monic gcd over Q.
inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a.terms().size() == 1 && b.terms().size() == 1) {
    Monomial m;
    const auto& ma = a.leading().mono;
    const auto& mb = b.leading().mono;
    for (int i = 0; i < kMaxBaseDim; ++i) {
      const unsigned e = std::min(ma.exponent(i), mb.exponent(i));
      if (e) m.set(i, e);
    }
    return Polynomial::monomial(m, Rational(1));
  }
  const int var = std::max(a.last_variable(), b.last_variable());
  if (!a.involves(var)) return gcd_impl(a, content_in(b, var));
  if (!b.involves(var)) return gcd_impl(content_in(a, var), b);

  const Polynomial ca = content_in(a, var);
  const Polynomial cb = content_in(b, var);
  Polynomial pa = exact_quotient(a, ca);
  Polynomial pb = exact_quotient(b, cb);
  const Polynomial g = gcd_impl(ca, cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    Polynomial r = pseudo_remainder(pa, pb, var);
    pa = std::move(pb);
    pb = r.is_zero() ? Polynomial{} : primitive_part_in(r, var).monic();
  }
  return (g * primitive_part_in(pa, var)).monic();
}

}  // namespace detail

/// Monic greatest common divisor over Q; gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) { return detail::gcd_impl(a, b); }

// ---------------------------------------------------------------------------
// BaseChart
// ---------------------------------------------------------------------------

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class BaseChart {
 public:
  BaseChart() = default;
  explicit BaseChart(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("base chart needs at least one coordinate");
    if (static_cast<int>(names_.size()) > kMaxBaseDim)
      throw InputError("base chart supports at most " + std::to_string(kMaxBaseDim) + " coordinates");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (!is_identifier(n)) throw InputError("invalid coordinate name '" + n + "'");
      if (!seen.insert(n).second) throw InputError("duplicate coordinate name '" + n + "'");
    }
  }

  /// Chart x1..xm.
  static BaseChart standard(int m) {
    std::vector<std::string> names;
    for (int a = 1; a <= m; ++a) names.push_back("x" + std::to_string(a));
    return BaseChart(std::move(names));
  }

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int a) const { return names_.at(static_cast<std::size_t>(a)); }

  std::optional<int> index_of(const std::string& n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return static_cast<int>(i);
    return std::nullopt;
  }

  friend bool operator==(const BaseChart& a, const BaseChart& b) { return a.names_ == b.names_; }
  friend bool operator!=(const BaseChart& a, const BaseChart& b) { return !(a == b); }

 private:
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// ScalarField: reduced fraction num/den with monic den.
// ---------------------------------------------------------------------------
class ScalarField {
 public:
  ScalarField() : den_(1) {}
  ScalarField(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  ScalarField(long c) : num_(Rational(c)), den_(1) {}  // NOLINT(google-explicit-constructor)
  ScalarField(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)

  ScalarField(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw MathError("division by the zero element");
    if (num.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    if (!den.is_constant()) {
      Polynomial g = gcd(num, den);
      if (!g.is_one()) {
        num = exact_quotient(num, g);
        den = exact_quotient(den, g);
      }
    }
    Rational lc = den.leading().coeff;
    if (lc != 1) {
      Rational inv = 1 / lc;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    num_ = std::move(num);
    den_ = std::move(den);
  }

  static ScalarField variable(int index) { return ScalarField(Polynomial::variable(index)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return den_.is_one() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  ScalarField operator-() const {
    ScalarField r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) { return add(a, b, false); }
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return add(a, b, true); }

  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return ScalarField(a.num_ * b.num_);
    // Cross-cancel so the product is already reduced.
    const Polynomial g1 = gcd(a.num_, b.den_);
    const Polynomial g2 = gcd(b.num_, a.den_);
    Polynomial n = exact_quotient(a.num_, g1) * exact_quotient(b.num_, g2);
    Polynomial d = exact_quotient(a.den_, g2) * exact_quotient(b.den_, g1);
    return from_reduced(std::move(n), std::move(d));
  }

  ScalarField inverse() const {
    if (is_zero()) throw MathError("division by the zero element");
    return ScalarField(den_, num_);
  }

  friend ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    if (b.is_zero()) throw MathError("division by the zero element");
    if (b.is_constant()) return a * ScalarField(Rational(1 / b.constant_value()));
    return a * b.inverse();
  }

  ScalarField& operator+=(const ScalarField& o) { return *this = *this + o; }
  ScalarField& operator-=(const ScalarField& o) { return *this = *this - o; }
  ScalarField& operator*=(const ScalarField& o) { return *this = *this * o; }

  ScalarField pow(unsigned e) const { return from_reduced(num_.pow(e), den_.pow(e)); }

  /// Exact partial derivative in coordinate `index` (quotient rule).
  ScalarField partial(int index) const {
    if (is_polynomial()) return ScalarField(num_.partial(index));
    Polynomial n = num_.partial(index) * den_ - num_ * den_.partial(index);
    return ScalarField(std::move(n), den_ * den_);
  }

  friend bool operator==(const ScalarField& a, const ScalarField& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const ScalarField& a, const ScalarField& b) { return !(a == b); }

 private:
  static ScalarField from_reduced(Polynomial n, Polynomial d) {
    ScalarField r;
    if (n.is_zero()) return r;
    Rational lc = d.leading().coeff;
    if (lc != 1) {
      Rational inv = 1 / lc;
      n = n.scaled(inv);
      d = d.scaled(inv);
    }
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    return r;
  }

  static ScalarField add(const ScalarField& a, const ScalarField& b, bool subtract) {
    if (a.is_polynomial() && b.is_polynomial())
      return ScalarField(subtract ? a.num_ - b.num_ : a.num_ + b.num_);
    if (a.den_ == b.den_) return ScalarField(subtract ? a.num_ - b.num_ : a.num_ + b.num_, a.den_);
    const Polynomial g = gcd(a.den_, b.den_);
    const Polynomial ca = exact_quotient(b.den_, g);  // multiplier for a
    const Polynomial cb = exact_quotient(a.den_, g);  // multiplier for b
    Polynomial n = subtract ? a.num_ * ca - b.num_ * cb : a.num_ * ca + b.num_ * cb;
    return ScalarField(std::move(n), a.den_ * ca);
  }

  Polynomial num_;
  Polynomial den_;
};

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string format_monomial(const Monomial& m, const BaseChart& chart) {
  std::string out;
  for (int i = 0; i < kMaxBaseDim; ++i) {
    const unsigned e = m.exponent(i);
    if (!e) continue;
    if (i >= chart.dim()) throw MathError("monomial uses a coordinate outside the chart");
    if (!out.empty()) out += '*';
    out += chart.name(i);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

/// Canonical text: terms in descending grlex order, explicit '*' and '^'.
inline std::string format(const Polynomial& p, const BaseChart& chart) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = t.coeff < 0;
    Rational mag = abs(t.coeff);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + '*';
      out += format_monomial(t.mono, chart);
    }
  }
  return out;
}

inline std::string format(const ScalarField& f, const BaseChart& chart) {
  if (f.is_polynomial()) return format(f.numerator(), chart);
  std::string num = format(f.numerator(), chart);
  if (f.numerator().terms().size() > 1) num = "(" + num + ")";
  std::string den = format(f.denominator(), chart);
  const auto& dt = f.denominator().terms();
  const bool bare = dt.size() == 1 && dt[0].coeff == 1 && den.find('*') == std::string::npos;
  if (!bare) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace modcls
