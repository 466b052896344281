#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "core/bits.hpp"
#include "core/errors.hpp"

namespace anticonc {

namespace detail {
inline void normalize(mpq_class& c) { c.canonicalize(); }
inline void normalize(long double&) {}
}  // namespace detail

/// Sparse multilinear polynomial in m variables: index set -> coefficient.
///
/// Zero coefficients are never stored. Terms are kept in graded order (degree
/// first, then colex), which fixes the iteration and serialisation order.
template <class Coeff>
class BasicMultilinearPolynomial {
 public:
  using Terms = std::map<Mask, Coeff, GradedOrder>;

  BasicMultilinearPolynomial() = default;
  explicit BasicMultilinearPolynomial(int m) : m_(m) {
    if (m < 0 || m > kMaxVertices) throw PreconditionError("variable count must lie in [0, 128]");
  }

  static BasicMultilinearPolynomial constant(int m, const Coeff& c) {
    BasicMultilinearPolynomial p(m);
    p.add(0, c);
    return p;
  }

  int variables() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Largest |I| with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : popcount(terms_.rbegin()->first); }

  Coeff coefficient(Mask index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void set(Mask index, Coeff c) {
    check_index(index);
    detail::normalize(c);
    if (c == Coeff(0)) {
      terms_.erase(index);
    } else {
      terms_[index] = c;
    }
  }

  void add(Mask index, Coeff c) {
    check_index(index);
    detail::normalize(c);
    if (c == Coeff(0)) return;
    auto [it, inserted] = terms_.try_emplace(index, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff(0)) terms_.erase(it);
    }
  }

  /// Value at a 0/1 point given by the mask of coordinates equal to 1.
  Coeff evaluate_boolean(Mask ones) const {
    Coeff sum(0);
    for (const auto& [index, c] : terms_)
      if (is_subset(index, ones)) sum += c;
    return sum;
  }

  /// Value at a ±1 point given by the mask of coordinates equal to -1.
  Coeff evaluate_signs(Mask negatives) const {
    Coeff sum(0);
    for (const auto& [index, c] : terms_) {
      if (popcount(index & negatives) & 1) {
        sum -= c;
      } else {
        sum += c;
      }
    }
    return sum;
  }

  /// f^{=d}: the terms of degree exactly d.
  BasicMultilinearPolynomial homogeneous_part(int d) const {
    BasicMultilinearPolynomial out(m_);
    for (const auto& [index, c] : terms_)
      if (popcount(index) == d) out.terms_.emplace_hint(out.terms_.end(), index, c);
    return out;
  }

  /// max |f_S| over |S| = d (0 when there is no such term).
  Coeff max_abs_coefficient(int d) const {
    Coeff best(0);
    for (const auto& [index, c] : terms_) {
      if (popcount(index) != d) continue;
      Coeff a = c < Coeff(0) ? Coeff(-c) : c;
      if (best < a) best = a;
    }
    return best;
  }

  BasicMultilinearPolynomial& operator+=(const BasicMultilinearPolynomial& o) {
    for (const auto& [index, c] : o.terms_) add(index, c);
    return *this;
  }
  BasicMultilinearPolynomial& operator-=(const BasicMultilinearPolynomial& o) {
    for (const auto& [index, c] : o.terms_) add(index, Coeff(-c));
    return *this;
  }
  BasicMultilinearPolynomial& operator*=(const Coeff& s) {
    if (s == Coeff(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [index, c] : terms_) c *= s;
    return *this;
  }
  friend BasicMultilinearPolynomial operator+(BasicMultilinearPolynomial a, const BasicMultilinearPolynomial& b) { return a += b; }
  friend BasicMultilinearPolynomial operator-(BasicMultilinearPolynomial a, const BasicMultilinearPolynomial& b) { return a -= b; }
  friend BasicMultilinearPolynomial operator*(BasicMultilinearPolynomial a, const Coeff& s) { return a *= s; }

  friend bool operator==(const BasicMultilinearPolynomial& a, const BasicMultilinearPolynomial& b) {
    return a.m_ == b.m_ && a.terms_ == b.terms_;
  }

 private:
  void check_index(Mask index) const {
    if ((index & ~low_mask(m_)) != 0) throw PreconditionError("monomial uses a variable outside [1, m]");
  }

  int m_ = 0;
  Terms terms_;
};

using MultilinearPolynomial = BasicMultilinearPolynomial<mpq_class>;
using RealPolynomial = BasicMultilinearPolynomial<long double>;

/// Σ_i ∂g/∂x_i as a formal polynomial: the coefficient of x^J is
/// Σ_{i ∉ J} g_{J ∪ {i}}. g is harmonic iff this is the zero polynomial.
template <class Coeff>
BasicMultilinearPolynomial<Coeff> derivative_sum(const BasicMultilinearPolynomial<Coeff>& g) {
  BasicMultilinearPolynomial<Coeff> out(g.variables());
  for (const auto& [index, c] : g.terms())
    for_each_bit(index, [&](int i) { out.add(index & ~bit(i), c); });
  return out;
}

template <class Coeff>
bool is_harmonic(const BasicMultilinearPolynomial<Coeff>& g) {
  return derivative_sum(g).is_zero();
}

/// Terms grouped by degree: parts[i] = g^{=i} for i = 0..deg(g).
template <class Coeff>
std::vector<BasicMultilinearPolynomial<Coeff>> homogeneous_parts(const BasicMultilinearPolynomial<Coeff>& g) {
  std::vector<BasicMultilinearPolynomial<Coeff>> parts(static_cast<std::size_t>(std::max(g.degree(), 0) + 1),
                                                       BasicMultilinearPolynomial<Coeff>(g.variables()));
  for (const auto& [index, c] : g.terms()) parts[static_cast<std::size_t>(popcount(index))].add(index, c);
  return parts;
}

inline RealPolynomial to_real(const MultilinearPolynomial& p) {
  RealPolynomial out(p.variables());
  for (const auto& [index, c] : p.terms()) out.add(index, static_cast<long double>(c.get_d()));
  return out;
}

/// Common denominator scaling: returns (L, L·p) with L·p integral.
inline std::pair<mpz_class, MultilinearPolynomial> clear_denominators(const MultilinearPolynomial& p) {
  mpz_class lcm = 1;
  for (const auto& [index, c] : p.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  return {lcm, p * mpq_class(lcm)};
}

// ---------------------------------------------------------------------------
// Text format: one term per line, "coeff i1 i2 ... id" with 1-based indices and
// a rational coefficient "p/q" or integer; no indices = constant term.
// ---------------------------------------------------------------------------

/// Reads a polynomial; m defaults to the largest index seen.
inline MultilinearPolynomial parse_polynomial(std::istream& in, int m = -1) {
  struct Term {
    Mask index;
    mpq_class c;
  };
  std::vector<Term> terms;
  std::string line;
  std::size_t line_no = 0;
  int max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string coeff;
    ls >> coeff;
    mpq_class c;
    try {
      c = mpq_class(coeff);
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, "bad coefficient \"" + coeff + "\"");
    }
    // canonicalize() traps on a zero denominator, so check first.
    if (c.get_den() == 0) throw ParseError(line_no, "zero denominator");
    c.canonicalize();
    Mask index = 0;
    std::string tok;
    while (ls >> tok) {
      long i = 0;
      try {
        std::size_t used = 0;
        i = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad variable index \"" + tok + "\"");
      }
      if (i < 1 || i > kMaxVertices) throw ParseError(line_no, "variable index out of range");
      if ((index >> (i - 1)) & 1) throw ParseError(line_no, "repeated variable in monomial");
      index |= bit(static_cast<int>(i - 1));
      max_index = std::max(max_index, static_cast<int>(i));
    }
    for (const Term& t : terms)
      if (t.index == index) throw ParseError(line_no, "duplicate monomial");
    terms.push_back({index, c});
  }
  if (m < 0) m = max_index;
  if (max_index > m) throw ParseError(line_no, "variable index exceeds declared count");
  MultilinearPolynomial p(m);
  for (const Term& t : terms) p.add(t.index, t.c);
  return p;
}

inline MultilinearPolynomial parse_polynomial(const std::string& text, int m = -1) {
  std::istringstream in(text);
  return parse_polynomial(in, m);
}

inline void write_polynomial(std::ostream& out, const MultilinearPolynomial& p) {
  for (const auto& [index, c] : p.terms()) {
    out << c.get_str();
    for_each_bit(index, [&](int i) { out << ' ' << i + 1; });
    out << '\n';
  }
}

inline std::string format_polynomial(const MultilinearPolynomial& p) {
  std::ostringstream out;
  write_polynomial(out, p);
  return out.str();
}

}  // namespace anticonc
