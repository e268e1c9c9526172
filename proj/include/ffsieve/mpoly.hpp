#pragma once

// Sparse multivariate polynomials over F_q, monomial bases of graded
// pieces, and the text syntax used by scheme files.

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffsieve/gf.hpp"

namespace ffsieve::mpoly {

using Exponents = std::vector<int>;

int degree_of(const Exponents& e);

// Total degree first, then lexicographic with x0 most significant.
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Degree-d monomials in nvars variables, listed largest first in graded-lex
// order (x0^d first, x_{n}^d last).
std::vector<Exponents> monomials_of_degree(int nvars, int d);

std::uint64_t binomial(int n, int k);
// dim S_d = C(d + nvars - 1, nvars - 1).
std::size_t monomial_count(int nvars, int d);

class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return monos_.size(); }
  const Exponents& operator[](std::size_t i) const { return monos_[i]; }
  const std::vector<Exponents>& monomials() const { return monos_; }
  // Position of a degree-d exponent vector, computed combinatorially.
  std::size_t index_of(std::span<const int> e) const;

 private:
  int nvars_ = 0;
  int degree_ = 0;
  std::vector<Exponents> monos_;
};

class MPoly {
 public:
  using Terms = std::map<Exponents, gf::Code, GradedLexLess>;

  MPoly() = default;
  MPoly(gf::FieldSpec field, int nvars) : field_(std::move(field)), nvars_(nvars) {}

  static MPoly constant(const gf::FieldSpec& field, int nvars, gf::Code c);
  static MPoly variable(const gf::FieldSpec& field, int nvars, int i);
  static MPoly monomial(const gf::FieldSpec& field, Exponents e, gf::Code c = 1);

  const gf::FieldSpec& field() const { return field_; }
  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous() const;
  gf::FieldElement coefficient(const Exponents& e) const;

  // Accumulates c into the coefficient of e, dropping zeros.
  void add_term(const Exponents& e, gf::Code c);

  MPoly scaled(gf::Code c) const;
  MPoly pow(unsigned e) const;
  MPoly partial(int i) const;
  // Substitutes 1 for the chart variable; nvars is unchanged.
  MPoly dehomogenize(int chart) const;

  // Coordinates may live in any extension of the coefficient field.
  gf::FieldElement evaluate(std::span<const gf::FieldElement> point) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a);
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  gf::FieldSpec field_;
  int nvars_ = 0;
  Terms terms_;
};

// Evaluates a fixed polynomial at many points of one extension field.
class PolyEvaluator {
 public:
  PolyEvaluator(const MPoly& f, const gf::FieldSpec& target);
  gf::Code operator()(std::span<const gf::Code> point) const;
  const gf::FieldSpec& target() const { return target_; }

 private:
  gf::FieldSpec target_;
  int nvars_ = 0;
  std::vector<int> max_exp_;
  std::vector<std::pair<Exponents, gf::Code>> terms_;
};

// Dense coefficient vector of a homogeneous polynomial in a monomial basis.
std::vector<gf::Code> to_dense(const MPoly& f, const MonomialBasis& basis);
MPoly from_dense(const gf::FieldSpec& field, const MonomialBasis& basis, std::span<const gf::Code> coeffs);

// Default variable names x0..x{nvars-1}.
std::vector<std::string> default_names(int nvars);

// Grammar:
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (['*'] factor)*
//   factor  := primary ['^' integer]
//   primary := integer | name | 'g' | '(' expr ')'
// `g` is the generator of the coefficient field unless it names a
// variable. Integers are reduced mod p.
MPoly parse_poly(std::string_view text, const gf::FieldSpec& field, const std::vector<std::string>& names);

}  // namespace ffsieve::mpoly
