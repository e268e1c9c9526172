#pragma once

// Closed-point counts of a scheme over F_q, either enumerated (a_d for
// d <= B) or as a point-count polynomial N_e = sum_b c_b (q^e)^b, or both.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffsieve::zeta {

using Integer = mpz_class;
using Rational = mpq_class;

struct PolyTerm {
  Integer coeff;
  int power = 0;  // of T = q^e
  friend bool operator==(const PolyTerm& a, const PolyTerm& b) { return a.coeff == b.coeff && a.power == b.power; }
};

// Sorted by descending power, no zero coefficients, powers distinct.
std::vector<PolyTerm> normalize(std::vector<PolyTerm> terms);
// "T^3 + T^2 + 1", "T - 1", "0".
std::string format_terms(const std::vector<PolyTerm>& terms);
// Integer polynomial in T, e.g. "T^3 + 2*T - 1".
std::vector<PolyTerm> parse_terms(std::string_view text);

Integer ipow(std::uint64_t base, unsigned long e);
int mobius(int n);

class CountProfile {
 public:
  CountProfile() = default;
  static CountProfile empty(std::uint64_t q);
  // a[d - 1] = number of closed points of degree d, d = 1..a.size().
  static CountProfile enumerated(std::uint64_t q, std::vector<Integer> a);
  static CountProfile polynomial(std::uint64_t q, std::vector<PolyTerm> terms);

  std::uint64_t q() const { return q_; }
  bool has_enumerated() const { return enumerated_; }
  bool has_polynomial() const { return poly_.has_value(); }
  int enumerated_bound() const { return static_cast<int>(a_.size()); }
  const std::vector<Integer>& enumerated_counts() const { return a_; }
  const std::vector<PolyTerm>& terms() const { return *poly_; }

  // True when a_d is known exactly for every d <= bound.
  bool exact_through(int bound) const { return poly_.has_value() || bound <= enumerated_bound(); }
  // |X(F_{q^e})|.
  Integer points(int e) const;
  // Number of closed points of degree d.
  Integer closed_points(int d) const;
  // Zero-dimensional finite profiles and the empty profile have finite support.
  bool is_empty() const;

  // Attaches a polynomial view; throws ProfileMismatch unless it reproduces
  // every enumerated count.
  void attach_polynomial(std::vector<PolyTerm> terms);

  std::optional<int> declared_dim;
  // Degree of the polynomial view; -1 for zero; nullopt without one.
  std::optional<int> polynomial_degree() const;

  // Profile of the complement of `sub` inside this scheme.
  CountProfile minus(const CountProfile& sub) const;

 private:
  std::uint64_t q_ = 0;
  bool enumerated_ = false;
  std::vector<Integer> a_;
  std::optional<std::vector<PolyTerm>> poly_;
};

}  // namespace ffsieve::zeta
