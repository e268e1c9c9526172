#pragma once

// Zeta special values at integer s from count profiles: exact rationals for
// point-count polynomials, brackets for enumerated profiles, the refinement
// by number of geometric points in the support, and Sym^n point counts.

#include <optional>
#include <string>
#include <vector>

#include "ffsieve/profile.hpp"
#include "ffsieve/variety.hpp"

namespace ffsieve::zeta {

struct ZetaValue {
  int s = 0;
  std::optional<Rational> exact;
  Rational lower;
  std::optional<Rational> upper;  // nullopt when the tail bound is useless
  bool heuristic_tail = false;
  std::vector<std::string> flags;
};

// q^{-s} style helpers on exact rationals.
Rational rational_pow(std::uint64_t q, long e);

struct EulerProduct {
  Rational lower, upper;
  bool exact = false;
};

// prod_{d <= B} (1 - q^{-s d})^{-a_d}: exact while the rationals stay small,
// otherwise 512-bit floating point widened outward by a relative 2^-400.
EulerProduct euler_partial_product(const CountProfile& profile, int s, int B);

// Exact value when a polynomial view exists; otherwise the truncated Euler
// product times a tail factor from a_d <= C q^{d dim} / d with C read off the
// enumerated range (heuristic, flagged). Throws DivergentArgument for
// s <= dim.
ZetaValue zeta_value(const CountProfile& profile, int s);

// Sum over choices of distinct closed points of total degree ell of
// prod 1/(q^{s deg P} - 1). Exact; ell = 0 gives 1.
Rational zeta_ell(const CountProfile& profile, int ell, int s);

struct SymTable {
  int n_max = 0;
  std::vector<Integer> total;                 // |Sym^n X(F_q)|
  std::vector<std::vector<Integer>> refined;  // [n][ell], ell <= n
};

// Coefficients of prod_d (1 - t^d)^{-a_d} and of
// prod_d (1 + u^d t^d / (1 - t^d))^{a_d}.
SymTable sym_coefficients(const CountProfile& profile, int n_max);

struct FitOptions {
  // Counts beyond the dim + 1 fit points that must also match.
  int verify_points = 1;
};

// Integer c_b with N_e = sum_{b <= degree} c_b q^{b e}, fitted on the
// first degree + 1 counts and checked on the rest. Tries degrees 0..max_degree.
std::optional<std::vector<PolyTerm>> fit_polynomial(std::uint64_t q, const std::vector<Integer>& counts,
                                                    int max_degree, const FitOptions& options = {});

// Enumerated profile of the given closed points, with a polynomial view
// attached when a fit of degree <= dim validates.
CountProfile profile_from_points(std::uint64_t q, const std::vector<variety::ClosedPoint>& points, int B,
                                 std::optional<int> dim, const FitOptions& options = {});

CountProfile profile_from_scheme(const variety::SchemePresentation& X, int B, const FitOptions& options = {},
                                 const variety::EnumerationOptions& enumeration = {});

// N_e = 1 + T + ... + T^n.
CountProfile projective_space_profile(std::uint64_t q, int n);

std::string to_string(const Rational& r);
// Decimal rendering with `digits` significant places.
std::string to_decimal(const Rational& r, int digits = 12);

}  // namespace ffsieve::zeta
