#include "ffsieve/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ffsieve/error.hpp"

namespace ffsieve::zeta {

Rational rational_pow(std::uint64_t q, long e) {
  Integer m = ipow(q, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), m) : Rational(m);
}

namespace {

Rational one_minus_inverse_power(std::uint64_t q, long e) {
  // 1 - q^{-e} = (q^e - 1) / q^e, e > 0.
  Integer m = ipow(q, static_cast<unsigned long>(e));
  Rational r(m - 1, m);
  r.canonicalize();
  return r;
}

Rational pow_rational(const Rational& base, Integer exponent) {
  Rational b = base;
  if (exponent < 0) {
    b = 1 / b;
    exponent = -exponent;
  }
  Rational out = 1;
  mpz_class n = exponent;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) out *= b;
    b *= b;
    n >>= 1;
  }
  return out;
}

std::optional<int> effective_dim(const CountProfile& profile) {
  std::optional<int> dim = profile.declared_dim;
  if (auto deg = profile.polynomial_degree()) dim = std::max(dim.value_or(-1), *deg);
  if (!dim && profile.has_enumerated()) {
    std::vector<Integer> N;
    for (int e = 1; e <= profile.enumerated_bound(); ++e) N.push_back(profile.points(e));
    dim = variety::growth_dimension(N, profile.q());
  }
  return dim;
}

Integer binomial(const Integer& n, unsigned long k) {
  if (n < 0) return 0;
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

}  // namespace

EulerProduct euler_partial_product(const CountProfile& profile, int s, int B) {
  // Bit size of the exact product is about sum_d a_d * s * d * log2(q).
  double bits = 0;
  const double lq = std::log2(static_cast<double>(profile.q()));
  for (int d = 1; d <= B; ++d) bits += profile.closed_points(d).get_d() * s * d * lq;
  EulerProduct out;
  if (bits < 65536) {
    Rational v = 1;
    for (int d = 1; d <= B; ++d) {
      Integer a = profile.closed_points(d);
      if (a != 0) v *= pow_rational(one_minus_inverse_power(profile.q(), static_cast<long>(s) * d), -a);
    }
    out.lower = out.upper = v;
    out.exact = true;
    return out;
  }
  constexpr mp_bitcnt_t kPrec = 512;
  mpf_class v(1, kPrec);
  for (int d = 1; d <= B; ++d) {
    Integer a = profile.closed_points(d);
    if (a == 0) continue;
    mpf_class f(one_minus_inverse_power(profile.q(), static_cast<long>(s) * d), kPrec);
    mpf_class inv(1, kPrec);
    inv /= f;
    mpf_class pw(1, kPrec);
    mpf_class base = inv;
    for (Integer n = a; n > 0; n >>= 1) {
      if (mpz_odd_p(n.get_mpz_t())) pw *= base;
      base *= base;
    }
    v *= pw;
  }
  Rational center(v);
  const Rational eps(Integer(1), Integer(1) << 400);
  out.lower = center * (1 - eps);
  out.upper = center * (1 + eps);
  return out;
}

ZetaValue zeta_value(const CountProfile& profile, int s) {
  ZetaValue z;
  z.s = s;
  const auto dim = effective_dim(profile);
  if (dim && *dim >= 0 && s <= *dim)
    throw Error(ErrorKind::DivergentArgument, "zeta.zeta_value",
                "s = " + std::to_string(s) + " does not exceed dim = " + std::to_string(*dim));
  if (profile.has_polynomial()) {
    Rational v = 1;
    for (const auto& t : profile.terms())
      v *= pow_rational(one_minus_inverse_power(profile.q(), s - t.power), -t.coeff);
    z.exact = v;
    z.lower = v;
    z.upper = v;
    return z;
  }
  const int B = profile.enumerated_bound();
  const auto product = euler_partial_product(profile, s, B);
  z.lower = product.lower;
  if (profile.is_empty()) {
    // Nothing enumerated; the tail bound below still applies unless the
    // dimension is unknown.
    if (!dim) {
      z.upper = z.lower;
      z.flags.push_back("no points through the enumerated range; tail assumed empty");
      z.heuristic_tail = true;
      return z;
    }
  }
  if (!dim) {
    z.flags.push_back("dimension unknown; no tail bound");
    z.heuristic_tail = true;
    return z;
  }
  // a_d <= C q^{d dim} / d for d > B, with C the largest ratio seen (at
  // least 1, the leading coefficient of a geometrically irreducible
  // top-dimensional part). Then log(tail) <= T with
  // T = C/(B+1) * x^{B+1} / ((1 - x)(1 - q^{-s(B+1)})), x = q^{dim - s},
  // and exp(T) <= 1/(1 - T) for T < 1.
  Rational C = 1;
  for (int d = 1; d <= B; ++d) {
    Rational ratio(profile.closed_points(d) * d, ipow(profile.q(), static_cast<unsigned long>(d) * std::max(*dim, 0)));
    ratio.canonicalize();
    C = std::max(C, ratio);
  }
  const Rational x = rational_pow(profile.q(), static_cast<long>(std::max(*dim, 0)) - s);
  Rational T = C / (B + 1) * pow_rational(x, B + 1) /
               ((1 - x) * one_minus_inverse_power(profile.q(), static_cast<long>(s) * (B + 1)));
  z.heuristic_tail = true;
  z.flags.push_back("tail bound uses a constant read off degrees <= " + std::to_string(B));
  if (T < 1) z.upper = product.upper / (1 - T);
  return z;
}

Rational zeta_ell(const CountProfile& profile, int ell, int s) {
  if (ell < 0) throw Error(ErrorKind::InvalidArgument, "zeta.zeta_ell", "ell must be non-negative");
  if (!profile.exact_through(ell))
    throw Error(ErrorKind::InsufficientProfile, "zeta.zeta_ell",
                "need closed-point counts through degree " + std::to_string(ell));
  std::vector<Integer> a(static_cast<std::size_t>(ell) + 1);
  std::vector<Rational> w(static_cast<std::size_t>(ell) + 1);
  for (int d = 1; d <= ell; ++d) {
    a[static_cast<std::size_t>(d)] = profile.closed_points(d);
    Rational r(Integer(1), ipow(profile.q(), static_cast<unsigned long>(s) * static_cast<unsigned long>(d)) - 1);
    r.canonicalize();
    w[static_cast<std::size_t>(d)] = r;
  }
  // table[j] = contribution of degrees < d with total j; add degree d with
  // multiplicity m: C(a_d, m) w_d^m.
  std::vector<Rational> table(static_cast<std::size_t>(ell) + 1, 0);
  table[0] = 1;
  for (int d = 1; d <= ell; ++d) {
    std::vector<Rational> next(table.size(), 0);
    for (int j = 0; j <= ell; ++j) {
      if (table[static_cast<std::size_t>(j)] == 0) continue;
      Rational wm = 1;
      for (int m = 0; j + m * d <= ell; ++m) {
        Integer c = binomial(a[static_cast<std::size_t>(d)], static_cast<unsigned long>(m));
        if (c == 0) break;
        next[static_cast<std::size_t>(j + m * d)] += table[static_cast<std::size_t>(j)] * c * wm;
        wm *= w[static_cast<std::size_t>(d)];
      }
    }
    table = std::move(next);
  }
  return table[static_cast<std::size_t>(ell)];
}

SymTable sym_coefficients(const CountProfile& profile, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "zeta.sym_coefficients", "n_max must be non-negative");
  if (!profile.exact_through(n_max))
    throw Error(ErrorKind::InsufficientProfile, "zeta.sym_coefficients",
                "need closed-point counts through degree " + std::to_string(n_max));
  const auto N = static_cast<std::size_t>(n_max) + 1;
  SymTable out;
  out.n_max = n_max;
  out.total.assign(N, 0);
  out.total[0] = 1;
  out.refined.assign(N, std::vector<Integer>(N, 0));
  out.refined[0][0] = 1;
  for (int d = 1; d <= n_max; ++d) {
    const Integer a = profile.closed_points(d);
    if (a == 0) continue;
    // (1 - t^d)^{-a} = sum_k C(a + k - 1, k) t^{dk}.
    std::vector<Integer> next(N, 0);
    for (int n = 0; n <= n_max; ++n) {
      if (out.total[static_cast<std::size_t>(n)] == 0) continue;
      for (int k = 0; n + k * d <= n_max; ++k)
        next[static_cast<std::size_t>(n + k * d)] +=
            out.total[static_cast<std::size_t>(n)] * binomial(a + k - 1, static_cast<unsigned long>(k));
    }
    out.total = std::move(next);
    // (1 + u^d t^d/(1 - t^d))^a = sum_j C(a, j) u^{dj} sum_i C(i + j - 1, j - 1) t^{d(i + j)}.
    std::vector<std::vector<Integer>> grid(N, std::vector<Integer>(N, 0));
    for (int n = 0; n <= n_max; ++n)
      for (int l = 0; l <= n; ++l) {
        const Integer& base = out.refined[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
        if (base == 0) continue;
        grid[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)] += base;
        for (int j = 1; n + j * d <= n_max; ++j) {
          const Integer cj = binomial(a, static_cast<unsigned long>(j));
          if (cj == 0) break;
          for (int i = 0; n + (i + j) * d <= n_max; ++i)
            grid[static_cast<std::size_t>(n + (i + j) * d)][static_cast<std::size_t>(l + j * d)] +=
                base * cj * binomial(Integer(i + j - 1), static_cast<unsigned long>(j - 1));
        }
      }
    out.refined = std::move(grid);
  }
  return out;
}

std::optional<std::vector<PolyTerm>> fit_polynomial(std::uint64_t q, const std::vector<Integer>& counts,
                                                    int max_degree, const FitOptions& options) {
  for (int D = 0; D <= max_degree; ++D) {
    const int need = D + 1;
    if (static_cast<int>(counts.size()) < need + options.verify_points) break;
    // Rows e = 1..D+1, columns b = 0..D, entries q^{b e}.
    std::vector<std::vector<Rational>> m(static_cast<std::size_t>(need), std::vector<Rational>(static_cast<std::size_t>(need) + 1));
    for (int e = 1; e <= need; ++e) {
      for (int b = 0; b <= D; ++b)
        m[static_cast<std::size_t>(e - 1)][static_cast<std::size_t>(b)] =
            Rational(ipow(q, static_cast<unsigned long>(b) * static_cast<unsigned long>(e)));
      m[static_cast<std::size_t>(e - 1)][static_cast<std::size_t>(need)] = Rational(counts[static_cast<std::size_t>(e - 1)]);
    }
    // Vandermonde in distinct nodes q^b: nonsingular.
    for (int c = 0; c < need; ++c) {
      int pr = c;
      while (m[static_cast<std::size_t>(pr)][static_cast<std::size_t>(c)] == 0) ++pr;
      std::swap(m[static_cast<std::size_t>(pr)], m[static_cast<std::size_t>(c)]);
      const Rational piv = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      for (auto& v : m[static_cast<std::size_t>(c)]) v /= piv;
      for (int r = 0; r < need; ++r) {
        if (r == c) continue;
        const Rational f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        if (f == 0) continue;
        for (int k = c; k <= need; ++k)
          m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      }
    }
    std::vector<PolyTerm> terms;
    bool integral = true;
    for (int b = 0; b <= D; ++b) {
      const Rational& c = m[static_cast<std::size_t>(b)][static_cast<std::size_t>(need)];
      if (c.get_den() != 1) {
        integral = false;
        break;
      }
      terms.push_back({c.get_num(), b});
    }
    if (!integral) continue;
    auto candidate = CountProfile::polynomial(q, terms);
    bool ok = true;
    for (std::size_t e = 1; e <= counts.size() && ok; ++e) ok = candidate.points(static_cast<int>(e)) == counts[e - 1];
    if (ok) return candidate.terms();
  }
  return std::nullopt;
}

CountProfile profile_from_points(std::uint64_t q, const std::vector<variety::ClosedPoint>& points, int B,
                                 std::optional<int> dim, const FitOptions& options) {
  auto profile = CountProfile::enumerated(q, variety::degree_counts(points, B));
  profile.declared_dim = dim;
  std::vector<Integer> N;
  for (int e = 1; e <= B; ++e) N.push_back(profile.points(e));
  const int max_degree = dim.value_or(B - 1 - options.verify_points);
  if (auto terms = fit_polynomial(q, N, max_degree, options)) profile.attach_polynomial(*terms);
  return profile;
}

CountProfile profile_from_scheme(const variety::SchemePresentation& X, int B, const FitOptions& options,
                                 const variety::EnumerationOptions& enumeration) {
  return profile_from_points(X.field.q(), variety::enumerate_closed_points(X, B, enumeration), B, X.declared_dim,
                             options);
}

CountProfile projective_space_profile(std::uint64_t q, int n) {
  std::vector<PolyTerm> terms;
  for (int b = 0; b <= n; ++b) terms.push_back({1, b});
  auto p = CountProfile::polynomial(q, terms);
  p.declared_dim = n;
  return p;
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

std::string to_decimal(const Rational& r, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, r.get_d());
  return buf;
}

}  // namespace ffsieve::zeta
