#include "ffsieve/profile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "ffsieve/error.hpp"

namespace ffsieve::zeta {

std::vector<PolyTerm> normalize(std::vector<PolyTerm> terms) {
  std::map<int, Integer, std::greater<>> acc;
  for (auto& t : terms) acc[t.power] += t.coeff;
  std::vector<PolyTerm> out;
  for (auto& [b, c] : acc)
    if (c != 0) out.push_back({c, b});
  return out;
}

std::string format_terms(const std::vector<PolyTerm>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    Integer c = t.coeff;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    c = abs(c);
    if (t.power == 0) {
      os << c.get_str();
      continue;
    }
    if (c != 1) os << c.get_str() << '*';
    os << 'T';
    if (t.power != 1) os << '^' << t.power;
  }
  return os.str();
}

std::vector<PolyTerm> parse_terms(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorKind::ParseError, "zeta.parse_terms",
                msg + " at column " + std::to_string(pos + 1) + " in \"" + std::string(text) + "\"");
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto integer = [&]() -> std::string {
    skip();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
  };
  std::vector<PolyTerm> out;
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) {
      if (first) fail("empty polynomial");
      break;
    }
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    PolyTerm t{1, 0};
    std::string digits = integer();
    skip();
    bool want_t = digits.empty();
    if (!digits.empty()) {
      t.coeff = Integer(digits);
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        want_t = true;
        skip();
      } else if (pos < text.size() && text[pos] == 'T') {
        want_t = true;
      }
    }
    if (want_t) {
      if (pos >= text.size() || text[pos] != 'T') fail("expected 'T'");
      ++pos;
      t.power = 1;
      skip();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::string e = integer();
        if (e.empty()) fail("expected exponent");
        t.power = std::stoi(e);
      }
    }
    t.coeff *= sign;
    out.push_back(t);
  }
  return normalize(std::move(out));
}

Integer ipow(std::uint64_t base, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

CountProfile CountProfile::empty(std::uint64_t q) { return polynomial(q, {}); }

CountProfile CountProfile::enumerated(std::uint64_t q, std::vector<Integer> a) {
  CountProfile p;
  p.q_ = q;
  p.enumerated_ = true;
  for (const auto& v : a)
    if (v < 0) throw Error(ErrorKind::InvalidArgument, "zeta.profile", "negative closed-point count");
  p.a_ = std::move(a);
  return p;
}

CountProfile CountProfile::polynomial(std::uint64_t q, std::vector<PolyTerm> terms) {
  CountProfile p;
  p.q_ = q;
  p.poly_ = normalize(std::move(terms));
  return p;
}

Integer CountProfile::points(int e) const {
  if (poly_) {
    Integer s = 0;
    for (const auto& t : *poly_) s += t.coeff * ipow(q_, static_cast<unsigned long>(t.power) * static_cast<unsigned long>(e));
    return s;
  }
  if (e > enumerated_bound())
    throw Error(ErrorKind::InsufficientProfile, "zeta.profile", "point count beyond the enumerated range");
  Integer s = 0;
  for (int d = 1; d <= e; ++d)
    if (e % d == 0) s += d * a_[static_cast<std::size_t>(d - 1)];
  return s;
}

Integer CountProfile::closed_points(int d) const {
  if (enumerated_ && d <= enumerated_bound()) return a_[static_cast<std::size_t>(d - 1)];
  if (!poly_) throw Error(ErrorKind::InsufficientProfile, "zeta.profile", "closed-point count beyond the enumerated range");
  Integer s = 0;
  for (int k = 1; k <= d; ++k)
    if (d % k == 0) s += mobius(d / k) * points(k);
  if (s % d != 0) throw Error(ErrorKind::ProfileMismatch, "zeta.profile", "point-count polynomial is not a valid profile");
  return s / d;
}

bool CountProfile::is_empty() const {
  if (poly_) return poly_->empty();
  return std::all_of(a_.begin(), a_.end(), [](const Integer& v) { return v == 0; });
}

void CountProfile::attach_polynomial(std::vector<PolyTerm> terms) {
  auto saved = poly_;
  poly_ = normalize(std::move(terms));
  for (int d = 1; d <= enumerated_bound(); ++d) {
    Integer s = 0;
    for (int k = 1; k <= d; ++k)
      if (d % k == 0) s += mobius(d / k) * points(k);
    if (s != d * a_[static_cast<std::size_t>(d - 1)]) {
      auto bad = format_terms(*poly_);
      poly_ = saved;
      throw Error(ErrorKind::ProfileMismatch, "zeta.profile",
                  "declared point count " + bad + " disagrees with enumeration at degree " + std::to_string(d));
    }
  }
}

std::optional<int> CountProfile::polynomial_degree() const {
  if (!poly_) return std::nullopt;
  return poly_->empty() ? -1 : poly_->front().power;
}

CountProfile CountProfile::minus(const CountProfile& sub) const {
  if (q_ != sub.q_) throw Error(ErrorKind::SpecMismatch, "zeta.profile", "profiles over different fields");
  CountProfile out;
  out.q_ = q_;
  if (poly_ && sub.poly_) {
    auto terms = *poly_;
    for (auto t : *sub.poly_) {
      t.coeff = -t.coeff;
      terms.push_back(t);
    }
    out.poly_ = normalize(std::move(terms));
  }
  int bound = -1;
  if (!poly_) bound = enumerated_bound();
  if (!sub.poly_) bound = bound < 0 ? sub.enumerated_bound() : std::min(bound, sub.enumerated_bound());
  if (bound < 0) bound = std::max(enumerated_bound(), sub.enumerated_bound());
  if (bound > 0) {
    out.enumerated_ = true;
    for (int d = 1; d <= bound; ++d) {
      Integer v = closed_points(d) - sub.closed_points(d);
      if (v < 0) throw Error(ErrorKind::ProfileMismatch, "zeta.profile", "subtracted profile is not a subscheme count");
      out.a_.push_back(v);
    }
  }
  return out;
}

}  // namespace ffsieve::zeta
