#include "ffsieve/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "ffsieve/error.hpp"

namespace ffsieve::mpoly {

int degree_of(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
  const int da = degree_of(a), db = degree_of(b);
  if (da != db) return da < db;
  return a < b;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::size_t monomial_count(int nvars, int d) {
  if (d < 0) return 0;
  if (nvars == 0) return d == 0 ? 1 : 0;
  return static_cast<std::size_t>(binomial(d + nvars - 1, nvars - 1));
}

namespace {

void fill_monomials(int nvars, int pos, int remaining, Exponents& cur, std::vector<Exponents>& out) {
  if (pos == nvars - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    fill_monomials(nvars, pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<Exponents> monomials_of_degree(int nvars, int d) {
  std::vector<Exponents> out;
  if (d < 0 || nvars <= 0) return out;
  Exponents cur(static_cast<std::size_t>(nvars), 0);
  fill_monomials(nvars, 0, d, cur, out);
  return out;
}

MonomialBasis::MonomialBasis(int nvars, int degree)
    : nvars_(nvars), degree_(degree), monos_(monomials_of_degree(nvars, degree)) {}

std::size_t MonomialBasis::index_of(std::span<const int> e) const {
  std::size_t rank = 0;
  int rem = degree_;
  for (int i = 0; i + 1 < nvars_; ++i) {
    const int ei = e[static_cast<std::size_t>(i)];
    // Monomials agreeing so far but with a larger exponent at position i.
    for (int v = ei + 1; v <= rem; ++v) rank += monomial_count(nvars_ - i - 1, rem - v);
    rem -= ei;
  }
  return rank;
}

MPoly MPoly::constant(const gf::FieldSpec& field, int nvars, gf::Code c) {
  MPoly f(field, nvars);
  f.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
  return f;
}

MPoly MPoly::variable(const gf::FieldSpec& field, int nvars, int i) {
  Exponents e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return monomial(field, std::move(e));
}

MPoly MPoly::monomial(const gf::FieldSpec& field, Exponents e, gf::Code c) {
  MPoly f(field, static_cast<int>(e.size()));
  f.add_term(e, c);
  return f;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
  return d;
}

bool MPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = degree_of(terms_.begin()->first);
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return degree_of(t.first) == d; });
}

gf::FieldElement MPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return field_.element(it == terms_.end() ? 0 : it->second);
}

void MPoly::add_term(const Exponents& e, gf::Code c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = field_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

namespace {
void require_compatible(const MPoly& a, const MPoly& b) {
  if (!(a.field() == b.field()) || a.nvars() != b.nvars())
    throw Error(ErrorKind::SpecMismatch, "mpoly.poly_arith", "operands over different rings");
}
}  // namespace

MPoly operator+(const MPoly& a, const MPoly& b) {
  require_compatible(a, b);
  MPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

MPoly operator-(const MPoly& a) {
  MPoly out(a.field_, a.nvars_);
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, a.field_.neg(c));
  return out;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  require_compatible(a, b);
  MPoly out(a.field_, a.nvars_);
  Exponents e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, a.field_.mul(ca, cb));
    }
  }
  return out;
}

MPoly MPoly::scaled(gf::Code c) const {
  MPoly out(field_, nvars_);
  for (const auto& [e, v] : terms_) out.add_term(e, field_.mul(v, c));
  return out;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result = constant(field_, nvars_, 1);
  MPoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

MPoly MPoly::partial(int i) const {
  MPoly out(field_, nvars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(i)];
    if (k == 0) continue;
    Exponents d = e;
    d[static_cast<std::size_t>(i)] = k - 1;
    out.add_term(d, field_.mul(c, field_.from_int(k)));
  }
  return out;
}

MPoly MPoly::dehomogenize(int chart) const {
  MPoly out(field_, nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[static_cast<std::size_t>(chart)] = 0;
    out.add_term(d, c);
  }
  return out;
}

gf::FieldElement MPoly::evaluate(std::span<const gf::FieldElement> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw Error(ErrorKind::InvalidArgument, "mpoly.evaluate", "point has wrong number of coordinates");
  const gf::FieldSpec& target = point.empty() ? field_ : point[0].spec();
  std::vector<gf::Code> codes;
  for (const auto& x : point) {
    if (!(x.spec() == target)) throw Error(ErrorKind::SpecMismatch, "mpoly.evaluate", "coordinates in different fields");
    codes.push_back(x.code());
  }
  return target.element(PolyEvaluator(*this, target)(codes));
}

std::string MPoly::to_string(const std::vector<std::string>& names_in) const {
  if (terms_.empty()) return "0";
  const auto names = names_in.empty() ? default_names(nvars_) : names_in;
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (int i = 0; i < nvars_; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += names[static_cast<std::size_t>(i)];
      if (k > 1) mono += '^' + std::to_string(k);
    }
    std::string coef = field_.format(c);
    if (coef.find('+') != std::string::npos) coef = '(' + coef + ')';
    if (!first) os << " + ";
    first = false;
    if (mono.empty()) os << coef;
    else if (c == 1) os << mono;
    else os << coef << '*' << mono;
  }
  return os.str();
}

PolyEvaluator::PolyEvaluator(const MPoly& f, const gf::FieldSpec& target)
    : target_(target), nvars_(f.nvars()), max_exp_(static_cast<std::size_t>(f.nvars()), 0) {
  auto emb = gf::cached_embedding(f.field(), target);
  for (const auto& [e, c] : f.terms()) {
    terms_.emplace_back(e, (*emb)(c));
    for (std::size_t i = 0; i < e.size(); ++i) max_exp_[i] = std::max(max_exp_[i], e[i]);
  }
}

gf::Code PolyEvaluator::operator()(std::span<const gf::Code> point) const {
  // powers[i][k] = point[i]^k
  std::vector<std::vector<gf::Code>> powers(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    auto& pw = powers[static_cast<std::size_t>(i)];
    pw.resize(static_cast<std::size_t>(max_exp_[static_cast<std::size_t>(i)]) + 1);
    pw[0] = 1;
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = target_.mul(pw[k - 1], point[static_cast<std::size_t>(i)]);
  }
  gf::Code acc = 0;
  for (const auto& [e, c] : terms_) {
    gf::Code t = c;
    for (std::size_t i = 0; i < e.size() && t != 0; ++i)
      if (e[i] > 0) t = target_.mul(t, powers[i][static_cast<std::size_t>(e[i])]);
    acc = target_.add(acc, t);
  }
  return acc;
}

std::vector<gf::Code> to_dense(const MPoly& f, const MonomialBasis& basis) {
  std::vector<gf::Code> out(basis.size(), 0);
  for (const auto& [e, c] : f.terms()) {
    if (degree_of(e) != basis.degree())
      throw Error(ErrorKind::InvalidArgument, "mpoly.to_dense", "polynomial is not homogeneous of the basis degree");
    out[basis.index_of(e)] = c;
  }
  return out;
}

MPoly from_dense(const gf::FieldSpec& field, const MonomialBasis& basis, std::span<const gf::Code> coeffs) {
  MPoly f(field, basis.nvars());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coeffs[i] != 0) f.add_term(basis[i], coeffs[i]);
  return f;
}

std::vector<std::string> default_names(int nvars) {
  std::vector<std::string> out;
  for (int i = 0; i < nvars; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const gf::FieldSpec& field, const std::vector<std::string>& names)
      : text_(text), field_(field), names_(names), nvars_(static_cast<int>(names.size())) {}

  MPoly parse() {
    MPoly f = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, "mpoly.parse", msg + " at column " + std::to_string(pos_ + 1) + " in \"" +
                                                          std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool starts_primary() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  MPoly expr() {
    MPoly acc(field_, nvars_);
    bool negate = false;
    if (peek('+')) ++pos_;
    else if (peek('-')) {
      ++pos_;
      negate = true;
    }
    MPoly t = term();
    acc = negate ? -t : t;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc = acc + term();
      } else if (peek('-')) {
        ++pos_;
        acc = acc - term();
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly term() {
    MPoly acc = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc = acc * factor();
      } else if (starts_primary()) {
        acc = acc * factor();
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly factor() {
    MPoly base = primary();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const long e = std::stol(std::string(text_.substr(start, pos_ - start)));
      if (e > 10000) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  MPoly primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      const auto p = static_cast<std::int64_t>(field_.p());
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        v = (v * 10 + (text_[pos_++] - '0')) % p;
      return MPoly::constant(field_, nvars_, field_.from_int(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      for (int i = 0; i < nvars_; ++i)
        if (names_[static_cast<std::size_t>(i)] == name) return MPoly::variable(field_, nvars_, i);
      if (name == "g") return MPoly::constant(field_, nvars_, field_.generator());
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const gf::FieldSpec& field_;
  const std::vector<std::string>& names_;
  int nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(std::string_view text, const gf::FieldSpec& field, const std::vector<std::string>& names) {
  return Parser(text, field, names).parse();
}

}  // namespace ffsieve::mpoly
