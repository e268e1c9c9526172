#include "ffsieve/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "ffsieve/error.hpp"

namespace ffsieve::gf {

namespace {

using Poly = std::vector<std::uint32_t>;  // ascending coefficients over F_p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  const std::size_t deg_m = m.size() - 1;
  // m is monic.
  for (std::size_t i = r.size(); i-- > deg_m;) {
    const std::uint64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg_m; ++j) r[i - deg_m + j] = (r[i - deg_m + j] + (p - c) * m[j]) % p;
  }
  Poly out(std::min(r.size(), deg_m));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint32_t>(r[i]);
  trim(out);
  return out;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly result{1};
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  Poly mm = m;
  trim(mm);
  const std::uint32_t lead_inv = inv_mod(mm.back(), p);
  while (a.size() >= mm.size()) {
    const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - mm.size();
    for (std::size_t j = 0; j < mm.size(); ++j)
      a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + (p - c) * mm[j]) % p);
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin-style test: m has no factor of degree i <= k/2 iff
// gcd(x^{p^i} - x, m) = 1 for each such i.
bool is_irreducible(const Poly& m, std::uint32_t p) {
  const int k = static_cast<int>(m.size()) - 1;
  if (k < 1) return false;
  if (k == 1) return true;
  Poly x_pow{0, 1};
  for (int i = 1; i <= k / 2; ++i) {
    x_pow = poly_powmod(x_pow, p, m, p);
    Poly diff = x_pow;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;  // x^{p^i} = x mod m: m has a factor of degree dividing i
    Poly g = poly_gcd(diff, m, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

Poly canonical_modulus(std::uint32_t p, int k) {
  const std::uint64_t count = ipow(p, k);
  for (std::uint64_t c = 0; c < count; ++c) {
    Poly m(static_cast<std::size_t>(k) + 1, 0);
    std::uint64_t v = c;
    for (int i = 0; i < k; ++i) {
      m[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    m[static_cast<std::size_t>(k)] = 1;
    if (is_irreducible(m, p)) return m;
  }
  throw Error(ErrorKind::ReducibleModulus, "gf.make_field", "no irreducible polynomial found");
}

using RegistryKey = std::tuple<std::uint32_t, int, Poly>;

std::recursive_mutex& registry_mutex() {
  static std::recursive_mutex m;
  return m;
}

std::map<RegistryKey, std::shared_ptr<const detail::FieldData>>& registry() {
  static std::map<RegistryKey, std::shared_ptr<const detail::FieldData>> r;
  return r;
}

// Smallest-code root in `field` of a polynomial with F_p coefficients.
Code smallest_root(const FieldSpec& field, const Poly& f) {
  for (std::uint64_t c = 0; c < field.q(); ++c) {
    const Code x = static_cast<Code>(c);
    Code acc = 0;
    for (std::size_t j = f.size(); j-- > 0;) acc = field.add(field.mul(acc, x), field.from_int(f[j]));
    if (acc == 0) return x;
  }
  throw Error(ErrorKind::IncompatibleFields, "gf.embed", "polynomial has no root in target field");
}

// Minimal polynomial over F_p of a, computed from its Frobenius orbit.
Poly minimal_polynomial(const FieldSpec& field, Code a) {
  std::vector<Code> conj{a};
  for (Code c = field.frobenius(a); c != a; c = field.frobenius(c)) conj.push_back(c);
  std::vector<Code> poly{field.one()};
  for (Code root : conj) {
    std::vector<Code> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = field.add(next[i + 1], poly[i]);
      next[i] = field.sub(next[i], field.mul(poly[i], root));
    }
    poly = std::move(next);
  }
  Poly out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) out[i] = field.digits(poly[i])[0];
  return out;
}

Code search_compatible_primitive(const FieldSpec& field) {
  const std::uint32_t p = field.p();
  const int n = field.k();
  const std::uint64_t q = field.q();
  if (q == 2) return 1;

  struct SubCondition {
    std::uint64_t exponent;
    Poly minpoly;
  };
  std::vector<SubCondition> conditions;
  for (std::uint64_t r : distinct_prime_factors(static_cast<std::uint64_t>(n))) {
    const int sub = n / static_cast<int>(r);
    FieldSpec sub_field = make_field(p, sub);
    const Code sub_pi = compatible_primitive(sub_field);
    conditions.push_back({(q - 1) / (ipow(p, sub) - 1), minimal_polynomial(sub_field, sub_pi)});
  }

  for (std::uint64_t c = 2; c < q; ++c) {
    const Code cand = static_cast<Code>(c);
    if (field.order_of(cand) != q - 1) continue;
    bool ok = true;
    for (const auto& cond : conditions) {
      const Code y = field.pow(cand, cond.exponent);
      Code acc = 0;
      for (std::size_t j = cond.minpoly.size(); j-- > 0;)
        acc = field.add(field.mul(acc, y), field.from_int(cond.minpoly[j]));
      if (acc != 0) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  throw Error(ErrorKind::InvalidArgument, "gf.compatible_primitive", "no compatible primitive element");
}

Code smallest_primitive(const FieldSpec& field) {
  if (field.q() == 2) return 1;
  for (std::uint64_t c = 1; c < field.q(); ++c)
    if (field.order_of(static_cast<Code>(c)) == field.q() - 1) return static_cast<Code>(c);
  throw Error(ErrorKind::InvalidArgument, "gf.make_field", "no primitive element");
}

std::shared_ptr<detail::FieldData> base_data(std::uint32_t p, int k, Poly modulus, bool canonical) {
  auto d = std::make_shared<detail::FieldData>();
  d->p = p;
  d->k = k;
  d->q = static_cast<std::uint32_t>(ipow(p, k));
  d->modulus = std::move(modulus);
  d->canonical = canonical;
  d->pow_p.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) d->pow_p[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(ipow(p, i));
  if (p != 2 && d->q <= 1024) {
    FieldSpec tmp(d);
    std::vector<Code> table(static_cast<std::size_t>(d->q) * d->q);
    for (Code a = 0; a < d->q; ++a)
      for (Code b = 0; b < d->q; ++b) table[static_cast<std::size_t>(a) * d->q + b] = tmp.add(a, b);
    d->add_table = std::move(table);
  }
  return d;
}

void build_tables(detail::FieldData& d, Code primitive) {
  FieldSpec slow(std::shared_ptr<const detail::FieldData>(&d, [](const detail::FieldData*) {}));
  const std::uint32_t q = d.q;
  std::vector<Code> log(q, 0), exp(2 * static_cast<std::size_t>(q - 1) + 1, 0);
  Code x = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    exp[i] = x;
    log[x] = i;
    x = slow.mul(x, primitive);
  }
  for (std::size_t i = q - 1; i < exp.size(); ++i) exp[i] = exp[i - (q - 1)];
  d.log = std::move(log);
  d.exp = std::move(exp);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Code FieldSpec::generator() const {
  if (data_->k == 1) return (data_->p - data_->modulus[0]) % data_->p;
  return data_->p;
}

Code FieldSpec::from_int(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(data_->p);
  return static_cast<Code>(((v % p) + p) % p);
}

Code FieldSpec::add_slow(Code a, Code b) const {
  const std::uint32_t p = data_->p;
  Code out = 0;
  for (int i = 0; i < data_->k; ++i) {
    const std::uint32_t pw = data_->pow_p[static_cast<std::size_t>(i)];
    const std::uint32_t da = (a / pw) % p, db = (b / pw) % p;
    out += ((da + db) % p) * pw;
  }
  return out;
}

Code FieldSpec::neg(Code a) const {
  const std::uint32_t p = data_->p;
  if (p == 2) return a;
  Code out = 0;
  for (int i = 0; i < data_->k; ++i) {
    const std::uint32_t pw = data_->pow_p[static_cast<std::size_t>(i)];
    out += ((p - (a / pw) % p) % p) * pw;
  }
  return out;
}

Code FieldSpec::mul_slow(Code a, Code b) const {
  const auto& d = *data_;
  if (d.p == 2) {
    std::uint64_t r = 0;
    for (int i = 0; i < d.k; ++i)
      if ((b >> i) & 1U) r ^= std::uint64_t{a} << i;
    std::uint64_t m = 0;
    for (int i = 0; i <= d.k; ++i)
      if (d.modulus[static_cast<std::size_t>(i)]) m |= std::uint64_t{1} << i;
    for (int i = 2 * d.k - 2; i >= d.k; --i)
      if ((r >> i) & 1U) r ^= m << (i - d.k);
    return static_cast<Code>(r);
  }
  const Poly da = digits(a), db = digits(b);
  Poly prod = poly_mulmod(da, db, d.modulus, d.p);
  prod.resize(static_cast<std::size_t>(d.k), 0);
  return from_digits(prod);
}

Code FieldSpec::inv(Code a) const {
  if (a == 0) throw Error(ErrorKind::DivisionByZero, "gf.field_ops", "inverse of zero");
  if (data_->has_tables()) return data_->exp[(data_->q - 1) - data_->log[a]];
  return pow(a, data_->q - 2);
}

Code FieldSpec::pow(Code a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (data_->has_tables()) {
    const std::uint64_t order = data_->q - 1;
    return data_->exp[(std::uint64_t{data_->log[a]} * (e % order)) % order];
  }
  Code result = 1, base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Code FieldSpec::frobenius(Code a, int times) const {
  const int t = ((times % data_->k) + data_->k) % data_->k;
  return pow(a, ipow(data_->p, t));
}

std::uint64_t FieldSpec::order_of(Code a) const {
  if (a == 0) throw Error(ErrorKind::DivisionByZero, "gf.order_of", "zero has no multiplicative order");
  std::uint64_t order = data_->q - 1;
  for (std::uint64_t r : distinct_prime_factors(order)) {
    while (order % r == 0 && pow(a, order / r) == 1) order /= r;
  }
  return order;
}

std::vector<std::uint32_t> FieldSpec::digits(Code a) const {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(data_->k));
  for (int i = 0; i < data_->k; ++i) {
    out[static_cast<std::size_t>(i)] = a % data_->p;
    a /= data_->p;
  }
  return out;
}

Code FieldSpec::from_digits(std::span<const std::uint32_t> digits) const {
  Code out = 0;
  for (std::size_t i = digits.size(); i-- > 0;) out = out * data_->p + (digits[i] % data_->p);
  return out;
}

std::string FieldSpec::format(Code a) const {
  if (data_->k == 1) return std::to_string(a);
  if (a == 0) return "0";
  const auto ds = digits(a);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = ds.size(); i-- > 0;) {
    if (ds[i] == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << ds[i];
      continue;
    }
    if (ds[i] != 1) os << ds[i] << '*';
    os << 'g';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

FieldElement FieldSpec::element(Code c) const { return {*this, c}; }

bool operator==(const FieldSpec& a, const FieldSpec& b) {
  if (a.data_ == b.data_) return true;
  if (!a.data_ || !b.data_) return false;
  return a.data_->p == b.data_->p && a.data_->k == b.data_->k && a.data_->modulus == b.data_->modulus;
}

namespace {
void require_same(const FieldElement& a, const FieldElement& b) {
  if (!(a.spec() == b.spec())) throw Error(ErrorKind::SpecMismatch, "gf.field_ops", "operands in different fields");
}
}  // namespace

FieldElement FieldElement::inv() const { return {spec_, spec_.inv(code_)}; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.add(a.code_, b.code_)};
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.sub(a.code_, b.code_)};
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.mul(a.code_, b.code_)};
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.div(a.code_, b.code_)};
}

FieldSpec make_field(std::uint32_t p, int k, std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrimeP, "gf.make_field", std::to_string(p) + " is not prime");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "gf.make_field", "extension degree must be >= 1");
  if (ipow(p, 1) > kMaxFieldOrder || k > 24 || ipow(p, k) > kMaxFieldOrder)
    throw Error(ErrorKind::FieldTooLarge, "gf.make_field",
                "field order " + std::to_string(p) + "^" + std::to_string(k) + " exceeds 2^24");

  std::lock_guard lock(registry_mutex());
  static std::map<std::pair<std::uint32_t, int>, Poly> canonical_cache;
  auto [cit, inserted] = canonical_cache.try_emplace({p, k});
  if (inserted) cit->second = canonical_modulus(p, k);
  const Poly canon = cit->second;
  Poly mod = canon;
  if (modulus) {
    mod = *modulus;
    for (auto& c : mod) c %= p;
    if (mod.size() != static_cast<std::size_t>(k) + 1 || mod.back() != 1)
      throw Error(ErrorKind::ReducibleModulus, "gf.make_field", "modulus must be monic of degree k");
    if (!is_irreducible(mod, p))
      throw Error(ErrorKind::ReducibleModulus, "gf.make_field", "modulus is reducible over F_p");
  }
  RegistryKey key{p, k, mod};
  auto& reg = registry();
  if (auto it = reg.find(key); it != reg.end()) return FieldSpec(it->second);

  const bool canonical = (mod == canon);
  auto data = base_data(p, k, mod, canonical);
  {
    FieldSpec slow(data);
    data->primitive = canonical ? search_compatible_primitive(slow) : smallest_primitive(slow);
  }
  if (data->q <= (1U << 20)) build_tables(*data, data->primitive);
  std::shared_ptr<const detail::FieldData> frozen = data;
  reg.emplace(key, frozen);
  return FieldSpec(frozen);
}

FieldSpec extension(const FieldSpec& base, int e) { return make_field(base.p(), base.k() * e); }

Code compatible_primitive(const FieldSpec& field) {
  if (!field.canonical())
    throw Error(ErrorKind::InvalidArgument, "gf.compatible_primitive", "field does not use the canonical modulus");
  return field.data().primitive;
}

std::vector<FieldElement> enumerate_field(const FieldSpec& spec) {
  std::vector<FieldElement> out;
  out.reserve(spec.q());
  for (std::uint64_t c = 0; c < spec.q(); ++c) out.emplace_back(spec, static_cast<Code>(c));
  return out;
}

namespace {

Code apply_linear(const FieldSpec& src, const FieldSpec& dst, const std::vector<Code>& images, Code a) {
  const auto ds = src.digits(a);
  Code out = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds[i] != 0) out = dst.add(out, dst.mul(dst.from_int(ds[i]), images[i]));
  return out;
}

// Discrete log of a w.r.t. the field's table primitive.
std::uint64_t log_wrt_primitive(const FieldSpec& f, Code a) {
  if (f.data().has_tables()) return f.data().log[a];
  Code x = 1;
  for (std::uint64_t t = 0; t < f.q() - 1; ++t) {
    if (x == a) return t;
    x = f.mul(x, f.data().primitive);
  }
  throw Error(ErrorKind::InvalidArgument, "gf.embed", "element not a power of the primitive element");
}

// Images of x^i (i < k) for canonical F_{p^k} -> canonical F_{p^K}.
std::vector<Code> canonical_images(const FieldSpec& src, const FieldSpec& dst) {
  const int k = src.k();
  std::vector<Code> images(static_cast<std::size_t>(k));
  if (k == 1) {
    images[0] = 1;
    return images;
  }
  const std::uint64_t exponent = (dst.q() - 1) / (src.q() - 1);
  const Code pi_image = dst.pow(compatible_primitive(dst), exponent);
  const Code alpha_image = dst.pow(pi_image, log_wrt_primitive(src, src.generator()));
  Code x = 1;
  for (int i = 0; i < k; ++i) {
    images[static_cast<std::size_t>(i)] = x;
    x = dst.mul(x, alpha_image);
  }
  return images;
}

// Solves the k x k system over F_p mapping F's basis back to the canonical field.
std::vector<Code> invert_iso(const FieldSpec& canon, const FieldSpec& field, const std::vector<Code>& images) {
  const int k = canon.k();
  const std::uint32_t p = canon.p();
  // Augmented matrix: columns = digits of images (as vectors in field), then identity.
  std::vector<std::vector<std::uint32_t>> m(static_cast<std::size_t>(k), std::vector<std::uint32_t>(2 * static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i) {
    const auto ds = field.digits(images[static_cast<std::size_t>(i)]);
    for (int r = 0; r < k; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = ds[static_cast<std::size_t>(r)];
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k + i)] = 1;
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    while (m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)] == 0) ++piv;
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(col)]);
    const std::uint64_t inv = inv_mod(m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)], p);
    for (auto& v : m[static_cast<std::size_t>(col)]) v = static_cast<std::uint32_t>(v * inv % p);
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const std::uint64_t c = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (c == 0) continue;
      for (int j = 0; j < 2 * k; ++j)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
            static_cast<std::uint32_t>((m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] + (p - c) * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)]) % p);
    }
  }
  // Column j of the inverse gives the canonical coordinates of field's x^j.
  std::vector<Code> back(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    std::vector<std::uint32_t> coords(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) coords[static_cast<std::size_t>(r)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k + j)];
    back[static_cast<std::size_t>(j)] = canon.from_digits(coords);
  }
  return back;
}

std::vector<Code> iso_from_canonical(const FieldSpec& canon, const FieldSpec& field) {
  const Code rho = smallest_root(field, canon.modulus());
  std::vector<Code> images(static_cast<std::size_t>(canon.k()));
  Code x = 1;
  for (auto& img : images) {
    img = x;
    x = field.mul(x, rho);
  }
  return images;
}

}  // namespace

Embedding::Embedding(const FieldSpec& source, const FieldSpec& target) : source_(source), target_(target) {
  if (source.p() != target.p() || target.k() % source.k() != 0)
    throw Error(ErrorKind::IncompatibleFields, "gf.embed",
                "F_" + std::to_string(source.q()) + " does not embed in F_" + std::to_string(target.q()));
  const int k = source.k();
  basis_images_.resize(static_cast<std::size_t>(k));
  if (source == target) {
    Code x = 1;
    for (auto& img : basis_images_) {
      img = x;
      x = target.mul(x, target.generator());
    }
  } else {
    const FieldSpec csrc = make_field(source.p(), k);
    const FieldSpec cdst = make_field(target.p(), target.k());
    const auto can = canonical_images(csrc, cdst);
    std::vector<Code> to_can;
    if (!source.canonical()) to_can = invert_iso(csrc, source, iso_from_canonical(csrc, source));
    std::vector<Code> from_can;
    if (!target.canonical()) from_can = iso_from_canonical(cdst, target);
    Code x = 1;
    for (int i = 0; i < k; ++i) {
      Code c = source.canonical() ? x : apply_linear(source, csrc, to_can, x);
      c = apply_linear(csrc, cdst, can, c);
      if (!target.canonical()) c = apply_linear(cdst, target, from_can, c);
      basis_images_[static_cast<std::size_t>(i)] = c;
      x = (k == 1) ? x : source.mul(x, source.generator());
    }
  }
  if (source.q() <= 4096) {
    table_.resize(source.q());
    for (std::uint64_t c = 0; c < source.q(); ++c)
      table_[c] = apply_linear(source_, target_, basis_images_, static_cast<Code>(c));
  }
}

Code Embedding::operator()(Code a) const {
  if (!table_.empty()) return table_[a];
  return apply_linear(source_, target_, basis_images_, a);
}

FieldElement Embedding::operator()(const FieldElement& a) const {
  if (!(a.spec() == source_)) throw Error(ErrorKind::SpecMismatch, "gf.embed", "element not in embedding source");
  return {target_, (*this)(a.code())};
}

FieldElement embed(const FieldElement& a, const FieldSpec& target) { return (*cached_embedding(a.spec(), target))(a); }

std::shared_ptr<const Embedding> cached_embedding(const FieldSpec& source, const FieldSpec& target) {
  static std::mutex mutex;
  static std::map<std::pair<const detail::FieldData*, const detail::FieldData*>, std::shared_ptr<const Embedding>> cache;
  const auto key = std::make_pair(&source.data(), &target.data());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto emb = std::make_shared<const Embedding>(source, target);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(emb)).first->second;
}

}  // namespace ffsieve::gf
