#pragma once

// Arithmetic in F_p and its extensions F_{p^k}.
//
// Elements are encoded as integer codes: the element sum_i c_i x^i of
// F_p[x]/(modulus) has code sum_i c_i p^i. For p = 2 the code is the bit
// vector of coefficients and addition is XOR. Fields up to 2^20 elements
// carry log/exp tables; larger ones fall back to schoolbook reduction.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ffsieve::gf {

using Code = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 24;

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  int k = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;  // ascending coefficients, monic, size k + 1
  bool canonical = false;

  // Multiplicative tables, indexed by code; exp has length 2(q-1).
  Code primitive = 0;
  std::vector<Code> log;
  std::vector<Code> exp;
  // Addition table for small odd-characteristic fields.
  std::vector<Code> add_table;
  // p^i for i = 0..k.
  std::vector<std::uint32_t> pow_p;

  bool has_tables() const { return !exp.empty(); }
};

}  // namespace detail

class FieldElement;

// Shared, immutable description of a finite field. Copies are cheap and
// compare equal iff (p, k, modulus) agree.
class FieldSpec {
 public:
  FieldSpec() = default;
  explicit FieldSpec(std::shared_ptr<const detail::FieldData> data) : data_(std::move(data)) {}

  bool valid() const { return data_ != nullptr; }
  std::uint32_t p() const { return data_->p; }
  int k() const { return data_->k; }
  std::uint64_t q() const { return data_->q; }
  const std::vector<std::uint32_t>& modulus() const { return data_->modulus; }
  bool canonical() const { return data_->canonical; }
  const detail::FieldData& data() const { return *data_; }

  Code zero() const { return 0; }
  Code one() const { return 1; }
  // Class of x modulo the defining polynomial.
  Code generator() const;
  Code from_int(std::int64_t v) const;

  Code add(Code a, Code b) const {
    if (data_->p == 2) return a ^ b;
    if (!data_->add_table.empty()) return data_->add_table[static_cast<std::size_t>(a) * data_->q + b];
    return add_slow(a, b);
  }
  Code neg(Code a) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    if (data_->has_tables()) return data_->exp[data_->log[a] + data_->log[b]];
    return mul_slow(a, b);
  }
  Code inv(Code a) const;
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, std::uint64_t e) const;
  // a^(p^times).
  Code frobenius(Code a, int times = 1) const;
  // Multiplicative order of a nonzero element.
  std::uint64_t order_of(Code a) const;

  std::vector<std::uint32_t> digits(Code a) const;
  Code from_digits(std::span<const std::uint32_t> digits) const;
  // Integer for prime fields, otherwise a polynomial in `g`, e.g. "g^2+1".
  std::string format(Code a) const;

  FieldElement element(Code c) const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b);

 private:
  Code add_slow(Code a, Code b) const;
  Code mul_slow(Code a, Code b) const;

  std::shared_ptr<const detail::FieldData> data_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldSpec spec, Code code) : spec_(std::move(spec)), code_(code) {}

  const FieldSpec& spec() const { return spec_; }
  Code code() const { return code_; }
  std::vector<std::uint32_t> coeffs() const { return spec_.digits(code_); }
  bool is_zero() const { return code_ == 0; }

  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const { return {spec_, spec_.pow(code_, e)}; }
  // q-power Frobenius relative to the prime field: a -> a^p.
  FieldElement frobenius(int times = 1) const { return {spec_, spec_.frobenius(code_, times)}; }
  std::string to_string() const { return spec_.format(code_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a) { return {a.spec_, a.spec_.neg(a.code_)}; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.code_ == b.code_ && a.spec_ == b.spec_;
  }

 private:
  FieldSpec spec_;
  Code code_ = 0;
};

// Builds (or fetches from the process-wide registry) the field F_{p^k}.
// Without a modulus the canonical one is used: the irreducible monic
// polynomial whose lower coefficients, read as a base-p integer with the
// x^{k-1} coefficient most significant, are smallest.
FieldSpec make_field(std::uint32_t p, int k, std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

// F_{q^e} for q = base.q(), always with the canonical modulus.
FieldSpec extension(const FieldSpec& base, int e);

std::vector<FieldElement> enumerate_field(const FieldSpec& spec);

// Field homomorphism F_{p^k} -> F_{p^K}, k | K. Embeddings among canonical
// fields come from a norm-compatible system of primitive elements, so that
// embedding through an intermediate field gives the same map as embedding
// directly.
class Embedding {
 public:
  Embedding(const FieldSpec& source, const FieldSpec& target);

  const FieldSpec& source() const { return source_; }
  const FieldSpec& target() const { return target_; }
  Code operator()(Code a) const;
  FieldElement operator()(const FieldElement& a) const;

 private:
  FieldSpec source_;
  FieldSpec target_;
  std::vector<Code> basis_images_;  // images of x^i, i < k
  std::vector<Code> table_;         // full lookup for small sources
};

FieldElement embed(const FieldElement& a, const FieldSpec& target);

// Process-wide cache of embeddings; safe to call from several threads.
std::shared_ptr<const Embedding> cached_embedding(const FieldSpec& source, const FieldSpec& target);

bool is_prime(std::uint64_t n);

// Norm-compatible primitive element of the canonical field F_{p^n}.
Code compatible_primitive(const FieldSpec& canonical_field);

}  // namespace ffsieve::gf
