#include <algorithm>
#include <vector>

#include "doctest.h"
#include "ffsieve/error.hpp"
#include "ffsieve/gf.hpp"

using namespace ffsieve;
using namespace ffsieve::gf;

namespace {

// Root-free check by exhaustion: a monic quadratic or cubic over F_p is
// irreducible iff it has no root in F_p.
bool has_root(const std::vector<std::uint32_t>& m, std::uint32_t p) {
  for (std::uint32_t x = 0; x < p; ++x) {
    std::uint64_t acc = 0;
    for (std::size_t j = m.size(); j-- > 0;) acc = (acc * x + m[j]) % p;
    if (acc == 0) return true;
  }
  return false;
}

std::vector<std::uint32_t> prime_powers_upto(std::uint64_t bound, std::vector<std::pair<std::uint32_t, int>>& out) {
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 2; p <= bound; ++p)
    if (is_prime(p)) primes.push_back(p);
  for (auto p : primes) {
    std::uint64_t q = p;
    for (int k = 1; q <= bound; ++k, q *= p) out.emplace_back(p, k);
  }
  return primes;
}

}  // namespace

TEST_CASE("make_field builds prime fields and small extensions") {
  auto f2 = make_field(2, 1);
  CHECK(f2.q() == 2);
  CHECK(enumerate_field(f2).size() == 2);

  auto f4 = make_field(2, 2, std::vector<std::uint32_t>{1, 1, 1});
  CHECK(f4.q() == 4);
  CHECK(f4.canonical());

  // Oracle: minimum over monic quadratics without roots, ordered by the
  // base-p integer of (c1, c0) with c1 most significant.
  std::vector<std::uint32_t> best;
  for (std::uint32_t c1 = 0; c1 < 3 && best.empty(); ++c1)
    for (std::uint32_t c0 = 0; c0 < 3 && best.empty(); ++c0)
      if (!has_root({c0, c1, 1}, 3)) best = {c0, c1, 1};
  auto f9 = make_field(3, 2);
  CHECK(f9.modulus() == best);
  CHECK(f9.modulus() == std::vector<std::uint32_t>{1, 0, 1});

  auto f8 = make_field(2, 3);
  CHECK(f8.modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
}

TEST_CASE("make_field rejects bad input") {
  CHECK_THROWS_AS(make_field(4, 1), Error);
  try {
    make_field(9, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPrimeP);
  }
  try {
    make_field(2, 2, std::vector<std::uint32_t>{1, 0, 1});  // (x+1)^2
    FAIL("expected ReducibleModulus");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReducibleModulus);
  }
  CHECK_THROWS_AS(make_field(2, 25), Error);
}

TEST_CASE("field operations on small examples") {
  auto f2 = make_field(2, 1);
  CHECK((f2.element(1) + f2.element(1)).code() == 0);

  auto f4 = make_field(2, 2);
  auto x = f4.element(f4.generator());
  auto x_plus_1 = x + f4.element(1);
  CHECK(x * x == x_plus_1);

  // Oracle: search the nonzero elements for the one whose product with x is 1.
  FieldElement found;
  for (const auto& a : enumerate_field(f4))
    if (!a.is_zero() && (a * x).code() == 1) found = a;
  CHECK(x.inv() == found);
  CHECK(found == x_plus_1);

  CHECK_THROWS_AS(f4.element(0).inv(), Error);
  auto f8 = make_field(2, 3);
  CHECK_THROWS_AS(f4.element(1) + f8.element(1), Error);
}

TEST_CASE("pow by the field order is the identity and Frobenius is additive") {
  std::vector<std::pair<std::uint32_t, int>> fields;
  prime_powers_upto(4096, fields);
  for (auto [p, k] : fields) {
    auto f = make_field(p, k);
    for (std::uint64_t c = 0; c < f.q(); ++c) {
      const Code a = static_cast<Code>(c);
      REQUIRE(f.pow(a, f.q()) == a);
      REQUIRE(f.frobenius(a, k) == a);
    }
  }
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, int>>{{2, 3}, {2, 6}, {3, 3}, {5, 2}, {7, 2}}) {
    auto f = make_field(p, k);
    for (Code a = 0; a < f.q(); ++a)
      for (Code b = 0; b < f.q(); ++b) REQUIRE(f.frobenius(f.add(a, b)) == f.add(f.frobenius(a), f.frobenius(b)));
  }
}

TEST_CASE("F_8 nonzero elements satisfy a^7 = 1") {
  auto f8 = make_field(2, 3);
  auto elems = enumerate_field(f8);
  CHECK(elems.size() == 8);
  int nonzero = 0;
  for (const auto& a : elems) {
    if (a.is_zero()) continue;
    ++nonzero;
    CHECK(a.pow(7).code() == 1);
  }
  CHECK(nonzero == 7);
  CHECK(elems.front().code() == 0);
  CHECK(std::is_sorted(elems.begin(), elems.end(), [](auto& a, auto& b) { return a.code() < b.code(); }));
}

TEST_CASE("slow and table arithmetic agree") {
  // F_{2^21} has no tables; compare against the table field F_{2^7} via the embedding.
  auto big = make_field(2, 21);
  REQUIRE_FALSE(big.data().has_tables());
  auto small = make_field(2, 7);
  Embedding emb(small, big);
  for (Code a = 0; a < small.q(); a += 3)
    for (Code b = 0; b < small.q(); b += 5) REQUIRE(emb(small.mul(a, b)) == big.mul(emb(a), emb(b)));
  Code x = big.generator();
  CHECK(big.mul(x, big.inv(x)) == 1);
}

TEST_CASE("embed is a unital ring homomorphism") {
  auto f2 = make_field(2, 1);
  auto f4 = make_field(2, 2);
  auto f16 = make_field(2, 4);
  CHECK(embed(f2.element(1), f4).code() == 1);
  CHECK(embed(f2.element(0), f16).code() == 0);

  auto g = embed(f4.element(f4.generator()), f16);
  // Oracle: the multiplicative order by exhaustive powering.
  int order = 0;
  auto acc = g;
  for (int i = 1; i <= 15; ++i) {
    if (acc.code() == 1) {
      order = i;
      break;
    }
    acc = acc * g;
  }
  CHECK(order == 3);

  for (auto [p, k, K] : std::vector<std::tuple<std::uint32_t, int, int>>{{2, 2, 4}, {2, 3, 6}, {3, 1, 2}, {3, 2, 4}, {2, 4, 8}}) {
    auto src = make_field(p, k), dst = make_field(p, K);
    Embedding e(src, dst);
    for (Code a = 0; a < src.q(); ++a) {
      for (Code b = 0; b < src.q(); ++b) {
        REQUIRE(e(src.add(a, b)) == dst.add(e(a), e(b)));
        REQUIRE(e(src.mul(a, b)) == dst.mul(e(a), e(b)));
      }
      // The image lies in the fixed field of a -> a^(p^k).
      REQUIRE(dst.frobenius(e(a), k) == e(a));
    }
  }
  CHECK_THROWS_AS(Embedding(f4, make_field(2, 3)), Error);
  CHECK_THROWS_AS(Embedding(f4, make_field(3, 2)), Error);
}

TEST_CASE("embeddings compose through intermediate fields") {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 3}}) {
    auto fq = make_field(p, k), fq2 = make_field(p, 2 * k), fq4 = make_field(p, 4 * k);
    Embedding a(fq, fq2), b(fq2, fq4), direct(fq, fq4);
    for (Code c = 0; c < fq.q(); ++c) REQUIRE(b(a(c)) == direct(c));
  }
  // F_4 -> F_64 -> F_4096 versus F_4 -> F_4096.
  auto f4 = make_field(2, 2), f64 = make_field(2, 6), f4096 = make_field(2, 12);
  Embedding a(f4, f64), b(f64, f4096), direct(f4, f4096);
  for (Code c = 0; c < 4; ++c) CHECK(b(a(c)) == direct(c));
  Embedding c1(make_field(2, 3), f64), c2(f64, f4096), c3(make_field(2, 3), f4096);
  for (Code c = 0; c < 8; ++c) CHECK(c2(c1(c)) == c3(c));
}

TEST_CASE("non-canonical moduli embed homomorphically") {
  auto odd = make_field(2, 3, std::vector<std::uint32_t>{1, 0, 1, 1});  // x^3 + x^2 + 1
  CHECK_FALSE(odd.canonical());
  auto f64 = make_field(2, 6);
  Embedding e(odd, f64);
  for (Code a = 0; a < 8; ++a)
    for (Code b = 0; b < 8; ++b) REQUIRE(e(odd.mul(a, b)) == f64.mul(e(a), e(b)));
  auto odd64 = make_field(2, 6, std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1});  // x^6+x^4+x^3+x+1
  Embedding e2(make_field(2, 2), odd64);
  for (Code a = 0; a < 4; ++a)
    for (Code b = 0; b < 4; ++b) REQUIRE(e2(make_field(2, 2).mul(a, b)) == odd64.mul(e2(a), e2(b)));
}

TEST_CASE("format renders generator polynomials") {
  auto f4 = make_field(2, 2);
  CHECK(f4.format(f4.generator()) == "g");
  CHECK(f4.format(3) == "g+1");
  auto f9 = make_field(3, 2);
  CHECK(f9.format(f9.from_digits(std::vector<std::uint32_t>{1, 2})) == "2*g+1");
  CHECK(make_field(5, 1).format(3) == "3");
}
