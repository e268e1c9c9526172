#include <omp.h>

#include "doctest.h"
#include "ffsieve/error.hpp"
#include "ffsieve/kernels.hpp"

using namespace ffsieve;
using namespace ffsieve::sieve;

namespace {

variety::SchemePresentation pn(const gf::FieldSpec& F, int n) { return variety::SchemePresentation::projective_space(F, n); }

SmoothnessProblem plane_problem(const gf::FieldSpec& F, int n, int d, int B) {
  auto X = pn(F, n);
  return make_problem(X, n, d, ideal_basis(F, X.nvars, {}, d).basis, B);
}

void check_same(const SmoothnessProblem& prob, const KernelOptions& opt, const Certifier* fast, const Certifier* slow) {
  std::vector<int> a, b;
  auto ta = run_exhaustive(prob, opt, fast, &a);
  auto tb = run_exhaustive_serial(prob, opt, slow, &b);
  CHECK(ta == tb);
  CHECK(a == b);
}

}  // namespace

TEST_CASE("binary quadrics on P^1: smooth iff the xy coefficient is nonzero") {
  for (int k : {1, 2}) {
    auto F = gf::make_field(2, k);
    auto prob = plane_problem(F, 1, 2, 2);
    KernelOptions opt;
    std::vector<int> rec;
    auto t = run_exhaustive(prob, opt, nullptr, &rec);
    const std::uint64_t q = F.q();
    CHECK(t.total == q * q * q);
    // Oracle: a x^2 + b xy + c y^2 has a repeated root iff b = 0.
    CHECK(t.smooth == (q - 1) * q * q);
    CHECK(t.zero_form == 1);
    for (std::uint64_t idx = 0; idx < rec.size(); ++idx) {
      auto f = prob.form(prob.digits_of(idx));
      const bool b_nonzero = f.coefficient({1, 1}).code() != 0;
      CHECK((rec[idx] == 0) == b_nonzero);
    }
  }
}

TEST_CASE("packed kernel agrees with the serial reference") {
  auto F2 = gf::make_field(2, 1);
  for (int d : {1, 2, 3}) {
    auto prob = plane_problem(F2, 2, d, 3);
    KernelOptions opt;
    opt.ell_max = 4;
    check_same(prob, opt, nullptr, nullptr);
    opt.need_ell = false;
    check_same(prob, opt, nullptr, nullptr);
    opt.need_ell = true;
    opt.exact = true;
    auto fast = make_certifier(prob);
    auto slow = make_generic_certifier(prob);
    check_same(prob, opt, fast.get(), slow.get());
  }
  // F_4 coefficients pack two bits per residue digit.
  auto F4 = gf::make_field(2, 2);
  auto prob = plane_problem(F4, 2, 2, 2);
  KernelOptions opt;
  check_same(prob, opt, nullptr, nullptr);
}

TEST_CASE("generic kernel agrees with the serial reference over F_3 and F_5") {
  auto F3 = gf::make_field(3, 1);
  {
    auto prob = plane_problem(F3, 2, 2, 2);
    KernelOptions opt;
    check_same(prob, opt, nullptr, nullptr);
    opt.exact = true;
    auto cert = make_certifier(prob);
    check_same(prob, opt, cert.get(), cert.get());
  }
  {
    // Binary quadrics over F_5: repeated root iff b^2 - 4ac = 0.
    auto F5 = gf::make_field(5, 1);
    auto prob = plane_problem(F5, 1, 2, 2);
    KernelOptions opt;
    std::vector<int> rec;
    auto t = run_exhaustive(prob, opt, nullptr, &rec);
    std::uint64_t expect = 0;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        for (int c = 0; c < 5; ++c) expect += ((b * b - 4 * a * c) % 5 + 5) % 5 != 0;
    CHECK(t.smooth == expect);
    check_same(prob, opt, nullptr, nullptr);
  }
}

TEST_CASE("complete intersection and open subsets of P^n") {
  auto F2 = gf::make_field(2, 1);
  const std::vector<std::string> names = {"x", "y", "z", "w"};
  auto quadric = pn(F2, 3);
  quadric.equations = {mpoly::parse_poly("x*y + z*w", F2, names)};
  quadric.declared_dim = 2;
  for (int d : {1, 2}) {
    auto prob = make_problem(quadric, 2, d, ideal_basis(F2, 4, {}, d).basis, 2);
    KernelOptions opt;
    check_same(prob, opt, nullptr, nullptr);
    opt.exact = true;
    auto cert = make_certifier(prob);
    check_same(prob, opt, cert.get(), cert.get());
  }
  // The affine plane z != 0.
  auto open = pn(F2, 2);
  open.removed = {mpoly::parse_poly("z", F2, {"x", "y", "z"})};
  auto prob = make_problem(open, 2, 2, ideal_basis(F2, 3, {}, 2).basis, 2);
  KernelOptions opt;
  opt.exact = true;
  auto cert = make_certifier(prob);
  check_same(prob, opt, cert.get(), cert.get());
  // x^2 is singular only along the line x = 0, which meets the open set.
  // z^2 vanishes only on the removed line.
  auto digits_for = [&](const std::string& text) {
    auto target = mpoly::parse_poly(text, F2, {"x", "y", "z"});
    for (std::uint64_t i = 0; i < 64; ++i)
      if (prob.form(prob.digits_of(i)) == target) return prob.digits_of(i);
    FAIL("form not found");
    return std::vector<std::uint32_t>{};
  };
  CHECK((*cert)(digits_for("z^2")) == graded::EmptinessStatus::Empty);
  CHECK((*cert)(digits_for("x^2")) != graded::EmptinessStatus::Empty);
  // Three equations for a curve in P^3 is not a supported presentation.
  auto bad = quadric;
  bad.equations.push_back(mpoly::parse_poly("x", F2, names));
  bad.equations.push_back(mpoly::parse_poly("x*z", F2, names));
  auto bad_prob = make_problem(bad, 1, 1, ideal_basis(F2, 4, {}, 1).basis, 1);
  CHECK_THROWS_AS(make_generic_certifier(bad_prob), Error);
}

TEST_CASE("fast GF(2) certificate matches the generic one on all plane cubics and quartic samples") {
  auto F2 = gf::make_field(2, 1);
  auto prob = plane_problem(F2, 2, 3, 1);
  auto fast = make_gf2_certifier(prob);
  auto slow = make_generic_certifier(prob);
  REQUIRE(fast);
  for (std::uint64_t i = 1; i < 1024; ++i) {
    auto digits = prob.digits_of(i);
    CHECK((*fast)(digits) == (*slow)(digits));
  }
  auto prob4 = plane_problem(F2, 2, 4, 1);
  auto fast4 = make_gf2_certifier(prob4);
  auto slow4 = make_generic_certifier(prob4);
  for (std::uint64_t i = 1; i < (1u << 15); i += 97) {
    auto digits = prob4.digits_of(i);
    CHECK((*fast4)(digits) == (*slow4)(digits));
  }
  // Not applicable off F_2 or with equations.
  CHECK_FALSE(make_gf2_certifier(plane_problem(gf::make_field(3, 1), 2, 2, 1)));
}

TEST_CASE("zero form is counted and never smooth") {
  auto F2 = gf::make_field(2, 1);
  auto prob = plane_problem(F2, 2, 2, 1);
  KernelOptions opt;
  opt.exact = true;
  auto cert = make_certifier(prob);
  std::vector<int> rec;
  auto t = run_exhaustive(prob, opt, cert.get(), &rec);
  CHECK(rec[0] == kZeroForm);
  CHECK(t.zero_form == 1);
  CHECK(t.smooth + t.zero_form + t.beyond_bound + t.unresolved <= t.total);
  std::uint64_t sum = 0;
  for (auto v : t.ell) sum += v;
  CHECK(sum == t.total);
}

TEST_CASE("smooth counts are non-increasing in the point bound") {
  auto F2 = gf::make_field(2, 1);
  std::uint64_t prev = ~std::uint64_t{0};
  for (int B = 1; B <= 4; ++B) {
    auto prob = plane_problem(F2, 2, 4, B);
    KernelOptions opt;
    opt.need_ell = false;
    auto t = run_exhaustive(prob, opt);
    CHECK(t.smooth <= prev);
    prev = t.smooth;
  }
}

TEST_CASE("results do not depend on the thread count") {
  auto F2 = gf::make_field(2, 1);
  auto prob = plane_problem(F2, 2, 3, 3);
  KernelOptions opt;
  opt.exact = true;
  auto cert = make_certifier(prob);
  const int saved = omp_get_max_threads();
  std::vector<Tally> ex, sa;
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    ex.push_back(run_exhaustive(prob, opt, cert.get()));
    sa.push_back(run_sampled(prob, opt, 5000, 42, cert.get()));
  }
  omp_set_num_threads(saved);
  CHECK(ex[0] == ex[1]);
  CHECK(ex[0] == ex[2]);
  CHECK(sa[0] == sa[1]);
  CHECK(sa[0] == sa[2]);
  CHECK(sa[0] == run_sampled_serial(prob, opt, 5000, 42, cert.get()));
  CHECK(sa[0].total == 5000);
  CHECK_FALSE(sa[0] == run_sampled(prob, opt, 5000, 43, cert.get()));
}
