#include <filesystem>
#include <set>

#include "doctest.h"
#include "ffsieve/error.hpp"
#include "ffsieve/scheme_io.hpp"
#include "ffsieve/variety.hpp"

using namespace ffsieve;
using namespace ffsieve::variety;
using mpoly::parse_poly;

namespace {

const std::vector<std::string> kXYZW = {"x", "y", "z", "w"};
const std::vector<std::string> kXYZ = {"x", "y", "z"};
const std::vector<std::string> kXY = {"x", "y"};

std::filesystem::path scheme_path(const std::string& name) { return std::filesystem::path(FFSIEVE_SCHEMES_DIR) / name; }

// Oracle: |X(F_{q^e})| from all nonzero affine tuples on X, divided by the
// scalings q^e - 1.
std::uint64_t raw_count(const SchemePresentation& X, int e) {
  auto F = gf::extension(X.field, e);
  std::uint64_t total = 1;
  for (int i = 0; i < X.nvars; ++i) total *= F.q();
  std::uint64_t hits = 0;
  std::vector<Code> pt(static_cast<std::size_t>(X.nvars));
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (auto& c : pt) {
      c = static_cast<Code>(t % F.q());
      t /= F.q();
    }
    hits += X.contains(F, pt);
  }
  return hits / (F.q() - 1);
}

ClosedPoint rational_point(const gf::FieldSpec& f, std::vector<Code> coords) { return ClosedPoint{1, f, std::move(coords), f.k()}; }

SchemePresentation plane_curve(const gf::FieldSpec& f, const std::string& eq) {
  SchemePresentation X;
  X.field = f;
  X.nvars = 3;
  X.equations = {parse_poly(eq, f, kXYZ)};
  return X;
}

}  // namespace

TEST_CASE("enumerate_closed_points examples") {
  auto f2 = gf::make_field(2, 1);
  auto P1 = SchemePresentation::projective_space(f2, 1);
  auto pts = enumerate_closed_points(P1, 2);
  REQUIRE(pts.size() == 4);
  CHECK(std::count_if(pts.begin(), pts.end(), [](auto& p) { return p.degree == 1; }) == 3);
  CHECK(pts.back().degree == 2);
  CHECK(pts.back().orbit().size() == 2);

  SchemePresentation Vx = P1;
  Vx.equations = {parse_poly("x", f2, kXY)};
  auto one = enumerate_closed_points(Vx, 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].representative == std::vector<Code>{0, 1});

  SchemePresentation empty = SchemePresentation::projective_space(f2, 2);
  for (int i = 0; i < 3; ++i) empty.equations.push_back(mpoly::MPoly::variable(f2, 3, i));
  CHECK(enumerate_closed_points(empty, 4).empty());

  EnumerationOptions tight;
  tight.point_cap = 100;
  CHECK_THROWS_AS(enumerate_closed_points(SchemePresentation::projective_space(f2, 3), 3, tight), Error);
}

TEST_CASE("closed points are Frobenius orbits of exact size") {
  auto f4 = gf::make_field(2, 2);
  auto X = plane_curve(f4, "x^3 + g*y^3 + z^3 + x*y*z");
  for (const auto& P : enumerate_closed_points(X, 3)) {
    auto orbit = P.orbit();
    std::set<std::vector<Code>> distinct(orbit.begin(), orbit.end());
    REQUIRE(static_cast<int>(distinct.size()) == P.degree);
    REQUIRE(frobenius(P.residue, orbit.back(), P.base_k) == P.representative);
    for (const auto& member : orbit) REQUIRE(X.contains(P.residue, member));
    REQUIRE(*distinct.begin() == P.representative);
  }
}

TEST_CASE("Mobius identity against raw counts on fixtures") {
  for (const char* name : {"nodal_cubic.scm", "cubic_w0.scm", "plane.scm", "line.scm", "double_line.scm",
                           "three_axes.scm", "twisted_cubic_f3.scm"}) {
    auto file = load_scheme(scheme_path(name));
    std::vector<SchemePresentation> schemes = {file.X()};
    if (auto V = file.V()) schemes.push_back(*V);
    for (const auto& S : schemes) {
      const int B = (S.field.q() == 3 && S.equations.empty()) ? 3 : 4;
      auto pts = enumerate_closed_points(S, B);
      auto N = point_counts(pts, B);
      for (int e = 1; e <= B; ++e) REQUIRE(N[static_cast<std::size_t>(e - 1)] == raw_count(S, e));
    }
  }
}

TEST_CASE("is_smooth_at examples") {
  auto f2 = gf::make_field(2, 1);
  auto P3 = SchemePresentation::projective_space(f2, 3);
  auto w = parse_poly("w", f2, kXYZW);
  for (const auto& P : enumerate_closed_points(P3, 2))
    if (mpoly::PolyEvaluator(w, P.residue)(P.representative) == 0) CHECK(is_smooth_at(P3, w, P, 2));

  SchemePresentation plane_w = P3;
  plane_w.equations = {w};
  auto cubic = parse_poly("y^2*z - x^3 + x^2*z", f2, kXYZW);
  CHECK_FALSE(is_smooth_at(plane_w, cubic, rational_point(f2, {0, 0, 1, 0}), 1));

  auto P2 = SchemePresentation::projective_space(f2, 2);
  auto conic = parse_poly("x*z + y^2", f2, kXYZ);
  CHECK(is_smooth_at(P2, conic, rational_point(f2, {1, 1, 1}), 1));
  CHECK_THROWS_AS(is_smooth_at(P2, conic, rational_point(f2, {0, 1, 0}), 1), Error);
}

TEST_CASE("embedding dimension examples") {
  auto cusp = load_scheme(scheme_path("cubic_w0.scm"));
  auto V = *cusp.V();
  auto f2 = V.field;
  CHECK(embedding_dimension(V, rational_point(f2, {0, 0, 1, 0})) == 2);
  for (const auto& P : enumerate_closed_points(V, 3))
    if (P.representative != std::vector<Code>{0, 0, 1, 0}) CHECK(embedding_dimension(V, P) == 1);

  auto dl = *load_scheme(scheme_path("double_line.scm")).V();
  for (const auto& P : enumerate_closed_points(dl, 2)) CHECK(embedding_dimension(dl, P) == 2);
  CHECK(embedding_dimension(dl, rational_point(f2, {1, 0, 0, 1}), 0) == 2);

  auto axes = *load_scheme(scheme_path("three_axes.scm")).V();
  CHECK(embedding_dimension(axes, rational_point(f2, {0, 0, 0, 1})) == 3);
  CHECK_THROWS_AS(embedding_dimension(axes, rational_point(f2, {1, 1, 0, 0})), Error);
}

TEST_CASE("chart independence and Galois stability") {
  auto f2 = gf::make_field(2, 1);
  auto P2 = SchemePresentation::projective_space(f2, 2);
  for (const char* eq : {"y^2*z + x*y*z + x^3", "x^3 + y^3 + z^3", "x^2*y + y^2*z + z^2*x + x*y*z"}) {
    auto f = parse_poly(eq, f2, kXYZ);
    SchemePresentation C = P2;
    C.equations = {f};
    for (const auto& P : enumerate_closed_points(C, 4)) {
      const bool base = is_smooth_at(P2, f, P, 1);
      const int e0 = embedding_dimension(C, P);
      for (const auto& member : P.orbit()) {
        ClosedPoint Q{P.degree, P.residue, member, P.base_k};
        for (int chart = 0; chart < 3; ++chart) {
          if (member[static_cast<std::size_t>(chart)] == 0) continue;
          REQUIRE(is_smooth_at(P2, f, Q, 1, chart) == base);
          REQUIRE(embedding_dimension(C, Q, chart) == e0);
        }
      }
    }
  }
}

TEST_CASE("saturation augments non-saturated presentations") {
  auto f2 = gf::make_field(2, 1);
  SchemePresentation V;
  V.field = f2;
  V.nvars = 2;
  V.equations = {parse_poly("x^2", f2, kXY), parse_poly("x*y", f2, kXY)};
  // x is added in degree 1; the affine chart at (0:1) already sees (x^2, x),
  // so e(P) is unchanged.
  auto sat = saturate_presentation(V);
  CHECK(sat.added == 1);
  CHECK_FALSE(sat.capped);
  CHECK(sat.scheme.equations.back() == parse_poly("x", f2, kXY));
  CHECK(embedding_dimension(V, rational_point(f2, {0, 1})) == 0);
  CHECK(embedding_dimension(sat.scheme, rational_point(f2, {0, 1})) == 0);
}

TEST_CASE("stratify examples") {
  for (const char* name : {"cubic_w0.scm", "nodal_cubic.scm"}) {
    auto file = load_scheme(scheme_path(name));
    StratifyOptions opt;
    opt.declared_dims = file.dim_strata;
    auto table = stratify(*file.V(), 3, opt);
    REQUIRE(table.strata.size() == 2);
    REQUIRE(table.strata.at(2).points.size() == 1);
    CHECK(table.strata.at(2).points[0].degree == 1);
    CHECK(table.strata.at(2).points[0].representative == std::vector<Code>{0, 0, 1, 0});
    CHECK(table.strata.at(1).dim == 1);
    CHECK(table.strata.at(1).dim_declared);
  }
  auto twisted = load_scheme(scheme_path("twisted_cubic_f3.scm"));
  auto t = stratify(*twisted.V(), 3);
  REQUIRE(t.strata.size() == 1);
  CHECK(t.strata.begin()->first == 1);
  CHECK(t.strata.begin()->second.dim == 1);
  CHECK_FALSE(t.strata.begin()->second.dim_declared);

  auto f2 = gf::make_field(2, 1);
  SchemePresentation empty = SchemePresentation::projective_space(f2, 2);
  for (int i = 0; i < 3; ++i) empty.equations.push_back(mpoly::MPoly::variable(f2, 3, i));
  CHECK(stratify(empty, 3).strata.empty());

  // Declared profiles must match the enumeration.
  auto nodal = load_scheme(scheme_path("nodal_cubic.scm"));
  StratifyOptions good;
  good.declared_profiles.emplace(1, *nodal.declared_profile("V_1"));
  CHECK_NOTHROW(stratify(*nodal.V(), 3, good));
  StratifyOptions bad;
  bad.declared_profiles.emplace(1, zeta::CountProfile::polynomial(2, zeta::parse_terms("T")));
  try {
    stratify(*nodal.V(), 3, bad);
    FAIL("expected ProfileMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProfileMismatch);
  }
}

TEST_CASE("growth dimension heuristic") {
  using zeta::Integer;
  CHECK(growth_dimension({Integer(1), Integer(3), Integer(7)}, 2) == 1);
  CHECK(growth_dimension({Integer(7), Integer(21), Integer(73)}, 2) == 2);
  CHECK(growth_dimension({Integer(1), Integer(1), Integer(1)}, 2) == 0);
  CHECK_FALSE(growth_dimension({Integer(0), Integer(0)}, 2).has_value());
}

TEST_CASE("scheme files round-trip") {
  for (const auto& entry : std::filesystem::directory_iterator(FFSIEVE_SCHEMES_DIR)) {
    if (entry.path().extension() != ".scm") continue;
    auto a = load_scheme(entry.path());
    auto text = serialize(a);
    auto b = parse_scheme(text);
    CHECK_MESSAGE(equivalent(a, b), entry.path().filename().string());
    CHECK(serialize(b) == text);
  }
  auto f8 = parse_scheme("q = 2^3 modulus g^3 + g^2 + 1\nP 2\nX:\n  x0^2 + g*x1*x2\n");
  CHECK_FALSE(f8.field.canonical());
  CHECK(equivalent(parse_scheme(serialize(f8)), f8));
  CHECK(parse_scheme("q = 9\nP 1 a b\nX:\n").field.q() == 9);
  CHECK(parse_scheme("q = 2\nP 1\nX:\n", 4).field.q() == 4);
  CHECK_FALSE(parse_scheme("q = 2\nP 1\nX:\n").z_equations.has_value());

  for (const char* bad : {"P 1\nX:\n", "q = 6\nP 1\n", "q = 2\nP 2 x y\n", "q = 2\nP 1\nX:\n x^2 + y\n",
                          "q = 2\nP 1\nfoo\n", "q = 2^2 modulus g^2 + 1\nP 1\n", "q = 2\nP 1\nprofile V_1 = T^\n"}) {
    try {
      parse_scheme(bad);
      FAIL("accepted: " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}
