#include "ffsieve/variety.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ffsieve/error.hpp"
#include "ffsieve/graded.hpp"

namespace ffsieve::variety {

SchemePresentation SchemePresentation::projective_space(const gf::FieldSpec& field, int n) {
  SchemePresentation X;
  X.field = field;
  X.nvars = n + 1;
  X.declared_dim = n;
  return X;
}

bool SchemePresentation::contains(const gf::FieldSpec& target, std::span<const Code> point) const {
  for (const auto& g : equations)
    if (mpoly::PolyEvaluator(g, target)(point) != 0) return false;
  if (removed.empty()) return true;
  for (const auto& g : removed)
    if (mpoly::PolyEvaluator(g, target)(point) != 0) return true;
  return false;
}

std::vector<Code> frobenius(const gf::FieldSpec& F, std::span<const Code> point, int base_k) {
  std::vector<Code> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) out[i] = F.frobenius(point[i], base_k);
  return out;
}

std::vector<std::vector<Code>> ClosedPoint::orbit() const {
  std::vector<std::vector<Code>> out{representative};
  for (int i = 1; i < degree; ++i) out.push_back(frobenius(residue, out.back(), base_k));
  return out;
}

std::string ClosedPoint::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < representative.size(); ++i) os << (i ? " : " : "") << residue.format(representative[i]);
  os << ')';
  return os.str();
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int e, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > limit / base) return limit + 1;
    v *= base;
  }
  return v;
}

struct Filter {
  std::vector<mpoly::PolyEvaluator> eqs;
  std::vector<mpoly::PolyEvaluator> removed;

  Filter(const SchemePresentation& X, const gf::FieldSpec& F) {
    for (const auto& g : X.equations) eqs.emplace_back(g, F);
    for (const auto& g : X.removed) removed.emplace_back(g, F);
  }
  bool operator()(std::span<const Code> pt) const {
    for (const auto& ev : eqs)
      if (ev(pt) != 0) return false;
    if (removed.empty()) return true;
    for (const auto& ev : removed)
      if (ev(pt) != 0) return true;
    return false;
  }
};

}  // namespace

std::vector<ClosedPoint> enumerate_closed_points(const SchemePresentation& X, int max_degree,
                                                 const EnumerationOptions& options) {
  std::vector<ClosedPoint> out;
  const int n = X.ambient_dim();
  const std::uint64_t q = X.field.q();
  const int base_k = X.field.k();
  std::uint64_t scanned = 0;
  for (int e = 1; e <= max_degree; ++e) {
    const std::uint64_t qe = checked_pow(q, e, gf::kMaxFieldOrder);
    if (qe > gf::kMaxFieldOrder)
      throw Error(ErrorKind::EnumerationCapExceeded, "variety.enumerate_closed_points",
                  "F_{q^" + std::to_string(e) + "} exceeds the field size cap");
    for (int free = 0; free <= n; ++free) {
      scanned += checked_pow(qe, free, options.point_cap);
      if (scanned > options.point_cap)
        throw Error(ErrorKind::EnumerationCapExceeded, "variety.enumerate_closed_points",
                    "more than " + std::to_string(options.point_cap) + " points to scan at degree " + std::to_string(e));
    }
    auto F = gf::extension(X.field, e);
    Filter on_x(X, F);
    std::vector<std::vector<Code>> found;
    for (int lead = n; lead >= 0; --lead) {
      const int free = n - lead;
      const std::uint64_t count = checked_pow(qe, free, options.point_cap);
      const auto total = static_cast<long long>(count);
#pragma omp parallel
      {
        std::vector<std::vector<Code>> local;
        std::vector<Code> pt(static_cast<std::size_t>(n + 1), 0);
#pragma omp for schedule(static)
        for (long long idx = 0; idx < total; ++idx) {
          std::fill(pt.begin(), pt.end(), 0);
          pt[static_cast<std::size_t>(lead)] = 1;
          auto t = static_cast<std::uint64_t>(idx);
          for (int i = n; i > lead; --i) {
            pt[static_cast<std::size_t>(i)] = static_cast<Code>(t % qe);
            t /= qe;
          }
          if (!on_x(pt)) continue;
          // Keep orbits of exact size e, once, via their least member.
          auto cur = frobenius(F, pt, base_k);
          int period = 1;
          bool least = true;
          while (cur != pt) {
            if (cur < pt) {
              least = false;
              break;
            }
            cur = frobenius(F, cur, base_k);
            ++period;
          }
          if (least && period == e) local.push_back(pt);
        }
#pragma omp critical
        found.insert(found.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
      }
    }
    std::sort(found.begin(), found.end());
    for (auto& pt : found) out.push_back(ClosedPoint{e, F, std::move(pt), base_k});
  }
  return out;
}

std::vector<zeta::Integer> degree_counts(const std::vector<ClosedPoint>& points, int max_degree) {
  std::vector<zeta::Integer> a(static_cast<std::size_t>(max_degree), 0);
  for (const auto& P : points)
    if (P.degree <= max_degree) a[static_cast<std::size_t>(P.degree - 1)] += 1;
  return a;
}

std::vector<zeta::Integer> point_counts(const std::vector<ClosedPoint>& points, int max_degree) {
  auto a = degree_counts(points, max_degree);
  std::vector<zeta::Integer> N(static_cast<std::size_t>(max_degree), 0);
  for (int e = 1; e <= max_degree; ++e)
    for (int d = 1; d <= e; ++d)
      if (e % d == 0) N[static_cast<std::size_t>(e - 1)] += d * a[static_cast<std::size_t>(d - 1)];
  return N;
}

std::size_t jacobian_rank(const std::vector<MPoly>& polys, const gf::FieldSpec& F, std::span<const Code> point,
                          std::optional<int> chart) {
  const int nv = static_cast<int>(point.size());
  int c = chart.value_or(-1);
  if (c < 0)
    for (int i = 0; i < nv; ++i)
      if (point[static_cast<std::size_t>(i)] != 0) {
        c = i;
        break;
      }
  if (c < 0 || point[static_cast<std::size_t>(c)] == 0)
    throw Error(ErrorKind::InvalidArgument, "variety.jacobian_rank", "chart coordinate vanishes at the point");
  const Code inv = F.inv(point[static_cast<std::size_t>(c)]);
  std::vector<Code> affine(point.begin(), point.end());
  for (auto& v : affine) v = F.mul(v, inv);
  graded::Echelon ech(F, static_cast<std::size_t>(nv - 1));
  std::vector<Code> row(static_cast<std::size_t>(nv - 1));
  for (const auto& g : polys) {
    std::size_t col = 0;
    for (int i = 0; i < nv; ++i) {
      if (i == c) continue;
      row[col++] = mpoly::PolyEvaluator(g.partial(i), F)(affine);
    }
    ech.insert(row);
  }
  return ech.rank();
}

bool is_smooth_at(const SchemePresentation& X, const std::optional<MPoly>& f, const ClosedPoint& P, int expected_dim,
                  std::optional<int> chart) {
  if (!X.contains(P.residue, P.representative))
    throw Error(ErrorKind::PointNotOnScheme, "variety.is_smooth_at", "point " + P.to_string() + " is not on X");
  std::vector<MPoly> polys = X.equations;
  if (f) {
    if (mpoly::PolyEvaluator(*f, P.residue)(P.representative) != 0)
      throw Error(ErrorKind::PointNotOnScheme, "variety.is_smooth_at", "point " + P.to_string() + " is not on H_f");
    polys.push_back(*f);
  }
  const auto rank = jacobian_rank(polys, P.residue, P.representative, chart);
  return static_cast<int>(rank) == X.ambient_dim() - expected_dim;
}

int embedding_dimension(const SchemePresentation& V, const ClosedPoint& P, std::optional<int> chart) {
  if (!V.contains(P.residue, P.representative))
    throw Error(ErrorKind::PointNotOnScheme, "variety.embedding_dimension", "point " + P.to_string() + " is not on V");
  return V.ambient_dim() - static_cast<int>(jacobian_rank(V.equations, P.residue, P.representative, chart));
}

SaturationResult saturate_presentation(const SchemePresentation& V) {
  SaturationResult res{V, 0, false};
  std::vector<MPoly> gens;
  for (const auto& g : V.equations)
    if (!g.is_zero()) gens.push_back(g);
  if (gens.empty()) return res;
  int hi = 0;
  for (const auto& g : gens) hi = std::max(hi, g.total_degree());
  for (int d = 1; d <= hi + 2; ++d) {
    graded::GradedIdeal I(V.field, V.nvars, gens);
    auto sat = I.saturated_piece(d);
    res.capped = res.capped || sat.capped;
    const auto& piece = I.piece(d);
    if (sat.basis.rank() == piece.rank()) continue;
    graded::Echelon ech(V.field, piece.ncols);
    for (const auto& r : piece.rows) ech.insert(r);
    mpoly::MonomialBasis basis(V.nvars, d);
    for (const auto& r : sat.basis.rows)
      if (ech.insert(r)) {
        gens.push_back(mpoly::from_dense(V.field, basis, r));
        ++res.added;
      }
  }
  res.scheme.equations = gens;
  return res;
}

std::optional<int> growth_dimension(const std::vector<zeta::Integer>& counts, std::uint64_t q) {
  for (std::size_t i = counts.size(); i-- > 0;) {
    if (counts[i] <= 0) continue;
    const double e = static_cast<double>(i + 1);
    const double v = std::log(counts[i].get_d()) / (e * std::log(static_cast<double>(q)));
    return static_cast<int>(std::lround(v));
  }
  return std::nullopt;
}

StratumTable stratify(const SchemePresentation& V, int max_degree, const StratifyOptions& options) {
  StratumTable table;
  table.max_degree = max_degree;
  auto points = enumerate_closed_points(V, max_degree, options.enumeration);
  SchemePresentation local = V;
  if (options.saturate) {
    auto sat = saturate_presentation(V);
    local = std::move(sat.scheme);
    table.saturation_capped = sat.capped;
    if (sat.capped) table.flags.push_back("saturation capped: e(P) may be overestimated");
  }
  for (auto& P : points) {
    const int e = embedding_dimension(local, P);
    auto& s = table.strata[e];
    s.e = e;
    s.points.push_back(std::move(P));
  }
  for (const auto& [e, prof] : options.declared_profiles) {
    auto& s = table.strata[e];
    s.e = e;
    auto check = zeta::CountProfile::enumerated(V.field.q(), degree_counts(s.points, max_degree));
    if (!prof.has_polynomial())
      throw Error(ErrorKind::InvalidArgument, "variety.stratify", "declared profiles must be polynomial");
    try {
      check.attach_polynomial(prof.terms());
    } catch (const Error& err) {
      throw Error(ErrorKind::ProfileMismatch, "variety.stratify", "stratum V_" + std::to_string(e) + ": " + err.what());
    }
    s.declared_profile = prof;
  }
  for (auto& [e, s] : table.strata) {
    if (auto it = options.declared_dims.find(e); it != options.declared_dims.end()) {
      s.dim = it->second;
      s.dim_declared = true;
    } else {
      s.dim = growth_dimension(point_counts(s.points, max_degree), V.field.q());
      table.flags.push_back("dim V_" + std::to_string(e) + " estimated from point-count growth");
    }
  }
  for (const auto& [e, d] : options.declared_dims)
    if (!table.strata.count(e)) table.strata[e] = Stratum{e, {}, std::nullopt, d, true};
  return table;
}

}  // namespace ffsieve::variety
