#include "ffsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ffsieve/error.hpp"

namespace ffsieve::sieve {

using graded::EmptinessStatus;
using variety::SchemeFile;
using variety::SchemePresentation;
using zeta::CountProfile;
using zeta::Integer;

std::string to_string(const HypothesisCheck& h) {
  switch (h.status) {
    case HypothesisStatus::Satisfied:
      return "satisfied";
    case HypothesisStatus::Violated:
      return "violated(e=" + std::to_string(h.e) + ", dim=" + std::to_string(h.dim) + ")";
    case HypothesisStatus::Unknown:
      break;
  }
  return "unknown";
}

std::string to_string(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::Success:
      return "success";
    case EmbedStatus::Obstruction:
      return "obstruction";
    case EmbedStatus::NotFound:
      break;
  }
  return "not_found";
}

namespace {

bool is_projective_space(const SchemePresentation& X) { return X.equations.empty() && X.removed.empty(); }

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational r{Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(b))};
  r.canonicalize();
  return r;
}

}  // namespace

int resolve_dim(const SchemeFile& file, const PredictOptions& opt, std::vector<std::string>& flags) {
  if (file.dim_x) return *file.dim_x;
  const auto X = file.X();
  if (is_projective_space(X)) return file.n;
  const auto points = variety::enumerate_closed_points(X, opt.profile_bound, opt.enumeration);
  const auto g = variety::growth_dimension(variety::point_counts(points, opt.profile_bound), file.field.q());
  if (!g) throw Error(ErrorKind::MissingProfile, "sieve.dim", "dim X is not declared and X has no points to estimate it");
  flags.push_back("dim X = " + std::to_string(*g) + " estimated from point-count growth (heuristic)");
  return *g;
}

CountProfile ambient_profile(const SchemeFile& file, int m, int bound, const PredictOptions& opt, std::string& source) {
  CountProfile prof;
  if (auto declared = file.declared_profile("X")) {
    prof = *declared;
    source = "declared";
  } else if (is_projective_space(file.X())) {
    prof = zeta::projective_space_profile(file.field.q(), file.n);
    source = "projective space";
  } else {
    prof = zeta::profile_from_scheme(file.X(), bound, opt.fit, opt.enumeration);
    source = prof.has_polynomial() ? "fitted" : "enumerated";
  }
  prof.declared_dim = m;
  return prof;
}

namespace {

variety::StratifyOptions stratify_options(const SchemeFile& file, const PredictOptions& opt) {
  variety::StratifyOptions so;
  so.enumeration = opt.enumeration;
  so.declared_dims = file.dim_strata;
  for (const auto& [key, terms] : file.profiles) {
    if (key.rfind("V_", 0) != 0) continue;
    so.declared_profiles.emplace(std::stoi(key.substr(2)), CountProfile::polynomial(file.field.q(), terms));
  }
  return so;
}

bool stratum_nonempty(const variety::Stratum& st) { return !st.points.empty() || st.dim.has_value(); }

}  // namespace

DensityPrediction predict_density(const SchemeFile& file, const PredictOptions& opt) {
  DensityPrediction out;
  out.m = resolve_dim(file, opt, out.flags);
  const int m = out.m;
  const std::uint64_t q = file.field.q();

  // Strata of V = X ∩ Z and the dichotomy.
  std::vector<ZetaFactor> strata_factors;
  HypothesisCheck& h = out.hypothesis;
  h.status = HypothesisStatus::Satisfied;
  h.dims_source = "none";
  if (auto V = file.V()) {
    out.strata = variety::stratify(*V, opt.stratify_bound, stratify_options(file, opt));
    for (const auto& f : out.strata.flags) out.flags.push_back(f);
    int declared = 0, estimated = 0;
    for (const auto& [e, st] : out.strata.strata) {
      if (!stratum_nonempty(st) || !st.dim) continue;
      (st.dim_declared ? declared : estimated)++;
      if (h.status == HypothesisStatus::Satisfied && *st.dim + e >= m) {
        h.status = HypothesisStatus::Violated;
        h.e = e;
        h.dim = *st.dim;
      }
    }
    if (declared + estimated > 0) h.dims_source = estimated == 0 ? "declared" : declared == 0 ? "growth" : "mixed";
    if (estimated > 0) out.flags.push_back("stratum dimensions estimated from point-count growth (heuristic)");
  }
  if (h.status == HypothesisStatus::Violated) {
    out.value = Rational(0);
    out.lower = out.upper = 0;
    return out;
  }

  for (const auto& [e, st] : out.strata.strata) {
    if (!stratum_nonempty(st)) continue;
    ZetaFactor zf;
    zf.name = "V_" + std::to_string(e);
    if (st.declared_profile) {
      zf.profile = *st.declared_profile;
      zf.profile_source = "declared";
    } else {
      zf.profile = zeta::profile_from_points(q, st.points, out.strata.max_degree, st.dim, opt.fit);
      zf.profile_source = zf.profile.has_polynomial() ? "fitted" : "enumerated";
    }
    zf.profile.declared_dim = st.dim;
    zf.value = zeta::zeta_value(zf.profile, m - e);
    strata_factors.push_back(std::move(zf));
  }

  ZetaFactor xv;
  xv.name = "X-V";
  if (auto declared = file.declared_profile("X-V")) {
    xv.profile = *declared;
    xv.profile_source = "declared";
  } else {
    std::string xsource;
    xv.profile = ambient_profile(file, m, opt.profile_bound, opt, xsource);
    for (const auto& zf : strata_factors) xv.profile = xv.profile.minus(zf.profile);
    xv.profile_source = strata_factors.empty() ? xsource : "difference";
  }
  xv.profile.declared_dim = m;
  xv.value = zeta::zeta_value(xv.profile, m + 1);
  out.factors.push_back(std::move(xv));
  for (auto& zf : strata_factors) out.factors.push_back(std::move(zf));

  Rational exact = 1, lo = 1, hi = 1;
  bool all_exact = true, bounded = true;
  for (const auto& zf : out.factors) {
    for (const auto& f : zf.value.flags) out.flags.push_back(zf.name + ": " + f);
    if (zf.value.exact) {
      exact *= *zf.value.exact;
    } else {
      all_exact = false;
      if (opt.require_exact)
        throw Error(ErrorKind::MissingProfile, "sieve.predict_density",
                    "no point-count polynomial for " + zf.name + "; declare its profile");
    }
    lo *= zf.value.lower;
    if (zf.value.upper)
      hi *= *zf.value.upper;
    else
      bounded = false;
  }
  if (all_exact) {
    out.value = 1 / exact;
    out.lower = out.upper = *out.value;
  } else {
    out.lower = bounded ? Rational(1 / hi) : Rational(0);
    out.upper = 1 / lo;
    out.flags.push_back("value bracketed from truncated Euler products (heuristic tail)");
  }
  return out;
}

LowDegreePrediction low_degree_predictor(const SchemeFile& file, int r, const PredictOptions& opt) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "sieve.low_degree_predictor", "r must be at least 1");
  LowDegreePrediction out;
  out.r = r;
  out.m = resolve_dim(file, opt, out.flags);
  out.value = 1;
  const int B = r - 1;
  if (B == 0) return out;
  const std::uint64_t q = file.field.q();

  std::string source;
  CountProfile xp = ambient_profile(file, out.m, B, opt, source);
  if (!xp.exact_through(B)) xp = zeta::profile_from_scheme(file.X(), B, opt.fit, opt.enumeration);
  std::vector<Integer> rest(B);
  for (int d = 1; d <= B; ++d) rest[d - 1] = xp.closed_points(d);

  std::vector<LowDegreeFactor> strata_factors;
  if (auto V = file.V()) {
    auto table = variety::stratify(*V, B, stratify_options(file, opt));
    for (const auto& f : table.flags) out.flags.push_back(f);
    for (const auto& [e, st] : table.strata) {
      const auto a = variety::degree_counts(st.points, B);
      for (int d = 1; d <= B; ++d) {
        if (a[d - 1] == 0) continue;
        rest[d - 1] -= a[d - 1];
        strata_factors.push_back({"V_" + std::to_string(e), d, out.m - e, a[d - 1]});
      }
    }
  }
  for (int d = 1; d <= B; ++d) {
    if (rest[d - 1] < 0) throw Error(ErrorKind::ProfileMismatch, "sieve.low_degree_predictor", "V has more points than X");
    if (rest[d - 1] > 0) out.factors.push_back({"X-V", d, out.m + 1, rest[d - 1]});
  }
  for (auto& f : strata_factors) out.factors.push_back(std::move(f));

  for (const auto& f : out.factors) {
    if (f.s <= 0) {
      // e(P) >= m: no section through P is smooth of dimension m - 1 there.
      out.value = 0;
      continue;
    }
    const Integer qs = zeta::ipow(q, static_cast<unsigned long>(f.s) * f.degree);
    const unsigned long c = f.count.get_ui();
    Integer num, den;
    const Integer base = qs - 1;
    mpz_pow_ui(num.get_mpz_t(), base.get_mpz_t(), c);
    mpz_pow_ui(den.get_mpz_t(), qs.get_mpz_t(), c);
    out.value *= Rational(num, den);
  }
  out.value.canonicalize();
  return out;
}

SingDistPrediction predict_sing_dist(const SchemeFile& file, int ell_max, const PredictOptions& opt) {
  if (ell_max < 0) throw Error(ErrorKind::InvalidArgument, "sieve.predict_sing_dist", "ell_max must be >= 0");
  SingDistPrediction out;
  out.m = resolve_dim(file, opt, out.flags);
  if (file.z_equations) out.flags.push_back("Z is ignored by the singular-point distribution");
  std::string source;
  const CountProfile prof = ambient_profile(file, out.m, std::max(opt.profile_bound, ell_max), opt, source);
  if (!prof.exact_through(ell_max))
    throw Error(ErrorKind::InsufficientProfile, "sieve.predict_sing_dist",
                "closed-point counts of X are not known through degree " + std::to_string(ell_max));
  const auto z = zeta::zeta_value(prof, out.m + 1);
  for (const auto& f : z.flags) out.flags.push_back(f);
  Rational sum_lo = 0, sum_hi = 0;
  for (int ell = 0; ell <= ell_max; ++ell) {
    SingDistEntry e;
    e.ell = ell;
    const Rational zl = zeta::zeta_ell(prof, ell, out.m + 1);
    if (z.exact) {
      e.exact = zl / *z.exact;
      e.lower = e.upper = *e.exact;
    } else {
      e.lower = z.upper ? Rational(zl / *z.upper) : Rational(0);
      e.upper = zl / z.lower;
    }
    sum_lo += e.lower;
    sum_hi += e.upper;
    out.entries.push_back(std::move(e));
  }
  out.residual_lower = 1 - sum_hi;
  out.residual_upper = 1 - sum_lo;
  return out;
}

EstimateReport estimate(const SchemeFile& file, const EstimateOptions& opt) {
  if (opt.degrees.empty()) throw Error(ErrorKind::InvalidArgument, "sieve.estimate", "no degrees given");
  if (!opt.budget.exhaustive && opt.budget.samples == 0)
    throw Error(ErrorKind::InvalidArgument, "sieve.estimate", "sample budget must be positive");
  EstimateReport out;
  PredictOptions popt;
  popt.enumeration = opt.enumeration;
  out.m = resolve_dim(file, popt, out.flags);
  const auto X = file.X();
  int declared = 1;
  for (const auto& [e, dim] : file.dim_strata) declared = std::max(declared, dim + 1);
  out.sing_bound = opt.sing_bound.value_or(std::max(2, declared));
  if (out.sing_bound < 1) throw Error(ErrorKind::InvalidArgument, "sieve.estimate", "sing bound must be >= 1");
  const bool small_plane = file.n == 2 && is_projective_space(X) &&
                           std::all_of(opt.degrees.begin(), opt.degrees.end(), [](int d) { return d <= 5; });
  out.exact = opt.exact.value_or(opt.budget.exhaustive && small_plane);
  if (!opt.exact && out.exact) out.flags.push_back("exact mode on by default for exhaustive plane curves of degree <= 5");
  out.upper_bound = !out.exact;
  if (!out.exact)
    out.flags.push_back("bounded mode: smoothness checked at closed points of degree <= " +
                        std::to_string(out.sing_bound) + "; fractions are upper bounds");
  if (!opt.budget.exhaustive) out.flags.push_back("sampled: " + std::to_string(opt.budget.samples) + " forms per degree");

  const std::vector<MPoly> gens = file.z_equations ? *file.z_equations : std::vector<MPoly>{};
  KernelOptions ko;
  ko.exact = out.exact;
  ko.need_ell = opt.need_ell;
  ko.ell_max = opt.ell_max;
  ko.exhaustive_cap = opt.exhaustive_cap;
  out.aggregate.ell.assign(static_cast<std::size_t>(opt.ell_max) + 2, 0);
  for (int d : opt.degrees) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "sieve.estimate", "degrees must be >= 1");
    DegreeEstimate de;
    de.d = d;
    auto ib = ideal_basis(file.field, file.n + 1, gens, d);
    if (ib.capped) de.flags.push_back("saturation of the ideal of Z stopped at its cap");
    de.dim_I = ib.basis.size();
    const auto prob = make_problem(X, out.m, d, std::move(ib.basis), out.sing_bound, opt.enumeration);
    const auto cert = out.exact ? make_certifier(prob) : nullptr;
    de.tally = opt.budget.exhaustive ? run_exhaustive(prob, ko, cert.get())
                                     : run_sampled(prob, ko, opt.budget.samples, opt.seed, cert.get());
    de.fraction = ratio(de.tally.smooth, de.tally.total);
    if (de.tally.unresolved > 0)
      de.flags.push_back(std::to_string(de.tally.unresolved) +
                         " forms have no singular point of degree <= B but no emptiness certificate; counted singular");
    if (opt.need_ell && de.tally.beyond_bound > 0 && out.sing_bound < opt.ell_max)
      de.flags.push_back(std::to_string(de.tally.beyond_bound) +
                         " forms are singular only beyond degree B; their ell is > B and is binned in the overflow bucket");
    out.aggregate.merge(de.tally);
    out.per_degree.push_back(std::move(de));
  }
  return out;
}

EstimateReport estimate_density(const SchemeFile& file, EstimateOptions options) {
  options.need_ell = false;
  return estimate(file, options);
}

EstimateReport estimate_sing_dist(const SchemeFile& file, EstimateOptions options) {
  options.need_ell = true;
  return estimate(file, options);
}

LowDegreeEstimate estimate_low_degree(const SchemeFile& file, int r, int d, std::uint64_t samples,
                                      std::uint64_t seed, const variety::EnumerationOptions& enumeration) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "sieve.estimate_low_degree", "r must be at least 1");
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "sieve.estimate_low_degree", "sample budget must be positive");
  LowDegreeEstimate out;
  out.r = r;
  out.d = d;
  PredictOptions popt;
  popt.enumeration = enumeration;
  std::vector<std::string> flags;
  const int m = resolve_dim(file, popt, flags);
  const std::vector<MPoly> gens = file.z_equations ? *file.z_equations : std::vector<MPoly>{};
  auto ib = ideal_basis(file.field, file.n + 1, gens, d);
  out.dim_I = ib.basis.size();
  const auto prob = make_problem(file.X(), m, d, std::move(ib.basis), r - 1, enumeration);
  KernelOptions ko;
  ko.need_ell = false;
  ko.ell_max = 0;
  out.tally = run_sampled(prob, ko, samples, seed);
  out.fraction = ratio(out.tally.smooth, out.tally.total);
  return out;
}

// ---- embedder ----

namespace {

MPoly random_form(const std::vector<MPoly>& basis, const gf::FieldSpec& F, int nvars, std::mt19937_64& rng) {
  MPoly f(F, nvars);
  for (const auto& b : basis) {
    const auto c = static_cast<Code>(rng() % F.q());
    if (c) f = f + b.scaled(c);
  }
  return f;
}

graded::EmptinessCertificate singular_certificate(const std::vector<MPoly>& eqs, const MPoly& f, int nvars) {
  graded::GradedIdeal J(f.field(), nvars, graded::singular_locus_generators(eqs, f));
  graded::EmptinessOptions eo;
  eo.witness_degree = 0;
  return graded::is_projectively_empty(J, eo);
}

std::uint64_t predicted_tries(const SchemePresentation& C, const EmbedOptions& opt, std::vector<std::string>& flags) {
  if (opt.tries_per_degree) return *opt.tries_per_degree;
  SchemeFile file;
  file.field = C.field;
  file.n = C.ambient_dim();
  file.z_equations = C.equations;
  file.dim_x = file.n;
  try {
    PredictOptions popt;
    popt.enumeration = opt.enumeration;
    popt.stratify_bound = opt.precheck_bound;
    const auto pred = predict_density(file, popt);
    const double density = pred.lower.get_d();
    if (density > 0) {
      const double tries = std::ceil(20.0 / density);
      return static_cast<std::uint64_t>(std::clamp(tries, 20.0, 1e6));
    }
  } catch (const Error&) {
  }
  flags.push_back("no predicted density for the first step; " + std::to_string(opt.default_tries) + " tries per degree");
  return opt.default_tries;
}

}  // namespace

EmbedResult embed_curve(const SchemePresentation& C, int r, const EmbedOptions& opt) {
  EmbedResult out;
  out.n = C.ambient_dim();
  out.r = r;
  if (!C.removed.empty())
    throw Error(ErrorKind::UnsupportedPresentation, "sieve.embed_curve", "C must be closed in P^n");
  if (r < 0 || r > out.n) throw Error(ErrorKind::InvalidArgument, "sieve.embed_curve", "target dimension out of range");

  // The obvious obstruction: e(P) is at most the dimension of any smooth
  // scheme containing P.
  variety::StratifyOptions so;
  so.enumeration = opt.enumeration;
  const auto table = variety::stratify(C, opt.precheck_bound, so);
  for (const auto& f : table.flags) out.flags.push_back(f);
  for (const auto& [e, st] : table.strata) {
    if (e > r && !st.points.empty()) {
      out.status = EmbedStatus::Obstruction;
      out.witness = st.points.front();
      out.witness_e = e;
      return out;
    }
  }
  if (out.n == r) {
    out.status = EmbedStatus::Success;
    return out;
  }

  const gf::FieldSpec& F = C.field;
  const int nvars = C.nvars;
  std::vector<MPoly> eqs;
  for (int j = 1; j <= out.n - r; ++j) {
    SchemePresentation prev = SchemePresentation::projective_space(F, out.n);
    prev.equations = eqs;
    prev.declared_dim = out.n - j + 1;
    const auto rational_points = variety::enumerate_closed_points(prev, 1, opt.enumeration);
    const std::uint64_t budget = j == 1 ? predicted_tries(C, opt, out.flags) : opt.tries_per_degree.value_or(opt.default_tries);
    out.tried.clear();
    bool found = false;
    for (int d = 1; d <= opt.d_max && !found; ++d) {
      const auto ib = ideal_basis(F, nvars, C.equations, d);
      if (ib.basis.empty()) continue;
      std::mt19937_64 rng(splitmix64(opt.seed + (static_cast<std::uint64_t>(j) << 32) + static_cast<std::uint64_t>(d)));
      std::uint64_t tries = 0;
      while (tries < budget) {
        ++tries;
        const MPoly f = random_form(ib.basis, F, nvars, rng);
        if (f.is_zero()) continue;
        // Cheap rejection at rational points before the certificate.
        bool singular = false;
        for (const auto& P : rational_points) {
          if (mpoly::PolyEvaluator(f, P.residue)(P.representative) != 0) continue;
          if (!variety::is_smooth_at(prev, f, P, out.n - j)) {
            singular = true;
            break;
          }
        }
        if (singular) continue;
        auto cert = singular_certificate(eqs, f, nvars);
        if (cert.status != EmptinessStatus::Empty) continue;
        out.chain.push_back({d, f, std::move(cert), tries});
        eqs.push_back(f);
        found = true;
        break;
      }
      out.tried.emplace_back(d, tries);
    }
    if (!found) {
      out.status = EmbedStatus::NotFound;
      out.failed_step = j;
      return out;
    }
  }
  out.tried.clear();
  out.status = EmbedStatus::Success;
  return out;
}

ChainVerification verify_chain(const SchemePresentation& C, const std::vector<MPoly>& chain) {
  ChainVerification v;
  v.ok = true;
  graded::GradedIdeal IC(C.field, C.nvars, C.equations);
  std::vector<MPoly> eqs;
  for (const auto& f : chain) {
    const bool contained = !f.is_zero() && f.is_homogeneous() && IC.contains(f).member;
    const auto status = singular_certificate(eqs, f, C.nvars).status;
    v.contains_C.push_back(contained);
    v.smooth.push_back(status);
    v.ok = v.ok && contained && status == EmptinessStatus::Empty;
    eqs.push_back(f);
  }
  return v;
}

}  // namespace ffsieve::sieve
