#pragma once

// Densities of smooth hypersurface sections: the zeta-product predictor and
// its low-degree partial products, the distribution of the number of
// singular geometric points, the empirical estimators built on the kernels,
// and the recursive embedder for curves.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffsieve/graded.hpp"
#include "ffsieve/kernels.hpp"
#include "ffsieve/scheme_io.hpp"
#include "ffsieve/zeta.hpp"

namespace ffsieve::sieve {

using zeta::Rational;

enum class HypothesisStatus { Satisfied, Violated, Unknown };

// max_e (dim V_e + e) < m. On violation `e` and `dim` name the first
// offending stratum.
struct HypothesisCheck {
  HypothesisStatus status = HypothesisStatus::Unknown;
  int e = -1;
  int dim = -1;
  std::string dims_source;  // "declared", "growth", "mixed" or "none"
};
std::string to_string(const HypothesisCheck& h);

struct PredictOptions {
  int stratify_bound = 4;  // closed points of V are enumerated to this degree
  int profile_bound = 4;   // enumeration of X when no profile is known
  bool require_exact = false;  // MissingProfile instead of a bracket
  zeta::FitOptions fit;
  variety::EnumerationOptions enumeration;
};

// dim X: declared, n for X = P^n, else read off point-count growth (a flag
// is appended).
int resolve_dim(const variety::SchemeFile& file, const PredictOptions& options, std::vector<std::string>& flags);

// Profile of X with declared_dim = m: declared, P^n, or enumerated to
// `bound` with a fitted polynomial when one validates.
zeta::CountProfile ambient_profile(const variety::SchemeFile& file, int m, int bound, const PredictOptions& options,
                                   std::string& source);

struct ZetaFactor {
  std::string name;  // "X-V", "V_1", ...
  zeta::CountProfile profile;
  zeta::ZetaValue value;
  std::string profile_source;  // "declared", "fitted", "projective space", "difference", "enumerated"
};

struct DensityPrediction {
  int m = 0;
  std::optional<Rational> value;  // exact, 0 on violation
  Rational lower, upper;          // equal to value when exact
  HypothesisCheck hypothesis;
  std::vector<ZetaFactor> factors;  // X-V first, then strata by e
  variety::StratumTable strata;
  std::vector<std::string> flags;
};

// 1/[zeta_{X-V}(m+1) prod_e zeta_{V_e}(m-e)], or 0 when some nonempty
// stratum has dim V_e + e >= m.
DensityPrediction predict_density(const variety::SchemeFile& file, const PredictOptions& options = {});

struct LowDegreeFactor {
  std::string name;
  int degree = 0;
  int s = 0;  // factor (1 - q^{-s degree})^count; s <= 0 makes it 0
  zeta::Integer count;
};

struct LowDegreePrediction {
  int m = 0;
  int r = 0;
  Rational value;
  std::vector<LowDegreeFactor> factors;
  std::vector<std::string> flags;
};

// Product of the local factors over closed points of degree < r.
LowDegreePrediction low_degree_predictor(const variety::SchemeFile& file, int r, const PredictOptions& options = {});

struct SingDistEntry {
  int ell = 0;
  std::optional<Rational> exact;
  Rational lower, upper;
};

struct SingDistPrediction {
  int m = 0;
  std::vector<SingDistEntry> entries;  // ell = 0..ell_max
  Rational residual_lower, residual_upper;  // 1 - sum of entries
  std::vector<std::string> flags;
};

// zeta^{[ell]}_X(m+1)/zeta_X(m+1) for ell <= ell_max. Z is ignored.
SingDistPrediction predict_sing_dist(const variety::SchemeFile& file, int ell_max,
                                     const PredictOptions& options = {});

struct Budget {
  bool exhaustive = true;
  std::uint64_t samples = 0;
};

struct EstimateOptions {
  std::vector<int> degrees;
  Budget budget;
  std::uint64_t seed = 0;
  std::optional<int> sing_bound;  // default max(2, max declared dim V_e + 1)
  std::optional<bool> exact;      // default: exhaustive runs on P^2 with d <= 5
  int ell_max = 3;
  bool need_ell = true;
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 34;
  variety::EnumerationOptions enumeration;
};

struct DegreeEstimate {
  int d = 0;
  std::size_t dim_I = 0;  // dimension of I_d over F_q
  Tally tally;
  Rational fraction;  // smooth / total
  std::vector<std::string> flags;
};

struct EstimateReport {
  int m = 0;
  int sing_bound = 0;
  bool exact = false;
  bool upper_bound = true;  // bounded mode only sees points of degree <= B
  std::vector<DegreeEstimate> per_degree;
  Tally aggregate;
  std::vector<std::string> flags;
};

// Tallies smoothness of X ∩ H_f for f in I_d, the degree-d piece of the
// saturated ideal of Z.
EstimateReport estimate(const variety::SchemeFile& file, const EstimateOptions& options);
// The same run without the ell histogram.
EstimateReport estimate_density(const variety::SchemeFile& file, EstimateOptions options);
EstimateReport estimate_sing_dist(const variety::SchemeFile& file, EstimateOptions options);

struct LowDegreeEstimate {
  int r = 0;
  int d = 0;
  std::size_t dim_I = 0;
  Tally tally;
  Rational fraction;
};

// Sampled fraction of f in I_d smooth at every closed point of degree < r.
LowDegreeEstimate estimate_low_degree(const variety::SchemeFile& file, int r, int d, std::uint64_t samples,
                                      std::uint64_t seed, const variety::EnumerationOptions& enumeration = {});

struct EmbedOptions {
  int d_max = 8;
  std::uint64_t seed = 0;
  int precheck_bound = 3;  // e(P) is checked on points of C up to this degree
  std::optional<std::uint64_t> tries_per_degree;  // default from the predicted density
  std::uint64_t default_tries = 200;
  variety::EnumerationOptions enumeration;
};

struct ChainStep {
  int degree = 0;
  mpoly::MPoly f;
  graded::EmptinessCertificate certificate;  // singular locus of the new intersection
  std::uint64_t tries = 0;
};

enum class EmbedStatus { Success, Obstruction, NotFound };
std::string to_string(EmbedStatus s);

struct EmbedResult {
  EmbedStatus status = EmbedStatus::NotFound;
  int n = 0;
  int r = 0;
  std::vector<ChainStep> chain;
  // Obstruction: a closed point of C with e(P) > r.
  std::optional<variety::ClosedPoint> witness;
  int witness_e = -1;
  // NotFound: the step that failed and the tries made per degree.
  int failed_step = -1;
  std::vector<std::pair<int, std::uint64_t>> tried;
  std::vector<std::string> flags;
};

// Smooth complete intersection X_{n-r} = H_1 ∩ ... ∩ H_{n-r} containing C,
// built one hypersurface at a time. C must be closed in P^n.
EmbedResult embed_curve(const variety::SchemePresentation& C, int r, const EmbedOptions& options = {});

struct ChainVerification {
  bool ok = false;
  std::vector<bool> contains_C;
  std::vector<graded::EmptinessStatus> smooth;  // Empty means smooth
};

// Recomputes containment and the emptiness certificates from scratch.
ChainVerification verify_chain(const variety::SchemePresentation& C, const std::vector<mpoly::MPoly>& chain);

}  // namespace ffsieve::sieve
