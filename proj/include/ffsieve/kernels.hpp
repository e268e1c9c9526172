#pragma once

// Classification of hypersurface sections X ∩ H_f for f ranging over a
// subspace I_d, by the jets of f at the closed points of X of bounded
// degree. A section is singular at P exactly when f(P) = 0 and df vanishes
// on the tangent space of X at P, and both are F_p-linear in f, so the
// exhaustive kernel walks I_d in Gray-code order updating one basis jet per
// step. The serial reference evaluates every f from scratch.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ffsieve/graded.hpp"
#include "ffsieve/mpoly.hpp"
#include "ffsieve/variety.hpp"

namespace ffsieve::sieve {

using gf::Code;
using mpoly::MPoly;

struct JetPoint {
  variety::ClosedPoint point;
  int chart = 0;
  // Affine tangent vectors of X at P (coordinates indexed by the variables
  // other than the chart). Empty when X is singular at P; then only f(P)
  // enters the jet.
  std::vector<std::vector<Code>> tangents;
  bool x_singular = false;
};

// Forms are written over the F_p-basis g^j * basis[i] (g the polynomial
// generator of F_q over F_p), digit index i * k + j; the index of a form is
// its digit vector read in base p with digit 0 least significant.
struct SmoothnessProblem {
  variety::SchemePresentation X;
  int dim = 0;     // m = dim X; smooth sections have dimension m - 1
  int degree = 0;  // d
  std::vector<MPoly> basis;
  int point_bound = 0;
  std::vector<JetPoint> points;

  const gf::FieldSpec& field() const { return X.field; }
  std::size_t prime_dimension() const { return basis.size() * static_cast<std::size_t>(X.field.k()); }
  MPoly form(std::span<const std::uint32_t> digits) const;
  std::vector<std::uint32_t> digits_of(std::uint64_t index) const;
};

// Closed points of X of degree <= point_bound with their tangent data.
// Throws SpecMismatch if X has local dimension below `dim` at some point.
SmoothnessProblem make_problem(const variety::SchemePresentation& X, int dim, int degree, std::vector<MPoly> basis,
                               int point_bound, const variety::EnumerationOptions& enumeration = {});

struct IdealBasis {
  std::vector<MPoly> basis;
  bool capped = false;  // saturation stopped at its cap
};

// Basis of I_d for the saturated ideal of `generators` (all of S_d when
// there are none).
IdealBasis ideal_basis(const gf::FieldSpec& field, int nvars, const std::vector<MPoly>& generators, int d);

// Decides emptiness of the singular locus of X ∩ H_f for forms with no
// singular point of bounded degree. Must be callable concurrently.
class Certifier {
 public:
  virtual ~Certifier() = default;
  virtual graded::EmptinessStatus operator()(std::span<const std::uint32_t> digits) const = 0;
};

// Jacobian-ideal certificate through graded::is_projectively_empty. X must
// be P^n, P^n minus a closed set, or a complete intersection of dimension
// `dim`; anything else throws UnsupportedPresentation.
std::unique_ptr<Certifier> make_generic_certifier(const SmoothnessProblem& problem);
// Bit-packed certificate for X = P^n over F_2: J = (f, df) at the
// regularity degree. Nullptr when not applicable.
std::unique_ptr<Certifier> make_gf2_certifier(const SmoothnessProblem& problem);
// The fast certifier when applicable, else the generic one.
std::unique_ptr<Certifier> make_certifier(const SmoothnessProblem& problem);

struct KernelOptions {
  bool exact = false;     // certify forms with no singular point found
  bool need_ell = true;   // find every singular point, not just one
  int ell_max = 3;
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 34;
};

// Per-form ell codes used by records: >= 0 sum of degrees of singular
// points found (0 means smooth), kSingular when need_ell is off and some
// singular point was found, kZeroForm, kBeyondBound (no singular point of
// degree <= B, but the certificate proves one exists), kUnresolved.
inline constexpr int kSingular = 1 << 30;
inline constexpr int kZeroForm = -1;
inline constexpr int kUnresolved = -2;
inline constexpr int kBeyondBound = -3;

struct Tally {
  std::uint64_t total = 0;
  std::uint64_t smooth = 0;
  std::uint64_t zero_form = 0;
  std::uint64_t beyond_bound = 0;  // singular only at points of degree > B
  std::uint64_t unresolved = 0;    // no singular point found, certificate inconclusive
  std::vector<std::uint64_t> ell;  // bins 0..ell_max, then one overflow bin

  void merge(const Tally& other);
  friend bool operator==(const Tally& a, const Tally& b) = default;
};

// Exhaustive run over all of I_d. When `record` is given it is resized to
// p^{prime_dimension} and receives the ell code of every form by index.
Tally run_exhaustive(const SmoothnessProblem& problem, const KernelOptions& options, const Certifier* certifier = nullptr,
                     std::vector<int>* record = nullptr);

// `samples` uniform forms drawn per block of kSampleBlock from
// mt19937_64 seeded with splitmix64(seed + block); independent of threads.
inline constexpr std::uint64_t kSampleBlock = 1024;
Tally run_sampled(const SmoothnessProblem& problem, const KernelOptions& options, std::uint64_t samples,
                  std::uint64_t seed, const Certifier* certifier = nullptr);

// Serial reference: builds each form and tests every closed point with
// variety::is_smooth_at.
int classify_serial(const SmoothnessProblem& problem, std::span<const std::uint32_t> digits,
                    const KernelOptions& options, const Certifier* certifier);
Tally run_exhaustive_serial(const SmoothnessProblem& problem, const KernelOptions& options,
                            const Certifier* certifier = nullptr, std::vector<int>* record = nullptr);
Tally run_sampled_serial(const SmoothnessProblem& problem, const KernelOptions& options, std::uint64_t samples,
                         std::uint64_t seed, const Certifier* certifier = nullptr);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ffsieve::sieve
