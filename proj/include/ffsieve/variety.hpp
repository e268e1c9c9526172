#pragma once

// Closed points of quasi-projective schemes over F_q, Jacobian smoothness
// tests, local embedding dimension and the strata V_e.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffsieve/gf.hpp"
#include "ffsieve/mpoly.hpp"
#include "ffsieve/profile.hpp"

namespace ffsieve::variety {

using gf::Code;
using mpoly::MPoly;

// V(equations) minus V(removed) inside P^{nvars-1}. An empty `removed`
// list removes nothing.
struct SchemePresentation {
  gf::FieldSpec field;
  int nvars = 0;
  std::vector<MPoly> equations;
  std::vector<MPoly> removed;
  std::optional<int> declared_dim;

  int ambient_dim() const { return nvars - 1; }
  static SchemePresentation projective_space(const gf::FieldSpec& field, int n);
  // Coordinates in `target`, an extension of the base field.
  bool contains(const gf::FieldSpec& target, std::span<const Code> point) const;
};

// Degree of the base field over F_p.
inline int base_degree(const SchemePresentation& X) { return X.field.k(); }

struct ClosedPoint {
  int degree = 0;
  gf::FieldSpec residue;              // F_{q^degree}
  std::vector<Code> representative;  // first nonzero coordinate 1; least in its orbit
  int base_k = 1;                     // q = p^base_k

  // The `degree` conjugates, starting with the representative.
  std::vector<std::vector<Code>> orbit() const;
  std::string to_string() const;
};

// Applies x -> x^q to every coordinate.
std::vector<Code> frobenius(const gf::FieldSpec& F, std::span<const Code> point, int base_k);

struct EnumerationOptions {
  std::uint64_t point_cap = std::uint64_t{1} << 24;  // total normalized points scanned
};

// All closed points of degree <= max_degree, ordered by degree and then by
// representative.
std::vector<ClosedPoint> enumerate_closed_points(const SchemePresentation& X, int max_degree,
                                                 const EnumerationOptions& options = {});

// Raw counts |X(F_{q^e})| for e = 1..max_degree from a closed-point list.
std::vector<zeta::Integer> point_counts(const std::vector<ClosedPoint>& points, int max_degree);
// Closed-point counts a_d for d = 1..max_degree.
std::vector<zeta::Integer> degree_counts(const std::vector<ClosedPoint>& points, int max_degree);

// Rank over F of the Jacobian of `polys` at `point`, computed in the affine
// chart x_chart = 1 (the chart coordinate must be nonzero). Without a chart
// the first nonzero coordinate is used.
std::size_t jacobian_rank(const std::vector<MPoly>& polys, const gf::FieldSpec& F, std::span<const Code> point,
                          std::optional<int> chart = std::nullopt);

// Jacobian criterion for X ∩ V(f) (or X alone) at P: rank equals
// ambient_dim - expected_dim.
bool is_smooth_at(const SchemePresentation& X, const std::optional<MPoly>& f, const ClosedPoint& P, int expected_dim,
                  std::optional<int> chart = std::nullopt);

// n - rank of the Jacobian of V's equations at P.
int embedding_dimension(const SchemePresentation& V, const ClosedPoint& P, std::optional<int> chart = std::nullopt);

struct SaturationResult {
  SchemePresentation scheme;
  int added = 0;
  bool capped = false;  // some saturation step hit its cap
};

// Adds generators of the degreewise saturation up to max(deg g) + 2 so that
// Jacobian ranks reflect the ideal of the scheme rather than its
// presentation.
SaturationResult saturate_presentation(const SchemePresentation& V);

// Dimension suggested by growth of |X(F_{q^e})|, e <= counts.size():
// round(log_q N_e / e) at the largest e with N_e > 0; nullopt if all zero.
std::optional<int> growth_dimension(const std::vector<zeta::Integer>& counts, std::uint64_t q);

struct Stratum {
  int e = 0;
  std::vector<ClosedPoint> points;
  std::optional<zeta::CountProfile> declared_profile;
  std::optional<int> dim;  // nullopt is -infinity
  bool dim_declared = false;
};

struct StratumTable {
  int max_degree = 0;
  std::map<int, Stratum> strata;
  bool saturation_capped = false;
  std::vector<std::string> flags;
};

struct StratifyOptions {
  EnumerationOptions enumeration;
  std::map<int, int> declared_dims;
  std::map<int, zeta::CountProfile> declared_profiles;
  bool saturate = true;
};

// Every enumerated closed point of V goes to the stratum of its e(P).
// Declared profiles are checked against the enumeration (ProfileMismatch).
StratumTable stratify(const SchemePresentation& V, int max_degree, const StratifyOptions& options = {});

}  // namespace ffsieve::variety
