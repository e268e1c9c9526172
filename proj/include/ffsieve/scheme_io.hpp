#pragma once

// Text format for scheme files:
//
//   # comment
//   q = 2^3 modulus g^3 + g + 1     (modulus optional; "q = 8" also works)
//   P 3 x y z w                     (ambient P^n and optional variable names)
//   X:                              (equations of X, one per line or comma
//     ...                            separated; no equations means P^n)
//   X.remove:                       (closed locus removed from X)
//   Z:                              (omitted: Z is empty)
//   dim X = 3
//   dim V_2 = 0                     (stratum of embedding dimension 2)
//   profile V_1 = T - 1             (|V_1(F_{q^e})| with T = q^e)
//
// Profiles may be declared for X, X-V and V_e.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffsieve/profile.hpp"
#include "ffsieve/variety.hpp"

namespace ffsieve::variety {

struct SchemeFile {
  gf::FieldSpec field;
  int n = 0;
  std::vector<std::string> names;
  std::vector<MPoly> x_equations;
  std::vector<MPoly> x_removed;
  std::optional<std::vector<MPoly>> z_equations;  // nullopt: Z empty
  std::optional<int> dim_x;
  std::map<int, int> dim_strata;
  std::map<std::string, std::vector<zeta::PolyTerm>> profiles;

  SchemePresentation X() const;
  // V = X ∩ Z; nullopt when Z is empty.
  std::optional<SchemePresentation> V() const;
  // Generators of the ideal of Z (the unit ideal when Z is empty).
  std::vector<MPoly> z_ideal() const;
  std::optional<zeta::CountProfile> declared_profile(const std::string& key) const;
};

// q_override re-reads the equations over F_q for a different q.
SchemeFile parse_scheme(const std::string& text, std::optional<std::uint64_t> q_override = std::nullopt);
SchemeFile load_scheme(const std::filesystem::path& path, std::optional<std::uint64_t> q_override = std::nullopt);
std::string serialize(const SchemeFile& s);
bool equivalent(const SchemeFile& a, const SchemeFile& b);

}  // namespace ffsieve::variety
