#pragma once

// Graded linear algebra: degree pieces of homogeneous ideals as row spaces
// in a monomial basis, degreewise saturation, membership, and projective
// emptiness certificates. Everything reduces to row echelon forms.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffsieve/gf.hpp"
#include "ffsieve/mpoly.hpp"

namespace ffsieve::graded {

using gf::Code;

// Row space in reduced row-echelon form. Columns follow
// mpoly::monomials_of_degree(nvars, degree).
struct SubspaceBasis {
  gf::FieldSpec field;
  int nvars = 0;
  int degree = 0;
  std::size_t ncols = 0;
  std::vector<std::vector<Code>> rows;  // pivot entry 1, sorted by pivot
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return rows.size(); }
  bool full() const { return rows.size() == ncols; }
  // v minus its projection along pivot columns; zero iff v lies in the span.
  std::vector<Code> residue(std::span<const Code> v) const;
  bool contains(std::span<const Code> v) const;
  std::vector<mpoly::MPoly> polynomials() const;
};

// Incremental Gaussian elimination over F_q. Each stored row's first
// nonzero entry is its pivot and equals 1; rows over F_2 are packed in words.
class Echelon {
 public:
  Echelon(gf::FieldSpec field, std::size_t ncols);

  // Returns true if the row was independent of the rows inserted so far.
  bool insert(std::span<const Code> row);
  std::size_t rank() const { return count_; }
  std::size_t ncols() const { return ncols_; }
  bool full() const { return count_ == ncols_; }
  SubspaceBasis reduced(int nvars, int degree) const;

 private:
  gf::FieldSpec field_;
  std::size_t ncols_;
  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<long> pivot_row_;  // column -> stored row, or -1
  std::vector<std::vector<std::uint64_t>> bits_;
  std::vector<std::vector<Code>> rows_;
};

// Index of the product of monomial i of degree da and monomial j of degree
// db inside the degree da+db basis. Shared, lazily built, thread-safe.
class MulTable {
 public:
  static std::shared_ptr<const MulTable> get(int nvars, int da, int db);
  MulTable(int nvars, int da, int db);
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return idx_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<std::uint32_t> idx_;
};

struct SaturatedPiece {
  SubspaceBasis basis;
  int exponent = 0;  // N at which the result was taken
  bool stable = false;
  bool capped = false;
};

class GradedIdeal {
 public:
  GradedIdeal(gf::FieldSpec field, int nvars, std::vector<mpoly::MPoly> generators);

  const gf::FieldSpec& field() const { return field_; }
  int nvars() const { return nvars_; }
  const std::vector<mpoly::MPoly>& generators() const { return gens_; }
  std::vector<int> generator_degrees() const;

  // span{ m * g : deg m = d - deg g }, cached per degree.
  const SubspaceBasis& piece(int d) const;
  // { f in S_d : x_i^N f in piece(d + N) for all i }, N increased until two
  // consecutive values agree or N reaches the cap (default d + sum deg g).
  SaturatedPiece saturated_piece(int d, std::optional<int> cap = std::nullopt) const;
  int default_saturation_cap(int d) const;

  struct Membership {
    bool member = false;
    bool capped = false;
  };
  Membership contains(const mpoly::MPoly& f, bool strict = false) const;

 private:
  gf::FieldSpec field_;
  int nvars_;
  std::vector<mpoly::MPoly> gens_;
  mutable std::map<int, SubspaceBasis> pieces_;
};

enum class EmptinessStatus { Empty, Nonempty, Inconclusive };
std::string to_string(EmptinessStatus s);

struct Witness {
  gf::FieldSpec field;
  std::vector<Code> coords;
  std::string to_string() const;
};

struct EmptinessCertificate {
  EmptinessStatus status = EmptinessStatus::Inconclusive;
  int k = -1;      // least k with J_k = S_k when Empty
  int k_max = -1;  // largest degree examined
  std::optional<Witness> witness;
  // Nonempty because J_k != S_k at a degree where emptiness would force
  // equality; no witness point was needed.
  bool by_degree_bound = false;
};

// Degree from which J_k = S_k holds for every ideal with empty projective
// zero locus: sum of the nvars largest generator degrees minus nvars - 1.
// Nullopt when there are fewer than nvars nonzero generators (then the
// zero locus is nonempty).
std::optional<int> regularity_bound(std::span<const int> degrees, int nvars);

struct EmptinessOptions {
  std::optional<int> k_max;  // default: regularity_bound
  int witness_degree = 4;    // search F_{q^e} points for e <= this
  std::uint64_t witness_point_cap = std::uint64_t{1} << 20;
};

EmptinessCertificate is_projectively_empty(const GradedIdeal& J, const EmptinessOptions& options = {});

// The (r x r) minors of a matrix of polynomials.
std::vector<mpoly::MPoly> minors(const std::vector<std::vector<mpoly::MPoly>>& matrix, int r);

// Generators of the singular locus of V(eqs) ∩ V(f) as a complete
// intersection of codimension eqs.size() + 1: eqs, f and the maximal
// minors of the Jacobian of (eqs, f).
std::vector<mpoly::MPoly> singular_locus_generators(const std::vector<mpoly::MPoly>& eqs, const mpoly::MPoly& f);

}  // namespace ffsieve::graded
