#include "ffsieve/graded.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ffsieve/error.hpp"

namespace ffsieve::graded {

using mpoly::MPoly;
using mpoly::MonomialBasis;

std::vector<Code> SubspaceBasis::residue(std::span<const Code> v) const {
  std::vector<Code> out(v.begin(), v.end());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Code c = out[pivots[r]];
    if (c == 0) continue;
    const Code neg = field.neg(c);
    const auto& row = rows[r];
    for (std::size_t j = pivots[r]; j < ncols; ++j)
      if (row[j] != 0) out[j] = field.add(out[j], field.mul(neg, row[j]));
  }
  return out;
}

bool SubspaceBasis::contains(std::span<const Code> v) const {
  auto r = residue(v);
  return std::all_of(r.begin(), r.end(), [](Code c) { return c == 0; });
}

std::vector<MPoly> SubspaceBasis::polynomials() const {
  MonomialBasis basis(nvars, degree);
  std::vector<MPoly> out;
  for (const auto& row : rows) out.push_back(mpoly::from_dense(field, basis, row));
  return out;
}

Echelon::Echelon(gf::FieldSpec field, std::size_t ncols)
    : field_(std::move(field)), ncols_(ncols), words_((ncols + 63) / 64), pivot_row_(ncols, -1) {}

bool Echelon::insert(std::span<const Code> row) {
  if (field_.q() == 2) {
    std::vector<std::uint64_t> r(words_, 0);
    for (std::size_t j = 0; j < ncols_; ++j)
      if (row[j] & 1U) r[j / 64] |= std::uint64_t{1} << (j % 64);
    std::size_t w = 0;
    while (true) {
      while (w < words_ && r[w] == 0) ++w;
      if (w == words_) return false;
      const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(r[w]));
      const long pr = pivot_row_[c];
      if (pr < 0) {
        pivot_row_[c] = static_cast<long>(bits_.size());
        bits_.push_back(std::move(r));
        ++count_;
        return true;
      }
      const auto& s = bits_[static_cast<std::size_t>(pr)];
      for (std::size_t k = w; k < words_; ++k) r[k] ^= s[k];
    }
  }
  std::vector<Code> r(row.begin(), row.end());
  for (std::size_t c = 0; c < ncols_; ++c) {
    if (r[c] == 0) continue;
    const long pr = pivot_row_[c];
    if (pr < 0) {
      const Code inv = field_.inv(r[c]);
      for (std::size_t j = c; j < ncols_; ++j) r[j] = field_.mul(r[j], inv);
      pivot_row_[c] = static_cast<long>(rows_.size());
      rows_.push_back(std::move(r));
      ++count_;
      return true;
    }
    const Code neg = field_.neg(r[c]);
    const auto& s = rows_[static_cast<std::size_t>(pr)];
    for (std::size_t j = c; j < ncols_; ++j)
      if (s[j] != 0) r[j] = field_.add(r[j], field_.mul(neg, s[j]));
  }
  return false;
}

SubspaceBasis Echelon::reduced(int nvars, int degree) const {
  SubspaceBasis out;
  out.field = field_;
  out.nvars = nvars;
  out.degree = degree;
  out.ncols = ncols_;
  for (std::size_t c = 0; c < ncols_; ++c) {
    const long pr = pivot_row_[c];
    if (pr < 0) continue;
    std::vector<Code> row(ncols_, 0);
    if (field_.q() == 2) {
      const auto& b = bits_[static_cast<std::size_t>(pr)];
      for (std::size_t j = 0; j < ncols_; ++j) row[j] = static_cast<Code>((b[j / 64] >> (j % 64)) & 1U);
    } else {
      row = rows_[static_cast<std::size_t>(pr)];
    }
    out.rows.push_back(std::move(row));
    out.pivots.push_back(c);
  }
  // Clear each pivot column above its row; later pivots only touch later columns.
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const std::size_t pc = out.pivots[i];
    for (std::size_t j = 0; j < i; ++j) {
      const Code c = out.rows[j][pc];
      if (c == 0) continue;
      const Code neg = field_.neg(c);
      for (std::size_t k = pc; k < ncols_; ++k)
        if (out.rows[i][k] != 0) out.rows[j][k] = field_.add(out.rows[j][k], field_.mul(neg, out.rows[i][k]));
    }
  }
  return out;
}

MulTable::MulTable(int nvars, int da, int db) {
  MonomialBasis a(nvars, da), b(nvars, db), c(nvars, da + db);
  rows_ = a.size();
  cols_ = b.size();
  idx_.resize(rows_ * cols_);
  std::vector<int> e(static_cast<std::size_t>(nvars));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = a[i][v] + b[j][v];
      idx_[i * cols_ + j] = static_cast<std::uint32_t>(c.index_of(e));
    }
}

std::shared_ptr<const MulTable> MulTable::get(int nvars, int da, int db) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const MulTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{nvars, da, db}];
  if (!slot) slot = std::make_shared<const MulTable>(nvars, da, db);
  return slot;
}

GradedIdeal::GradedIdeal(gf::FieldSpec field, int nvars, std::vector<MPoly> generators)
    : field_(std::move(field)), nvars_(nvars) {
  for (auto& g : generators) {
    if (!(g.field() == field_) || g.nvars() != nvars_)
      throw Error(ErrorKind::SpecMismatch, "graded.ideal", "generator over a different ring");
    if (!g.is_homogeneous()) throw Error(ErrorKind::InvalidArgument, "graded.ideal", "generator is not homogeneous");
    if (!g.is_zero()) gens_.push_back(std::move(g));
  }
}

std::vector<int> GradedIdeal::generator_degrees() const {
  std::vector<int> out;
  for (const auto& g : gens_) out.push_back(g.total_degree());
  return out;
}

const SubspaceBasis& GradedIdeal::piece(int d) const {
  if (auto it = pieces_.find(d); it != pieces_.end()) return it->second;
  const std::size_t n = mpoly::monomial_count(nvars_, d);
  Echelon ech(field_, n);
  std::vector<Code> row(n);
  for (const auto& g : gens_) {
    const int e = g.total_degree();
    if (e > d) continue;
    auto dense = mpoly::to_dense(g, MonomialBasis(nvars_, e));
    auto tab = MulTable::get(nvars_, d - e, e);
    for (std::size_t i = 0; i < tab->rows() && !ech.full(); ++i) {
      std::fill(row.begin(), row.end(), 0);
      for (std::size_t t = 0; t < dense.size(); ++t)
        if (dense[t] != 0) row[(*tab)(i, t)] = dense[t];
      ech.insert(row);
    }
  }
  return pieces_.emplace(d, ech.reduced(nvars_, d)).first->second;
}

int GradedIdeal::default_saturation_cap(int d) const {
  int s = d;
  for (int e : generator_degrees()) s += e;
  return s;
}

SaturatedPiece GradedIdeal::saturated_piece(int d, std::optional<int> cap) const {
  const int n_max = cap.value_or(default_saturation_cap(d));
  const std::size_t dim_d = mpoly::monomial_count(nvars_, d);
  SubspaceBasis prev = piece(d);
  for (int N = 1; N <= n_max; ++N) {
    const SubspaceBasis& big = piece(d + N);
    // Residue coordinates live on the non-pivot columns of piece(d + N).
    std::vector<long> slot(big.ncols, -1);
    std::vector<long> pivot_of(big.ncols, -1);
    for (std::size_t r = 0; r < big.rows.size(); ++r) pivot_of[big.pivots[r]] = static_cast<long>(r);
    std::size_t free_cols = 0;
    for (std::size_t c = 0; c < big.ncols; ++c)
      if (pivot_of[c] < 0) slot[c] = static_cast<long>(free_cols++);
    const std::size_t width = static_cast<std::size_t>(nvars_) * free_cols;

    MonomialBasis powers(nvars_, N);
    auto tab = MulTable::get(nvars_, N, d);
    Echelon ech(field_, width + dim_d);
    std::vector<Code> row(width + dim_d);
    for (std::size_t j = 0; j < dim_d; ++j) {
      std::fill(row.begin(), row.end(), 0);
      for (int i = 0; i < nvars_; ++i) {
        std::vector<int> e(static_cast<std::size_t>(nvars_), 0);
        e[static_cast<std::size_t>(i)] = N;
        const std::size_t c = (*tab)(powers.index_of(e), j);
        const std::size_t base = static_cast<std::size_t>(i) * free_cols;
        if (pivot_of[c] < 0) {
          row[base + static_cast<std::size_t>(slot[c])] = 1;
        } else {
          const auto& br = big.rows[static_cast<std::size_t>(pivot_of[c])];
          for (std::size_t k = c + 1; k < big.ncols; ++k)
            if (slot[k] >= 0 && br[k] != 0) row[base + static_cast<std::size_t>(slot[k])] = field_.neg(br[k]);
        }
      }
      row[width + j] = 1;
      ech.insert(row);
    }
    auto aug = ech.reduced(nvars_, d);
    Echelon kernel(field_, dim_d);
    for (std::size_t r = 0; r < aug.rows.size(); ++r)
      if (aug.pivots[r] >= width) kernel.insert(std::span<const Code>(aug.rows[r]).subspan(width));
    SubspaceBasis cur = kernel.reduced(nvars_, d);
    if (cur.rank() == prev.rank()) return {std::move(prev), N - 1, true, false};
    prev = std::move(cur);
  }
  return {std::move(prev), n_max, false, true};
}

GradedIdeal::Membership GradedIdeal::contains(const MPoly& f, bool strict) const {
  if (!f.is_homogeneous()) throw Error(ErrorKind::InvalidArgument, "graded.contains", "polynomial is not homogeneous");
  if (f.is_zero()) return {true, false};
  const int d = f.total_degree();
  auto dense = mpoly::to_dense(f, MonomialBasis(nvars_, d));
  if (strict) return {piece(d).contains(dense), false};
  auto sat = saturated_piece(d);
  return {sat.basis.contains(dense), sat.capped};
}

std::string to_string(EmptinessStatus s) {
  switch (s) {
    case EmptinessStatus::Empty: return "empty";
    case EmptinessStatus::Nonempty: return "nonempty";
    case EmptinessStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string Witness::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? " : " : "") << field.format(coords[i]);
  os << ')';
  return os.str();
}

std::optional<int> regularity_bound(std::span<const int> degrees, int nvars) {
  std::vector<int> d(degrees.begin(), degrees.end());
  if (static_cast<int>(d.size()) < nvars) return std::nullopt;
  std::sort(d.begin(), d.end(), std::greater<>());
  int s = 0;
  for (int i = 0; i < nvars; ++i) s += d[static_cast<std::size_t>(i)];
  return s - nvars + 1;
}

namespace {

std::optional<Witness> search_witness(const GradedIdeal& J, const EmptinessOptions& opt) {
  const int n = J.nvars();
  for (int e = 1; e <= opt.witness_degree; ++e) {
    const std::uint64_t qe = [&] {
      std::uint64_t v = 1;
      for (int i = 0; i < e; ++i) v *= J.field().q();
      return v;
    }();
    if (qe > gf::kMaxFieldOrder) break;
    // Normalized points: (q^{e n} - 1)/(q^e - 1) of them.
    long double total = 0, pw = 1;
    for (int i = 0; i < n; ++i, pw *= static_cast<long double>(qe)) total += pw;
    if (total > static_cast<long double>(opt.witness_point_cap)) break;
    auto F = gf::extension(J.field(), e);
    std::vector<mpoly::PolyEvaluator> evs;
    for (const auto& g : J.generators()) evs.emplace_back(g, F);
    std::vector<Code> pt(static_cast<std::size_t>(n));
    for (int lead = n - 1; lead >= 0; --lead) {
      // Coordinates before `lead` are 0, `lead` is 1, later ones vary.
      std::fill(pt.begin(), pt.end(), 0);
      pt[static_cast<std::size_t>(lead)] = 1;
      const int free = n - 1 - lead;
      std::uint64_t count = 1;
      for (int i = 0; i < free; ++i) count *= qe;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t t = idx;
        for (int i = n - 1; i > lead; --i) {
          pt[static_cast<std::size_t>(i)] = static_cast<Code>(t % qe);
          t /= qe;
        }
        bool all = true;
        for (const auto& ev : evs)
          if (ev(pt) != 0) {
            all = false;
            break;
          }
        if (all) return Witness{F, pt};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

EmptinessCertificate is_projectively_empty(const GradedIdeal& J, const EmptinessOptions& opt) {
  EmptinessCertificate cert;
  auto degrees = J.generator_degrees();
  if (std::find(degrees.begin(), degrees.end(), 0) != degrees.end()) {
    cert.status = EmptinessStatus::Empty;
    cert.k = cert.k_max = 0;
    return cert;
  }
  const auto bound = regularity_bound(degrees, J.nvars());
  if (!bound) {
    // Fewer than nvars forms always have a common projective zero.
    cert.status = EmptinessStatus::Nonempty;
    cert.by_degree_bound = true;
  } else {
    const int K = opt.k_max.value_or(*bound);
    cert.k_max = K;
    if (K >= 0 && J.piece(K).full()) {
      int lo = *std::min_element(degrees.begin(), degrees.end()), hi = K;
      while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (J.piece(mid).full()) hi = mid;
        else lo = mid + 1;
      }
      cert.status = EmptinessStatus::Empty;
      cert.k = hi;
      return cert;
    }
    if (K >= *bound) {
      cert.status = EmptinessStatus::Nonempty;
      cert.by_degree_bound = true;
    }
  }
  if (auto w = search_witness(J, opt)) {
    cert.status = EmptinessStatus::Nonempty;
    cert.witness = std::move(w);
  }
  return cert;
}

namespace {

MPoly determinant(const std::vector<std::vector<MPoly>>& m) {
  const std::size_t r = m.size();
  if (r == 1) return m[0][0];
  MPoly acc(m[0][0].field(), m[0][0].nvars());
  for (std::size_t j = 0; j < r; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<MPoly>> sub;
    for (std::size_t i = 1; i < r; ++i) {
      std::vector<MPoly> row;
      for (std::size_t k = 0; k < r; ++k)
        if (k != j) row.push_back(m[i][k]);
      sub.push_back(std::move(row));
    }
    MPoly term = m[0][j] * determinant(sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

void combinations(std::size_t n, std::size_t r, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == r) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, r, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MPoly> minors(const std::vector<std::vector<MPoly>>& matrix, int r) {
  std::vector<MPoly> out;
  if (matrix.empty() || r <= 0) return out;
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  combinations(matrix.size(), static_cast<std::size_t>(r), 0, cur, rs);
  combinations(matrix[0].size(), static_cast<std::size_t>(r), 0, cur, cs);
  for (const auto& ri : rs)
    for (const auto& ci : cs) {
      std::vector<std::vector<MPoly>> sub;
      for (auto i : ri) {
        std::vector<MPoly> row;
        for (auto j : ci) row.push_back(matrix[i][j]);
        sub.push_back(std::move(row));
      }
      auto det = determinant(sub);
      if (!det.is_zero()) out.push_back(std::move(det));
    }
  return out;
}

std::vector<MPoly> singular_locus_generators(const std::vector<MPoly>& eqs, const MPoly& f) {
  std::vector<MPoly> all = eqs;
  all.push_back(f);
  std::vector<std::vector<MPoly>> jac;
  for (const auto& g : all) {
    std::vector<MPoly> row;
    for (int i = 0; i < f.nvars(); ++i) row.push_back(g.partial(i));
    jac.push_back(std::move(row));
  }
  std::vector<MPoly> out;
  for (const auto& g : all)
    if (!g.is_zero()) out.push_back(g);
  for (auto& m : minors(jac, static_cast<int>(all.size()))) out.push_back(std::move(m));
  return out;
}

}  // namespace ffsieve::graded
