#include "ffsieve/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "ffsieve/error.hpp"

namespace ffsieve::sieve {

using graded::EmptinessStatus;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MPoly SmoothnessProblem::form(std::span<const std::uint32_t> digits) const {
  const auto k = static_cast<std::size_t>(field().k());
  MPoly f(field(), X.nvars);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Code c = field().from_digits(digits.subspan(i * k, k));
    if (c != 0) f = f + basis[i].scaled(c);
  }
  return f;
}

std::vector<std::uint32_t> SmoothnessProblem::digits_of(std::uint64_t index) const {
  std::vector<std::uint32_t> out(prime_dimension());
  const std::uint32_t p = field().p();
  for (auto& d : out) {
    d = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return out;
}

SmoothnessProblem make_problem(const variety::SchemePresentation& X, int dim, int degree, std::vector<MPoly> basis,
                               int point_bound, const variety::EnumerationOptions& enumeration) {
  SmoothnessProblem prob;
  prob.X = X;
  prob.dim = dim;
  prob.degree = degree;
  prob.basis = std::move(basis);
  prob.point_bound = point_bound;
  const int n = X.ambient_dim();
  for (auto& P : variety::enumerate_closed_points(X, point_bound, enumeration)) {
    JetPoint jp;
    const auto& F = P.residue;
    jp.chart = static_cast<int>(std::find_if(P.representative.begin(), P.representative.end(),
                                             [](Code c) { return c != 0; }) -
                                P.representative.begin());
    graded::Echelon ech(F, static_cast<std::size_t>(n));
    std::vector<Code> row(static_cast<std::size_t>(n));
    for (const auto& g : X.equations) {
      std::size_t col = 0;
      for (int i = 0; i <= n; ++i)
        if (i != jp.chart) row[col++] = mpoly::PolyEvaluator(g.partial(i), F)(P.representative);
      ech.insert(row);
    }
    const int t = n - static_cast<int>(ech.rank());
    if (t < dim)
      throw Error(ErrorKind::SpecMismatch, "sieve.make_problem",
                  "X has local dimension " + std::to_string(t) + " < " + std::to_string(dim) + " at " + P.to_string());
    if (t > dim) {
      jp.x_singular = true;
    } else {
      auto red = ech.reduced(0, 0);
      std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
      for (auto c : red.pivots) is_pivot[c] = true;
      for (int j = 0; j < n; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        std::vector<Code> v(static_cast<std::size_t>(n), 0);
        v[static_cast<std::size_t>(j)] = 1;
        for (std::size_t r = 0; r < red.rows.size(); ++r)
          v[red.pivots[r]] = F.neg(red.rows[r][static_cast<std::size_t>(j)]);
        jp.tangents.push_back(std::move(v));
      }
    }
    jp.point = std::move(P);
    prob.points.push_back(std::move(jp));
  }
  return prob;
}

IdealBasis ideal_basis(const gf::FieldSpec& field, int nvars, const std::vector<MPoly>& generators, int d) {
  IdealBasis out;
  bool any = false;
  for (const auto& g : generators) any = any || !g.is_zero();
  if (!any) {
    mpoly::MonomialBasis mb(nvars, d);
    for (const auto& e : mb.monomials()) out.basis.push_back(MPoly::monomial(field, e));
    return out;
  }
  graded::GradedIdeal I(field, nvars, generators);
  auto sat = I.saturated_piece(d);
  out.capped = sat.capped;
  out.basis = sat.basis.polynomials();
  return out;
}

void Tally::merge(const Tally& o) {
  total += o.total;
  smooth += o.smooth;
  zero_form += o.zero_form;
  beyond_bound += o.beyond_bound;
  unresolved += o.unresolved;
  if (ell.size() < o.ell.size()) ell.resize(o.ell.size(), 0);
  for (std::size_t i = 0; i < o.ell.size(); ++i) ell[i] += o.ell[i];
}

namespace {

Tally empty_tally(const KernelOptions& opt) {
  Tally t;
  t.ell.assign(static_cast<std::size_t>(opt.ell_max) + 2, 0);
  return t;
}

void count(Tally& t, int code) {
  ++t.total;
  const std::size_t overflow = t.ell.size() - 1;
  if (code == kZeroForm) {
    ++t.zero_form;
    ++t.ell[overflow];
  } else if (code == kUnresolved || code == kBeyondBound) {
    ++(code == kUnresolved ? t.unresolved : t.beyond_bound);
    ++t.ell[overflow];
  } else {
    if (code == 0) ++t.smooth;
    ++t.ell[std::min(static_cast<std::size_t>(code), overflow)];
  }
}

int finish(int ell, std::span<const std::uint32_t> digits, const KernelOptions& opt, const Certifier* cert) {
  // Without need_ell the search stops at whichever singular point it meets
  // first, so the partial sum is not reported.
  if (ell > 0) return opt.need_ell ? ell : kSingular;
  if (!opt.exact) return 0;
  switch ((*cert)(digits)) {
    case EmptinessStatus::Empty: return 0;
    case EmptinessStatus::Nonempty: return kBeyondBound;
    default: return kUnresolved;
  }
}

// Jets of every F_p-basis form at every point, either bit-packed (p = 2)
// or as residue-field codes.
struct JetTable {
  bool packed = false;
  std::size_t dims = 0;  // number of F_p-basis forms

  // Packed: lanes of one point each, lane widths powers of two, one degree
  // per word.
  std::size_t words = 0;
  std::vector<std::uint64_t> lsb;
  std::vector<int> width;
  std::vector<int> word_degree;
  std::vector<std::uint64_t> basis_bits;  // dims x words

  // Codes: per point, 1 + #tangents coordinates in its residue field.
  std::vector<std::size_t> offset;
  std::vector<std::size_t> ncoords;
  std::vector<gf::FieldSpec> fields;
  std::vector<int> degrees;
  std::size_t ncodes = 0;
  std::vector<Code> basis_codes;  // dims x ncodes

  const std::uint64_t* bits(std::size_t t) const { return basis_bits.data() + t * words; }
  const Code* codes(std::size_t t) const { return basis_codes.data() + t * ncodes; }
};

JetTable build_jets(const SmoothnessProblem& prob) {
  JetTable jt;
  const auto& Fq = prob.field();
  const int k = Fq.k();
  const int nvars = prob.X.nvars;
  jt.dims = prob.prime_dimension();
  // F_p-basis forms and their partials.
  std::vector<MPoly> forms;
  for (const auto& b : prob.basis)
    for (int j = 0; j < k; ++j) {
      std::vector<std::uint32_t> unit(static_cast<std::size_t>(k), 0);
      unit[static_cast<std::size_t>(j)] = 1;
      forms.push_back(b.scaled(Fq.from_digits(unit)));
    }
  std::vector<std::vector<MPoly>> partials(forms.size());
  for (std::size_t t = 0; t < forms.size(); ++t)
    for (int i = 0; i < nvars; ++i) partials[t].push_back(forms[t].partial(i));

  // Jet codes per (form, point).
  const std::size_t npts = prob.points.size();
  for (const auto& jp : prob.points) {
    jt.offset.push_back(jt.ncodes);
    const std::size_t c = 1 + (jp.x_singular ? 0 : jp.tangents.size());
    jt.ncoords.push_back(c);
    jt.fields.push_back(jp.point.residue);
    jt.degrees.push_back(jp.point.degree);
    jt.ncodes += c;
  }
  jt.basis_codes.assign(jt.dims * jt.ncodes, 0);
  std::map<int, std::vector<std::size_t>> by_degree;
  for (std::size_t j = 0; j < npts; ++j) by_degree[prob.points[j].point.degree].push_back(j);
  for (const auto& [e, idx] : by_degree) {
    const auto& F = prob.points[idx.front()].point.residue;
    for (std::size_t t = 0; t < forms.size(); ++t) {
      mpoly::PolyEvaluator value(forms[t], F);
      std::vector<mpoly::PolyEvaluator> grad;
      for (int i = 0; i < nvars; ++i) grad.emplace_back(partials[t][static_cast<std::size_t>(i)], F);
      Code* out = jt.basis_codes.data() + t * jt.ncodes;
      std::vector<Code> g(static_cast<std::size_t>(nvars));
      for (auto j : idx) {
        const auto& jp = prob.points[j];
        const auto& rep = jp.point.representative;
        out[jt.offset[j]] = value(rep);
        if (jp.x_singular || jp.tangents.empty()) continue;
        for (int i = 0; i < nvars; ++i) g[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)](rep);
        for (std::size_t a = 0; a < jp.tangents.size(); ++a) {
          Code acc = 0;
          std::size_t col = 0;
          for (int i = 0; i < nvars; ++i) {
            if (i == jp.chart) continue;
            acc = F.add(acc, F.mul(g[static_cast<std::size_t>(i)], jp.tangents[a][col]));
            ++col;
          }
          out[jt.offset[j] + 1 + a] = acc;
        }
      }
    }
  }

  // Pack when p = 2 and every jet fits a 64-bit lane.
  if (Fq.p() != 2) return jt;
  std::vector<int> lane(npts);
  for (std::size_t j = 0; j < npts; ++j) {
    const int bits = static_cast<int>(jt.ncoords[j]) * k * jt.degrees[j];
    if (bits > 64) return jt;
    lane[j] = static_cast<int>(std::bit_ceil(static_cast<unsigned>(bits)));
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
  for (std::size_t j = 0; j < npts; ++j) groups[{jt.degrees[j], lane[j]}].push_back(j);
  std::vector<std::pair<std::size_t, int>> place(npts);  // word, bit offset
  for (const auto& [key, idx] : groups) {
    const int w = key.second;
    int used = 64;
    for (auto j : idx) {
      if (used + w > 64) {
        jt.lsb.push_back(0);
        jt.width.push_back(w);
        jt.word_degree.push_back(key.first);
        used = 0;
      }
      place[j] = {jt.lsb.size() - 1, used};
      jt.lsb.back() |= std::uint64_t{1} << used;
      used += w;
    }
  }
  jt.words = jt.lsb.size();
  jt.basis_bits.assign(jt.dims * jt.words, 0);
  for (std::size_t t = 0; t < jt.dims; ++t)
    for (std::size_t j = 0; j < npts; ++j) {
      const int cb = k * jt.degrees[j];
      std::uint64_t v = 0;
      for (std::size_t c = 0; c < jt.ncoords[j]; ++c)
        v |= static_cast<std::uint64_t>(jt.codes(t)[jt.offset[j] + c]) << (static_cast<int>(c) * cb);
      jt.basis_bits[t * jt.words + place[j].first] |= v << place[j].second;
    }
  jt.packed = true;
  return jt;
}

// Sum of degrees of points whose lane is all zero.
int classify_bits(const JetTable& jt, const std::uint64_t* jets, bool need_ell) {
  int ell = 0;
  for (std::size_t w = 0; w < jt.words; ++w) {
    std::uint64_t v = jets[w];
    // Fold each lane onto its lowest bit; bits from the next lane never
    // reach it since every shift stays below the lane width.
    for (int s = 1; s < jt.width[w]; s <<= 1) v |= v >> s;
    const std::uint64_t z = ~v & jt.lsb[w];
    if (z) {
      ell += std::popcount(z) * jt.word_degree[w];
      if (!need_ell) return ell;
    }
  }
  return ell;
}

int classify_codes(const JetTable& jt, const Code* jets, bool need_ell) {
  int ell = 0;
  for (std::size_t j = 0; j < jt.offset.size(); ++j) {
    const Code* c = jets + jt.offset[j];
    if (std::all_of(c, c + jt.ncoords[j], [](Code v) { return v == 0; })) {
      ell += jt.degrees[j];
      if (!need_ell) return ell;
    }
  }
  return ell;
}

void add_codes(const JetTable& jt, Code* jets, const Code* delta, std::uint32_t times) {
  for (std::size_t j = 0; j < jt.offset.size(); ++j) {
    const auto& F = jt.fields[j];
    for (std::size_t c = jt.offset[j]; c < jt.offset[j] + jt.ncoords[j]; ++c)
      for (std::uint32_t r = 0; r < times; ++r) jets[c] = F.add(jets[c], delta[c]);
  }
}

std::uint64_t checked_total(std::uint32_t p, std::size_t dims, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    if (total > cap / p)
      throw Error(ErrorKind::EnumerationCapExceeded, "sieve.run_exhaustive",
                  "I_d has more than " + std::to_string(cap) + " elements");
    total *= p;
  }
  return total;
}

// Digits for one sample: p = 2 reads 64 digits per draw, odd p one per draw.
void draw_digits(std::mt19937_64& rng, std::uint32_t p, std::vector<std::uint32_t>& digits) {
  if (p == 2) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i % 64 == 0) word = rng();
      digits[i] = static_cast<std::uint32_t>((word >> (i % 64)) & 1);
    }
    return;
  }
  for (auto& d : digits) d = static_cast<std::uint32_t>(rng() % p);
}

constexpr std::uint64_t kChunk = 4096;

}  // namespace

Tally run_exhaustive(const SmoothnessProblem& prob, const KernelOptions& opt, const Certifier* cert,
                     std::vector<int>* record) {
  if (opt.exact && !cert) throw Error(ErrorKind::InvalidArgument, "sieve.run_exhaustive", "exact mode needs a certifier");
  const auto jt = build_jets(prob);
  const std::uint32_t p = prob.field().p();
  const std::uint64_t total = checked_total(p, jt.dims, opt.exhaustive_cap);
  if (record) record->assign(total, 0);
  const auto chunks = static_cast<long long>((total + kChunk - 1) / kChunk);
  Tally result = empty_tally(opt);
#pragma omp parallel
  {
    Tally local = empty_tally(opt);
    std::vector<std::uint32_t> digits(jt.dims);
    std::vector<std::uint64_t> bits(jt.words);
    std::vector<Code> codes(jt.ncodes);
    std::vector<std::uint32_t> counter(jt.dims + 1);
#pragma omp for schedule(dynamic, 1)
    for (long long chunk = 0; chunk < chunks; ++chunk) {
      const std::uint64_t start = static_cast<std::uint64_t>(chunk) * kChunk;
      const std::uint64_t end = std::min(total, start + kChunk);
      if (jt.packed) {
        // Binary reflected Gray code: step t -> t + 1 flips bit ctz(t + 1).
        const std::uint64_t g0 = start ^ (start >> 1);
        std::fill(bits.begin(), bits.end(), 0);
        for (std::size_t b = 0; b < jt.dims; ++b)
          if ((g0 >> b) & 1)
            for (std::size_t w = 0; w < jt.words; ++w) bits[w] ^= jt.bits(b)[w];
        for (std::uint64_t t = start; t < end; ++t) {
          const std::uint64_t g = t ^ (t >> 1);
          int code;
          if (g == 0) {
            code = kZeroForm;
          } else {
            const int ell = classify_bits(jt, bits.data(), opt.need_ell);
            if (ell == 0 && opt.exact)
              for (std::size_t b = 0; b < jt.dims; ++b) digits[b] = static_cast<std::uint32_t>((g >> b) & 1);
            code = finish(ell, digits, opt, cert);
          }
          count(local, code);
          if (record) (*record)[g] = code;
          if (t + 1 < end) {
            const auto b = static_cast<std::size_t>(std::countr_zero(t + 1));
            for (std::size_t w = 0; w < jt.words; ++w) bits[w] ^= jt.bits(b)[w];
          }
        }
      } else {
        // Modular Gray code: digit i of the form is counter_i - counter_{i+1}
        // mod p, and incrementing the counter raises exactly one form digit
        // (the one at the first counter digit that does not wrap) by 1.
        std::uint64_t v = start;
        for (std::size_t i = 0; i < jt.dims; ++i) {
          counter[i] = static_cast<std::uint32_t>(v % p);
          v /= p;
        }
        counter[jt.dims] = 0;
        std::fill(codes.begin(), codes.end(), 0);
        for (std::size_t i = 0; i < jt.dims; ++i) {
          digits[i] = (counter[i] + p - counter[i + 1]) % p;
          if (digits[i]) add_codes(jt, codes.data(), jt.codes(i), digits[i]);
        }
        for (std::uint64_t t = start; t < end; ++t) {
          std::uint64_t index = 0;
          for (std::size_t i = jt.dims; i-- > 0;) index = index * p + digits[i];
          int code;
          if (index == 0) {
            code = kZeroForm;
          } else {
            code = finish(classify_codes(jt, codes.data(), opt.need_ell), digits, opt, cert);
          }
          count(local, code);
          if (record) (*record)[index] = code;
          if (t + 1 < end) {
            std::size_t j = 0;
            while (counter[j] == p - 1) counter[j++] = 0;
            ++counter[j];
            digits[j] = (digits[j] + 1) % p;
            add_codes(jt, codes.data(), jt.codes(j), 1);
          }
        }
      }
    }
#pragma omp critical
    result.merge(local);
  }
  return result;
}

Tally run_sampled(const SmoothnessProblem& prob, const KernelOptions& opt, std::uint64_t samples, std::uint64_t seed,
                  const Certifier* cert) {
  if (opt.exact && !cert) throw Error(ErrorKind::InvalidArgument, "sieve.run_sampled", "exact mode needs a certifier");
  const auto jt = build_jets(prob);
  const std::uint32_t p = prob.field().p();
  const auto blocks = static_cast<long long>((samples + kSampleBlock - 1) / kSampleBlock);
  Tally result = empty_tally(opt);
#pragma omp parallel
  {
    Tally local = empty_tally(opt);
    std::vector<std::uint32_t> digits(jt.dims);
    std::vector<std::uint64_t> bits(jt.words);
    std::vector<Code> codes(jt.ncodes);
#pragma omp for schedule(dynamic, 1)
    for (long long block = 0; block < blocks; ++block) {
      std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(block)));
      const std::uint64_t start = static_cast<std::uint64_t>(block) * kSampleBlock;
      const std::uint64_t end = std::min(samples, start + kSampleBlock);
      for (std::uint64_t s = start; s < end; ++s) {
        draw_digits(rng, p, digits);
        if (std::all_of(digits.begin(), digits.end(), [](std::uint32_t d) { return d == 0; })) {
          count(local, kZeroForm);
          continue;
        }
        int ell;
        if (jt.packed) {
          std::fill(bits.begin(), bits.end(), 0);
          for (std::size_t b = 0; b < jt.dims; ++b)
            if (digits[b])
              for (std::size_t w = 0; w < jt.words; ++w) bits[w] ^= jt.bits(b)[w];
          ell = classify_bits(jt, bits.data(), opt.need_ell);
        } else {
          std::fill(codes.begin(), codes.end(), 0);
          for (std::size_t b = 0; b < jt.dims; ++b)
            if (digits[b]) add_codes(jt, codes.data(), jt.codes(b), digits[b]);
          ell = classify_codes(jt, codes.data(), opt.need_ell);
        }
        count(local, finish(ell, digits, opt, cert));
      }
    }
#pragma omp critical
    result.merge(local);
  }
  return result;
}

int classify_serial(const SmoothnessProblem& prob, std::span<const std::uint32_t> digits, const KernelOptions& opt,
                    const Certifier* cert) {
  const MPoly f = prob.form(digits);
  if (f.is_zero()) return kZeroForm;
  int ell = 0;
  for (const auto& jp : prob.points) {
    const auto& P = jp.point;
    if (mpoly::PolyEvaluator(f, P.residue)(P.representative) != 0) continue;
    if (!variety::is_smooth_at(prob.X, f, P, prob.dim - 1)) {
      ell += P.degree;
      if (!opt.need_ell) break;
    }
  }
  return finish(ell, digits, opt, cert);
}

Tally run_exhaustive_serial(const SmoothnessProblem& prob, const KernelOptions& opt, const Certifier* cert,
                            std::vector<int>* record) {
  if (opt.exact && !cert) throw Error(ErrorKind::InvalidArgument, "sieve.run_exhaustive", "exact mode needs a certifier");
  const std::uint64_t total = checked_total(prob.field().p(), prob.prime_dimension(), opt.exhaustive_cap);
  if (record) record->assign(total, 0);
  Tally t = empty_tally(opt);
  for (std::uint64_t index = 0; index < total; ++index) {
    const int code = classify_serial(prob, prob.digits_of(index), opt, cert);
    count(t, code);
    if (record) (*record)[index] = code;
  }
  return t;
}

Tally run_sampled_serial(const SmoothnessProblem& prob, const KernelOptions& opt, std::uint64_t samples,
                         std::uint64_t seed, const Certifier* cert) {
  Tally t = empty_tally(opt);
  std::vector<std::uint32_t> digits(prob.prime_dimension());
  const std::uint32_t p = prob.field().p();
  for (std::uint64_t block = 0; block * kSampleBlock < samples; ++block) {
    std::mt19937_64 rng(splitmix64(seed + block));
    const std::uint64_t end = std::min(samples, (block + 1) * kSampleBlock);
    for (std::uint64_t s = block * kSampleBlock; s < end; ++s) {
      draw_digits(rng, p, digits);
      count(t, classify_serial(prob, digits, opt, cert));
    }
  }
  return t;
}

// ---- certificates ----

namespace {

class GenericCertifier final : public Certifier {
 public:
  explicit GenericCertifier(const SmoothnessProblem& prob) : prob_(prob) {
    const auto& X = prob.X;
    const int codim = X.ambient_dim() - prob.dim;
    if (!X.equations.empty() && static_cast<int>(X.equations.size()) != codim)
      throw Error(ErrorKind::UnsupportedPresentation, "sieve.certifier",
                  "exact mode needs X = P^n minus a closed set or a complete intersection; got " +
                      std::to_string(X.equations.size()) + " equations for codimension " + std::to_string(codim));
    if (X.equations.empty() && codim != 0)
      throw Error(ErrorKind::UnsupportedPresentation, "sieve.certifier", "declared dim disagrees with X = P^n");
  }

  EmptinessStatus operator()(std::span<const std::uint32_t> digits) const override {
    const MPoly f = prob_.form(digits);
    graded::GradedIdeal J(prob_.field(), prob_.X.nvars, graded::singular_locus_generators(prob_.X.equations, f));
    graded::EmptinessOptions eo;
    eo.witness_degree = 0;
    auto cert = graded::is_projectively_empty(J, eo);
    if (cert.status == EmptinessStatus::Empty || prob_.X.removed.empty()) return cert.status;
    // On P^n minus V(w_1..w_k): the singular locus misses X iff every w_i
    // vanishes on it, i.e. some power of w_i lies in the saturation.
    for (const auto& w : prob_.X.removed) {
      bool found = false;
      for (unsigned N = 1; N <= kMaxPower && !found; ++N) found = J.contains(w.pow(N)).member;
      if (!found) return EmptinessStatus::Inconclusive;
    }
    return EmptinessStatus::Empty;
  }

 private:
  static constexpr unsigned kMaxPower = 4;
  const SmoothnessProblem& prob_;
};

// Rows of GF(2) vectors with the lowest set bit as pivot.
class Gf2Echelon {
 public:
  explicit Gf2Echelon(std::size_t ncols) : ncols_(ncols), words_((ncols + 63) / 64), pivot_(ncols, -1) {}
  bool full() const { return rank_ == ncols_; }
  void insert(std::vector<std::uint64_t>& row) {
    for (std::size_t w = 0; w < words_; ++w) {
      while (row[w]) {
        const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
        const long r = pivot_[c];
        if (r < 0) {
          pivot_[c] = static_cast<long>(rows_.size() / words_);
          rows_.insert(rows_.end(), row.begin(), row.end());
          ++rank_;
          return;
        }
        const std::uint64_t* src = rows_.data() + static_cast<std::size_t>(r) * words_;
        for (std::size_t i = w; i < words_; ++i) row[i] ^= src[i];
      }
    }
  }

 private:
  std::size_t ncols_, words_;
  std::size_t rank_ = 0;
  std::vector<long> pivot_;
  std::vector<std::uint64_t> rows_;
};

class Gf2Certifier final : public Certifier {
 public:
  explicit Gf2Certifier(const SmoothnessProblem& prob) : d_(prob.degree), nvars_(prob.X.nvars) {
    const int n = nvars_ - 1;
    if (d_ < 2) return;
    mpoly::MonomialBasis top(nvars_, d_), low(nvars_, d_ - 1);
    ncols_d_ = top.size();
    ncols_low_ = low.size();
    for (const auto& b : prob.basis) {
      auto dense = mpoly::to_dense(b, top);
      std::vector<std::uint64_t> bitsv((ncols_d_ + 63) / 64, 0);
      for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i]) bitsv[i / 64] |= std::uint64_t{1} << (i % 64);
      basis_.push_back(std::move(bitsv));
    }
    // d/dx_i of a monomial is the monomial with e_i lowered when e_i is odd.
    deriv_.assign(static_cast<std::size_t>(nvars_), std::vector<long>(ncols_d_, -1));
    for (std::size_t mu = 0; mu < ncols_d_; ++mu)
      for (int i = 0; i < nvars_; ++i) {
        auto e = top[mu];
        if (e[static_cast<std::size_t>(i)] % 2 == 0) continue;
        --e[static_cast<std::size_t>(i)];
        deriv_[static_cast<std::size_t>(i)][mu] = static_cast<long>(low.index_of(e));
      }
    // n + 1 largest degrees: d and n copies of d - 1.
    K_ = d_ + n * (d_ - 1) - n;
    ncols_K_ = mpoly::monomial_count(nvars_, K_);
    mul_top_ = graded::MulTable::get(nvars_, K_ - d_, d_);
    mul_low_ = graded::MulTable::get(nvars_, K_ - d_ + 1, d_ - 1);
  }

  EmptinessStatus operator()(std::span<const std::uint32_t> digits) const override {
    // A nonzero linear form cuts out a hyperplane.
    if (d_ < 2) return EmptinessStatus::Empty;
    std::vector<std::uint64_t> f((ncols_d_ + 63) / 64, 0);
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (digits[i])
        for (std::size_t w = 0; w < f.size(); ++w) f[w] ^= basis_[i][w];
    std::vector<std::vector<std::uint64_t>> parts;
    for (int i = 0; i < nvars_; ++i) {
      std::vector<std::uint64_t> g((ncols_low_ + 63) / 64, 0);
      bool nonzero = false;
      for_each_bit(f, [&](std::size_t mu) {
        const long t = deriv_[static_cast<std::size_t>(i)][mu];
        if (t >= 0) g[static_cast<std::size_t>(t) / 64] ^= std::uint64_t{1} << (t % 64);
      });
      for (auto w : g) nonzero = nonzero || w;
      if (nonzero) parts.push_back(std::move(g));
    }
    // Fewer than nvars forms always share a projective zero.
    if (static_cast<int>(parts.size()) + 1 < nvars_) return EmptinessStatus::Nonempty;
    Gf2Echelon ech(ncols_K_);
    std::vector<std::uint64_t> row((ncols_K_ + 63) / 64);
    auto feed = [&](const std::vector<std::uint64_t>& g, const graded::MulTable& tab) {
      std::vector<std::size_t> support;
      for_each_bit(g, [&](std::size_t mu) { support.push_back(mu); });
      for (std::size_t u = 0; u < tab.rows() && !ech.full(); ++u) {
        std::fill(row.begin(), row.end(), 0);
        for (auto mu : support) {
          const auto c = tab(u, mu);
          row[c / 64] |= std::uint64_t{1} << (c % 64);
        }
        ech.insert(row);
      }
    };
    for (const auto& g : parts) feed(g, *mul_low_);
    feed(f, *mul_top_);
    return ech.full() ? EmptinessStatus::Empty : EmptinessStatus::Nonempty;
  }

 private:
  template <class Fn>
  static void for_each_bit(const std::vector<std::uint64_t>& v, Fn&& fn) {
    for (std::size_t w = 0; w < v.size(); ++w)
      for (std::uint64_t x = v[w]; x; x &= x - 1) fn(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
  }

  int d_, nvars_;
  int K_ = 0;
  std::size_t ncols_d_ = 0, ncols_low_ = 0, ncols_K_ = 0;
  std::vector<std::vector<std::uint64_t>> basis_;
  std::vector<std::vector<long>> deriv_;
  std::shared_ptr<const graded::MulTable> mul_top_, mul_low_;
};

}  // namespace

std::unique_ptr<Certifier> make_generic_certifier(const SmoothnessProblem& problem) {
  return std::make_unique<GenericCertifier>(problem);
}

std::unique_ptr<Certifier> make_gf2_certifier(const SmoothnessProblem& problem) {
  const auto& X = problem.X;
  if (X.field.q() != 2 || !X.equations.empty() || !X.removed.empty() || problem.dim != X.ambient_dim()) return nullptr;
  return std::make_unique<Gf2Certifier>(problem);
}

std::unique_ptr<Certifier> make_certifier(const SmoothnessProblem& problem) {
  if (auto c = make_gf2_certifier(problem)) return c;
  return make_generic_certifier(problem);
}

}  // namespace ffsieve::sieve
