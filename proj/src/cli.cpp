#include "ffsieve/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "ffsieve/error.hpp"

namespace ffsieve::cli {

using json = nlohmann::ordered_json;
using zeta::Rational;

std::string to_string(Command c) {
  switch (c) {
    case Command::Predict:
      return "predict";
    case Command::Estimate:
      return "estimate";
    case Command::SingDist:
      return "singdist";
    case Command::LowDeg:
      return "lowdeg";
    case Command::Zeta:
      return "zeta";
    case Command::Embed:
      return "embed";
    case Command::Points:
      break;
  }
  return "points";
}

namespace {

[[noreturn]] void usage(const std::string& flag, const std::string& message) {
  throw Error(ErrorKind::UsageError, "cli.parse_args", flag + ": " + message);
}

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

struct HelpRequested {
  std::string text;
};

}  // namespace

std::vector<int> parse_degree_range(const std::string& text) {
  std::vector<int> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view part = rest.substr(0, comma);
    const auto dots = part.find("..");
    const auto lo = parse_int(part.substr(0, dots));
    const auto hi = dots == std::string_view::npos ? lo : parse_int(part.substr(dots + 2));
    if (!lo || !hi || *lo < 1 || *hi < *lo || *hi > 1000) usage("--degree", "expected a range like 3..5, got '" + text + "'");
    for (long long d = *lo; d <= *hi; ++d)
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(static_cast<int>(d));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

sieve::Budget parse_budget(const std::string& text) {
  if (text == "exhaustive") return {true, 0};
  if (text.rfind("sample:", 0) == 0) {
    const auto n = parse_int(std::string_view(text).substr(7));
    if (n && *n > 0) return {false, static_cast<std::uint64_t>(*n)};
  }
  usage("--budget", "expected exhaustive or sample:N with N a positive integer, got '" + text + "'");
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Densities of smooth hypersurface sections over finite fields", "ffsieve"};
  app.require_subcommand(1);
  std::string budget = "exhaustive", degrees, out = "json";
  std::optional<long long> q;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scheme", cfg.scheme, "Scheme file")->required();
    sub->add_option("--q", q, "Re-read the scheme over F_q");
    sub->add_option("-d,--degree", degrees, "Degrees, e.g. 3..5");
    sub->add_option("--budget", budget, "exhaustive or sample:N");
    sub->add_option("--seed", cfg.seed, "Sampling and search seed");
    sub->add_option("--sing-bound", cfg.sing_bound, "Degree bound B for the singular-point search");
    sub->add_flag("--exact", cfg.exact, "Certify smoothness instead of bounding it");
    sub->add_option("--ell-max", cfg.ell_max, "Largest ell reported separately");
    sub->add_option("--out", out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "OpenMP threads (0: default)");
    sub->add_option("--r", cfg.r, "Target dimension (embed) or degree bound (lowdeg)");
    sub->add_option("--d-max", cfg.d_max, "Largest hypersurface degree tried by embed");
    sub->add_option("--s", cfg.s, "Zeta argument");
    sub->add_option("--max-degree", cfg.max_degree, "Closed-point degree bound for enumeration");
  };
  common(app.add_subcommand("predict", "Zeta-product density of smooth sections"));
  common(app.add_subcommand("estimate", "Empirical density of smooth sections"));
  auto* sd = app.add_subcommand("singdist", "Distribution of the number of singular points");
  sd->add_option("mode", cfg.singdist_mode, "predict or estimate")->required()->check(CLI::IsMember({"predict", "estimate"}));
  common(sd);
  common(app.add_subcommand("lowdeg", "Smoothness at points of degree < r"));
  common(app.add_subcommand("zeta", "Zeta value of X"));
  common(app.add_subcommand("embed", "Embed X ∩ Z in a smooth complete intersection"));
  common(app.add_subcommand("points", "Closed points of X and the strata of V"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help()};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::UsageError, "cli.parse_args", e.what());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  for (Command c : {Command::Predict, Command::Estimate, Command::SingDist, Command::LowDeg, Command::Zeta,
                    Command::Embed, Command::Points})
    if (to_string(c) == name) cfg.command = c;

  if (q) {
    if (*q < 2) usage("--q", "expected a prime power");
    cfg.q = static_cast<std::uint64_t>(*q);
  }
  cfg.budget = parse_budget(budget);
  cfg.budget_text = budget;
  if (!degrees.empty()) {
    cfg.degrees = parse_degree_range(degrees);
    cfg.degrees_text = degrees;
  }
  cfg.out = out == "csv" ? OutFormat::Csv : OutFormat::Json;
  if (cfg.threads < 0) usage("--threads", "must be >= 0");
  if (cfg.ell_max < 0 || cfg.ell_max > 64) usage("--ell-max", "must lie in 0..64");
  if (cfg.sing_bound && *cfg.sing_bound < 1) usage("--sing-bound", "must be >= 1");
  if (cfg.max_degree < 1 || cfg.max_degree > 16) usage("--max-degree", "must lie in 1..16");
  if (cfg.d_max < 1) usage("--d-max", "must be >= 1");

  const bool estimating = cfg.command == Command::Estimate ||
                          (cfg.command == Command::SingDist && cfg.singdist_mode == "estimate");
  if (estimating && cfg.degrees.empty()) usage("--degree", "required by " + name);
  if (cfg.command == Command::LowDeg) {
    if (!cfg.r) usage("--r", "required by lowdeg");
    if (*cfg.r < 1) usage("--r", "must be >= 1");
    if (!cfg.degrees.empty() && cfg.budget.exhaustive) usage("--budget", "lowdeg estimates need sample:N");
  }
  if (cfg.command == Command::Embed) {
    if (!cfg.r) usage("--r", "required by embed");
    if (*cfg.r < 0) usage("--r", "must be >= 0");
  }
  if (cfg.command == Command::Zeta && !cfg.s) usage("--s", "required by zeta");
  return cfg;
}

// ---- reports ----

namespace {

std::string rat(const Rational& r) { return zeta::to_string(r); }
std::string dec(const Rational& r) { return zeta::to_decimal(r); }
std::string dec(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational r{zeta::Integer(static_cast<unsigned long>(a)), zeta::Integer(static_cast<unsigned long>(b))};
  r.canonicalize();
  return r;
}

json ints(const std::vector<zeta::Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

json echo(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  if (c.command == Command::SingDist) j["mode"] = c.singdist_mode;
  j["scheme"] = c.scheme;
  j["q"] = c.q ? json(*c.q) : json(nullptr);
  j["degree"] = c.degrees_text.empty() ? json(nullptr) : json(c.degrees_text);
  j["budget"] = c.budget_text;
  j["seed"] = c.seed;
  j["sing_bound"] = c.sing_bound ? json(*c.sing_bound) : json(nullptr);
  j["exact"] = c.exact;
  j["ell_max"] = c.ell_max;
  j["out"] = c.out == OutFormat::Json ? "json" : "csv";
  j["r"] = c.r ? json(*c.r) : json(nullptr);
  j["d_max"] = c.d_max;
  j["s"] = c.s ? json(*c.s) : json(nullptr);
  j["max_degree"] = c.max_degree;
  return j;
}

json profile_json(const zeta::CountProfile& p, const std::string& source) {
  json j;
  j["source"] = source;
  j["polynomial"] = p.has_polynomial() ? json(zeta::format_terms(p.terms())) : json(nullptr);
  j["enumerated"] = p.has_enumerated() ? ints(p.enumerated_counts()) : json(nullptr);
  return j;
}

json zeta_json(const zeta::ZetaValue& z) {
  json j;
  j["s"] = z.s;
  if (z.exact) {
    j["value"] = rat(*z.exact);
    j["decimal"] = dec(*z.exact);
  } else {
    j["value"] = nullptr;
    j["lower"] = rat(z.lower);
    j["upper"] = z.upper ? json(rat(*z.upper)) : json(nullptr);
    j["heuristic_tail"] = z.heuristic_tail;
  }
  return j;
}

json stratum_json(const variety::Stratum& st, int B) {
  json j;
  j["e"] = st.e;
  j["dim"] = st.dim ? json(*st.dim) : json(nullptr);
  j["dim_declared"] = st.dim_declared;
  j["points_by_degree"] = ints(variety::degree_counts(st.points, B));
  return j;
}

void append(json& flags, const std::vector<std::string>& more) {
  for (const auto& f : more) flags.push_back(f);
}

sieve::PredictOptions predict_options(const RunConfig& c) {
  sieve::PredictOptions po;
  po.stratify_bound = c.max_degree;
  po.profile_bound = c.max_degree;
  po.require_exact = c.exact;
  return po;
}

json do_predict(const RunConfig& c, const variety::SchemeFile& file, json& flags) {
  const auto p = sieve::predict_density(file, predict_options(c));
  append(flags, p.flags);
  json j;
  j["mode"] = "predicted";
  j["m"] = p.m;
  if (p.value) {
    j["value"] = rat(*p.value);
    j["decimal"] = dec(*p.value);
  } else {
    j["value"] = nullptr;
    j["lower"] = rat(p.lower);
    j["upper"] = rat(p.upper);
  }
  j["hypothesis_check"] = sieve::to_string(p.hypothesis);
  j["hypothesis_dims"] = p.hypothesis.dims_source;
  j["factors"] = json::array();
  for (const auto& f : p.factors) {
    json fj;
    fj["name"] = f.name;
    fj["profile"] = profile_json(f.profile, f.profile_source);
    fj["zeta"] = zeta_json(f.value);
    j["factors"].push_back(fj);
  }
  j["strata"] = json::array();
  for (const auto& [e, st] : p.strata.strata) j["strata"].push_back(stratum_json(st, p.strata.max_degree));
  return j;
}

json tally_json(const sieve::Tally& t, bool with_ell) {
  json j;
  j["count_total"] = t.total;
  j["count_smooth"] = t.smooth;
  j["zero_form"] = t.zero_form;
  j["singular_beyond_bound"] = t.beyond_bound;
  j["unresolved"] = t.unresolved;
  if (with_ell) {
    json h = json::array();
    Rational sum = 0;
    for (std::size_t i = 0; i < t.ell.size(); ++i) {
      json b;
      b["ell"] = i + 1 < t.ell.size() ? std::to_string(i) : ">" + std::to_string(i - 1);
      b["count"] = t.ell[i];
      const Rational f = ratio(t.ell[i], t.total);
      b["fraction"] = rat(f);
      b["decimal"] = dec(f);
      sum += f;
      h.push_back(b);
    }
    j["ell"] = h;
    j["histogram_sum"] = rat(sum);
  }
  return j;
}

json do_estimate(const RunConfig& c, const variety::SchemeFile& file, bool with_ell, json& flags) {
  sieve::EstimateOptions eo;
  eo.degrees = c.degrees;
  eo.budget = c.budget;
  eo.seed = c.seed;
  eo.sing_bound = c.sing_bound;
  if (c.exact) eo.exact = true;
  eo.ell_max = c.ell_max;
  const auto rep = with_ell ? sieve::estimate_sing_dist(file, eo) : sieve::estimate_density(file, eo);
  append(flags, rep.flags);
  json j;
  j["mode"] = "estimated";
  j["m"] = rep.m;
  j["sing_bound"] = rep.sing_bound;
  j["exact"] = rep.exact;
  j["upper_bound"] = rep.upper_bound;
  j["per_degree"] = json::array();
  for (const auto& de : rep.per_degree) {
    json dj;
    dj["d"] = de.d;
    dj["dim_I"] = de.dim_I;
    dj.update(tally_json(de.tally, with_ell));
    dj["fraction"] = rat(de.fraction);
    dj["decimal"] = dec(de.fraction);
    if (c.budget.exhaustive) {
      dj["confidence_note"] = "exhaustive over I_d";
    } else {
      const double p = de.fraction.get_d();
      dj["confidence_note"] = "binomial standard error " + dec(std::sqrt(p * (1 - p) / static_cast<double>(de.tally.total)));
    }
    dj["flags"] = de.flags;
    j["per_degree"].push_back(dj);
  }
  json agg = tally_json(rep.aggregate, with_ell);
  const Rational f = ratio(rep.aggregate.smooth, rep.aggregate.total);
  agg["fraction"] = rat(f);
  agg["decimal"] = dec(f);
  j["aggregate"] = agg;
  return j;
}

json do_singdist_predict(const RunConfig& c, const variety::SchemeFile& file, json& flags) {
  const auto sd = sieve::predict_sing_dist(file, c.ell_max, predict_options(c));
  append(flags, sd.flags);
  json j;
  j["mode"] = "predicted";
  j["m"] = sd.m;
  j["entries"] = json::array();
  for (const auto& e : sd.entries) {
    json ej;
    ej["ell"] = e.ell;
    if (e.exact) {
      ej["predicted"] = rat(*e.exact);
      ej["decimal"] = dec(*e.exact);
    } else {
      ej["predicted"] = nullptr;
      ej["lower"] = rat(e.lower);
      ej["upper"] = rat(e.upper);
    }
    j["entries"].push_back(ej);
  }
  if (sd.residual_lower == sd.residual_upper) {
    j["residual"] = rat(sd.residual_lower);
    j["residual_decimal"] = dec(sd.residual_lower);
  } else {
    j["residual"] = nullptr;
    j["residual_lower"] = rat(sd.residual_lower);
    j["residual_upper"] = rat(sd.residual_upper);
  }
  return j;
}

json do_lowdeg(const RunConfig& c, const variety::SchemeFile& file, json& flags) {
  const auto lp = sieve::low_degree_predictor(file, *c.r, predict_options(c));
  append(flags, lp.flags);
  json j;
  j["r"] = lp.r;
  j["m"] = lp.m;
  j["predicted"] = rat(lp.value);
  j["decimal"] = dec(lp.value);
  j["factors"] = json::array();
  for (const auto& f : lp.factors) {
    json fj;
    fj["name"] = f.name;
    fj["degree"] = f.degree;
    fj["s"] = f.s;
    fj["count"] = f.count.get_str();
    j["factors"].push_back(fj);
  }
  if (!c.degrees.empty()) {
    j["per_degree"] = json::array();
    const double p = lp.value.get_d();
    for (int d : c.degrees) {
      const auto est = sieve::estimate_low_degree(file, *c.r, d, c.budget.samples, c.seed);
      const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(est.tally.total));
      json dj;
      dj["d"] = d;
      dj["dim_I"] = est.dim_I;
      dj["count_total"] = est.tally.total;
      dj["count_smooth"] = est.tally.smooth;
      dj["fraction"] = rat(est.fraction);
      dj["decimal"] = dec(est.fraction);
      dj["standard_error"] = dec(sigma);
      dj["deviation_sigmas"] = sigma > 0 ? dec((est.fraction.get_d() - p) / sigma) : "0";
      j["per_degree"].push_back(dj);
    }
  }
  return j;
}

json do_zeta(const RunConfig& c, const variety::SchemeFile& file, json& flags) {
  const auto po = predict_options(c);
  std::vector<std::string> f;
  const int m = sieve::resolve_dim(file, po, f);
  std::string source;
  const auto prof = sieve::ambient_profile(file, m, c.max_degree, po, source);
  const auto z = zeta::zeta_value(prof, *c.s);
  append(flags, f);
  append(flags, z.flags);
  json j;
  j["m"] = m;
  j["profile"] = profile_json(prof, source);
  j["zeta"] = zeta_json(z);
  if (prof.exact_through(c.ell_max)) {
    j["zeta_ell"] = json::array();
    for (int ell = 0; ell <= c.ell_max; ++ell) {
      const Rational v = zeta::zeta_ell(prof, ell, *c.s);
      j["zeta_ell"].push_back({{"ell", ell}, {"value", rat(v)}, {"decimal", dec(v)}});
    }
  }
  return j;
}

json do_embed(const RunConfig& c, const variety::SchemeFile& file, json& flags, int& code, json& error) {
  const auto C = file.V();
  if (!C) throw Error(ErrorKind::InvalidArgument, "cli.embed", "the scheme file has no Z; the curve is X ∩ Z");
  if (!file.x_equations.empty() || !file.x_removed.empty())
    throw Error(ErrorKind::UnsupportedPresentation, "cli.embed", "X must be P^n; the curve is cut out by Z");
  sieve::EmbedOptions eo;
  eo.d_max = c.d_max;
  eo.seed = c.seed;
  eo.precheck_bound = c.max_degree;
  const auto res = sieve::embed_curve(*C, *c.r, eo);
  append(flags, res.flags);
  json j;
  j["status"] = sieve::to_string(res.status);
  j["n"] = res.n;
  j["r"] = res.r;
  if (res.status == sieve::EmbedStatus::Obstruction) {
    j["witness"] = {{"point", res.witness->to_string()}, {"degree", res.witness->degree}, {"e", res.witness_e}};
    j["note"] = "e(P) > r: no smooth scheme of dimension r contains C";
    code = 2;
    return j;
  }
  j["chain"] = json::array();
  std::vector<mpoly::MPoly> chain;
  for (const auto& s : res.chain) {
    json sj;
    sj["degree"] = s.degree;
    sj["f"] = s.f.to_string(file.names);
    sj["tries"] = s.tries;
    sj["certificate"] = {{"status", graded::to_string(s.certificate.status)}, {"k", s.certificate.k}};
    j["chain"].push_back(sj);
    chain.push_back(s.f);
  }
  if (res.status == sieve::EmbedStatus::NotFound) {
    j["failed_step"] = res.failed_step;
    j["tried"] = json::array();
    for (const auto& [d, n] : res.tried) j["tried"].push_back({{"d", d}, {"tries", n}});
    // A failed search is not a proof that no such hypersurface exists.
    error = {{"kind", std::string(to_string(ErrorKind::NoSmoothHypersurfaceFound))},
             {"where", "sieve.embed_curve"},
             {"message", "no smooth hypersurface found up to degree " + std::to_string(c.d_max)}};
    code = 1;
    return j;
  }
  const auto v = sieve::verify_chain(*C, chain);
  json vj;
  vj["ok"] = v.ok;
  vj["contains_C"] = v.contains_C;
  json st = json::array();
  for (auto s : v.smooth) st.push_back(graded::to_string(s));
  vj["singular_locus"] = st;
  j["verification"] = vj;
  if (!v.ok) code = 1;
  return j;
}

json do_points(const RunConfig& c, const variety::SchemeFile& file, json& flags) {
  const int B = c.max_degree;
  const auto pts = variety::enumerate_closed_points(file.X(), B);
  json j;
  json xj;
  xj["N_e"] = ints(variety::point_counts(pts, B));
  xj["a_d"] = ints(variety::degree_counts(pts, B));
  json list = json::array();
  for (const auto& P : pts) list.push_back({{"degree", P.degree}, {"point", P.to_string()}});
  xj["points"] = list;
  j["X"] = xj;
  if (const auto V = file.V()) {
    variety::StratifyOptions so;
    so.declared_dims = file.dim_strata;
    const auto table = variety::stratify(*V, B, so);
    append(flags, table.flags);
    json strata = json::array();
    for (const auto& [e, st] : table.strata) {
      json sj = stratum_json(st, B);
      json sl = json::array();
      for (const auto& P : st.points) sl.push_back({{"degree", P.degree}, {"point", P.to_string()}});
      sj["points"] = sl;
      strata.push_back(sj);
    }
    j["V"] = strata;
  }
  return j;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void flatten(const json& v, const std::string& path, const std::string& d, std::ostream& os) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, path.empty() ? k : path + "." + k, d, os);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", d, os);
  } else {
    os << d << ',' << csv_cell(path) << ',' << csv_cell(scalar(v)) << '\n';
  }
}

// One row per (d, metric); metrics outside per_degree have an empty d.
void write_csv(const json& report, std::ostream& os) {
  os << "d,metric,value\n";
  flatten(report["schema"], "schema", "", os);
  flatten(report["command"], "command", "", os);
  if (report.contains("result")) {
    for (const auto& [k, v] : report["result"].items()) {
      if (k == "per_degree") {
        for (const auto& row : v) {
          const std::string d = row["d"].dump();
          for (const auto& [rk, rv] : row.items())
            if (rk != "d") flatten(rv, rk, d, os);
        }
      } else {
        flatten(v, k, "", os);
      }
    }
  }
  if (report.contains("error")) flatten(report["error"], "error", "", os);
  flatten(report["flags"], "flags", "", os);
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.threads > 0) omp_set_num_threads(c.threads);
  json report;
  report["schema"] = 1;
  report["command"] = to_string(c.command);
  report["config"] = echo(c);
  json flags = json::array();
  json error;
  int code = 0;
  try {
    const auto file = variety::load_scheme(c.scheme, c.q);
    json result;
    switch (c.command) {
      case Command::Predict:
        result = do_predict(c, file, flags);
        break;
      case Command::Estimate:
        result = do_estimate(c, file, false, flags);
        break;
      case Command::SingDist:
        result = c.singdist_mode == "predict" ? do_singdist_predict(c, file, flags) : do_estimate(c, file, true, flags);
        break;
      case Command::LowDeg:
        result = do_lowdeg(c, file, flags);
        break;
      case Command::Zeta:
        result = do_zeta(c, file, flags);
        break;
      case Command::Embed:
        result = do_embed(c, file, flags, code, error);
        break;
      case Command::Points:
        result = do_points(c, file, flags);
        break;
    }
    report["result"] = result;
    if (!error.is_null()) {
      report["error"] = error;
      err << "error: " << error["message"].get<std::string>() << '\n';
    }
  } catch (const Error& e) {
    report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"where", e.where()}, {"message", e.what()}};
    err << "error: " << e.what() << '\n';
    code = 1;
  }
  report["flags"] = flags;
  if (c.out == OutFormat::Json)
    out << report.dump(2) << '\n';
  else
    write_csv(report, out);
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return run(cfg, out, err);
}

}  // namespace ffsieve::cli
