#include "ffsieve/scheme_io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "ffsieve/error.hpp"

namespace ffsieve::variety {

SchemePresentation SchemeFile::X() const {
  SchemePresentation X;
  X.field = field;
  X.nvars = n + 1;
  X.equations = x_equations;
  X.removed = x_removed;
  X.declared_dim = dim_x;
  return X;
}

std::optional<SchemePresentation> SchemeFile::V() const {
  if (!z_equations) return std::nullopt;
  SchemePresentation V = X();
  V.equations.insert(V.equations.end(), z_equations->begin(), z_equations->end());
  V.declared_dim.reset();
  return V;
}

std::vector<MPoly> SchemeFile::z_ideal() const {
  if (!z_equations) return {MPoly::constant(field, n + 1, 1)};
  return *z_equations;
}

std::optional<zeta::CountProfile> SchemeFile::declared_profile(const std::string& key) const {
  auto it = profiles.find(key);
  if (it == profiles.end()) return std::nullopt;
  return zeta::CountProfile::polynomial(field.q(), it->second);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "variety.parse_scheme", "line " + std::to_string(line) + ": " + msg);
}

std::pair<std::uint32_t, int> split_prime_power(std::uint64_t q, int line) {
  if (q < 2) fail(line, "field order must be a prime power");
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  int k = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) fail(line, std::to_string(q) + " is not a prime power");
  return {static_cast<std::uint32_t>(p), k};
}

struct Raw {
  int line;
  std::string text;
};

}  // namespace

SchemeFile parse_scheme(const std::string& text, std::optional<std::uint64_t> q_override) {
  static const std::regex field_re(R"(q\s*=\s*(\d+)(\s*\^\s*(\d+))?(\s+modulus\s+(.+))?)");
  static const std::regex ambient_re(R"(P\s+(\d+)((\s+[A-Za-z_][A-Za-z0-9_]*)*))");
  static const std::regex section_re(R"((X|X\.remove|Z)\s*:(.*))");
  static const std::regex dim_re(R"(dim\s+(X|V_(\d+))\s*=\s*(\d+))");
  static const std::regex profile_re(R"(profile\s+(X|X-V|V_\d+)\s*=\s*(.+))");

  SchemeFile out;
  std::optional<std::pair<std::uint32_t, int>> pk;
  std::optional<Raw> modulus;
  int field_line = 0;
  bool have_ambient = false;
  std::map<std::string, std::vector<Raw>> sections;
  std::string current;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto add_equations = [&](const std::string& body, int line) {
    std::string item;
    std::istringstream parts(body);
    while (std::getline(parts, item, ',')) {
      item = trim(item);
      if (!item.empty()) sections[current].push_back({line, item});
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, field_re)) {
      if (pk) fail(lineno, "duplicate field line");
      const std::uint64_t base = std::stoull(m[1]);
      if (m[3].matched) {
        pk = {static_cast<std::uint32_t>(base), std::stoi(m[3])};
        if (!gf::is_prime(base)) fail(lineno, std::to_string(base) + " is not prime");
      } else {
        pk = split_prime_power(base, lineno);
      }
      if (m[5].matched) modulus = Raw{lineno, trim(m[5])};
      field_line = lineno;
      current.clear();
    } else if (std::regex_match(line, m, ambient_re)) {
      if (have_ambient) fail(lineno, "duplicate ambient line");
      have_ambient = true;
      out.n = std::stoi(m[1]);
      std::istringstream names(m[2]);
      std::string nm;
      while (names >> nm) out.names.push_back(nm);
      if (out.names.empty()) out.names = mpoly::default_names(out.n + 1);
      if (static_cast<int>(out.names.size()) != out.n + 1)
        fail(lineno, "P " + std::to_string(out.n) + " needs " + std::to_string(out.n + 1) + " variable names");
      current.clear();
    } else if (std::regex_match(line, m, section_re)) {
      current = m[1];
      if (sections.count(current)) fail(lineno, "duplicate section " + current);
      sections[current];
      add_equations(m[2], lineno);
    } else if (std::regex_match(line, m, dim_re)) {
      if (m[2].matched) out.dim_strata[std::stoi(m[2])] = std::stoi(m[3]);
      else out.dim_x = std::stoi(m[3]);
      current.clear();
    } else if (std::regex_match(line, m, profile_re)) {
      try {
        out.profiles[m[1]] = zeta::parse_terms(std::string(m[2]));
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
      current.clear();
    } else if (!current.empty()) {
      add_equations(line, lineno);
    } else {
      fail(lineno, "unrecognized line '" + line + "'");
    }
  }
  if (!pk) fail(lineno, "missing field line 'q = ...'");
  if (!have_ambient) fail(lineno, "missing ambient line 'P n ...'");

  try {
    if (q_override && *q_override != gf::make_field(pk->first, pk->second).q()) {
      pk = split_prime_power(*q_override, 0);
      modulus.reset();
    }
    if (modulus) {
      auto fp = gf::make_field(pk->first, 1);
      auto mp = mpoly::parse_poly(modulus->text, fp, {"g"});
      std::vector<std::uint32_t> coeffs(static_cast<std::size_t>(std::max(mp.total_degree(), 0)) + 1, 0);
      for (const auto& [e, c] : mp.terms()) coeffs[static_cast<std::size_t>(e[0])] = c;
      if (mp.total_degree() != pk->second || coeffs.back() != 1)
        fail(modulus->line, "modulus must be monic of degree " + std::to_string(pk->second));
      out.field = gf::make_field(pk->first, pk->second, coeffs);
    } else {
      out.field = gf::make_field(pk->first, pk->second);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    fail(field_line, e.what());
  }

  auto parse_list = [&](const std::string& key) {
    std::vector<MPoly> polys;
    for (const auto& r : sections[key]) {
      MPoly f;
      try {
        f = mpoly::parse_poly(r.text, out.field, out.names);
      } catch (const Error& e) {
        fail(r.line, e.what());
      }
      if (!f.is_homogeneous()) fail(r.line, "equation '" + r.text + "' is not homogeneous");
      polys.push_back(std::move(f));
    }
    return polys;
  };
  out.x_equations = parse_list("X");
  out.x_removed = parse_list("X.remove");
  if (sections.count("Z")) out.z_equations = parse_list("Z");
  return out;
}

SchemeFile load_scheme(const std::filesystem::path& path, std::optional<std::uint64_t> q_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "variety.load_scheme", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scheme(buf.str(), q_override);
  } catch (const Error& e) {
    throw Error(e.kind(), e.where(), path.string() + ": " + e.what());
  }
}

std::string serialize(const SchemeFile& s) {
  std::ostringstream os;
  const auto& F = s.field;
  os << "q = " << F.p();
  if (F.k() > 1) {
    os << '^' << F.k() << " modulus ";
    std::vector<std::string> parts;
    const auto& m = F.modulus();
    for (std::size_t i = m.size(); i-- > 0;) {
      if (m[i] == 0) continue;
      std::string t = (m[i] != 1 || i == 0) ? std::to_string(m[i]) : "";
      if (i > 0) t += (t.empty() ? "" : "*") + std::string("g") + (i > 1 ? "^" + std::to_string(i) : "");
      parts.push_back(t);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? " + " : "") << parts[i];
  }
  os << "\nP " << s.n;
  for (const auto& nm : s.names) os << ' ' << nm;
  os << '\n';
  auto section = [&](const char* name, const std::vector<MPoly>& polys) {
    os << name << ":\n";
    for (const auto& f : polys) os << "  " << f.to_string(s.names) << '\n';
  };
  section("X", s.x_equations);
  if (!s.x_removed.empty()) section("X.remove", s.x_removed);
  if (s.z_equations) section("Z", *s.z_equations);
  if (s.dim_x) os << "dim X = " << *s.dim_x << '\n';
  for (const auto& [e, d] : s.dim_strata) os << "dim V_" << e << " = " << d << '\n';
  for (const auto& [k, t] : s.profiles) os << "profile " << k << " = " << zeta::format_terms(t) << '\n';
  return os.str();
}

bool equivalent(const SchemeFile& a, const SchemeFile& b) {
  return a.field == b.field && a.n == b.n && a.names == b.names && a.x_equations == b.x_equations &&
         a.x_removed == b.x_removed && a.z_equations == b.z_equations && a.dim_x == b.dim_x &&
         a.dim_strata == b.dim_strata && a.profiles == b.profiles;
}

}  // namespace ffsieve::variety
