#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "ffsieve/cli.hpp"
#include "ffsieve/error.hpp"

using namespace ffsieve;
using namespace ffsieve::cli;

namespace {

std::string fixture(const std::string& name) { return (std::filesystem::path(FFSIEVE_SCHEMES_DIR) / name).string(); }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorKind usage_kind(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("argument parsing") {
  const auto p = parse_args({"predict", "--scheme", "nodal_cubic.scm", "--q", "2"});
  CHECK(p.command == Command::Predict);
  CHECK(p.scheme == "nodal_cubic.scm");
  CHECK(p.q == 2u);

  const auto e = parse_args({"estimate", "--scheme", "plane.scm", "-d", "3..5", "--budget", "exhaustive", "--exact"});
  CHECK(e.command == Command::Estimate);
  CHECK(e.degrees == std::vector<int>{3, 4, 5});
  CHECK(e.budget.exhaustive);
  CHECK(e.exact);

  const auto s = parse_args({"singdist", "estimate", "--scheme", "p", "-d", "2,4..5", "--budget", "sample:500", "--seed", "7"});
  CHECK(s.singdist_mode == "estimate");
  CHECK(s.degrees == std::vector<int>{2, 4, 5});
  CHECK_FALSE(s.budget.exhaustive);
  CHECK(s.budget.samples == 500);
  CHECK(s.seed == 7);

  CHECK(usage_kind({"estimate", "--scheme", "p", "-d", "3", "--budget", "sample:banana"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"estimate", "--scheme", "p", "-d", "5..3"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"estimate", "--scheme", "p"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"predict"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"lowdeg", "--scheme", "p"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"lowdeg", "--scheme", "p", "--r", "2", "-d", "25"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"zeta", "--scheme", "p"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"singdist", "guess", "--scheme", "p"}) == ErrorKind::UsageError);
  CHECK(usage_kind({"frobnicate"}) == ErrorKind::UsageError);

  try {
    parse_args({"estimate", "--scheme", "p", "-d", "3", "--budget", "sample:banana"});
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("--budget") != std::string::npos);
  }
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("predict and singdist reports") {
  const auto nodal = invoke({"predict", "--scheme", fixture("nodal_cubic.scm"), "--q", "2"});
  CHECK(nodal.code == 0);
  CHECK(nodal.out.find("\"value\": \"15/128\"") != std::string::npos);
  CHECK(nodal.out.find("\"schema\": 1") != std::string::npos);

  const auto sd = invoke({"singdist", "predict", "--scheme", fixture("plane.scm"), "--q", "2", "--ell-max", "1"});
  CHECK(sd.code == 0);
  const auto first = sd.out.find("\"predicted\": \"21/64\"");
  REQUIRE(first != std::string::npos);
  CHECK(sd.out.find("\"predicted\": \"21/64\"", first + 1) != std::string::npos);

  const auto dl = invoke({"predict", "--scheme", fixture("double_line.scm")});
  CHECK(dl.out.find("\"value\": \"0\"") != std::string::npos);
  CHECK(dl.out.find("violated(e=2, dim=1)") != std::string::npos);

  const auto z = invoke({"zeta", "--scheme", fixture("plane.scm"), "--s", "3", "--ell-max", "2"});
  CHECK(z.out.find("\"value\": \"64/21\"") != std::string::npos);
  CHECK(z.out.find("\"value\": \"34/63\"") != std::string::npos);

  const auto pts = invoke({"points", "--scheme", fixture("nodal_cubic.scm"), "--max-degree", "2"});
  CHECK(pts.code == 0);
  CHECK(pts.out.find("\"e\": 2") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto obs = invoke({"embed", "--scheme", fixture("three_axes.scm"), "--r", "2"});
  CHECK(obs.code == 2);
  CHECK(obs.out.find("\"status\": \"obstruction\"") != std::string::npos);
  CHECK(obs.out.find("(0 : 0 : 0 : 1)") != std::string::npos);

  const auto ok = invoke({"embed", "--scheme", fixture("nodal_cubic.scm"), "--r", "2", "--d-max", "8", "--seed", "1"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"ok\": true") != std::string::npos);

  const auto nf = invoke({"embed", "--scheme", fixture("twisted_cubic_f3.scm"), "--r", "2", "--d-max", "1"});
  CHECK(nf.code == 1);
  CHECK(nf.out.find("NoSmoothHypersurfaceFound") != std::string::npos);

  const auto missing = invoke({"predict", "--scheme", fixture("no_such_file.scm")});
  CHECK(missing.code == 1);
  CHECK(missing.out.find("\"error\"") != std::string::npos);
  CHECK_FALSE(missing.err.empty());

  CHECK(invoke({"estimate", "--scheme", "x", "--budget", "sample:banana", "-d", "3"}).code == 1);
}

TEST_CASE("reports are byte-identical across thread counts") {
  std::vector<std::string> base = {"singdist", "estimate", "--scheme", fixture("plane.scm"), "-d", "3..4",
                                   "--budget", "sample:5000", "--seed", "17", "--sing-bound", "3"};
  std::string reference;
  for (const char* t : {"1", "2", "4"}) {
    auto args = base;
    args.push_back("--threads");
    args.push_back(t);
    const auto o = invoke(args);
    CHECK(o.code == 0);
    if (reference.empty())
      reference = o.out;
    else
      CHECK(o.out == reference);
  }
  auto exhaustive = std::vector<std::string>{"estimate", "--scheme", fixture("plane.scm"), "-d", "4", "--exact"};
  const auto a = invoke(exhaustive);
  exhaustive.insert(exhaustive.end(), {"--threads", "3"});
  CHECK(invoke(exhaustive).out == a.out);
}

TEST_CASE("csv output") {
  const auto o = invoke({"estimate", "--scheme", fixture("plane.scm"), "-d", "2..3", "--out", "csv"});
  CHECK(o.code == 0);
  CHECK(o.out.rfind("d,metric,value\n", 0) == 0);
  CHECK(o.out.find("\n3,fraction,21/64\n") != std::string::npos);
  CHECK(o.out.find("\n2,count_total,64\n") != std::string::npos);
}

TEST_CASE("every fixture round-trips through the scheme format") {
  for (const auto& entry : std::filesystem::directory_iterator(FFSIEVE_SCHEMES_DIR)) {
    CAPTURE(entry.path().string());
    const auto a = variety::load_scheme(entry.path());
    const auto b = variety::parse_scheme(variety::serialize(a));
    CHECK(variety::equivalent(a, b));
  }
}
