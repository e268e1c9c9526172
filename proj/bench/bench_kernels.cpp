// Serial reference vs the OpenMP kernels on plane curves over F_2.
// Usage: bench_kernels [threads...]   (default: 1 and omp_get_max_threads)

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "ffsieve/kernels.hpp"

using namespace ffsieve;
using namespace ffsieve::sieve;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SmoothnessProblem plane(int d, int B) {
  auto F = gf::make_field(2, 1);
  auto X = variety::SchemePresentation::projective_space(F, 2);
  return make_problem(X, 2, d, ideal_basis(F, 3, {}, d).basis, B);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> threads;
  for (int i = 1; i < argc; ++i) threads.push_back(std::atoi(argv[i]));
  if (threads.empty()) threads = {1, omp_get_max_threads()};

  struct Case {
    const char* name;
    int d, B;
    bool exact;
  };
  const Case cases[] = {{"exhaustive d=4 B=3", 4, 3, false}, {"exhaustive d=4 B=3 exact", 4, 3, true}};
  std::printf("%-28s %-10s %10s %10s\n", "case", "kernel", "threads", "seconds");
  for (const auto& c : cases) {
    const auto prob = plane(c.d, c.B);
    KernelOptions opt;
    opt.exact = c.exact;
    const auto cert = c.exact ? make_certifier(prob) : nullptr;
    Tally ref;
    const double ts = seconds([&] { ref = run_exhaustive_serial(prob, opt, cert.get()); });
    std::printf("%-28s %-10s %10d %10.3f\n", c.name, "serial", 1, ts);
    for (int t : threads) {
      omp_set_num_threads(t);
      Tally got;
      const double tp = seconds([&] { got = run_exhaustive(prob, opt, cert.get()); });
      std::printf("%-28s %-10s %10d %10.3f%s\n", c.name, "openmp", t, tp, got == ref ? "" : "  MISMATCH");
    }
  }

  // Sampling at high degree, where the jets dominate.
  const auto prob = plane(25, 2);
  KernelOptions opt;
  opt.need_ell = false;
  const std::uint64_t N = 2000;
  Tally ref;
  const double ts = seconds([&] { ref = run_sampled_serial(prob, opt, N, 1); });
  std::printf("%-28s %-10s %10d %10.3f\n", "sampled d=25 B=2 N=2e3", "serial", 1, ts);
  for (int t : threads) {
    omp_set_num_threads(t);
    Tally got;
    const double tp = seconds([&] { got = run_sampled(prob, opt, N, 1); });
    std::printf("%-28s %-10s %10d %10.3f%s\n", "sampled d=25 B=2 N=2e3", "openmp", t, tp, got == ref ? "" : "  MISMATCH");
  }
  return 0;
}
