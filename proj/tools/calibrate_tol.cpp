// Measures how far grid sums fall below a dense brute-force reference, in
// units of h * max(1, volume). The grid tolerance constant must exceed the
// worst ratio printed here.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>

#include "curvilin/report.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;

int main(int argc, char** argv) {
  CLI::App app{"grid tolerance calibration"};
  int instances = 300;
  std::uint64_t seed = 2024;
  app.add_option("--instances", instances)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  double worst[3] = {0, 0, 0};
  for (int i = 0; i < instances; ++i) {
    std::size_t n = 1 + std::size_t(i % 2);
    std::size_t cells = n == 1 ? 8 : 4;
    double h = 1.0 / double(cells);
    StaircaseSet a = random_staircase(rng, n, cells, h, 1.0, 0, 0.8), b = random_staircase(rng, n, cells, h, 1.0, 0, 0.8);
    if (a.empty() || b.empty()) continue;
    SumSpec s;
    s.p = rng.uniform(1, 3);
    s.t = rng.uniform(0.1, 0.9);
    std::vector<double> al;
    for (std::size_t d = 0; d <= n; ++d) al.push_back(rng.uniform(0.2, 1));
    s.alphas = PowerVector(al);
    inject_volume_lambda(s, a.volume(), b.volume());
    SumResult fast = curvilinear_sum_grid(a, b, s);
    Grid fine = output_grid(a, b, s, std::vector<double>(n, fast.set.grid.spacing[0] / 4));
    SumResult dense = sum_oracle(a, b, s, 4096, fine);
    double ratio = (dense.volume - fast.volume) / (fast.set.grid.min_spacing() * std::max(1.0, dense.volume));
    worst[n] = std::max(worst[n], ratio);
  }
  std::printf("worst ratio n=1: %.3f\nworst ratio n=2: %.3f\nconfigured constant: %.3f\n", worst[1], worst[2],
              kGridTolC);
  return std::max(worst[1], worst[2]) <= kGridTolC ? 0 : 1;
}
