#pragma once

// Oracles and generators shared by the unit tests and the acceptance run.

#include "schutz/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

namespace schutz::testing {

// Symmetric translation-invariant weights w_0..w_4 on the line; the
// objective max over shifts 1..2 of ‖w − τ^d w‖₁.
inline double shift_objective(const std::array<double, 5>& w) {
  std::array<double, 9> full{};
  for (int k = -4; k <= 4; ++k) full[k + 4] = w[std::abs(k)];
  double worst = 0;
  for (int d = 1; d <= 2; ++d) {
    double s = 0;
    for (int k = -4; k <= 4 + d; ++k) {
      double a = (k >= -4 && k <= 4) ? full[k + 4] : 0;
      double b = (k - d >= -4 && k - d <= 4) ? full[k - d + 4] : 0;
      s += std::abs(a - b);
    }
    worst = std::max(worst, s);
  }
  return worst;
}

// Grid brute force over every simplex grid of step 1/N, N ≤ 48, then a
// zooming window of ±3 steps around the best point at finer steps.
inline double cycle_grid_optimum() {
  std::array<double, 5> best{};
  double best_val = 1e9;
  for (int N = 1; N <= 48; ++N)
    for (int a1 = 0; 2 * a1 <= N; ++a1)
      for (int a2 = 0; 2 * (a1 + a2) <= N; ++a2)
        for (int a3 = 0; 2 * (a1 + a2 + a3) <= N; ++a3)
          for (int a4 = 0; 2 * (a1 + a2 + a3 + a4) <= N; ++a4) {
            int a0 = N - 2 * (a1 + a2 + a3 + a4);
            std::array<double, 5> w{double(a0) / N, double(a1) / N, double(a2) / N, double(a3) / N,
                                    double(a4) / N};
            double v = shift_objective(w);
            if (v < best_val) {
              best_val = v;
              best = w;
            }
          }
  for (double step = 1.0 / 200; step > 1e-6; step /= 4) {
    auto center = best;
    for (int d1 = -3; d1 <= 3; ++d1)
      for (int d2 = -3; d2 <= 3; ++d2)
        for (int d3 = -3; d3 <= 3; ++d3)
          for (int d4 = -3; d4 <= 3; ++d4) {
            std::array<double, 5> w{0, center[1] + d1 * step, center[2] + d2 * step, center[3] + d3 * step,
                                    center[4] + d4 * step};
            w[0] = 1 - 2 * (w[1] + w[2] + w[3] + w[4]);
            if (std::any_of(w.begin(), w.end(), [](double x) { return x < 0; })) continue;
            double v = shift_objective(w);
            if (v < best_val) {
              best_val = v;
              best = w;
            }
          }
  }
  return best_val;
}

inline LoopGraph complete_graph(std::uint32_t n) {
  LoopGraph g;
  g.vertices = n;
  g.loop.assign(n, true);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  g.root = 0;
  return g;
}

// Random spanning tree plus up to `extra` chords, loops everywhere.
inline LoopGraph random_loop_graph(std::mt19937& rng, std::uint32_t n, std::uint32_t extra) {
  LoopGraph g;
  g.vertices = n;
  g.loop.assign(n, true);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> d(0, v - 1);
    auto u = d(rng);
    seen.insert({u, v});
    g.edges.emplace_back(u, v);
  }
  std::uniform_int_distribution<std::uint32_t> any(0, n - 1);
  for (std::uint32_t t = 0; t < extra; ++t) {
    auto u = any(rng), v = any(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert({u, v}).second) g.edges.emplace_back(u, v);
  }
  g.root = 0;
  return g;
}

// Z_k acting on k·b points by rotating blocks, with partial identities on unions of blocks.
inline OraclePtr block_rotation(int k, int blocks, int kept) {
  const int n = k * blocks;
  PartialMap rot, keep;
  rot.image.resize(static_cast<std::size_t>(n));
  keep.image.resize(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    int block = p / k, r = p % k;
    rot.image[static_cast<std::size_t>(p)] = block * k + (r + 1) % k;
    keep.image[static_cast<std::size_t>(p)] = block < kept ? p : -1;
  }
  return partial_bijections(n, {rot, keep},
                            "rot" + std::to_string(k) + "x" + std::to_string(blocks) + "/" + std::to_string(kept));
}


}  // namespace schutz::testing
