// Deterministic bounded Nelder-Mead minimizer. The search runs in box-
// normalized coordinates, restarts a fresh full-size simplex from the current
// best with a shrinking step schedule (the standard cure for premature
// simplex collapse inside curved valleys), and finishes with a per-axis
// coordinate polish. The only randomness is the seed-derived jitter on the
// final restart round; identical inputs give identical iterates.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace lamsa {

struct NelderMeadOptions {
  int max_evals = 400;
  double f_tol = 1e-12;  // relative simplex-spread convergence threshold
  std::vector<double> step_schedule = {0.15, 0.06, 0.025, 0.01};
  std::uint64_t seed = 12345;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fval = 0.0;
  int evals = 0;
  bool converged = false;
};

namespace detail {
// splitmix64: portable, stable across platforms and standard libraries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
inline double uniform01(std::uint64_t& state) {
  return double(splitmix64(state) >> 11) * 0x1.0p-53;
}
}  // namespace detail

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> x0, const std::vector<double>& lo, const std::vector<double>& hi,
    const NelderMeadOptions& opts = {}) {
  const size_t n = x0.size();
  int evals = 0;

  auto denorm = [&](const std::vector<double>& z) {
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = lo[i] + z[i] * (hi[i] - lo[i]);
    return x;
  };
  auto clamp01 = [&](std::vector<double>& z) {
    for (double& v : z) v = std::clamp(v, 0.0, 1.0);
  };
  auto eval = [&](std::vector<double> z) {
    clamp01(z);
    ++evals;
    return objective(denorm(z));
  };

  struct Vertex {
    std::vector<double> z;
    double f;
  };

  std::vector<double> z0(n);
  for (size_t i = 0; i < n; ++i)
    z0[i] = (std::clamp(x0[i], lo[i], hi[i]) - lo[i]) / (hi[i] - lo[i]);
  Vertex best{z0, eval(z0)};

  auto run_simplex = [&](const std::vector<double>& start, double step) -> Vertex {
    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> p = start;
      p[i] += (p[i] + step > 1.0) ? -step : step;
      clamp01(p);
      simplex.push_back({p, eval(p)});
    }
    auto order = [&] {
      std::sort(simplex.begin(), simplex.end(),
                [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();

    while (evals < opts.max_evals) {
      const double spread = std::abs(simplex.back().f - simplex.front().f);
      if (spread < opts.f_tol * (1.0 + std::abs(simplex.front().f))) break;

      std::vector<double> centroid(n, 0.0);
      for (size_t v = 0; v + 1 < simplex.size(); ++v)
        for (size_t i = 0; i < n; ++i) centroid[i] += simplex[v].z[i];
      for (double& c : centroid) c /= double(n);

      auto blend = [&](double coef) {
        std::vector<double> p(n);
        for (size_t i = 0; i < n; ++i)
          p[i] = centroid[i] + coef * (centroid[i] - simplex.back().z[i]);
        clamp01(p);
        return p;
      };

      const auto zr = blend(1.0);
      const double fr = eval(zr);
      if (fr < simplex.front().f) {
        const auto ze = blend(2.0);
        const double fe = eval(ze);
        simplex.back() = fe < fr ? Vertex{ze, fe} : Vertex{zr, fr};
      } else if (fr < simplex[simplex.size() - 2].f) {
        simplex.back() = {zr, fr};
      } else {
        const auto zc = blend(-0.5);
        const double fc = eval(zc);
        if (fc < simplex.back().f) {
          simplex.back() = {zc, fc};
        } else {
          for (size_t v = 1; v < simplex.size(); ++v) {
            for (size_t i = 0; i < n; ++i)
              simplex[v].z[i] = simplex[0].z[i] + 0.5 * (simplex[v].z[i] - simplex[0].z[i]);
            simplex[v].f = eval(simplex[v].z);
          }
        }
      }
      order();
    }
    return simplex.front();
  };

  std::uint64_t rng = opts.seed;
  for (size_t round = 0; round < opts.step_schedule.size() && evals < opts.max_evals;
       ++round) {
    std::vector<double> start = best.z;
    if (round + 1 == opts.step_schedule.size()) {
      // last round: seeded jitter breaks residual simplex symmetry
      for (double& v : start) v += (detail::uniform01(rng) - 0.5) * 0.01;
      clamp01(start);
    }
    const Vertex v = run_simplex(start, opts.step_schedule[round]);
    if (v.f < best.f) best = v;
  }

  // Coordinate polish: per-axis shrinking three-point search.
  for (int pass = 0; pass < 3 && evals < opts.max_evals; ++pass) {
    for (size_t i = 0; i < n && evals < opts.max_evals; ++i) {
      for (double frac = 0.01; frac > 2e-5 && evals < opts.max_evals; frac *= 0.4) {
        std::vector<double> plus = best.z, minus = best.z;
        plus[i] = std::min(1.0, best.z[i] + frac);
        minus[i] = std::max(0.0, best.z[i] - frac);
        const double fp = eval(plus), fm = eval(minus);
        if (fp < best.f && fp <= fm) {
          best = {plus, fp};
        } else if (fm < best.f) {
          best = {minus, fm};
        }
      }
    }
  }

  NelderMeadResult out;
  out.x = denorm(best.z);
  out.fval = best.f;
  out.evals = evals;
  out.converged = evals < opts.max_evals;
  return out;
}

}  // namespace lamsa
