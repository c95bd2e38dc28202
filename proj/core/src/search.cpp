// SPDX-License-Identifier: Apache-2.0
#include "crossflow/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

// Euclidean projection of one group onto {x >= 0, sum <= 1}.
void project_group(double* x, int n) {
  double clipped_sum = 0;
  for (int i = 0; i < n; ++i) clipped_sum += std::max(x[i], 0.0);
  if (clipped_sum <= 1.0) {
    for (int i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
    return;
  }
  // Sorting-based projection onto the simplex {x >= 0, sum = 1}.
  std::vector<double> u(x, x + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cssv = 0;
  double theta = 0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    cssv += u[i];
    double t = (cssv - 1.0) / (i + 1);
    if (u[i] - t > 0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  for (int i = 0; i < n; ++i) x[i] = std::max(x[i] - theta, 0.0);
}

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> project_constraints(std::vector<double> v, int groups,
                                        int group_size) {
  if (static_cast<int>(v.size()) != groups * group_size) {
    throw ConfigError("search", "vector size does not match groups * group_size");
  }
  for (int g = 0; g < groups; ++g) {
    project_group(v.data() + static_cast<size_t>(g) * group_size, group_size);
  }
  return v;
}

std::vector<double> estimate_gradient(const Objective& f,
                                      const std::vector<double>& w, double h,
                                      int groups, int group_size) {
  std::vector<double> g(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    std::vector<double> plus = w;
    std::vector<double> minus = w;
    plus[i] += h;
    minus[i] -= h;
    double fp = f(project_constraints(std::move(plus), groups, group_size));
    double fm = f(project_constraints(std::move(minus), groups, group_size));
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

SearchResult gd_search(const Objective& f, const SearchConfig& cfg,
                       const std::vector<double>& init) {
  SearchResult result;
  result.traces.emplace_back();
  auto& trace = result.traces.back();

  std::vector<double> w =
      project_constraints(init, cfg.groups, cfg.group_size);
  std::vector<double> momentum = w;

  result.w = w;
  result.value = f(w);
  trace.push_back({0, w, result.value});

  for (int t = 1; t <= cfg.max_steps; ++t) {
    std::vector<double> g =
        estimate_gradient(f, w, cfg.fd_step, cfg.groups, cfg.group_size);
    std::vector<double> next = w;
    for (size_t i = 0; i < next.size(); ++i) next[i] -= cfg.eta * g[i];

    double scale = std::max(1.0, norm2(next));
    for (double& x : next) x /= scale;

    for (size_t i = 0; i < next.size(); ++i) {
      momentum[i] = cfg.beta * momentum[i] + (1.0 - cfg.beta) * next[i];
    }
    std::vector<double> projected =
        project_constraints(momentum, cfg.groups, cfg.group_size);

    double step_norm = 0;
    for (size_t i = 0; i < projected.size(); ++i) {
      double d = projected[i] - w[i];
      step_norm += d * d;
    }
    w = std::move(projected);

    double value = f(w);
    trace.push_back({t, w, value});
    if (value < result.value) {
      result.value = value;
      result.w = w;
    }
    if (std::sqrt(step_norm) < cfg.tolerance) break;
  }
  return result;
}

SearchResult multi_start(const Objective& f, const SearchConfig& cfg) {
  if (cfg.restarts < 1) {
    throw ConfigError("search", "restarts must be >= 1");
  }
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> expo(1.0);

  SearchResult best;
  bool have_best = false;
  std::vector<std::vector<SearchTracePoint>> traces;

  for (int s = 0; s < cfg.restarts; ++s) {
    // Uniform Dirichlet start per group (sum exactly 1).
    std::vector<double> init(static_cast<size_t>(cfg.groups) * cfg.group_size);
    for (int g = 0; g < cfg.groups; ++g) {
      double sum = 0;
      for (int i = 0; i < cfg.group_size; ++i) {
        double e = expo(rng);
        init[static_cast<size_t>(g) * cfg.group_size + i] = e;
        sum += e;
      }
      for (int i = 0; i < cfg.group_size; ++i) {
        init[static_cast<size_t>(g) * cfg.group_size + i] /= sum;
      }
    }
    SearchResult r = gd_search(f, cfg, init);
    traces.push_back(std::move(r.traces.front()));
    if (!have_best || r.value < best.value) {
      best = std::move(r);
      best.best_start = s;
      have_best = true;
    }
  }
  best.traces = std::move(traces);
  return best;
}

std::vector<ParallelismStrategy> enumerate_strategies(std::int64_t total_devices,
                                                      int max_lp) {
  std::vector<ParallelismStrategy> out;
  if (total_devices < 1) return out;

  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d <= total_devices; ++d) {
    if (total_devices % d == 0) divisors.push_back(d);
  }

  for (std::int64_t kp1 : divisors) {
    for (std::int64_t kp2 : divisors) {
      if (total_devices % (kp1 * kp2) != 0) continue;
      std::int64_t rest = total_devices / (kp1 * kp2);
      for (std::int64_t dp = 1; dp <= rest; ++dp) {
        if (rest % dp != 0) continue;
        std::int64_t lp = rest / dp;
        if (lp > max_lp) continue;
        ParallelismStrategy st;
        st.kind = KernelKind::kRC;
        st.kp1 = static_cast<int>(kp1);
        st.kp2 = static_cast<int>(kp2);
        st.dp = static_cast<int>(dp);
        st.lp = static_cast<int>(lp);
        out.push_back(st);
      }
    }
  }
  for (std::int64_t kp1 : divisors) {
    std::int64_t rest = total_devices / kp1;
    for (std::int64_t dp = 1; dp <= rest; ++dp) {
      if (rest % dp != 0) continue;
      std::int64_t lp = rest / dp;
      if (lp > max_lp) continue;
      ParallelismStrategy st;
      st.kind = KernelKind::kCR;
      st.kp1 = static_cast<int>(kp1);
      st.kp2 = 1;
      st.dp = static_cast<int>(dp);
      st.lp = static_cast<int>(lp);
      out.push_back(st);
    }
  }
  return out;
}

}  // namespace crossflow
