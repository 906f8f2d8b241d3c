// Copyright 2026 The thz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "detail/pool.hpp"
#include "thz/errors.hpp"
#include "thz/observables.hpp"
#include "thz/optimize.hpp"

namespace thz {

namespace {

double residual_k(const ConditionReport& r, int k) {
  return k == 0 ? r.residual0 : (k == 1 ? r.residual1 : r.residual2);
}

ConditionReport residuals_at(const SystemParams& base, double o1, double o2) {
  SystemParams p = base;
  p.omega = {o1, o2};
  return condition_residuals(p);
}

// Newton on (r_a, r_b) = 0 with a forward-difference Jacobian.
std::optional<std::array<double, 2>> intersect(const SystemParams& base, int a, int b, double o1, double o2) {
  auto f = [&](double x, double y) {
    ConditionReport r = residuals_at(base, x, y);
    return Eigen::Vector2d(residual_k(r, a), residual_k(r, b));
  };
  try {
    for (int it = 0; it < 60; ++it) {
      Eigen::Vector2d f0 = f(o1, o2);
      if (!f0.allFinite()) return std::nullopt;
      double h1 = 1e-6 * std::max(1.0, std::abs(o1)), h2 = 1e-6 * std::max(1.0, std::abs(o2));
      Eigen::Matrix2d jac;
      jac.col(0) = (f(o1 + h1, o2) - f0) / h1;
      jac.col(1) = (f(o1, o2 + h2) - f0) / h2;
      Eigen::FullPivLU<Eigen::Matrix2d> lu(jac);
      if (!lu.isInvertible()) return std::nullopt;
      Eigen::Vector2d step = lu.solve(-f0);
      o1 += step(0);
      o2 += step(1);
      if (step.norm() <= 1e-11 * std::hypot(o1, o2)) return std::array<double, 2>{o1, o2};
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

PlaneResult drive_plane(const PlaneRequest& req) {
  req.base.validate();
  PlaneResult out;
  out.omega1 = req.omega1.values();
  out.omega2 = req.omega2.values();
  const std::size_t n1 = out.omega1.size(), n2 = out.omega2.size();
  out.points.resize(n1 * n2);
  detail::parallel_for(out.points.size(), req.threads, [&](std::size_t k) {
    PlanePoint& pp = out.points[k];
    pp.omega1 = out.omega1[k / n2];
    pp.omega2 = out.omega2[k % n2];
    SystemParams p = req.base;
    p.omega = {pp.omega1, pp.omega2};
    try {
      pp.conditions = condition_residuals(p);
      SteadyReport rep = steady_report(p, ModelLevel::Grwa);
      pp.concurrence = rep.concurrence;
      pp.g2_cross = rep.g2_cross;
      pp.ok = true;
    } catch (const std::exception& e) {
      pp.failure = e.what();
    }
  });
  if (out.points.empty()) return out;

  // residual-zero crossings along grid edges
  auto at = [&](std::size_t i, std::size_t j) -> const PlanePoint& { return out.points[i * n2 + j]; };
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j) {
        const PlanePoint& p = at(i, j);
        if (!p.ok) continue;
        double r0 = residual_k(p.conditions, k);
        auto edge = [&](const PlanePoint& q) {
          if (!q.ok) return;
          double r1 = residual_k(q.conditions, k);
          if (!std::isfinite(r0) || !std::isfinite(r1) || (r0 > 0.0) == (r1 > 0.0) || r0 == r1) return;
          double u = r0 / (r0 - r1);
          out.curves[k].push_back({p.omega1 + u * (q.omega1 - p.omega1), p.omega2 + u * (q.omega2 - p.omega2)});
        };
        if (i + 1 < n1) edge(at(i + 1, j));
        if (j + 1 < n2) edge(at(i, j + 1));
      }

  const double c1 = 0.5 * (out.omega1.front() + out.omega1.back());
  const double c2 = 0.5 * (out.omega2.front() + out.omega2.back());
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::array<double, 2> sum{0.0, 0.0};
  int found = 0;
  for (int q = 0; q < 3; ++q) {
    out.pair_intersections[q] = intersect(req.base, pairs[q][0], pairs[q][1], c1, c2);
    if (out.pair_intersections[q]) {
      sum[0] += (*out.pair_intersections[q])[0];
      sum[1] += (*out.pair_intersections[q])[1];
      ++found;
    }
  }
  if (found > 0) {
    out.intersection = std::array<double, 2>{sum[0] / found, sum[1] / found};
    for (const auto& pi : out.pair_intersections)
      if (pi)
        out.intersection_spread = std::max(out.intersection_spread, std::hypot((*pi)[0] - (*out.intersection)[0],
                                                                                (*pi)[1] - (*out.intersection)[1]));
  }

  // concurrence maximum, g2 minimum, and their correlation
  double cmax = -1.0, gmin = std::numeric_limits<double>::infinity();
  double sc = 0.0, sg = 0.0, scc = 0.0, sgg = 0.0, scg = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const PlanePoint& p = out.points[k];
    if (!p.ok) continue;
    if (p.concurrence > cmax) {
      cmax = p.concurrence;
      out.argmax_concurrence = k;
    }
    if (!std::isfinite(p.g2_cross)) continue;
    if (p.g2_cross < gmin) {
      gmin = p.g2_cross;
      out.argmin_g2 = k;
    }
    sc += p.concurrence;
    sg += p.g2_cross;
    scc += p.concurrence * p.concurrence;
    sgg += p.g2_cross * p.g2_cross;
    scg += p.concurrence * p.g2_cross;
    ++n;
  }
  if (n > 1) {
    double cov = scg - sc * sg / n, vc = scc - sc * sc / n, vg = sgg - sg * sg / n;
    out.pearson_c_g2 = (vc > 0.0 && vg > 0.0) ? cov / std::sqrt(vc * vg) : 0.0;
  }
  return out;
}

}  // namespace thz
