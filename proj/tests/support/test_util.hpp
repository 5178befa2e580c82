#pragma once

#include <chaplygin/chaplygin.hpp>
#include <chaplygin/numerics.hpp>

#include <cmath>
#include <functional>

namespace chaplygin::testing {

inline Vec e(Index n, Index i) { return Vec::Unit(n, i); }

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline CotangentPoint random_point(Index n, Rng& rng, double p_scale = 1.0) {
  CotangentPoint pt;
  random_cotangent(n, rng, pt.gamma, pt.p, p_scale);
  return pt;
}

// Max relative drift max_t |f(y_t) - f(y_0)| / max(1, |f(y_0)|).
inline double relative_drift(const Trajectory& traj,
                             const std::function<double(const Vec&)>& f) {
  const double f0 = f(traj.states.front());
  double worst = 0.0;
  for (const Vec& y : traj.states) {
    worst = std::max(worst, std::abs(f(y) - f0) / std::max(1.0, std::abs(f0)));
  }
  return worst;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace chaplygin::testing
