#include "chaplygin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chaplygin {

void validate(const IntegratorConfig& config) {
  if (!(config.step > 0.0)) throw ParameterError("integrator: step must be > 0");
  if (!(config.t_end > 0.0)) {
    throw ParameterError("integrator: t_end must be > 0");
  }
  if (config.stride < 1) throw ParameterError("integrator: stride must be >= 1");
  if (config.method == Method::rkf45 && !(config.tolerance > 0.0)) {
    throw ParameterError("integrator: tolerance must be > 0");
  }
}

namespace {

Vec hermite(double t0, const Vec& y0, const Vec& m0, double t1, const Vec& y1,
            const Vec& m1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

void require_finite(const Vec& y, double t) {
  if (!y.allFinite()) {
    throw DomainError("integrate: non-finite state at t = " +
                      std::to_string(t));
  }
}

struct Sampler {
  Trajectory& out;
  Index stride;
  Index counter = 0;

  void record(double t, const Vec& y, const Vec& fy) {
    out.times.push_back(t);
    out.states.push_back(y);
    out.rates.push_back(fy);
  }
  void after_step(double t, const Vec& y, const Vec& fy) {
    if (++counter % stride == 0) record(t, y, fy);
  }
  void finish(double t, const Vec& y, const Vec& fy) {
    if (out.times.back() != t) record(t, y, fy);
  }
};

Vec apply_projection(const Projector& projector, const Vec& y,
                     Trajectory& out) {
  if (!projector) return y;
  Vec z = projector(y);
  out.max_projection_displacement =
      std::max(out.max_projection_displacement, (z - y).norm());
  return z;
}

Vec rk4_with_k1(const VectorField& f, const Vec& y, const Vec& k1, double h) {
  const Vec k2 = f(y + 0.5 * h * k1);
  const Vec k3 = f(y + 0.5 * h * k2);
  const Vec k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_rk4(const VectorField& f, const Vec& y0,
                         const IntegratorConfig& cfg,
                         const Projector& projector) {
  Trajectory out;
  Sampler sampler{out, cfg.stride};
  const auto steps = static_cast<Index>(std::ceil(cfg.t_end / cfg.step - 1e-9));
  Vec y = y0;
  Vec fy = f(y);
  sampler.record(0.0, y, fy);
  for (Index k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * cfg.step;
    const double t1 = (k + 1 == steps) ? cfg.t_end
                                       : static_cast<double>(k + 1) * cfg.step;
    y = rk4_with_k1(f, y, fy, t1 - t0);
    if (cfg.project) y = apply_projection(projector, y, out);
    require_finite(y, t1);
    fy = f(y);
    ++out.steps_taken;
    sampler.after_step(t1, y, fy);
  }
  sampler.finish(cfg.t_end, y, fy);
  return out;
}

Trajectory integrate_rkf45(const VectorField& f, const Vec& y0,
                           const IntegratorConfig& cfg,
                           const Projector& projector) {
  static constexpr double c[6] = {0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1, 1.0 / 2};
  static constexpr double a[6][5] = {
      {0, 0, 0, 0, 0},
      {1.0 / 4, 0, 0, 0, 0},
      {3.0 / 32, 9.0 / 32, 0, 0, 0},
      {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
      {439.0 / 216, -8, 3680.0 / 513, -845.0 / 4104, 0},
      {-8.0 / 27, 2, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40}};
  static constexpr double b5[6] = {16.0 / 135,      0,         6656.0 / 12825,
                                   28561.0 / 56430, -9.0 / 50, 2.0 / 55};
  static constexpr double e[6] = {1.0 / 360,       0,        -128.0 / 4275,
                                  -2197.0 / 75240, 1.0 / 50, 2.0 / 55};
  (void)c;  // autonomous fields; nodes kept for reference

  Trajectory out;
  Sampler sampler{out, cfg.stride};
  Vec y = y0;
  Vec fy = f(y);
  sampler.record(0.0, y, fy);
  double t = 0.0;
  double h = std::min(cfg.step, cfg.t_end);
  double err_prev = 1.0;
  std::vector<Vec> k(6);
  while (t < cfg.t_end) {
    if (out.steps_taken + out.steps_rejected > cfg.max_steps) {
      throw DomainError("integrate: step budget exhausted");
    }
    const bool last = t + h >= cfg.t_end;
    if (last) h = cfg.t_end - t;
    k[0] = fy;
    for (int s = 1; s < 6; ++s) {
      Vec ys = y;
      for (int j = 0; j < s; ++j) ys += h * a[s][j] * k[j];
      k[s] = f(ys);
    }
    Vec y5 = y;
    Vec err = Vec::Zero(y.size());
    for (int s = 0; s < 6; ++s) {
      y5 += h * b5[s] * k[s];
      err += h * e[s] * k[s];
    }
    const double scale = cfg.tolerance * (1.0 + y.cwiseAbs().maxCoeff());
    const double err_norm =
        std::max(err.cwiseAbs().maxCoeff() / scale, 1e-10);
    if (!std::isfinite(err_norm)) {
      throw DomainError("integrate: non-finite error estimate");
    }
    if (err_norm <= 1.0) {
      t = last ? cfg.t_end : t + h;
      y = y5;
      if (cfg.project) y = apply_projection(projector, y, out);
      require_finite(y, t);
      fy = f(y);
      ++out.steps_taken;
      sampler.after_step(t, y, fy);
      double fac = 0.9 * std::pow(err_norm, -0.7 / 5.0) *
                   std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = err_norm;
      h *= fac;
    } else {
      ++out.steps_rejected;
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      if (h < cfg.min_step) {
        throw DomainError("integrate: step size underflow at t = " +
                          std::to_string(t));
      }
    }
  }
  sampler.finish(cfg.t_end, y, fy);
  return out;
}

}  // namespace

Vec Trajectory::state_at(double t) const {
  if (times.empty()) throw DomainError("Trajectory::state_at: empty");
  const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (t < times.front() - slack || t > times.back() + slack) {
    throw DomainError("Trajectory::state_at: time outside range");
  }
  if (times.size() == 1) return states.front();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  i = std::clamp<std::size_t>(i, 1, times.size() - 1) - 1;
  return hermite(times[i], states[i], rates[i], times[i + 1], states[i + 1],
                 rates[i + 1], t);
}

Vec rk4_step(const VectorField& field, const Vec& y, double h) {
  return rk4_with_k1(field, y, field(y), h);
}

Trajectory integrate(const VectorField& field, const Vec& y0,
                     const IntegratorConfig& config,
                     const Projector& projector) {
  validate(config);
  require_finite(y0, 0.0);
  if (config.project && !projector) {
    throw ParameterError("integrate: projection requested without projector");
  }
  return config.method == Method::rk4
             ? integrate_rk4(field, y0, config, projector)
             : integrate_rkf45(field, y0, config, projector);
}

Vec join(const Vec& a, const Vec& b) {
  Vec y(a.size() + b.size());
  y << a, b;
  return y;
}

Vec head_half(const Vec& y) {
  if (y.size() % 2 != 0) throw DimensionError("head_half: odd length");
  return y.head(y.size() / 2);
}

Vec tail_half(const Vec& y) {
  if (y.size() % 2 != 0) throw DimensionError("tail_half: odd length");
  return y.tail(y.size() / 2);
}

Vec project_cotangent(const Vec& y) {
  const Vec gamma = head_half(y).normalized();
  Vec p = tail_half(y);
  p -= gamma.dot(p) * gamma;
  return join(gamma, p);
}

Projector project_trailing_unit(Index n) {
  return [n](const Vec& y) {
    Vec z = y;
    z.tail(n).normalize();
    return z;
  };
}

Projector project_leading_unit(Index n) {
  return [n](const Vec& y) {
    Vec z = y;
    z.head(n).normalize();
    return z;
  };
}

Vec fd_gradient(const ScalarFunction& f, const Vec& x, double step) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + step;
    xm(i) = x(i) - step;
    g(i) = (f(xp) - f(xm)) / (2.0 * step);
    xp(i) = xm(i) = x(i);
  }
  return g;
}

Mat fd_jacobian(const VectorField& f, const Vec& x, double step) {
  Mat J;
  Vec xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + step;
    xm(i) = x(i) - step;
    const Vec col = (f(xp) - f(xm)) / (2.0 * step);
    if (i == 0) J.resize(col.size(), x.size());
    J.col(i) = col;
    xp(i) = xm(i) = x(i);
  }
  return J;
}

double fd_divergence(const VectorField& f, const Vec& x, double step) {
  double div = 0.0;
  Vec xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + step;
    xm(i) = x(i) - step;
    div += (f(xp)(i) - f(xm)(i)) / (2.0 * step);
    xp(i) = xm(i) = x(i);
  }
  return div;
}

LiouvilleReport liouville_check(const LiouvilleInputs& in,
                                const std::vector<Vec>& points) {
  if (!in.field || !in.density) {
    throw ParameterError("liouville_check: field and density are required");
  }
  LiouvilleReport report;
  report.points = points.size();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vec& x = points[k];
    const Vec X = in.field(x);
    const Vec grad = in.density_gradient ? in.density_gradient(x)
                                         : fd_gradient(in.density, x, 1e-5);
    const double div =
        in.divergence ? in.divergence(x) : fd_divergence(in.field, x, 1e-4);
    const double value = grad.dot(X) + in.density(x) * div;
    if (std::abs(value) > report.max_abs || k == 0) {
      report.max_abs = std::abs(value);
      report.worst_index = k;
    }
  }
  return report;
}

double polyline_distance(const Vec& x, const std::vector<Vec>& curve) {
  if (curve.empty()) throw DomainError("polyline_distance: empty curve");
  double best = (x - curve.front()).norm();
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Vec d = curve[i + 1] - curve[i];
    const double len2 = d.squaredNorm();
    double s = len2 > 0.0 ? (x - curve[i]).dot(d) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, (x - curve[i] - s * d).norm());
  }
  return best;
}

double arc_length(const std::vector<Vec>& curve) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    len += (curve[i + 1] - curve[i]).norm();
  }
  return len;
}

ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                      const CompareOptions& options) {
  const auto obs = [&](const Vec& y) {
    return options.observable ? options.observable(y) : y;
  };
  const std::vector<double>& clock =
      options.use_tau_of_a ? a.tau : a.times;
  if (clock.size() != a.states.size() || b.states.empty()) {
    throw DomainError("compare_trajectories: empty or inconsistent input");
  }
  ComparisonReport report;
  if (options.matching == Matching::time_map) {
    const double slack = 1e-12 * std::max(1.0, std::abs(b.times.back()));
    for (std::size_t i = 0; i < clock.size(); ++i) {
      const double t = clock[i];
      if (t < b.times.front() - slack || t > b.times.back() + slack) continue;
      const double tc = std::clamp(t, b.times.front(), b.times.back());
      const double d = (obs(a.states[i]) - obs(b.state_at(tc))).norm();
      if (d >= report.sup) {
        report.sup = d;
        report.at_time = t;
      }
      ++report.compared;
    }
  } else {
    std::vector<Vec> curve;
    curve.reserve(b.states.size());
    for (const Vec& y : b.states) curve.push_back(obs(y));
    // Only the part of A that B's arc length can cover is compared.
    const double span = arc_length(curve);
    double walked = 0.0;
    Vec prev = obs(a.states.front());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      const Vec x = obs(a.states[i]);
      walked += (x - prev).norm();
      prev = x;
      if (walked > span) break;
      const double d = polyline_distance(x, curve);
      if (d >= report.sup) {
        report.sup = d;
        report.at_time = clock[i];
      }
      ++report.compared;
    }
  }
  if (report.compared == 0) {
    throw DomainError("compare_trajectories: empty overlap");
  }
  return report;
}

std::vector<double> hermite_cumulative(const std::vector<double>& x,
                                       const std::vector<double>& f,
                                       const std::vector<double>& df) {
  if (x.size() != f.size() || x.size() != df.size()) {
    throw DimensionError("hermite_cumulative: length mismatch");
  }
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    out[i + 1] = out[i] + 0.5 * h * (f[i] + f[i + 1]) +
                 h * h / 12.0 * (df[i] - df[i + 1]);
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n || (!m_.empty() && m_.size() != n)) {
    throw DimensionError("MonotoneCubic: need >= 2 matching samples");
  }
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    if (!(h > 0.0)) throw DomainError("MonotoneCubic: x not increasing");
    delta[i] = (y_[i + 1] - y_[i]) / h;
  }
  if (m_.empty()) {
    m_.resize(n);
    m_.front() = delta.front();
    m_.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      m_[i] = delta[i - 1] * delta[i] <= 0.0
                  ? 0.0
                  : 2.0 / (1.0 / delta[i - 1] + 1.0 / delta[i]);
    }
  }
  // Fritsch-Carlson limiter.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double al = m_[i] / delta[i];
    const double be = m_[i + 1] / delta[i];
    if (al < 0.0) m_[i] = 0.0;
    if (be < 0.0) m_[i + 1] = 0.0;
    const double r2 = al * al + be * be;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m_[i] = tau * al * delta[i];
      m_[i + 1] = tau * be * delta[i];
    }
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  return std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * m_[i] +
         (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y_[i] + (-6 * s2 + 6 * s) * y_[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * m_[i] + (3 * s2 - 2 * s) * m_[i + 1];
}

Vec random_unit(Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  do {
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

void random_cotangent(Index n, Rng& rng, Vec& gamma, Vec& p, double p_scale) {
  std::normal_distribution<double> normal;
  gamma = random_unit(n, rng);
  p.resize(n);
  for (Index i = 0; i < n; ++i) p(i) = normal(rng);
  p -= gamma.dot(p) * gamma;
  if (p_scale > 0.0) p *= p_scale / p.norm();
}

ChaplyginParams random_admissible_params(Index n, Rng& rng, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> ua(lo, hi);
  Vec a(n);
  for (Index i = 0; i < n; ++i) a(i) = ua(rng);
  std::sort(a.data(), a.data() + n);
  const double top = a(n - 1) * a(n - 2);
  std::uniform_real_distribution<double> ud(1.05 * top, 3.0 * top);
  return ChaplyginParams(a, ud(rng));
}

SkewMatrix random_skew(Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec c(skew_dim(n));
  for (Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  return SkewMatrix::from_coefficients(n, c);
}

}  // namespace chaplygin
