#include "chaplygin/integrability.hpp"

#include <cmath>
#include <limits>

namespace chaplygin {

void require_chart_params(const Vec& a) {
  for (Index i = 0; i + 1 < a.size(); ++i) {
    if (!(a(i + 1) - a(i) >= kChartGap)) {
      throw ParameterError(
          "spheroconical chart: requires a_1 < a_2 < ... < a_n with gaps >= "
          "1e-6");
    }
  }
}

namespace {

// Bisection for the increasing (sign = +1) or decreasing (sign = -1)
// function h on (0, gap); returns the root.
template <class F>
double bisect(const F& h, double gap, int sign) {
  double lo = 0.0, hi = gap;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sign * h(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// lambda_k - lambda_s from the offsets without cancellation: an a_i lying
// between the two roots gives a sum of same-sign terms.
double lambda_gap(const SpheroconicalPoint& sp, Index k, Index s) {
  if (k == s) return 0.0;
  if (s > k) return -lambda_gap(sp, s, k);
  // s < k: a_{s+1} lies between lambda_s and lambda_k.
  const Index i = s + 1;
  return sp.offsets(i, s) - sp.offsets(i, k);
}

// P(lambda_k) = prod_i (lambda_k - a_i).
double char_poly(const SpheroconicalPoint& sp, Index k) {
  double prod = 1.0;
  for (Index i = 0; i < sp.offsets.rows(); ++i) prod *= -sp.offsets(i, k);
  return prod;
}

double gap_product(const SpheroconicalPoint& sp, Index k) {
  double prod = 1.0;
  for (Index s = 0; s < sp.lambda.size(); ++s) {
    if (s != k) prod *= lambda_gap(sp, k, s);
  }
  return prod;
}

// e_m of lambda with the entries listed in `skip` removed.
Vec symmetric_without(const Vec& lambda, Index skip1, Index skip2 = -1) {
  Vec rest(lambda.size());
  Index c = 0;
  for (Index s = 0; s < lambda.size(); ++s) {
    if (s != skip1 && s != skip2) rest(c++) = lambda(s);
  }
  return elementary_symmetric(rest.head(c));
}

}  // namespace

Vec elementary_symmetric(const Vec& values) {
  Vec e = Vec::Zero(values.size() + 1);
  e(0) = 1.0;
  for (Index j = 0; j < values.size(); ++j) {
    for (Index m = j + 1; m >= 1; --m) e(m) += values(j) * e(m - 1);
  }
  return e;
}

SpheroconicalPoint spheroconical_from_cartesian(const TildePoint& pt,
                                                const Vec& a) {
  require_chart_params(a);
  const Index n = a.size();
  require_same_dim(n, pt.gamma.size(), "spheroconical_from_cartesian");
  require_same_dim(n, pt.p_tilde.size(), "spheroconical_from_cartesian");
  const Vec g2 = pt.gamma.normalized().cwiseAbs2();
  for (Index i = 0; i < n; ++i) {
    if (!(g2(i) > 0.0)) {
      throw DomainError("spheroconical chart: gamma on a coordinate hyperplane");
    }
  }
  SpheroconicalPoint sp;
  sp.lambda.resize(n - 1);
  sp.mu.resize(n - 1);
  sp.offsets.resize(n, n - 1);
  for (Index k = 0; k + 1 < n; ++k) {
    const double gap = a(k + 1) - a(k);
    const auto from_left = [&](double eps) {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) s += g2(i) / ((a(i) - a(k)) - eps);
      return s;
    };
    const double eps = bisect(from_left, gap, +1);
    if (eps <= 0.5 * gap) {
      sp.lambda(k) = a(k) + eps;
      for (Index i = 0; i < n; ++i) sp.offsets(i, k) = (a(i) - a(k)) - eps;
    } else {
      const auto from_right = [&](double del) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i) s += g2(i) / ((a(i) - a(k + 1)) + del);
        return s;
      };
      const double del = bisect(from_right, gap, -1);
      sp.lambda(k) = a(k + 1) - del;
      for (Index i = 0; i < n; ++i) sp.offsets(i, k) = (a(i) - a(k + 1)) + del;
    }
  }
  for (Index k = 0; k + 1 < n; ++k) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
      s += pt.p_tilde(i) * pt.gamma(i) / sp.offsets(i, k);
    }
    sp.mu(k) = -0.5 * s;
  }
  return sp;
}

namespace {

// Chart inverse from the offsets d(i, k) = a_i - lambda_k.
TildePoint cartesian_from_offsets(const Mat& d, const Vec& mu, const Vec& a,
                                  const Vec& signs) {
  const Index n = a.size();
  Vec gamma(n);
  for (Index i = 0; i < n; ++i) {
    double num = 1.0, den = 1.0;
    for (Index k = 0; k + 1 < n; ++k) num *= d(i, k);
    for (Index j = 0; j < n; ++j) {
      if (j != i) den *= a(i) - a(j);
    }
    gamma(i) = (signs(i) < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, num / den));
  }
  Vec p = Vec::Zero(n);
  for (Index k = 0; k + 1 < n; ++k) {
    Vec t(n);
    for (Index i = 0; i < n; ++i) t(i) = -0.5 * gamma(i) / d(i, k);
    p += mu(k) * t / t.squaredNorm();
  }
  return {gamma, p};
}

}  // namespace

TildePoint cartesian_from_spheroconical(const Vec& lambda, const Vec& mu,
                                        const Vec& a, const Vec& signs) {
  require_chart_params(a);
  const Index n = a.size();
  require_same_dim(lambda.size(), n - 1, "cartesian_from_spheroconical");
  require_same_dim(mu.size(), n - 1, "cartesian_from_spheroconical");
  require_same_dim(signs.size(), n, "cartesian_from_spheroconical");
  for (Index k = 0; k + 1 < n; ++k) {
    if (!(a(k) < lambda(k) && lambda(k) < a(k + 1))) {
      throw DomainError("spheroconical chart: lambda does not interlace a");
    }
  }
  Mat d(n, n - 1);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k + 1 < n; ++k) d(i, k) = a(i) - lambda(k);
  }
  return cartesian_from_offsets(d, mu, a, signs);
}

TildePoint cartesian_from_spheroconical(const SpheroconicalPoint& sp,
                                        const Vec& a, const Vec& signs) {
  require_chart_params(a);
  const Index n = a.size();
  require_same_dim(sp.offsets.rows(), n, "cartesian_from_spheroconical");
  require_same_dim(sp.offsets.cols(), n - 1, "cartesian_from_spheroconical");
  require_same_dim(sp.mu.size(), n - 1, "cartesian_from_spheroconical");
  require_same_dim(signs.size(), n, "cartesian_from_spheroconical");
  return cartesian_from_offsets(sp.offsets, sp.mu, a, signs);
}

ChartIdentityResiduals chart_identity_residuals(const TildePoint& pt,
                                                const Vec& a) {
  const SpheroconicalPoint sp = spheroconical_from_cartesian(pt, a);
  const Index m = sp.lambda.size();
  double pp = 0.0, apa = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double w = char_poly(sp, k) / gap_product(sp, k) * sp.mu(k) * sp.mu(k);
    pp += -4.0 * w;
    apa += -4.0 * w * sp.lambda(k);
  }
  const double q = sp.lambda.prod() / a.prod();
  ChartIdentityResiduals r;
  r.p_norm = std::abs(pp - pt.p_tilde.squaredNorm());
  r.q = std::abs(q - quadratic_q(pt.gamma, a));
  r.a_form = std::abs(apa - pt.p_tilde.dot(a.cwiseProduct(pt.p_tilde)));
  return r;
}

Vec staeckel_integrals(const TildePoint& pt, const Vec& a, double D) {
  const SpheroconicalPoint sp = spheroconical_from_cartesian(pt, a);
  const Index m = sp.lambda.size();
  Vec F = Vec::Zero(m);
  for (Index k = 0; k < m; ++k) {
    const double U = -2.0 * D * D * char_poly(sp, k) * sp.lambda(k) *
                     sp.mu(k) * sp.mu(k);
    const double W = U / gap_product(sp, k);
    const Vec e = symmetric_without(sp.lambda, k);
    for (Index j = 0; j < m; ++j) {
      F(j) += ((j % 2 == 0) ? 1.0 : -1.0) * e(j) * W;
    }
  }
  return F;
}

std::vector<PhaseGradient> staeckel_gradients(const TildePoint& pt,
                                              const Vec& a, double D) {
  const SpheroconicalPoint sp = spheroconical_from_cartesian(pt, a);
  const Index n = a.size();
  const Index m = n - 1;
  const Vec& lam = sp.lambda;
  const Vec& mu = sp.mu;
  const Vec& g = pt.gamma;
  const Vec& p = pt.p_tilde;

  // W_k = -2 D^2 G_k mu_k^2 with G_k = P(lambda_k) lambda_k / prod(gaps).
  Vec G(m), W(m);
  for (Index k = 0; k < m; ++k) {
    G(k) = char_poly(sp, k) * lam(k) / gap_product(sp, k);
    W(k) = -2.0 * D * D * G(k) * mu(k) * mu(k);
  }
  // dW_k / dlambda_j.
  Mat dW = Mat::Zero(m, m);
  for (Index k = 0; k < m; ++k) {
    double log_deriv = 1.0 / lam(k);
    for (Index i = 0; i < n; ++i) log_deriv -= 1.0 / sp.offsets(i, k);
    for (Index s = 0; s < m; ++s) {
      if (s == k) continue;
      const double gks = lambda_gap(sp, k, s);
      log_deriv -= 1.0 / gks;
      dW(k, s) = W(k) / gks;
    }
    dW(k, k) = W(k) * log_deriv;
  }
  // Chart derivatives.
  Mat dlam_dg(m, n), dmu_dg(m, n), dmu_dp(m, n);
  for (Index k = 0; k < m; ++k) {
    double S = 0.0, T = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double d = sp.offsets(j, k);
      S += g(j) * g(j) / (d * d);
      T += p(j) * g(j) / (d * d);
    }
    for (Index i = 0; i < n; ++i) {
      const double d = sp.offsets(i, k);
      dlam_dg(k, i) = -(2.0 * g(i) / d) / S;
      dmu_dg(k, i) = -0.5 * p(i) / d - 0.5 * T * dlam_dg(k, i);
      dmu_dp(k, i) = -0.5 * g(i) / d;
    }
  }

  std::vector<PhaseGradient> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Index f = 0; f < m; ++f) {
    const double sign = (f % 2 == 0) ? 1.0 : -1.0;
    Vec dF_dlam = Vec::Zero(m), dF_dmu = Vec::Zero(m);
    for (Index k = 0; k < m; ++k) {
      const double c = sign * symmetric_without(lam, k)(f);
      dF_dmu(k) = c * (-4.0 * D * D * G(k) * mu(k));
      for (Index j = 0; j < m; ++j) {
        dF_dlam(j) += c * dW(k, j);
        if (j != k && f >= 1) {
          dF_dlam(j) += sign * symmetric_without(lam, k, j)(f - 1) * W(k);
        }
      }
    }
    out.push_back({dlam_dg.transpose() * dF_dlam + dmu_dg.transpose() * dF_dmu,
                   dmu_dp.transpose() * dF_dmu});
  }
  return out;
}

Vec linear_integrals(const TildePoint& pt, const Vec& a,
                     const std::vector<IndexPair>& pairs) {
  Vec out(static_cast<Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i < 0 || j < 0 || i >= a.size() || j >= a.size() || i == j) {
      throw DimensionError("linear_integrals: invalid index pair");
    }
    if (std::abs(a(i) - a(j)) > 1e-12 * std::max(a(i), a(j))) {
      throw ParameterError("linear_integrals: pair requires a_i = a_j");
    }
    out(static_cast<Index>(k)) = linear_integral_unchecked(pt, i, j);
  }
  return out;
}

double linear_integral_unchecked(const TildePoint& pt, Index i, Index j) {
  return pt.gamma(i) * pt.p_tilde(j) - pt.gamma(j) * pt.p_tilde(i);
}

Vec lagrange_integrals_unchecked(const CotangentPoint& pt,
                                 const ChaplyginParams& params) {
  const Index n = params.dim();
  require_same_dim(n, pt.gamma.size(), "lagrange_integrals");
  const double q = quadratic_q(pt.gamma, params.a());
  Vec out(skew_dim(n - 1));
  Index c = 0;
  for (Index i = 0; i + 1 < n; ++i) {
    for (Index j = i + 1; j + 1 < n; ++j) {
      const double l = pt.gamma(i) * pt.p(j) - pt.gamma(j) * pt.p(i);
      out(c++) = l * l / q;
    }
  }
  return out;
}

Vec lagrange_integrals(const CotangentPoint& pt,
                       const ChaplyginParams& params) {
  const Vec& a = params.a();
  for (Index i = 1; i + 1 < a.size(); ++i) {
    if (std::abs(a(i) - a(0)) > 1e-12 * a(0)) {
      throw ParameterError(
          "lagrange_integrals: requires a_1 = ... = a_{n-1}");
    }
  }
  return lagrange_integrals_unchecked(pt, params);
}

std::vector<std::pair<std::string, double>> tilde_integrals(
    const TildePoint& pt, const ChaplyginParams& params) {
  const Vec& a = params.a();
  const double D = params.D();
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("H_star", hamiltonian_star(pt, params));
  out.emplace_back("H_veselova", veselova_hamiltonian(pt, a, D));
  out.emplace_back("K", momentum_K_tilde(pt, a, D));
  const Vec F = staeckel_integrals(pt, a, D);
  for (Index m = 0; m < F.size(); ++m) {
    out.emplace_back("F_" + std::to_string(m), F(m));
  }
  return out;
}

namespace {

std::vector<double> drifts(const Trajectory& traj,
                           const ChaplyginParams& params) {
  std::vector<double> initial, worst;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const CotangentPoint cp{head_half(traj.states[s]), tail_half(traj.states[s])};
    const auto values = tilde_integrals(to_tilde(cp, params), params);
    if (s == 0) {
      for (const auto& v : values) initial.push_back(v.second);
      worst.assign(values.size(), 0.0);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = std::abs(values[i].second - initial[i]) /
                       std::max(1.0, std::abs(initial[i]));
      worst[i] = std::max(worst[i], d);
    }
  }
  return worst;
}

}  // namespace

FoliationReport foliation_check(const CotangentPoint& seed,
                                const ChaplyginParams& params,
                                const IntegratorConfig& config) {
  require_on_manifold(seed);
  require_chart_params(params.a());
  const Vec y0 = join(seed.gamma, seed.p);
  FoliationReport report;
  report.chaplygin =
      integrate(cotangent_field(params), y0, config, project_cotangent);
  report.chaplygin.metadata.model = "chaplygin_cotangent";
  report.veselova =
      integrate(veselova_field(params.a()), y0, config, project_cotangent);
  report.veselova.metadata.model = "veselova_reduced";

  const auto names = tilde_integrals(to_tilde(seed, params), params);
  const auto dc = drifts(report.chaplygin, params);
  const auto dv = drifts(report.veselova, params);
  for (std::size_t i = 0; i < names.size(); ++i) {
    report.quantities.push_back({names[i].first, dc[i], dv[i]});
    report.worst = std::max({report.worst, dc[i], dv[i]});
  }
  return report;
}

}  // namespace chaplygin
