#include "chaplygin/reconstruction.hpp"

namespace chaplygin {

namespace {

Vec spatial_vertical(const RotationMatrix& g, const SkewMatrix& omega) {
  const Index n = g.dim();
  return adjoint(g, omega) * Vec(Vec::Unit(n, n - 1));
}

}  // namespace

Vec contact_velocity(const RotationMatrix& g, const SkewMatrix& omega,
                     double rho) {
  require_same_dim(g.dim(), omega.dim(), "contact_velocity");
  const Vec v = spatial_vertical(g, omega);
  return rho * v.head(v.size() - 1);
}

double vertical_velocity(const RotationMatrix& g, const SkewMatrix& omega) {
  require_same_dim(g.dim(), omega.dim(), "vertical_velocity");
  const Vec v = spatial_vertical(g, omega);
  return v(v.size() - 1);
}

std::vector<FullPose> reconstruct(const std::vector<double>& times,
                                  const std::vector<SkewMatrix>& omegas,
                                  const RotationMatrix& g0, const Vec& r0,
                                  const ReconstructOptions& options) {
  if (times.size() != omegas.size()) {
    throw DimensionError("reconstruct: times and omegas differ in length");
  }
  require_same_dim(r0.size(), g0.dim() - 1, "reconstruct");
  std::vector<FullPose> out;
  if (times.empty()) return out;
  out.reserve(times.size());
  out.push_back({g0, r0});
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    const FullPose& cur = out.back();
    const SkewMatrix mid = 0.5 * (omegas[k] + omegas[k + 1]);
    RotationMatrix g = cur.g * exp_map(h * mid);
    if (options.project) g = RotationMatrix::nearest(g.matrix());
    const Vec r = cur.r + 0.5 * h *
                              (contact_velocity(cur.g, omegas[k], options.rho) +
                               contact_velocity(g, omegas[k + 1], options.rho));
    out.push_back({std::move(g), r});
  }
  return out;
}

}  // namespace chaplygin
