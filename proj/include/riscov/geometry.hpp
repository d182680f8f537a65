#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/rng.hpp"
#include "riscov/samplers.hpp"

namespace riscov {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// One spatial realization of the cell: base station at the origin,
/// surfaces and users inside the disk, and per-surface line-of-sight marks
/// relative to the tagged user.
struct Deployment {
  double cell_radius = 0.0;
  Point2D bs{};  // origin by construction
  std::vector<Point2D> ris_points;
  std::vector<Point2D> user_points;
  std::vector<bool> los_marks;  // parallel to ris_points
};

/// Thomas-process parameters: parent PPP intensity, Poisson offspring count
/// per parent, isotropic Gaussian scatter.
struct PcpParams {
  double parent_density = 0.0;   // per m^2
  double mean_per_cluster = 0.0;
  double scatter_std = 0.0;      // meters
};

inline Point2D sample_uniform_disk(double radius, RngStream& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {r * std::cos(a), r * std::sin(a)};
}

/// Homogeneous PPP on the disk: Poisson(density * pi * R^2) points, i.i.d.
/// uniform positions.
inline std::vector<Point2D> sample_ppp_disk(double density, double radius, RngStream& rng) {
  if (density < 0.0 || !(radius > 0.0))
    throw InvalidInput("sample_ppp_disk: density >= 0 and radius > 0 required");
  const double mean = density * std::numbers::pi * radius * radius;
  const auto count = sample_poisson(mean, rng);
  std::vector<Point2D> pts;
  pts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) pts.push_back(sample_uniform_disk(radius, rng));
  return pts;
}

/// Fixed-count variant used to pin the surface count to a quoted N.
inline std::vector<Point2D> sample_fixed_disk(std::size_t count, double radius, RngStream& rng) {
  std::vector<Point2D> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(sample_uniform_disk(radius, rng));
  return pts;
}

/// Thomas cluster process on the disk. Offspring falling outside the disk
/// are re-scattered around their parent so the realized count is preserved.
inline std::vector<Point2D> sample_pcp_disk(const PcpParams& params, double radius,
                                            RngStream& rng) {
  if (!(params.parent_density > 0.0) || !(params.mean_per_cluster > 0.0) ||
      params.scatter_std < 0.0)
    throw InvalidInput("sample_pcp_disk: parameters must be positive");
  const auto parents = sample_ppp_disk(params.parent_density, radius, rng);
  std::vector<Point2D> pts;
  for (const Point2D& parent : parents) {
    const auto kids = sample_poisson(params.mean_per_cluster, rng);
    for (std::uint64_t k = 0; k < kids; ++k) {
      Point2D p;
      int guard = 0;
      do {
        p = {parent.x + params.scatter_std * rng.gaussian(),
             parent.y + params.scatter_std * rng.gaussian()};
        // A parent near the rim with wide scatter may need several tries.
        if (++guard > 1000) { p = parent; break; }
      } while (std::hypot(p.x, p.y) > radius);
      pts.push_back(p);
    }
  }
  return pts;
}

/// 3GPP UMi line-of-sight probability as a function of 2-D ground distance,
/// with the antenna-height correction term. Valid for h_ut <= 23 m.
inline double los_probability(double d2d, double h_ut) {
  if (d2d < 0.0) throw InvalidInput("los_probability: distance must be non-negative");
  if (h_ut > 23.0) throw InvalidInput("los_probability: h_ut above 23 m is outside the model");
  if (d2d <= 18.0) return 1.0;
  double cbar = 0.0;
  if (h_ut > 13.0) cbar = std::pow((h_ut - 13.0) / 10.0, 1.5);
  const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
  const double lift =
      1.0 + cbar * 1.25 * std::pow(d2d / 100.0, 3.0) * std::exp(-d2d / 150.0);
  const double p = base * lift;
  return std::min(1.0, std::max(0.0, p));
}

/// Independent thinning with an arbitrary retention probability function.
template <typename ProbFn>
std::vector<bool> thin_by(const std::vector<Point2D>& points, const ProbFn& prob,
                          RngStream& rng) {
  std::vector<bool> marks(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    marks[i] = rng.uniform() < prob(points[i]);
  return marks;
}

/// Location-dependent LoS thinning observed from `observer`: point i is
/// retained with probability los_probability(|p_i - observer|). The
/// retained set is an inhomogeneous PPP of density lambda * Pr_LoS(r).
inline std::vector<bool> thin_los(const std::vector<Point2D>& points,
                                  const Point2D& observer, double h_ut, RngStream& rng) {
  return thin_by(
      points, [&](const Point2D& p) { return los_probability(distance(p, observer), h_ut); },
      rng);
}

}  // namespace riscov
