#include "degmap/types.hpp"

#include <cmath>

#include "degmap/error.hpp"

namespace degmap {

namespace {

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (size_t i = 1; i < v.size(); ++i)
    require(v[i] > v[i - 1], ErrorKind::InvalidArgument,
            std::string(what) + " must be strictly increasing");
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    require(std::isfinite(x), ErrorKind::InvalidArgument,
            std::string(what) + " must be finite");
}

}  // namespace

SocGrid::SocGrid(std::vector<double> band_centers) : centers_(std::move(band_centers)) {
  require(!centers_.empty(), ErrorKind::InvalidArgument, "SoC grid needs at least one band");
  check_finite(centers_, "SoC band centers");
  check_strictly_increasing(centers_, "SoC band centers");
  for (double c : centers_)
    require(c > 0.0 && c < 1.0, ErrorKind::InvalidArgument,
            "SoC band centers must lie in (0,1)");
}

SocGrid SocGrid::uniform(int band_count) {
  require(band_count >= 1, ErrorKind::InvalidArgument,
          "band count must be a positive integer");
  std::vector<double> centers(band_count);
  for (int l = 1; l <= band_count; ++l)
    centers[l - 1] = static_cast<double>(2 * l - 1) / (2.0 * band_count);
  return SocGrid(std::move(centers));
}

SocGrid uniform_soc_grid(int band_count) { return SocGrid::uniform(band_count); }

CurrentGrid::CurrentGrid(std::vector<double> rates_a) : rates_(std::move(rates_a)) {
  require(!rates_.empty(), ErrorKind::InvalidArgument, "current grid needs at least one rate");
  check_finite(rates_, "current rates");
  check_strictly_increasing(rates_, "current rates");
  require(rates_.front() > 0.0, ErrorKind::InvalidArgument, "current rates must be > 0");
}

DegradationMap::DegradationMap(SocGrid soc_grid, CurrentGrid current_grid,
                               linalg::Matrix side_current_ah_per_h,
                               double cell_capacity_ah)
    : soc_(std::move(soc_grid)),
      rates_(std::move(current_grid)),
      values_(std::move(side_current_ah_per_h)),
      cell_capacity_ah_(cell_capacity_ah) {
  require(values_.rows() == soc_.band_count() && values_.cols() == rates_.rate_count(),
          ErrorKind::InvalidArgument, "side-current matrix dimensions must match grids");
  require(cell_capacity_ah_ > 0.0 && std::isfinite(cell_capacity_ah_),
          ErrorKind::InvalidArgument, "cell capacity must be > 0");
  for (double v : values_.data())
    require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidArgument,
            "side currents must be finite and >= 0");
}

NormalizedMap::NormalizedMap(std::vector<double> soe_axis,
                             std::vector<double> power_axis_per_h,
                             linalg::Matrix values_per_h)
    : soe_(std::move(soe_axis)), power_(std::move(power_axis_per_h)),
      values_(std::move(values_per_h)) {
  require(soe_.size() >= 1 && power_.size() >= 1, ErrorKind::InvalidArgument,
          "normalized map axes must be non-empty");
  check_finite(soe_, "SoE axis");
  check_finite(power_, "power axis");
  check_strictly_increasing(soe_, "SoE axis");
  check_strictly_increasing(power_, "power axis");
  for (double e : soe_)
    require(e >= 0.0 && e <= 1.0, ErrorKind::InvalidArgument,
            "normalized SoE axis must lie in [0,1]");
  require(values_.rows() == static_cast<int>(soe_.size()) &&
              values_.cols() == static_cast<int>(power_.size()),
          ErrorKind::InvalidArgument, "value matrix dimensions must match axes");
  for (double v : values_.data())
    require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidArgument,
            "normalized map values must be finite and >= 0");
}

bool operator==(const Plane& lhs, const Plane& rhs) {
  return lhs.a1 == rhs.a1 && lhs.a2 == rhs.a2 && lhs.a3 == rhs.a3;
}

PwaMap::PwaMap(std::vector<Plane> planes) : planes_(std::move(planes)) {
  require(!planes_.empty(), ErrorKind::InvalidArgument, "PWA map needs at least one plane");
  for (const Plane& p : planes_)
    require(std::isfinite(p.a1) && std::isfinite(p.a2) && std::isfinite(p.a3),
            ErrorKind::InvalidArgument, "plane coefficients must be finite");
}

namespace {

bool planes_match(const Plane& a, const Plane& b, double tol) {
  return std::abs(a.a1 - b.a1) <= tol && std::abs(a.a2 - b.a2) <= tol &&
         std::abs(a.a3 - b.a3) <= tol;
}

}  // namespace

PwaMap PwaMap::deduplicated(double tol) const {
  std::vector<Plane> kept;
  kept.reserve(planes_.size());
  for (const Plane& p : planes_) {
    bool dup = false;
    for (const Plane& q : kept)
      if (planes_match(p, q, tol)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(p);
  }
  return PwaMap(std::move(kept));
}

int PwaMap::duplicate_count(double tol) const {
  return plane_count() - deduplicated(tol).plane_count();
}

void BatteryConfig::validate() const {
  require(n_parallel >= 1, ErrorKind::InvalidArgument, "n_parallel must be >= 1");
  require(n_series >= 1, ErrorKind::InvalidArgument, "n_series must be >= 1");
  require(mean_ocv_v > 0.0 && std::isfinite(mean_ocv_v), ErrorKind::InvalidArgument,
          "mean_ocv_v must be > 0");
  require(cell_capacity_ah > 0.0 && std::isfinite(cell_capacity_ah),
          ErrorKind::InvalidArgument, "cell_capacity_ah must be > 0");
}

double energy_capacity_kwh(const BatteryConfig& config) {
  config.validate();
  return config.n_parallel * config.cell_capacity_ah * config.n_series *
         config.mean_ocv_v * 1e-3;
}

}  // namespace degmap
