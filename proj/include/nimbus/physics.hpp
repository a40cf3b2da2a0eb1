#pragma once

#include <cstdint>
#include <vector>

#include "nimbus/grid.hpp"

namespace nimbus::physics {

// Ratio of the gas constants of dry air and water vapor.
constexpr double kEpsilonRatio = 0.622;
// Pole of the August-Roche-Magnus formula, Celsius.
constexpr double kMagnusPole = -243.04;
// Hydrometeor presence threshold in physical units (kg/kg). Two orders of
// magnitude below the error scale of the species fields, so it separates
// numeric noise from physical cloud.
constexpr double kCloudThreshold = 1e-8;

// Saturation vapor pressure over water, hPa, August-Roche-Magnus form.
// Throws DomainError at or below the formula pole (-243.04 C).
double saturation_vapor_pressure(double t_celsius);

// Temperature response factor: zero at 0 C and -14 C, peaking at 1 for -7 C.
// Intentionally unclamped; negative values are meaningful inputs downstream.
double temperature_factor(double t_celsius);

// Humidity response factor from specific humidity Q (kg/kg), temperature (K)
// and pressure (hPa): 2 * (p*Q / (eps * e_s) - 0.5).
double humidity_factor(double q, double t_kelvin, double p_hpa);

// Per-level icing-condition index field, the pointwise product of the two
// factors above.
struct ICField {
  int n_levels = 0;
  int n_lat = 0;
  int n_lon = 0;
  std::vector<double> values;  // [n_levels, n_lat, n_lon]

  double* level(int k) {
    return values.data() + static_cast<std::int64_t>(k) * n_lat * n_lon;
  }
  const double* level(int k) const {
    return values.data() + static_cast<std::int64_t>(k) * n_lat * n_lon;
  }
};

// Requires T and Q channels at every level; state must be in physical units.
ICField ic_index(const grid::StateTensor& state);

// Per-species, per-level presence bits from thresholding the four
// hydrometeor fields. Channel order: species-major, then level.
struct CloudMask {
  int n_channels = 0;  // 4 * n_levels
  int n_lat = 0;
  int n_lon = 0;
  std::vector<std::uint8_t> bits;  // [n_channels, n_lat, n_lon]
};

CloudMask diagnostic_cloud_mask(const grid::StateTensor& state,
                                double threshold = kCloudThreshold);

// Hybrid guidance input: 4*n_lev binary mask channels followed by n_lev raw
// IC channels ((4+1)*n_lev total; 65 at paper scale). State must be in
// physical units.
std::vector<double> hybrid_mask_input(const grid::StateTensor& state,
                                      double threshold = kCloudThreshold);

inline int hybrid_channels(int n_levels) { return 5 * n_levels; }

}  // namespace nimbus::physics
