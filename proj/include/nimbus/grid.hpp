#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nimbus::grid {

// Canonical variable ordering: the four hydrometeor species first, then the
// background state. Channel index = variable * n_levels + level.
inline const std::vector<std::string>& canonical_variables() {
  static const std::vector<std::string> v = {"CIWC", "CLWC", "CRWC", "CSWC",
                                             "Z",    "T",    "Q",    "U",
                                             "V"};
  return v;
}
constexpr int kNumSpecies = 4;  // CIWC, CLWC, CRWC, CSWC

struct GridSpec {
  int n_lat = 0;
  int n_lon = 0;
  std::vector<double> latitudes;   // degrees, strictly monotone (90 -> -90)
  std::vector<double> longitudes;  // degrees
  std::vector<double> levels;      // hPa
  std::vector<std::string> variables;
  int step_hours = 6;

  int n_levels() const { return static_cast<int>(levels.size()); }
  int n_variables() const { return static_cast<int>(variables.size()); }
  int channels() const { return n_variables() * n_levels(); }
  std::int64_t points_per_channel() const {
    return static_cast<std::int64_t>(n_lat) * n_lon;
  }
  std::int64_t values_per_state() const {
    return static_cast<std::int64_t>(channels()) * points_per_channel();
  }

  // Index of a variable in `variables`, or -1.
  int variable_index(std::string_view name) const;
  // Channel of (variable, level); throws LayoutError if the variable is absent.
  int channel_of(std::string_view name, int level_idx) const;
  bool has_variable(std::string_view name) const { return variable_index(name) >= 0; }

  void validate() const;  // throws ValidationError on broken invariants
  bool operator==(const GridSpec&) const = default;
};

// Desk-scale reference grid: 32x64, levels {850, 500} hPa, 9 variables (C=18).
GridSpec desk_grid();
// Paper-scale grid: 181x360, the 13 standard levels, 9 variables (C=117).
GridSpec full_grid();

// cos(degrees) with exact zeros at +/-90 so polar rows get weight 0.
double cos_deg(double degrees);

// Latitude weights a_i = n_lat * cos(phi_i) / sum(cos(phi_i')).
// Throws DomainError when every row sits on a pole.
std::vector<double> latitude_weights(const GridSpec& spec);

struct StateTensor {
  std::shared_ptr<const GridSpec> spec;
  std::vector<double> values;  // [C, n_lat, n_lon], row-major
  std::int64_t time = 0;       // epoch seconds

  double* channel(int c) { return values.data() + c * spec->points_per_channel(); }
  const double* channel(int c) const {
    return values.data() + c * spec->points_per_channel();
  }
  // Checks finiteness and non-negative hydrometeor species. Call on states in
  // physical units only; normalized states legitimately go negative.
  void validate_physical() const;
  void validate_finite() const;
  // Rounds every value through f32, the storage precision of the AVSF format.
  void quantize_storage();
};

StateTensor make_state(std::shared_ptr<const GridSpec> spec, std::int64_t time);

struct Dataset {
  std::shared_ptr<const GridSpec> spec;
  std::vector<StateTensor> states;  // time-ordered, spacing = step_hours

  std::size_t size() const { return states.size(); }
  void validate() const;
};

// --- AVSF container ------------------------------------------------------
void avsf_write(const Dataset& dataset, const std::string& path);
Dataset avsf_read(const std::string& path);

// --- Normalization -------------------------------------------------------
struct NormStats {
  std::vector<double> mean;  // per channel
  std::vector<double> std;   // per channel, > 0
  // Channels whose variance vanished and whose std was coerced to 1.
  std::vector<int> constant_channels;
};

// Per-channel z-score statistics over every state and grid point.
NormStats compute_norm_stats(const Dataset& dataset);
StateTensor normalize(const StateTensor& state, const NormStats& stats);
StateTensor denormalize(const StateTensor& state, const NormStats& stats);

// --- Synthetic data ------------------------------------------------------
// Deterministic advecting-wave scenario standing in for reanalysis data.
// Background fields are smooth traveling waves; hydrometeor species are
// thresholded nonlinear functions of temperature and relative humidity, so
// cloud placement is predictable from the background state.
Dataset synth_generate(const GridSpec& spec, std::uint64_t seed, int n_steps);

}  // namespace nimbus::grid
