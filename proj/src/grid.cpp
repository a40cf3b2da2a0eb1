#include "nimbus/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>

#include "nimbus/errors.hpp"
#include "nimbus/physics.hpp"
#include "nimbus/rng.hpp"

namespace nimbus::grid {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::int64_t kEpoch2024 = 1704067200;  // 2024-01-01T00:00:00Z
}  // namespace

int GridSpec::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int GridSpec::channel_of(std::string_view name, int level_idx) const {
  const int v = variable_index(name);
  if (v < 0) {
    throw LayoutError("grid: variable '" + std::string(name) + "' not in spec");
  }
  if (level_idx < 0 || level_idx >= n_levels()) {
    throw LayoutError("grid: level index out of range for variable '" +
                      std::string(name) + "'");
  }
  return v * n_levels() + level_idx;
}

void GridSpec::validate() const {
  if (n_lat < 1 || n_lon < 1) throw ValidationError("grid: empty grid");
  if (static_cast<int>(latitudes.size()) != n_lat ||
      static_cast<int>(longitudes.size()) != n_lon) {
    throw ValidationError("grid: coordinate list sizes disagree with n_lat/n_lon");
  }
  for (double lat : latitudes) {
    if (lat < -90.0 || lat > 90.0 || !std::isfinite(lat)) {
      throw ValidationError("grid: latitude outside [-90, 90]");
    }
  }
  const bool desc = latitudes.front() > latitudes.back();
  for (int i = 1; i < n_lat; ++i) {
    const bool ok = desc ? latitudes[i] < latitudes[i - 1]
                         : latitudes[i] > latitudes[i - 1];
    if (n_lat > 1 && !ok) throw ValidationError("grid: latitudes not strictly monotone");
  }
  if (levels.empty()) throw ValidationError("grid: no pressure levels");
  for (double p : levels) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError("grid: non-positive level pressure");
  }
  if (variables.empty()) throw ValidationError("grid: no variables");
  std::set<std::string> uniq(variables.begin(), variables.end());
  if (uniq.size() != variables.size()) throw ValidationError("grid: duplicate variable names");
  if (step_hours < 1) throw ValidationError("grid: step_hours must be >= 1");
}

GridSpec desk_grid() {
  GridSpec s;
  s.n_lat = 32;
  s.n_lon = 64;
  s.latitudes.resize(32);
  for (int i = 0; i < 32; ++i) s.latitudes[i] = 90.0 - 180.0 * i / 31.0;
  s.longitudes.resize(64);
  for (int j = 0; j < 64; ++j) s.longitudes[j] = 360.0 * j / 64.0;
  s.levels = {850.0, 500.0};
  s.variables = canonical_variables();
  s.step_hours = 6;
  return s;
}

GridSpec full_grid() {
  GridSpec s;
  s.n_lat = 181;
  s.n_lon = 360;
  s.latitudes.resize(181);
  for (int i = 0; i < 181; ++i) s.latitudes[i] = 90.0 - i;
  s.longitudes.resize(360);
  for (int j = 0; j < 360; ++j) s.longitudes[j] = j;
  s.levels = {1000, 925, 850, 700, 600, 500, 400, 300, 250, 200, 150, 100, 50};
  s.variables = canonical_variables();
  s.step_hours = 6;
  return s;
}

double cos_deg(double degrees) {
  if (degrees == 90.0 || degrees == -90.0) return 0.0;
  return std::cos(degrees * kPi / 180.0);
}

std::vector<double> latitude_weights(const GridSpec& spec) {
  if (spec.n_lat < 1) throw ContractError("latitude_weights: empty grid");
  double total = 0.0;
  std::vector<double> w(spec.n_lat);
  for (int i = 0; i < spec.n_lat; ++i) {
    const double lat = spec.latitudes[i];
    if (lat < -90.0 || lat > 90.0) {
      throw ContractError("latitude_weights: latitude outside [-90, 90]");
    }
    w[i] = cos_deg(lat);
    total += w[i];
  }
  if (total <= 0.0) throw DomainError("latitude_weights: degenerate all-pole grid");
  const double scale = spec.n_lat / total;
  for (double& v : w) v *= scale;
  return w;
}

void StateTensor::validate_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("state: non-finite value");
  }
}

void StateTensor::validate_physical() const {
  validate_finite();
  const auto pts = spec->points_per_channel();
  for (const char* species : {"CIWC", "CLWC", "CRWC", "CSWC"}) {
    const int v = spec->variable_index(species);
    if (v < 0) continue;
    for (int k = 0; k < spec->n_levels(); ++k) {
      const double* ch = channel(v * spec->n_levels() + k);
      for (std::int64_t p = 0; p < pts; ++p) {
        if (ch[p] < 0.0) {
          throw ValidationError(std::string("state: negative ") + species);
        }
      }
    }
  }
}

void StateTensor::quantize_storage() {
  for (double& v : values) v = static_cast<double>(static_cast<float>(v));
}

StateTensor make_state(std::shared_ptr<const GridSpec> spec, std::int64_t time) {
  StateTensor st;
  st.values.assign(static_cast<std::size_t>(spec->values_per_state()), 0.0);
  st.spec = std::move(spec);
  st.time = time;
  return st;
}

void Dataset::validate() const {
  if (!spec) throw ValidationError("dataset: missing grid spec");
  spec->validate();
  for (std::size_t t = 0; t < states.size(); ++t) {
    if (states[t].values.size() != static_cast<std::size_t>(spec->values_per_state())) {
      throw ValidationError("dataset: state value count disagrees with spec");
    }
    if (t > 0) {
      const std::int64_t dt = states[t].time - states[t - 1].time;
      if (dt != static_cast<std::int64_t>(spec->step_hours) * 3600) {
        throw ValidationError("dataset: timestamps not spaced by step_hours");
      }
    }
  }
}

// --- AVSF ------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'A', 'V', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
  std::ofstream out;
  std::string path;
  explicit Writer(const std::string& p) : out(p, std::ios::binary), path(p) {
    if (!out) throw PersistenceError("avsf: cannot open '" + p + "' for writing");
  }
  void bytes(const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) throw PersistenceError("avsf: write failure on '" + path + "'");
  }
  void u16(std::uint16_t v) { bytes(&v, 2); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void i64(std::int64_t v) { bytes(&v, 8); }
  void f32(float v) { bytes(&v, 4); }
};

struct Reader {
  std::ifstream in;
  std::string path;
  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw PersistenceError("avsf: cannot open '" + p + "' for reading");
  }
  void bytes(void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n)) {
      throw CorruptionError("avsf: truncated file '" + path + "'");
    }
  }
  std::uint16_t u16() { std::uint16_t v; bytes(&v, 2); return v; }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
  std::int64_t i64() { std::int64_t v; bytes(&v, 8); return v; }
  float f32() { float v; bytes(&v, 4); return v; }
};

}  // namespace

void avsf_write(const Dataset& dataset, const std::string& path) {
  dataset.validate();
  const GridSpec& s = *dataset.spec;
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(s.n_lat));
  w.u32(static_cast<std::uint32_t>(s.n_lon));
  w.u32(static_cast<std::uint32_t>(s.n_levels()));
  w.u32(static_cast<std::uint32_t>(s.n_variables()));
  w.u32(static_cast<std::uint32_t>(dataset.states.size()));
  w.u32(static_cast<std::uint32_t>(s.step_hours));
  for (double p : s.levels) w.f32(static_cast<float>(p));
  for (double lat : s.latitudes) w.f32(static_cast<float>(lat));
  for (const std::string& name : s.variables) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError("avsf: variable name too long");
    }
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
  }
  for (const StateTensor& st : dataset.states) w.i64(st.time);
  std::vector<float> buf;
  for (const StateTensor& st : dataset.states) {
    buf.resize(st.values.size());
    for (std::size_t i = 0; i < st.values.size(); ++i) {
      buf[i] = static_cast<float>(st.values[i]);
    }
    w.bytes(buf.data(), buf.size() * sizeof(float));
  }
  w.out.flush();
  if (!w.out) throw PersistenceError("avsf: flush failure on '" + path + "'");
}

Dataset avsf_read(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("avsf: bad magic in '" + path + "'");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError("avsf: unsupported version " + std::to_string(version));
  }
  auto spec = std::make_shared<GridSpec>();
  spec->n_lat = static_cast<int>(r.u32());
  spec->n_lon = static_cast<int>(r.u32());
  const int n_lev = static_cast<int>(r.u32());
  const int n_var = static_cast<int>(r.u32());
  const std::uint32_t n_time = r.u32();
  spec->step_hours = static_cast<int>(r.u32());
  if (spec->n_lat < 1 || spec->n_lon < 1 || n_lev < 1 || n_var < 1 ||
      spec->n_lat > (1 << 20) || spec->n_lon > (1 << 20) || n_lev > (1 << 16) ||
      n_var > (1 << 16)) {
    throw CorruptionError("avsf: implausible header dimensions in '" + path + "'");
  }
  spec->levels.resize(n_lev);
  for (double& p : spec->levels) p = r.f32();
  spec->latitudes.resize(spec->n_lat);
  for (double& lat : spec->latitudes) lat = r.f32();
  // Longitudes are implicit: a uniform circle starting at 0 degrees.
  spec->longitudes.resize(spec->n_lon);
  for (int j = 0; j < spec->n_lon; ++j) spec->longitudes[j] = 360.0 * j / spec->n_lon;
  spec->variables.resize(n_var);
  for (std::string& name : spec->variables) {
    const std::uint16_t len = r.u16();
    name.resize(len);
    if (len > 0) r.bytes(name.data(), len);
  }
  spec->validate();

  std::vector<std::int64_t> times(n_time);
  for (auto& t : times) t = r.i64();

  Dataset dataset;
  dataset.spec = spec;
  dataset.states.reserve(n_time);
  const std::size_t per_state = static_cast<std::size_t>(spec->values_per_state());
  std::vector<float> buf(per_state);
  for (std::uint32_t t = 0; t < n_time; ++t) {
    r.bytes(buf.data(), per_state * sizeof(float));
    StateTensor st = make_state(spec, times[t]);
    for (std::size_t i = 0; i < per_state; ++i) {
      const double v = buf[i];
      if (!std::isfinite(v)) {
        throw ValidationError("avsf: non-finite payload value in '" + path + "'");
      }
      st.values[i] = v;
    }
    dataset.states.push_back(std::move(st));
  }
  // A trailing byte after the declared payload means the header lied too.
  char extra;
  r.in.read(&extra, 1);
  if (r.in.gcount() == 1) {
    throw CorruptionError("avsf: trailing bytes after payload in '" + path + "'");
  }
  dataset.validate();
  return dataset;
}

// --- Normalization -----------------------------------------------------------

NormStats compute_norm_stats(const Dataset& dataset) {
  if (dataset.states.empty()) throw ContractError("norm stats: empty dataset");
  const int C = dataset.spec->channels();
  const std::int64_t pts = dataset.spec->points_per_channel();
  NormStats stats;
  stats.mean.assign(C, 0.0);
  stats.std.assign(C, 0.0);
  const double n = static_cast<double>(pts) * dataset.states.size();
  for (int c = 0; c < C; ++c) {
    double acc = 0.0;
    for (const StateTensor& st : dataset.states) {
      const double* ch = st.channel(c);
      for (std::int64_t p = 0; p < pts; ++p) acc += ch[p];
    }
    stats.mean[c] = acc / n;
  }
  for (int c = 0; c < C; ++c) {
    double acc = 0.0;
    for (const StateTensor& st : dataset.states) {
      const double* ch = st.channel(c);
      for (std::int64_t p = 0; p < pts; ++p) {
        const double d = ch[p] - stats.mean[c];
        acc += d * d;
      }
    }
    double sd = std::sqrt(acc / n);
    if (sd == 0.0) {
      sd = 1.0;
      stats.constant_channels.push_back(c);
    }
    stats.std[c] = sd;
  }
  return stats;
}

namespace {

StateTensor apply_affine(const StateTensor& state, const NormStats& stats,
                         bool forward) {
  const int C = state.spec->channels();
  if (static_cast<int>(stats.mean.size()) != C ||
      static_cast<int>(stats.std.size()) != C) {
    throw ShapeError("normalize: stats channel count mismatch");
  }
  StateTensor out = state;
  const std::int64_t pts = state.spec->points_per_channel();
  for (int c = 0; c < C; ++c) {
    double* ch = out.channel(c);
    const double m = stats.mean[c];
    const double s = stats.std[c];
    if (forward) {
      const double inv = 1.0 / s;
      for (std::int64_t p = 0; p < pts; ++p) ch[p] = (ch[p] - m) * inv;
    } else {
      for (std::int64_t p = 0; p < pts; ++p) ch[p] = ch[p] * s + m;
    }
  }
  return out;
}

}  // namespace

StateTensor normalize(const StateTensor& state, const NormStats& stats) {
  return apply_affine(state, stats, true);
}

StateTensor denormalize(const StateTensor& state, const NormStats& stats) {
  return apply_affine(state, stats, false);
}

// --- Synthetic scenario ------------------------------------------------------

namespace {

struct Wave {
  double amplitude;
  int zonal;        // integer wavenumber keeps the field periodic in longitude
  double merid;     // meridional wavenumber
  double phase;     // radians
  double omega;     // radians per hour
};

Wave draw_wave(Rng& rng, double amplitude, int zonal_max) {
  Wave w;
  w.amplitude = amplitude * rng.uniform(0.8, 1.2);
  w.zonal = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(zonal_max)));
  w.merid = rng.uniform(0.5, 2.5);
  w.phase = rng.uniform(0.0, 2.0 * kPi);
  w.omega = 2.0 * kPi / rng.uniform(48.0, 144.0);  // 2-6 day periods
  return w;
}

inline double wave_value(const Wave& w, double lon_deg, double lat_deg,
                         double t_hours) {
  const double theta = 2.0 * kPi * (w.zonal * lon_deg / 360.0 +
                                    w.merid * lat_deg / 180.0) +
                       w.phase - w.omega * t_hours;
  return w.amplitude * std::sin(theta);
}

// Species-specific temperature response window, Celsius.
struct SpeciesShape {
  double t_mean;
  double t_width;
  double scale;  // kg/kg at full response
};

constexpr SpeciesShape kSpecies[kNumSpecies] = {
    {-24.0, 11.0, 1.2e-4},  // CIWC
    {-5.0, 9.0, 2.0e-4},    // CLWC
    {5.0, 8.0, 8.0e-5},     // CRWC
    {-13.0, 9.0, 1.0e-4},   // CSWC
};
constexpr double kRhCloudThreshold = 0.79;

}  // namespace

Dataset synth_generate(const GridSpec& spec, std::uint64_t seed, int n_steps) {
  spec.validate();
  if (n_steps < 2) throw ContractError("synth_generate: n_steps must be >= 2");
  for (const char* required : {"Z", "T", "Q", "U", "V", "CIWC", "CLWC", "CRWC", "CSWC"}) {
    if (!spec.has_variable(required)) {
      throw LayoutError(std::string("synth_generate: spec lacks variable ") + required);
    }
  }

  Rng rng(Rng::mix(seed, 0x5a17'd0d0));
  const int n_lev = spec.n_levels();

  // Wave banks, drawn per level so vertical structure is not trivially shared.
  std::vector<std::vector<Wave>> t_waves(n_lev), z_waves(n_lev), u_waves(n_lev),
      v_waves(n_lev), rh_waves(n_lev);
  for (int k = 0; k < n_lev; ++k) {
    t_waves[k] = {draw_wave(rng, 4.0, 3), draw_wave(rng, 2.5, 4), draw_wave(rng, 1.5, 4)};
    z_waves[k] = {draw_wave(rng, 520.0, 3), draw_wave(rng, 300.0, 4)};
    u_waves[k] = {draw_wave(rng, 4.0, 3), draw_wave(rng, 3.0, 4)};
    v_waves[k] = {draw_wave(rng, 5.0, 3), draw_wave(rng, 3.5, 4)};
    // Humidity rides the leading temperature wave (offset phase), plus an
    // independent mode, so cloud placement tracks the advecting background.
    Wave rh1 = t_waves[k][0];
    rh1.amplitude = 0.25;
    rh1.phase += rng.uniform(0.6, 1.2);
    Wave rh2 = draw_wave(rng, 0.18, 4);
    rh2.amplitude = 0.18;
    rh_waves[k] = {rh1, rh2};
  }

  auto spec_ptr = std::make_shared<GridSpec>(spec);
  Dataset out;
  out.spec = spec_ptr;
  out.states.reserve(static_cast<std::size_t>(n_steps));

  const int iz = spec.variable_index("Z"), it = spec.variable_index("T"),
            iq = spec.variable_index("Q"), iu = spec.variable_index("U"),
            iv = spec.variable_index("V");
  const int species_idx[kNumSpecies] = {
      spec.variable_index("CIWC"), spec.variable_index("CLWC"),
      spec.variable_index("CRWC"), spec.variable_index("CSWC")};

  for (int t = 0; t < n_steps; ++t) {
    const double hours = static_cast<double>(t) * spec.step_hours;
    StateTensor st = make_state(spec_ptr, kEpoch2024 + static_cast<std::int64_t>(t) *
                                             spec.step_hours * 3600);
    for (int k = 0; k < n_lev; ++k) {
      const double p = spec.levels[k];
      const double prel = p / 1000.0;
      const double t_base = 218.0 + 72.0 * std::pow(prel, 0.8);
      const double z_base = 9.80665 * 7400.0 * std::log(1000.0 / p);
      for (int i = 0; i < spec.n_lat; ++i) {
        const double lat = spec.latitudes[i];
        const double slat = std::sin(lat * kPi / 180.0);
        const double polar_cool = 24.0 * std::sqrt(prel) * slat * slat;
        const double jet = std::sin(2.0 * lat * kPi / 180.0);
        for (int j = 0; j < spec.n_lon; ++j) {
          const double lon = spec.longitudes[j];
          double T = t_base - polar_cool;
          for (const Wave& w : t_waves[k]) T += wave_value(w, lon, lat, hours);
          double rh = 0.55;
          for (const Wave& w : rh_waves[k]) rh += wave_value(w, lon, lat, hours);
          rh = std::clamp(rh, 0.05, 1.0);
          const double t_c = T - 273.15;
          const double q_sat = physics::kEpsilonRatio *
                               physics::saturation_vapor_pressure(t_c) / p;
          const double Q = rh * q_sat;
          double Z = z_base - 900.0 * std::pow(prel, 0.3) * slat * slat;
          for (const Wave& w : z_waves[k]) Z += wave_value(w, lon, lat, hours);
          double U = -2.0 + 20.0 * jet * jet;
          for (const Wave& w : u_waves[k]) U += wave_value(w, lon, lat, hours);
          double V = 0.0;
          for (const Wave& w : v_waves[k]) V += wave_value(w, lon, lat, hours);

          const std::int64_t off = static_cast<std::int64_t>(i) * spec.n_lon + j;
          st.channel(iz * n_lev + k)[off] = Z;
          st.channel(it * n_lev + k)[off] = T;
          st.channel(iq * n_lev + k)[off] = Q;
          st.channel(iu * n_lev + k)[off] = U;
          st.channel(iv * n_lev + k)[off] = V;
          for (int s = 0; s < kNumSpecies; ++s) {
            const SpeciesShape& sh = kSpecies[s];
            const double r = (t_c - sh.t_mean) / sh.t_width;
            const double window = std::exp(-r * r);
            const double raw = (rh - kRhCloudThreshold) * window;
            st.channel(species_idx[s] * n_lev + k)[off] =
                raw > 0.0 ? sh.scale * raw : 0.0;
          }
        }
      }
    }
    st.quantize_storage();
    out.states.push_back(std::move(st));
  }
  out.validate();
  return out;
}

}  // namespace nimbus::grid
