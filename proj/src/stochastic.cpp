#include "modspec/stochastic.hpp"

#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

namespace modspec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double fastest_rate(const HamiltonianFourierSeries& series,
                    const NoiseModel& noise) {
  double rate = noise.damping.maxCoeff();
  const Matrix h0 = series.term(0);
  for (int j = 0; j < series.dim(); ++j)
    rate = std::max(rate, std::abs(h0(j, j)));
  return rate;
}

// Midpoint-sampled one-step propagators over a single drive period (one
// matrix for the unmodulated case).
std::vector<Matrix> period_propagators(const HamiltonianFourierSeries& series,
                                       const NoiseModel& noise, double& dt) {
  if (!series.modulated()) {
    return {(drift_at_time(series, 0.0, noise) * dt).exp().eval()};
  }
  const double period = 2.0 * M_PI / series.drive_frequency();
  const int per = std::max(1, static_cast<int>(std::lround(period / dt)));
  dt = period / per;
  std::vector<Matrix> props(per);
  for (int j = 0; j < per; ++j)
    props[j] = drift_at_time(series, (j + 0.5) * dt, noise) * dt;
  for (auto& p : props) p = p.exp().eval();
  return props;
}

}  // namespace

Trajectory integrate(const HamiltonianFourierSeries& series,
                     const NoiseModel& noise, const SdeConfig& config,
                     double duration) {
  double dt = config.dt;
  if (dt <= 0.0) throw ValidationError("dt must be > 0");
  if (dt * fastest_rate(series, noise) >= 0.1)
    throw ValidationError("dt too coarse for the fastest system rate");

  std::vector<Matrix> props = period_propagators(series, noise, dt);

  const int d = series.dim();
  const int n = series.n_modes();
  const RealVector n_sc = noise.semiclassical();
  RealVector amp(n);
  for (int i = 0; i < n; ++i) amp[i] = std::sqrt(0.5 * n_sc[2 * i] * dt);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::size_t burn_steps =
      static_cast<std::size_t>(std::ceil(config.burn_in / dt));
  const std::size_t record_steps =
      static_cast<std::size_t>(std::ceil(duration / dt));

  const int row = 2 * config.mode;

  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(record_steps);

  Vector c = Vector::Zero(d);
  const std::size_t per = props.size();
  std::size_t phase = 0;
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t step = 0; step < burn_steps + record_steps; ++step) {
    c = props[phase] * c;
    for (int i = 0; i < n; ++i) {
      const Complex xi(amp[i] * gauss(rng), amp[i] * gauss(rng));
      c[2 * i] += xi;
      c[2 * i + 1] += std::conj(xi);
    }
    phase = (phase + 1) % per;
    if (step >= burn_steps) traj.samples.push_back(sqrt2 * c[row].real());
    if ((step & 0x3ff) == 0 && c.norm() > 1e12)
      throw NumericalError("trajectory diverged; reduce the step size", 0.0,
                           c.norm());
  }
  return traj;
}

namespace {

// Streams Hann-windowed, 50%-overlap periodograms to `sink`.
template <typename Sink>
void welch_segments(const std::vector<double>& samples, double dt,
                    int segment_length, Sink&& sink) {
  const int l = segment_length;
  if (static_cast<int>(samples.size()) < l)
    throw ValidationError("trajectory shorter than one Welch segment");
  std::vector<double> window(l);
  double u = 0.0;
  for (int i = 0; i < l; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / l));
    u += window[i] * window[i];
  }
  u /= l;

  Eigen::FFT<double> fft;
  std::vector<double> buf(l);
  std::vector<std::complex<double>> freq;
  std::vector<double> psd(l / 2 + 1);
  const double norm = dt / (l * u);
  for (std::size_t start = 0; start + l <= samples.size(); start += l / 2) {
    for (int i = 0; i < l; ++i) buf[i] = samples[start + i] * window[i];
    fft.fwd(freq, buf);
    for (int k = 0; k <= l / 2; ++k) psd[k] = norm * std::norm(freq[k]);
    sink(psd);
  }
}

struct PsdAccumulator {
  std::vector<double> mean, m2;
  int count = 0;

  void add(const std::vector<double>& psd) {
    if (mean.empty()) {
      mean.assign(psd.size(), 0.0);
      m2.assign(psd.size(), 0.0);
    }
    ++count;
    for (std::size_t k = 0; k < psd.size(); ++k) {
      const double delta = psd[k] - mean[k];
      mean[k] += delta / count;
      m2[k] += delta * (psd[k] - mean[k]);
    }
  }

  void merge(const PsdAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const int total = count + other.count;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double delta = other.mean[k] - mean[k];
      m2[k] += other.m2[k] +
               delta * delta * count * other.count / static_cast<double>(total);
      mean[k] += delta * other.count / static_cast<double>(total);
    }
    count = total;
  }

  PsdEstimate finish(double dt, int segment_length) const {
    PsdEstimate est;
    est.segments = count;
    est.omega.resize(mean.size());
    est.psd = mean;
    est.stderr_psd.resize(mean.size());
    for (std::size_t k = 0; k < mean.size(); ++k) {
      est.omega[k] = 2.0 * M_PI * k / (segment_length * dt);
      est.stderr_psd[k] =
          count > 1 ? std::sqrt(m2[k] / (count - 1.0) / count) : 0.0;
    }
    return est;
  }
};

}  // namespace

PsdEstimate estimate_psd(const std::vector<double>& samples, double dt,
                         int segment_length) {
  PsdAccumulator acc;
  welch_segments(samples, dt, segment_length,
                 [&](const std::vector<double>& p) { acc.add(p); });
  if (acc.count == 0) throw ValidationError("no complete Welch segments");
  return acc.finish(dt, segment_length);
}

PsdEstimate ensemble_psd(const HamiltonianFourierSeries& series,
                         const NoiseModel& noise, const SdeConfig& config) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int members =
      std::max(1, std::min<int>(config.segments, hw == 0 ? 4 : hw));
  const int per_member = (config.segments + members - 1) / members;

  std::vector<PsdAccumulator> acc(members);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  double dt_used = config.dt;
  for (int m = 0; m < members; ++m) {
    pool.emplace_back([&, m] {
      try {
        SdeConfig local = config;
        local.seed = splitmix64(config.seed + static_cast<std::uint64_t>(m));
        // (s+1) half-overlapping segments of length L need (s+1) L/2 samples
        const double duration =
            config.dt * config.segment_length * (per_member + 1) * 0.5;
        Trajectory traj = integrate(series, noise, local, duration);
        if (m == 0) dt_used = traj.dt;
        int taken = 0;
        welch_segments(traj.samples, traj.dt, config.segment_length,
                       [&](const std::vector<double>& p) {
                         if (taken++ < per_member) acc[m].add(p);
                       });
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  PsdAccumulator total;
  for (const auto& a : acc) total.merge(a);
  return total.finish(dt_used, config.segment_length);
}

SpectrumResult semiclassical_analytic(const HamiltonianFourierSeries& series,
                                      const NoiseModel& noise,
                                      const std::vector<double>& grid,
                                      int half_width) {
  NoiseModel sym = noise;
  sym.correlation = noise.semiclassical();
  SpectrumResult res = spectrum_shifted(series, sym, grid, half_width);
  res.method = "stochastic-analytic";
  return res;
}

}  // namespace modspec
