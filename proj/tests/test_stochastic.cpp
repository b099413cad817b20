#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "modspec/stochastic.hpp"
#include "support.hpp"

using namespace modspec;
using testing::HybridParams;
using testing::hybrid_model;
using testing::linspace;

TEST_CASE("integration basics") {
  Model m;
  m.modes = {{"mech", ModeKind::Mechanical, 1.0, 0.5, 3.0}};
  const auto s = build_fourier_series(m);
  const auto n = noise_matrix(m.modes);

  SUBCASE("step-size guard") {
    SdeConfig cfg;
    cfg.dt = 0.5;  // dt * wM = 0.5 >= 0.1
    CHECK_THROWS_AS(integrate(s, n, cfg, 10.0), ValidationError);
    cfg.dt = -1.0;
    CHECK_THROWS_AS(integrate(s, n, cfg, 10.0), ValidationError);
  }

  SUBCASE("seed determinism") {
    SdeConfig cfg;
    cfg.dt = 0.05;
    cfg.burn_in = 10.0;
    const auto a = integrate(s, n, cfg, 50.0);
    const auto b = integrate(s, n, cfg, 50.0);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i)
      CHECK(a.samples[i] == b.samples[i]);
    cfg.seed += 1;
    const auto c = integrate(s, n, cfg, 50.0);
    double diff = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i)
      diff = std::max(diff, std::abs(a.samples[i] - c.samples[i]));
    CHECK(diff > 0.0);
  }

  SUBCASE("stationary variance matches the OU closed form") {
    // x = sqrt(2) Re b; steady state <x^2> = nbar + 1/2 up to O(dt).
    SdeConfig cfg;
    cfg.dt = 0.05;
    cfg.burn_in = 50.0;
    const auto traj = integrate(s, n, cfg, 4000.0);
    double var = 0.0;
    for (double v : traj.samples) var += v * v;
    var /= traj.samples.size();
    CHECK(var == doctest::Approx(3.5).epsilon(0.2));
  }
}

TEST_CASE("welch estimator") {
  SUBCASE("pure sinusoid concentrates in one bin") {
    const double dt = 0.1;
    const int l = 1024;
    const double w0 = 2.0 * M_PI * 32 / (l * dt);  // exactly bin 32
    std::vector<double> y(4 * l);
    for (size_t i = 0; i < y.size(); ++i) y[i] = std::sin(w0 * dt * i);
    const auto est = estimate_psd(y, dt, l);
    size_t argmax = 0;
    for (size_t k = 0; k < est.psd.size(); ++k)
      if (est.psd[k] > est.psd[argmax]) argmax = k;
    CHECK(argmax == 32);
    CHECK(est.omega[32] == doctest::Approx(w0).epsilon(1e-12));
    CHECK(est.psd[100] < 1e-6 * est.psd[32]);
  }

  SUBCASE("white noise gives a flat floor equal to its strength") {
    // iid Gaussian samples of variance 1 model delta-correlated noise of
    // strength dt in the gated-transform convention.
    const double dt = 0.1;
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> y(1 << 17);
    for (auto& v : y) v = gauss(rng);
    const auto est = estimate_psd(y, dt, 1024);
    const double mean =
        std::accumulate(est.psd.begin() + 1, est.psd.end() - 1, 0.0) /
        (est.psd.size() - 2);
    CHECK(mean == doctest::Approx(dt).epsilon(0.02));
  }

  SUBCASE("too-short input rejected") {
    std::vector<double> y(100, 0.0);
    CHECK_THROWS_AS(estimate_psd(y, 0.1, 1024), ValidationError);
  }

  SUBCASE("standard errors shrink with segment count") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> y(1 << 18);
    for (auto& v : y) v = gauss(rng);
    const auto few = estimate_psd(
        std::vector<double>(y.begin(), y.begin() + (1 << 15)), 0.1, 1024);
    const auto many = estimate_psd(y, 0.1, 1024);
    const double err_few =
        std::accumulate(few.stderr_psd.begin(), few.stderr_psd.end(), 0.0);
    const double err_many =
        std::accumulate(many.stderr_psd.begin(), many.stderr_psd.end(), 0.0);
    CHECK(err_many < err_few);
  }
}

TEST_CASE("decoupled cavity PSD matches the analytic Lorentzian") {
  Model m;
  m.modes = {{"cav", ModeKind::Optical, -1.0, 1.0, 0.0}};
  const auto s = build_fourier_series(m);
  const auto n = noise_matrix(m.modes);

  SdeConfig cfg;
  cfg.dt = 0.05;
  cfg.burn_in = 50.0;
  cfg.segments = 96;
  cfg.segment_length = 4096;
  const auto est = ensemble_psd(s, n, cfg);
  CHECK(est.segments >= cfg.segments);

  std::vector<double> grid;
  std::vector<size_t> bins;
  for (size_t k = 0; k < est.omega.size(); ++k)
    if (est.omega[k] > 0.2 && est.omega[k] < 2.0) {
      grid.push_back(est.omega[k]);
      bins.push_back(k);
    }
  const auto analytic = project_quadrature(
      semiclassical_analytic(s, n, grid, 0), 0, 0.0, "S_yy");

  int within = 0;
  double power_sim = 0.0, power_ana = 0.0;
  for (size_t i = 0; i < bins.size(); ++i) {
    const double sim = est.psd[bins[i]];
    const double err = est.stderr_psd[bins[i]];
    if (std::abs(sim - analytic.values[i]) <= 3.0 * err) ++within;
    power_sim += sim;
    power_ana += analytic.values[i];
  }
  CHECK(within >= static_cast<int>(0.95 * bins.size()));
  // band-integrated power is statistically tight (~0.5%); the residual is
  // the O(dt) discretization bias
  CHECK(power_sim == doctest::Approx(power_ana).epsilon(0.05));
}

TEST_CASE("modulated system PSD matches the semiclassical analytic spectrum") {
  HybridParams p;
  p.gamma_m = 2.0;
  p.nbar_b = 10.0;
  p.gbar = 0.02;
  p.w2 = 0.9 * p.wd;
  const auto m = hybrid_model(p);
  const auto s = build_fourier_series(m);
  const auto n = noise_matrix(m.modes);

  SdeConfig cfg;
  cfg.dt = 0.02;
  cfg.burn_in = 100.0;
  cfg.segments = 48;
  cfg.segment_length = 1 << 16;
  const auto est = ensemble_psd(s, n, cfg);

  std::vector<double> grid;
  std::vector<size_t> bins;
  for (size_t k = 0; k < est.omega.size(); ++k)
    if (est.omega[k] > 0.7 && est.omega[k] < 1.3) {
      grid.push_back(est.omega[k]);
      bins.push_back(k);
    }
  const auto analytic = project_quadrature(
      semiclassical_analytic(s, n, grid, 8), 0, 0.0, "S_yy");

  int within = 0;
  for (size_t i = 0; i < bins.size(); ++i)
    if (std::abs(est.psd[bins[i]] - analytic.values[i]) <=
        3.0 * est.stderr_psd[bins[i]])
      ++within;
  CHECK(within >= static_cast<int>(0.95 * bins.size()));
}

TEST_CASE("semiclassical analytic spectrum") {
  SUBCASE("large occupation converges to the quantum result") {
    const auto m = testing::static_model(0.02, 1e5, 1e-3);
    const auto s = build_fourier_series(m);
    const auto n = noise_matrix(m.modes);
    const auto grid = linspace(0.95, 1.05, 51);
    const auto q =
        project_quadrature(spectrum_shifted(s, n, grid, 2), 1, 0.0, "S_xx");
    const auto sc = project_quadrature(semiclassical_analytic(s, n, grid, 2),
                                       1, 0.0, "S_xx");
    for (size_t i = 0; i < grid.size(); ++i)
      CHECK(sc.values[i] == doctest::Approx(q.values[i]).epsilon(1e-4));
  }

  SUBCASE("vacuum cavity floor differs by the symmetrization constant") {
    Model m;
    m.modes = {{"cav", ModeKind::Optical, -1.0, 1.0, 0.0}};
    const auto s = build_fourier_series(m);
    const auto n = noise_matrix(m.modes);
    // the a channel carries kappa (quantum) vs kappa/2 (symmetrized): the
    // aa^dag entry halves exactly, and the a^dag a entry turns on
    const auto q = spectrum_shifted(s, n, {1.0}, 0);
    const auto sc = semiclassical_analytic(s, n, {1.0}, 0);
    CHECK(sc.matrices[0](0, 0).real() ==
          doctest::Approx(0.5 * q.matrices[0](0, 0).real()).epsilon(1e-12));
    CHECK(q.matrices[0](1, 1).real() == doctest::Approx(0.0));
    CHECK(sc.matrices[0](1, 1).real() > 0.0);
  }
}
