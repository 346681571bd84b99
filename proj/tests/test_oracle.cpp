#include <cmath>

#include "doctest.h"
#include "optoscatter/oracle.hpp"

using namespace optoscatter;

namespace {

ModelParams make_params(double g1, double g2, double gamma_c = 0.1) {
  ModelParams p;
  p.g1 = g1;
  p.g2 = g2;
  p.gamma_c = gamma_c;
  return p;
}

}  // namespace

TEST_CASE("bath discretization") {
  const auto bath = BathGrid::uniform(1.6, 401, 0.1);
  CHECK(bath.n_modes() == 401);
  CHECK(bath.spacing == doctest::Approx(0.008).epsilon(1e-14));
  CHECK(bath.half_width() == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(bath.golden_rule_rate() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(bath.recurrence_time() == doctest::Approx(2.0 * M_PI / 0.008).epsilon(1e-14));
  CHECK_THROWS_AS(BathGrid::uniform(0.0, 401, 0.1), DomainError);
  CHECK_THROWS_AS(BathGrid::uniform(1.0, 2, 0.1), DomainError);
}

TEST_CASE("initial wavepacket") {
  const WavepacketParams wp{-0.02, 0.03, 0.05};
  const auto bath = BathGrid::uniform(1.6, 401, 0.1);
  const auto state = initialize(wp, 1, 2, bath, 0.9);
  CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state.intracavity_population() == 0.0);
  for (int j : {0, 2})
    for (int p = 0; p < state.n_modes; p += 7) CHECK(state.pair(j, p, p / 2) == cplx(0.0));

  // The unrescaled norm converges as the grid is refined and widened.
  double previous = 0.0;
  for (int n : {201, 401, 801}) {
    const double k = 0.004 * (n - 1);
    const double band = initialize(wp, 0, 0, BathGrid::uniform(k, n, 0.1), 0.5).initial_norm;
    CHECK(band < 1.0);
    CHECK(band > previous);
    previous = band;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(0.01));
  const double fine = initialize(wp, 0, 0, BathGrid::uniform(1.6, 801, 0.1), 0.5).initial_norm;
  CHECK(fine == doctest::Approx(state.initial_norm).epsilon(0.01));

  // Delaying the arrival only changes phases.
  const auto delayed = initialize(wp, 1, 2, bath, 0.9, 25.0);
  for (int p = 0; p < state.n_modes; p += 13)
    CHECK(std::abs(delayed.pair(1, p, 3)) == doctest::Approx(std::abs(state.pair(1, p, 3))).epsilon(1e-13));

  CHECK_THROWS_AS(initialize(wp, 3, 2, bath), DomainError);
  CHECK_THROWS_AS(initialize(wp, 0, 0, BathGrid::uniform(0.2, 101, 0.1), 0.99), DomainError);
  CHECK_THROWS_AS(initialize(wp, 0, 0, bath, 0.9, -1.0), DomainError);
}

TEST_CASE("uncoupled bath only accumulates phase") {
  const auto p = make_params(0.3, 0.02);
  const WavepacketParams wp{0.0, 0.1, 0.05};
  auto bath = BathGrid::uniform(0.8, 81, 0.1);
  bath.coupling = 0.0;
  const FCTable fc(p, 3);
  const auto start = initialize(wp, 0, 3, bath, 0.5);
  const auto end = evolve(start, p, fc, bath, 37.0);
  CHECK(end.time == 37.0);
  CHECK(end.intracavity_population() == 0.0);
  for (int q = 0; q < bath.n_modes(); q += 5) {
    for (int k = 0; k <= q; k += 3) {
      const cplx expected =
          start.pair(0, q, k) * std::exp(cplx(0.0, -(bath.detunings[q] + bath.detunings[k]) * 37.0));
      CHECK(std::abs(end.pair(0, q, k) - expected) < 1e-13);
    }
  }
}

TEST_CASE("norm conservation and step-size diagnostics") {
  const auto p = make_params(0.3, 0.05);
  const WavepacketParams wp{-0.05, 0.05, 0.1};
  const auto bath = BathGrid::uniform(1.2, 121, 0.1);
  const FCTable fc(p, 3);
  const auto start = initialize(wp, 0, 3, bath, 0.8, 10.0);
  OracleOptions opts;
  opts.dt = 0.05;
  opts.norm_tolerance = 1e-9;
  const auto end = evolve(start, p, fc, bath, 30.0, opts);
  CHECK(std::abs(end.norm() - 1.0) < 1e-9);
  CHECK(end.intracavity_population() > 1e-3);

  opts.dt = 1.5;
  opts.norm_tolerance = 1e-6;
  CHECK_THROWS_AS(evolve(start, p, fc, bath, 400.0, opts), ConvergenceError);
  CHECK_THROWS_AS(evolve(end, p, fc, bath, 10.0), DomainError);
  CHECK_THROWS_AS(evolve(start, p, FCTable(p, 2), bath, 30.0), DomainError);
}

TEST_CASE("empty-cavity scattering matches the analytic spectrum") {
  const auto p = make_params(0.0, 0.0);
  const WavepacketParams wp{-0.02, 0.03, 0.05};
  const auto bath = BathGrid::uniform(1.6, 401, 0.1);
  const FCTable fc(p, 12);
  const ScatteringModel model(p, wp, Truncation{});
  const double delay = 30.0;
  auto state = initialize(wp, 0, 2, bath, 0.9, delay);
  OracleOptions opts;
  opts.dt = 0.2;
  state = evolve(state, p, fc, bath, delay + 160.0, opts);
  CHECK(state.intracavity_population() < 1e-5);

  // Mechanics never leaves n0 without coupling.
  double off = 0.0;
  for (int j = 1; j <= 2; ++j)
    for (int q = 0; q < state.n_modes; ++q)
      for (int k = 0; k <= q; ++k) off = std::max(off, std::abs(state.pair(j, q, k)));
  CHECK(off < 1e-12);

  const auto grid = extract_spectrum(state, bath, select_modes(bath, -0.4, 0.4, 41));
  CHECK(grid.source == "time-domain");
  CHECK(grid.p_axis.size() == 41);
  for (std::size_t i = 0; i < grid.p_axis.size(); ++i)
    for (std::size_t k = 0; k < i; ++k) CHECK(grid.at(i, k) == grid.at(k, i));
  const auto cmp = compare_to_analytic(grid, model, MechanicalInitState::ground());
  CHECK(cmp.points == 41 * 41);
  CHECK(cmp.rel_l2 < 0.01);
  CHECK(cmp.rel_linf < 0.01);
}

TEST_CASE("mode selection") {
  const auto bath = BathGrid::uniform(1.0, 201, 0.1);
  const auto idx = select_modes(bath, -0.1, 0.1, 21);
  REQUIRE(idx.size() == 21);
  CHECK(bath.detunings[idx.front()] == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(bath.detunings[idx.back()] == doctest::Approx(0.1).epsilon(1e-12));
  // Requests finer than the bath collapse onto distinct modes.
  CHECK(select_modes(bath, -0.1, 0.1, 81).size() == 21);
}
