#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "optoscatter/peaks.hpp"
#include "optoscatter/resonances.hpp"

using namespace optoscatter;

namespace {

SpectrumGrid gaussian_grid(const std::vector<std::pair<double, double>>& centers,
                           const std::vector<double>& heights) {
  SpectrumGrid g;
  g.p_axis = linspace(-1.0, 1.0, 41);
  g.q_axis = linspace(-1.0, 1.0, 41);
  g.values.assign(41 * 41, 0.0);
  for (std::size_t i = 0; i < 41; ++i)
    for (std::size_t k = 0; k < 41; ++k)
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dx = g.p_axis[i] - centers[c].first, dy = g.q_axis[k] - centers[c].second;
        g.at(i, k) += heights[c] * std::exp(-(dx * dx + dy * dy) / 0.02);
      }
  return g;
}

ModelParams make_params(double g1, double g2) {
  ModelParams p;
  p.g1 = g1;
  p.g2 = g2;
  return p;
}

}  // namespace

TEST_CASE("grid peaks") {
  const auto g = gaussian_grid({{-0.5, 0.5}, {0.4, 0.3}}, {1.0, 0.3});
  const auto all = find_grid_peaks(g);
  REQUIRE(all.size() == 2);
  CHECK(all[0].dp == doctest::Approx(-0.5));
  CHECK(all[0].dq == doctest::Approx(0.5));
  CHECK(all[1].value == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(find_grid_peaks(g, 0.5).size() == 1);

  // A flat-topped peak counts once, at its centroid.
  SpectrumGrid flat = g;
  flat.values.assign(flat.values.size(), 0.0);
  flat.at(10, 10) = flat.at(10, 11) = flat.at(11, 10) = flat.at(11, 11) = 2.0;
  flat.at(30, 30) = 1.0;
  const auto fp = find_grid_peaks(flat);
  REQUIRE(fp.size() == 2);
  CHECK(fp[0].plateau_size == 4);
  CHECK(fp[0].dp == doctest::Approx(0.5 * (g.p_axis[10] + g.p_axis[11])));
  CHECK(fp[1].plateau_size == 1);

  // Non-strict neighbours do not form a maximum; a constant grid has none.
  SpectrumGrid constant = g;
  constant.values.assign(constant.values.size(), 1.0);
  CHECK(find_grid_peaks(constant).empty());
}

TEST_CASE("curve extrema and multiplets") {
  const auto x = linspace(-2.0, 2.0, 401);
  std::vector<double> y;
  for (double v : x)
    y.push_back(std::exp(-(v * v) / 0.005) + 0.6 * std::exp(-((v - 0.2) * (v - 0.2)) / 0.005) +
                0.3 * std::exp(-((v + 1.2) * (v + 1.2)) / 0.01));
  const auto maxima = find_maxima(x, y, 0.05);
  REQUIRE(maxima.size() == 3);
  CHECK(maxima[0].x == doctest::Approx(-1.2));
  CHECK(maxima[1].x == doctest::Approx(0.0).epsilon(1e-9));
  const auto ext = find_extrema(x, y);
  CHECK(std::count_if(ext.begin(), ext.end(), [](const Extremum& e) { return !e.is_max; }) == 2);

  const auto m = dominant_multiplet(x, y, 0.25);
  CHECK(m.center.x == doctest::Approx(0.0).epsilon(1e-9));
  REQUIRE(m.resolved());
  CHECK(m.satellites.front().x == doctest::Approx(0.2).epsilon(0.02));
  // The distant sideband is outside the window.
  CHECK(dominant_multiplet(x, y, 0.1).satellites.empty());

  // Two overlapping lines without a deep enough valley are not resolved.
  std::vector<double> blend;
  for (double v : x)
    blend.push_back(std::exp(-(v * v) / 0.02) + std::exp(-((v - 0.17) * (v - 0.17)) / 0.02));
  const auto bm = dominant_multiplet(x, blend, 0.25);
  CHECK_FALSE(bm.resolved());

  // Plateau maxima collapse to their centre.
  const std::vector<double> px{0, 1, 2, 3, 4, 5};
  const std::vector<double> py{0, 1, 2, 2, 1, 0};
  const auto pm = find_extrema(px, py);
  REQUIRE(pm.size() == 1);
  CHECK(pm[0].x == 2.5);
}

TEST_CASE("resonance lines") {
  // Without coupling all lines sit on integer multiples of the mechanical frequency.
  const auto bare = resonance_lines(make_params(0.0, 0.0), 3, 3);
  for (const auto& line : bare) CHECK(std::abs(line.c - std::round(line.c)) < 1e-15);

  // Pure linear coupling: single-photon lines spaced exactly by omega_m.
  const auto p = make_params(0.5, 0.0);
  const double delta = delta_shift(p);
  CHECK(delta == doctest::Approx(0.25).epsilon(1e-15));
  std::vector<double> singles;
  for (const auto& line : resonance_lines(p, 4, 0))
    if (line.kind == ResonanceLine::Kind::Single && line.b == 1.0) singles.push_back(line.c);
  REQUIRE(singles.size() == 5);
  for (std::size_t i = 0; i + 1 < singles.size(); ++i)
    CHECK(singles[i] - singles[i + 1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(singles.front() == doctest::Approx(-delta));

  // Counting and geometry.
  const auto q = make_params(0.8, 0.05);
  const auto lines = resonance_lines(q, 2, 3);
  CHECK(lines.size() == 2 * 4 * 3 + 2 * 4 * 4 + 4 * 3);
  const double nu = nu_shift(q);
  const double e2 = std::sqrt(1.0 + 8.0 * 0.05);
  bool found = false;
  for (const auto& line : lines) {
    if (line.kind == ResonanceLine::Kind::Sum && line.s_prime == 2 && line.j == 1) {
      CHECK(line.c == doctest::Approx(2.0 * e2 - 1.0 - nu).epsilon(1e-14));
      CHECK(line.distance(line.c, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(line.distance(0.0, 0.0) == doctest::Approx(std::abs(line.c) / std::sqrt(2.0)));
      found = true;
    }
  }
  CHECK(found);
  const ResonanceLine* nearest = nullptr;
  CHECK(nearest_line_distance(lines, -delta_shift(q), 5.0, &nearest) < 1e-14);
  REQUIRE(nearest != nullptr);
  CHECK(nearest->kind == ResonanceLine::Kind::Single);
  CHECK(std::isinf(nearest_line_distance({}, 0.0, 0.0)));
  CHECK_THROWS_AS(resonance_lines(q, -1, 2), DomainError);
}
