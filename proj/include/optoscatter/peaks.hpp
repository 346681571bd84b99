#pragma once

#include <cstddef>
#include <vector>

#include "optoscatter/spectral.hpp"

namespace optoscatter {

/// Local maximum of a grid: a point (or a plateau of equal values, collapsed
/// to its centroid) strictly greater than every neighbour in its 8-neighbourhood.
struct GridPeak {
  double dp = 0.0;
  double dq = 0.0;
  double value = 0.0;
  std::size_t i = 0;  // nearest grid index of the centroid
  std::size_t k = 0;
  std::size_t plateau_size = 1;
};

/// Maxima above min_fraction of the global maximum, sorted by decreasing value.
std::vector<GridPeak> find_grid_peaks(const SpectrumGrid& grid, double min_fraction = 0.0);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
  std::size_t index = 0;
  bool is_max = true;
};

/// Interior local maxima and minima of a sampled curve, with plateaus collapsed
/// to their centre. Returned in order of increasing x.
std::vector<Extremum> find_extrema(const std::vector<double>& x, const std::vector<double>& y);

/// Maxima above min_fraction of the largest sample, in order of increasing x.
std::vector<Extremum> find_maxima(const std::vector<double>& x, const std::vector<double>& y,
                                  double min_fraction = 0.0);

/// The cluster of resolved maxima around the global maximum of a curve.
struct Multiplet {
  Extremum center;
  /// Other maxima within the window that stand out from the valley separating
  /// them from the centre: valley <= dip_ratio * member value.
  std::vector<Extremum> satellites;

  bool resolved() const { return !satellites.empty(); }
};

/// dip_ratio = 0.81 is the Rayleigh criterion for two equal lines.
Multiplet dominant_multiplet(const std::vector<double>& x, const std::vector<double>& y,
                             double half_window, double min_fraction = 0.05,
                             double dip_ratio = 0.81);

}  // namespace optoscatter
