#include "optoscatter/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optoscatter {

std::vector<GridPeak> find_grid_peaks(const SpectrumGrid& grid, double min_fraction) {
  const std::size_t np = grid.p_axis.size();
  const std::size_t nq = grid.q_axis.size();
  if (grid.values.size() != np * nq) throw std::invalid_argument("grid size mismatch");
  std::vector<GridPeak> peaks;
  if (np == 0 || nq == 0) return peaks;
  const double threshold = min_fraction * grid.max_value();

  std::vector<char> visited(np * nq, 0);
  std::vector<std::size_t> stack, region;
  for (std::size_t start = 0; start < np * nq; ++start) {
    if (visited[start]) continue;
    const double v = grid.values[start];
    // Flood-fill the plateau of exactly equal values containing this point.
    region.clear();
    stack.assign(1, start);
    visited[start] = 1;
    bool is_max = true;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      region.push_back(cur);
      const auto ci = static_cast<long>(cur / nq);
      const auto ck = static_cast<long>(cur % nq);
      for (long di = -1; di <= 1; ++di) {
        for (long dk = -1; dk <= 1; ++dk) {
          if (di == 0 && dk == 0) continue;
          const long ni = ci + di, nk = ck + dk;
          if (ni < 0 || nk < 0 || ni >= static_cast<long>(np) || nk >= static_cast<long>(nq)) continue;
          const std::size_t nb = static_cast<std::size_t>(ni) * nq + static_cast<std::size_t>(nk);
          const double w = grid.values[nb];
          if (w > v) {
            is_max = false;
          } else if (w == v && !visited[nb]) {
            visited[nb] = 1;
            stack.push_back(nb);
          }
        }
      }
    }
    if (!is_max || v < threshold || region.size() == np * nq) continue;
    double si = 0.0, sk = 0.0, sp = 0.0, sq = 0.0;
    for (std::size_t idx : region) {
      si += static_cast<double>(idx / nq);
      sk += static_cast<double>(idx % nq);
      sp += grid.p_axis[idx / nq];
      sq += grid.q_axis[idx % nq];
    }
    const double n = static_cast<double>(region.size());
    GridPeak peak;
    peak.dp = sp / n;
    peak.dq = sq / n;
    peak.value = v;
    peak.i = static_cast<std::size_t>(std::lround(si / n));
    peak.k = static_cast<std::size_t>(std::lround(sk / n));
    peak.plateau_size = region.size();
    peaks.push_back(peak);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const GridPeak& a, const GridPeak& b) { return a.value > b.value; });
  return peaks;
}

std::vector<Extremum> find_extrema(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("curve size mismatch");
  std::vector<Extremum> out;
  const std::size_t n = y.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    // Extend over a run of equal values.
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n) break;
    const double left = y[i - 1], right = y[j + 1], v = y[i];
    const bool is_max = v > left && v > right;
    const bool is_min = v < left && v < right;
    if (is_max || is_min) {
      const std::size_t mid = (i + j) / 2;
      out.push_back({0.5 * (x[i] + x[j]), v, mid, is_max});
    }
    i = j + 1;
  }
  return out;
}

std::vector<Extremum> find_maxima(const std::vector<double>& x, const std::vector<double>& y,
                                  double min_fraction) {
  const double top = y.empty() ? 0.0 : *std::max_element(y.begin(), y.end());
  std::vector<Extremum> out;
  for (const auto& e : find_extrema(x, y))
    if (e.is_max && e.value >= min_fraction * top) out.push_back(e);
  return out;
}

Multiplet dominant_multiplet(const std::vector<double>& x, const std::vector<double>& y,
                             double half_window, double min_fraction, double dip_ratio) {
  const auto maxima = find_maxima(x, y, min_fraction);
  if (maxima.empty()) throw std::invalid_argument("curve has no interior maximum");
  const auto top = std::max_element(maxima.begin(), maxima.end(),
                                    [](const Extremum& a, const Extremum& b) { return a.value < b.value; });
  Multiplet m;
  m.center = *top;
  for (const auto& e : maxima) {
    if (e.index == m.center.index || std::abs(e.x - m.center.x) > half_window) continue;
    const auto [lo, hi] = std::minmax(e.index, m.center.index);
    const double valley = *std::min_element(y.begin() + static_cast<long>(lo),
                                            y.begin() + static_cast<long>(hi) + 1);
    if (valley <= dip_ratio * e.value) m.satellites.push_back(e);
  }
  return m;
}

}  // namespace optoscatter
