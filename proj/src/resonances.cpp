#include "optoscatter/resonances.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "optoscatter/fock.hpp"
#include "optoscatter/spectral.hpp"

namespace optoscatter {

double ResonanceLine::distance(double dp, double dq) const {
  return std::abs(a * dp + b * dq - c) / std::hypot(a, b);
}

std::string to_string(ResonanceLine::Kind kind) {
  switch (kind) {
    case ResonanceLine::Kind::Single: return "single";
    case ResonanceLine::Kind::Split: return "split";
    case ResonanceLine::Kind::Sum: return "sum";
  }
  return "unknown";
}

std::string ResonanceLine::label() const {
  std::ostringstream out;
  out << to_string(kind) << "(s=" << s << ", s'=" << s_prime << ", j=" << j << "): ";
  if (a != 0.0) out << (a == 1.0 ? "" : std::to_string(a) + "*") << "Dp";
  if (a != 0.0 && b != 0.0) out << " + ";
  if (b != 0.0) out << (b == 1.0 ? "" : std::to_string(b) + "*") << "Dq";
  out << " = " << c;
  return out.str();
}

std::vector<ResonanceLine> resonance_lines(const ModelParams& params, int j_max, int s_max) {
  params.validate();
  if (j_max < 0 || s_max < 0) throw DomainError("quantum-number bounds must be non-negative");
  const double w = params.omega_m;
  const double e1 = std::exp(2.0 * squeeze_factor(1, params));
  const double e2 = std::exp(2.0 * squeeze_factor(2, params));
  const double delta = delta_shift(params);
  const double nu = nu_shift(params);

  std::vector<ResonanceLine> lines;
  using Kind = ResonanceLine::Kind;
  for (int s = 0; s <= s_max; ++s) {
    for (int j = 0; j <= j_max; ++j) {
      const double c = s * w * e1 - j * w - delta;
      lines.push_back({Kind::Single, 0.0, 1.0, c, s, 0, j});
      lines.push_back({Kind::Single, 1.0, 0.0, c, s, 0, j});
    }
  }
  for (int sp = 0; sp <= s_max; ++sp) {
    for (int s = 0; s <= s_max; ++s) {
      const double c = sp * w * e2 - s * w * e1 + delta - nu;
      lines.push_back({Kind::Split, 1.0, 0.0, c, s, sp, 0});
      lines.push_back({Kind::Split, 0.0, 1.0, c, s, sp, 0});
    }
    for (int j = 0; j <= j_max; ++j)
      lines.push_back({Kind::Sum, 1.0, 1.0, sp * w * e2 - j * w - nu, 0, sp, j});
  }
  return lines;
}

double nearest_line_distance(const std::vector<ResonanceLine>& lines, double dp, double dq,
                             const ResonanceLine** nearest) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : lines) {
    const double d = line.distance(dp, dq);
    if (d < best) {
      best = d;
      if (nearest) *nearest = &line;
    }
  }
  return best;
}

}  // namespace optoscatter
