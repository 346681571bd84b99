#pragma once

#include <string>
#include <vector>

#include "optoscatter/model.hpp"

namespace optoscatter {

/// Predicted emission line a * Dp + b * Dq = c in the (Dp, Dq) plane.
struct ResonanceLine {
  enum class Kind {
    Single,  // one photon emitted through the one-photon manifold (C2/C3)
    Split,   // C4: first photon leaves the two-photon manifold
    Sum      // C4: total energy of the photon pair
  };

  Kind kind = Kind::Single;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  int s = 0;        // one-photon manifold index
  int s_prime = 0;  // two-photon manifold index
  int j = 0;        // final phonon number

  /// Euclidean distance of (dp, dq) from the line.
  double distance(double dp, double dq) const;
  std::string label() const;
};

std::string to_string(ResonanceLine::Kind kind);

/// All lines with s, s' <= s_max and j <= j_max. The positions do not depend
/// on the initial phonon number.
///   Single:  Dq = s w e^{2 r1} - j w - delta   and its mirror in Dp
///   Split:   Dp = s' w e^{2 r2} - s w e^{2 r1} + delta - nu   and its mirror
///   Sum:     Dp + Dq = s' w e^{2 r2} - j w - nu
std::vector<ResonanceLine> resonance_lines(const ModelParams& params, int j_max, int s_max);

/// Distance from (dp, dq) to the closest line; infinity for an empty list.
double nearest_line_distance(const std::vector<ResonanceLine>& lines, double dp, double dq,
                             const ResonanceLine** nearest = nullptr);

}  // namespace optoscatter
