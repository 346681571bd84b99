#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace optoscatter {

/// Raised when a parameter set leaves the admissible region of the model
/// (non-positive frequencies, undefined squeezing, out-of-range indices).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when a truncated sum or discretized integral fails its
/// self-consistency check.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Constants of the mixed optomechanical cavity. All rates are angular
/// frequencies; computations use omega_m as the unit, so the remaining
/// fields are usually given in units of omega_m.
struct ModelParams {
  double omega_m = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double gamma_c = 0.1;
  /// Absolute cavity frequency; only needed for lab-frame energies.
  std::optional<double> omega_c;

  /// Photon-hopping strength xi with gamma_c = 2 pi xi^2.
  double xi() const;

  /// Throws DomainError if omega_m or gamma_c is non-positive, or if the
  /// squeezing factor is undefined for any photon number 0..2.
  void validate() const;
};

/// Largest photon number in the two-photon subspace.
inline constexpr int kMaxPhotons = 2;

}  // namespace optoscatter
