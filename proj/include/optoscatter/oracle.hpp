#pragma once

#include <vector>

#include "optoscatter/fock.hpp"
#include "optoscatter/spectral.hpp"

namespace optoscatter {

/// Uniform discretization of the outside continuum over detunings [-K, K].
/// Each mode couples to the cavity with strength xi_eff = sqrt(gamma_c dD / 2pi),
/// so the golden-rule rate 2 pi xi_eff^2 / dD equals gamma_c.
struct BathGrid {
  std::vector<double> detunings;
  double spacing = 0.0;
  double coupling = 0.0;

  static BathGrid uniform(double half_width, int n_modes, double gamma_c);

  int n_modes() const { return static_cast<int>(detunings.size()); }
  double half_width() const { return detunings.back(); }
  double golden_rule_rate() const;
  /// The discretized dynamics repeat after 2 pi / spacing.
  double recurrence_time() const;
};

/// Amplitudes of the two-excitation sector on a discretized continuum.
///
/// cavity2[j]      two photons in the cavity, mechanics in |j~(2)>
/// cavity1[j, k]   one photon in the cavity (|j~(1)>), one in mode k
/// pairs[j, (p,q)] both photons outside, mechanics in number state |j>
///
/// Pairs are stored for p >= q as the amplitudes of the Fock states
/// |1_p 1_q> (p > q) and |2_p> (p = q), so the total norm is the plain sum of
/// squared moduli. In terms of the continuum amplitude C(p, q) of the ordered
/// double integral, a stored off-diagonal entry is C dD and a diagonal entry is
/// C dD / sqrt(2).
struct OracleState {
  int n_b = 0;  // mechanical indices 0..n_b
  int n_modes = 0;
  double time = 0.0;
  /// Norm of the discretized initial wavepacket before it was rescaled to one.
  double initial_norm = 1.0;
  std::vector<cplx> cavity2;
  std::vector<cplx> cavity1;
  std::vector<cplx> pairs;

  static std::size_t pair_index(int p, int q) {
    return static_cast<std::size_t>(p) * (p + 1) / 2 + q;
  }
  std::size_t n_pairs() const { return static_cast<std::size_t>(n_modes) * (n_modes + 1) / 2; }

  cplx& c1(int j, int k) { return cavity1[static_cast<std::size_t>(j) * n_modes + k]; }
  cplx c1(int j, int k) const { return cavity1[static_cast<std::size_t>(j) * n_modes + k]; }
  cplx& pair(int j, int p, int q) { return pairs[j * n_pairs() + pair_index(p, q)]; }
  cplx pair(int j, int p, int q) const { return pairs[j * n_pairs() + pair_index(p, q)]; }

  double norm() const;
  /// Probability that at least one photon is still inside the cavity.
  double intracavity_population() const;
};

struct OracleOptions {
  double dt = 0.1;
  /// Abort when the norm drifts from one by more than this.
  double norm_tolerance = 1e-5;
  /// Minimum fraction of the continuum wavepacket norm the band must hold.
  double min_band_fraction = 0.99;
  int threads = 1;
};

/// Discretized symmetrized Lorentzian pair in mechanical state n0, rescaled to
/// unit norm, whose front reaches the cavity after arrival_delay. The band
/// limit smears the sharp front of the pulse; a delay lets that precursor
/// interact instead of being counted as already gone. Throws DomainError when
/// the band holds less than min_band_fraction of the continuum norm.
OracleState initialize(const WavepacketParams& wp, int n0, int n_b, const BathGrid& bath,
                       double min_band_fraction = 0.99, double arrival_delay = 0.0);

/// Integrates the amplitude equations up to t_final with a fixed-step
/// integrating-factor RK4: the diagonal energies are propagated exactly and
/// the cavity-continuum couplings by classical RK4 in the rotating variables.
/// Throws ConvergenceError when the norm drifts beyond the tolerance.
OracleState evolve(OracleState state, const ModelParams& params, const FCTable& fc,
                   const BathGrid& bath, double t_final, const OracleOptions& opts = {});

/// Spectral density comparable to the analytic S(Dp, Dq) on the bath grid,
/// with the initial rescaling undone. The result is symmetric.
SpectrumGrid extract_spectrum(const OracleState& state, const BathGrid& bath);

/// Grid of S restricted to the bath modes with indices in the given list.
SpectrumGrid extract_spectrum(const OracleState& state, const BathGrid& bath,
                              const std::vector<int>& mode_indices);

/// Discrepancy between an oracle grid and the analytic spectrum on the same points.
struct OracleComparison {
  double rel_l2 = 0.0;
  double rel_linf = 0.0;
  double residual_intracavity = 0.0;
  double norm_error = 0.0;
  int points = 0;
};

OracleComparison compare_to_analytic(const SpectrumGrid& oracle, const ScatteringModel& model,
                                     const MechanicalInitState& state, int threads = 1);

/// Indices of n evenly spaced bath modes covering [lo, hi] as closely as
/// the grid allows.
std::vector<int> select_modes(const BathGrid& bath, double lo, double hi, int n);

}  // namespace optoscatter
