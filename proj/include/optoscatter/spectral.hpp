#pragma once

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "optoscatter/fock.hpp"
#include "optoscatter/model.hpp"

namespace optoscatter {

/// Two-photon Lorentzian input: detunings from the cavity and spectral width.
struct WavepacketParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double epsilon = 0.01;

  void validate() const;
};

/// Normalization of the symmetrized Lorentzian pair amplitude.
double normalization_g(const WavepacketParams& wp);

/// Initial mechanical state: a pure superposition of number states or a
/// diagonal mixture.
struct MechanicalInitState {
  enum class Kind { Pure, Mixed };

  Kind kind = Kind::Pure;
  std::vector<cplx> amplitudes{1.0};   // pure: c_{n0}
  std::vector<double> probabilities;   // mixed: P_{n0}

  static MechanicalInitState ground() { return {}; }
  static MechanicalInitState pure(std::vector<cplx> amps);
  static MechanicalInitState mixed(std::vector<double> probs);
  /// Thermal occupation truncated at max_n0 and renormalized.
  static MechanicalInitState thermal(double mean_phonons, int max_n0);

  int max_n0() const;
  void validate() const;
};

enum class Frame { Lab, Rotating };

/// E_{m,j} (lab) or E'_{m,j} = E_{m,j} - m omega_c (rotating).
double eigen_energy(int m, int j, const ModelParams& params, Frame frame = Frame::Rotating);

/// Ground-state shift induced by one photon; equals -E'_{1,0}.
double delta_shift(const ModelParams& params);

/// Ground-state shift induced by two photons; equals -E'_{2,0}.
double nu_shift(const ModelParams& params);

/// Rotating-frame energies for m = 0..2, j = 0..max_index, plus both shifts.
struct EigenData {
  std::vector<double> energies[kMaxPhotons + 1];
  double delta = 0.0;
  double nu = 0.0;

  static EigenData compute(const ModelParams& params, int max_index);
  double operator()(int m, int j) const { return energies[m][j]; }
};

/// Fock-sum limits: intermediate indices s, s', l <= fock; outgoing phonon
/// number j <= j_max; initial phonon number n0 <= n0_max.
struct Truncation {
  int fock = 12;
  int j_max = 12;
  int n0_max = 8;

  int required_index() const;
  Truncation doubled() const { return {2 * fock, 2 * j_max, n0_max}; }
};

/// The four scattering channels at one (Dp, Dq) ordering, each already
/// symmetrized over the two input detunings, and the total long-time pair
/// amplitude symmetrized over the outgoing photons.
struct AmplitudeBreakdown {
  int n0 = 0;
  int j = 0;
  double dp = 0.0;
  double dq = 0.0;
  cplx c1, c2, c3, c4;
  cplx total;
};

/// Spectral model bound to one parameter set. Holds the overlap table and the
/// eigen-energies; const member functions are safe to call concurrently.
class ScatteringModel {
public:
  ScatteringModel(const ModelParams& params, const WavepacketParams& wp, Truncation trunc);
  ScatteringModel(const ModelParams& params, const WavepacketParams& wp, Truncation trunc,
                  std::shared_ptr<const FCTable> fc);

  const ModelParams& params() const { return params_; }
  const WavepacketParams& wavepacket() const { return wp_; }
  const Truncation& truncation() const { return trunc_; }
  const EigenData& eigen() const { return eigen_; }
  const FCTable& fc() const { return *fc_; }
  double g_norm() const { return g_norm_; }

  AmplitudeBreakdown breakdown(int n0, int j, double dp, double dq) const;

  /// Long-time pair amplitude C_{n0,j,p,q} with the overall time-dependent
  /// phase dropped.
  cplx amplitude(int n0, int j, double dp, double dq) const;

  double spectrum_point(double dp, double dq, const MechanicalInitState& state) const;

  /// Same model with every Fock limit doubled (shares no table).
  ScatteringModel with_truncation(Truncation trunc) const;

private:
  struct Channels {
    cplx c1, c2, c3, c4;
  };
  // Channels at ordering (x, y) with inputs (da, db) assigned to (Delta_1, Delta_2).
  void add_ordering(int n0, int j, double x, double y, double da, double db, Channels& out) const;
  Channels channels(int n0, int j, double x, double y) const;

  ModelParams params_;
  WavepacketParams wp_;
  Truncation trunc_;
  std::shared_ptr<const FCTable> fc_;
  EigenData eigen_;
  double g_norm_ = 0.0;
};

/// Free-function form; builds nothing, reads the supplied table.
AmplitudeBreakdown amplitude_breakdown(int n0, int j, double dp, double dq,
                                       const ModelParams& params, const WavepacketParams& wp,
                                       std::shared_ptr<const FCTable> fc, Truncation trunc);

/// Records how the Fock truncation was checked.
struct TruncationRecord {
  Truncation trunc;
  int checked_points = 0;
  double max_rel_change = 0.0;
  double tolerance = 0.0;
  bool converged = true;
};

/// Evaluates S at the sample points with the given and doubled truncation;
/// the relative change is measured against the larger of the point value and
/// floor_fraction times the largest sampled value.
TruncationRecord check_truncation(const ScatteringModel& model, const MechanicalInitState& state,
                                  const std::vector<std::pair<double, double>>& points,
                                  double tolerance, double floor_fraction = 1e-3);

struct SpectrumGrid {
  std::vector<double> p_axis;
  std::vector<double> q_axis;
  std::vector<double> values;  // row-major, values[i * q_axis.size() + k] = S(p_i, q_k)
  std::string source = "analytic";

  double at(std::size_t i, std::size_t k) const { return values[i * q_axis.size() + k]; }
  double& at(std::size_t i, std::size_t k) { return values[i * q_axis.size() + k]; }
  double max_value() const;
};

/// Uniform axis of n points spanning [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

/// S on the Cartesian product of the axes. Identical axes are evaluated on
/// the upper triangle and mirrored. threads <= 0 uses the hardware count.
SpectrumGrid spectrum_grid(const ScatteringModel& model, const MechanicalInitState& state,
                           const std::vector<double>& p_axis, const std::vector<double>& q_axis,
                           int threads = 1);

/// S(D, D) along the diagonal.
std::vector<std::pair<double, double>> diagonal_spectrum(const ScatteringModel& model,
                                                         const MechanicalInitState& state,
                                                         const std::vector<double>& axis,
                                                         int threads = 1);

}  // namespace optoscatter
