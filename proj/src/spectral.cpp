#include "optoscatter/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "parallel.hpp"

namespace optoscatter {

namespace {

constexpr cplx kI{0.0, 1.0};

// The long-time pair amplitude carries exp[-i(Dp + Dq + j omega_m) t]. It is
// independent of n0, so it cancels in both spectrum definitions and is fixed
// to one here.
constexpr cplx kPhaseFactor{1.0, 0.0};

}  // namespace

void WavepacketParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError("wavepacket width epsilon must be positive and finite");
  if (!std::isfinite(delta1) || !std::isfinite(delta2))
    throw DomainError("wavepacket detunings must be finite");
}

double normalization_g(const WavepacketParams& wp) {
  wp.validate();
  const double split = wp.delta1 - wp.delta2;
  const double two_eps = 2.0 * wp.epsilon;
  const double overlap = 4.0 * wp.epsilon * wp.epsilon / (split * split + two_eps * two_eps);
  return wp.epsilon / std::numbers::pi / std::sqrt(1.0 + overlap);
}

MechanicalInitState MechanicalInitState::pure(std::vector<cplx> amps) {
  MechanicalInitState s;
  s.kind = Kind::Pure;
  s.amplitudes = std::move(amps);
  s.validate();
  return s;
}

MechanicalInitState MechanicalInitState::mixed(std::vector<double> probs) {
  MechanicalInitState s;
  s.kind = Kind::Mixed;
  s.amplitudes.clear();
  s.probabilities = std::move(probs);
  s.validate();
  return s;
}

MechanicalInitState MechanicalInitState::thermal(double mean_phonons, int max_n0) {
  if (mean_phonons < 0.0 || max_n0 < 0) throw DomainError("invalid thermal state");
  std::vector<double> probs(max_n0 + 1);
  const double ratio = mean_phonons / (1.0 + mean_phonons);
  double total = 0.0;
  for (int n = 0; n <= max_n0; ++n) {
    probs[n] = std::pow(ratio, n);
    total += probs[n];
  }
  for (double& p : probs) p /= total;
  return mixed(std::move(probs));
}

int MechanicalInitState::max_n0() const {
  const auto n = kind == Kind::Pure ? amplitudes.size() : probabilities.size();
  return static_cast<int>(n) - 1;
}

void MechanicalInitState::validate() const {
  if (kind == Kind::Pure) {
    if (amplitudes.empty()) throw DomainError("pure state needs at least one amplitude");
    double norm = 0.0;
    for (const auto& c : amplitudes) norm += std::norm(c);
    if (std::abs(norm - 1.0) > 1e-12) throw DomainError("pure-state amplitudes are not normalized");
  } else {
    if (probabilities.empty()) throw DomainError("mixed state needs at least one probability");
    double total = 0.0;
    for (double p : probabilities) {
      if (p < 0.0) throw DomainError("mixed-state probabilities must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixed-state probabilities do not sum to one");
  }
}

double eigen_energy(int m, int j, const ModelParams& params, Frame frame) {
  if (m < 0 || m > kMaxPhotons) throw DomainError("photon number outside 0..2");
  if (j < 0) throw DomainError("phonon index must be non-negative");
  const double r = squeeze_factor(m, params);
  const double w = params.omega_m;
  const double e2r = std::exp(2.0 * r);
  const double rotating = -params.g1 * params.g1 * std::exp(-4.0 * r) * m * m / w + j * w * e2r +
                          0.5 * w * (e2r - 1.0);
  if (frame == Frame::Rotating) return rotating;
  if (!params.omega_c) throw DomainError("lab-frame energy requires omega_c");
  return m * *params.omega_c + rotating;
}

double delta_shift(const ModelParams& params) {
  const double r1 = squeeze_factor(1, params);
  const double w = params.omega_m;
  return params.g1 * params.g1 * std::exp(-4.0 * r1) / w - 0.5 * w * (std::exp(2.0 * r1) - 1.0);
}

double nu_shift(const ModelParams& params) {
  const double r2 = squeeze_factor(2, params);
  const double w = params.omega_m;
  return 4.0 * params.g1 * params.g1 * std::exp(-4.0 * r2) / w -
         0.5 * w * (std::exp(2.0 * r2) - 1.0);
}

EigenData EigenData::compute(const ModelParams& params, int max_index) {
  EigenData d;
  for (int m = 0; m <= kMaxPhotons; ++m) {
    d.energies[m].resize(max_index + 1);
    for (int j = 0; j <= max_index; ++j) d.energies[m][j] = eigen_energy(m, j, params);
  }
  d.delta = delta_shift(params);
  d.nu = nu_shift(params);
  return d;
}

int Truncation::required_index() const { return std::max({fock, j_max, n0_max}); }

ScatteringModel::ScatteringModel(const ModelParams& params, const WavepacketParams& wp,
                                 Truncation trunc)
    : ScatteringModel(params, wp, trunc,
                      std::make_shared<const FCTable>(params, trunc.required_index())) {}

ScatteringModel::ScatteringModel(const ModelParams& params, const WavepacketParams& wp,
                                 Truncation trunc, std::shared_ptr<const FCTable> fc)
    : params_(params), wp_(wp), trunc_(trunc), fc_(std::move(fc)) {
  params_.validate();
  wp_.validate();
  if (trunc_.fock < 0 || trunc_.j_max < 0 || trunc_.n0_max < 0)
    throw DomainError("truncation limits must be non-negative");
  if (!fc_ || fc_->max_index() < trunc_.required_index())
    throw DomainError("FC table does not cover the requested truncation");
  eigen_ = EigenData::compute(params_, fc_->max_index());
  g_norm_ = normalization_g(wp_);
}

ScatteringModel ScatteringModel::with_truncation(Truncation trunc) const {
  return ScatteringModel(params_, wp_, trunc);
}

void ScatteringModel::add_ordering(int n0, int j, double x, double y, double da, double db,
                                   Channels& out) const {
  const int n = trunc_.fock + 1;
  const double w = params_.omega_m;
  const double gam = params_.gamma_c;
  const double eps = wp_.epsilon;
  const auto& o01 = fc_->block(0, 1);
  const auto& o10 = fc_->block(1, 0);
  const auto& o12 = fc_->block(1, 2);
  const auto& o21 = fc_->block(2, 1);
  const auto& e1 = eigen_.energies[1];
  const auto& e2 = eigen_.energies[2];

  const cplx m2 = y - da + (j - n0) * w + kI * eps;
  const cplx m3 = x + y - da - db + (j - n0) * w + 2.0 * kI * eps;

  thread_local std::vector<cplx> lead, chain, mid3, mid4;
  lead.resize(n);
  chain.resize(n);
  mid3.resize(n);
  mid4.resize(n);

  // lead_s = <j|s~(1)> / M1(s); chain_l = <l~(1)|n0> / M4(l)
  cplx single = 0.0;
  for (int s = 0; s < n; ++s) {
    const cplx m1 = y - e1[s] + j * w + 0.5 * kI * gam;
    lead[s] = o01(j, s) / m1;
    single += lead[s] * o10(s, n0);
    const cplx m4 = x + y - da - e1[s] + j * w + kI * (eps + 0.5 * gam);
    chain[s] = o10(s, n0) / m4;
  }
  out.c2 += -kI * gam * single / (m2 * (x - db + kI * eps));

  // Intermediate empty cavity (m = 0, number state s') or two photons (m = 2, s'~(2)).
  for (int sp = 0; sp < n; ++sp) {
    cplx acc0 = 0.0;
    cplx acc2 = 0.0;
    for (int l = 0; l < n; ++l) {
      acc0 += o01(sp, l) * chain[l];
      acc2 += o21(sp, l) * chain[l];
    }
    const cplx m5 = y - da + (j - sp) * w + kI * eps;
    const cplx m6 = x + y + j * w - e2[sp] + kI * gam;
    mid3[sp] = acc0 / m5;
    mid4[sp] = acc2 / m6;
  }
  cplx sum3 = 0.0;
  cplx sum4 = 0.0;
  for (int s = 0; s < n; ++s) {
    cplx t3 = 0.0;
    cplx t4 = 0.0;
    for (int sp = 0; sp < n; ++sp) {
      t3 += o10(s, sp) * mid3[sp];
      t4 += o12(s, sp) * mid4[sp];
    }
    sum3 += lead[s] * t3;
    sum4 += lead[s] * t4;
  }
  out.c3 += -gam * gam * sum3 / m3;
  out.c4 += -2.0 * gam * gam * sum4 / m3;
}

ScatteringModel::Channels ScatteringModel::channels(int n0, int j, double x, double y) const {
  Channels ch{};
  if (j == n0) {
    const double eps = wp_.epsilon;
    ch.c1 = 1.0 / ((x - wp_.delta1 + kI * eps) * (y - wp_.delta2 + kI * eps));
  }
  add_ordering(n0, j, x, y, wp_.delta1, wp_.delta2, ch);
  add_ordering(n0, j, x, y, wp_.delta2, wp_.delta1, ch);
  return ch;
}

AmplitudeBreakdown ScatteringModel::breakdown(int n0, int j, double dp, double dq) const {
  if (n0 < 0 || n0 > trunc_.n0_max) throw DomainError("n0 outside truncation");
  if (j < 0 || j > trunc_.j_max) throw DomainError("j outside truncation");
  const Channels a = channels(n0, j, dp, dq);
  const Channels b = channels(n0, j, dq, dp);
  AmplitudeBreakdown out;
  out.n0 = n0;
  out.j = j;
  out.dp = dp;
  out.dq = dq;
  out.c1 = a.c1;
  out.c2 = a.c2;
  out.c3 = a.c3;
  out.c4 = a.c4;
  out.total = g_norm_ * ((a.c1 + a.c2 + a.c3 + a.c4) + (b.c1 + b.c2 + b.c3 + b.c4)) * kPhaseFactor;
  return out;
}

cplx ScatteringModel::amplitude(int n0, int j, double dp, double dq) const {
  return breakdown(n0, j, dp, dq).total;
}

double ScatteringModel::spectrum_point(double dp, double dq,
                                       const MechanicalInitState& state) const {
  if (state.max_n0() > trunc_.n0_max) throw DomainError("initial state exceeds n0 truncation");
  double total = 0.0;
  for (int j = 0; j <= trunc_.j_max; ++j) {
    if (state.kind == MechanicalInitState::Kind::Pure) {
      cplx sum = 0.0;
      for (int n0 = 0; n0 <= state.max_n0(); ++n0) {
        if (state.amplitudes[n0] == cplx(0.0)) continue;
        sum += state.amplitudes[n0] * amplitude(n0, j, dp, dq);
      }
      total += std::norm(sum);
    } else {
      for (int n0 = 0; n0 <= state.max_n0(); ++n0) {
        if (state.probabilities[n0] == 0.0) continue;
        total += state.probabilities[n0] * std::norm(amplitude(n0, j, dp, dq));
      }
    }
  }
  return total;
}

AmplitudeBreakdown amplitude_breakdown(int n0, int j, double dp, double dq,
                                       const ModelParams& params, const WavepacketParams& wp,
                                       std::shared_ptr<const FCTable> fc, Truncation trunc) {
  return ScatteringModel(params, wp, trunc, std::move(fc)).breakdown(n0, j, dp, dq);
}

TruncationRecord check_truncation(const ScatteringModel& model, const MechanicalInitState& state,
                                  const std::vector<std::pair<double, double>>& points,
                                  double tolerance, double floor_fraction) {
  const ScatteringModel fine = model.with_truncation(model.truncation().doubled());
  std::vector<double> coarse_vals, fine_vals;
  double peak = 0.0;
  for (const auto& [dp, dq] : points) {
    coarse_vals.push_back(model.spectrum_point(dp, dq, state));
    fine_vals.push_back(fine.spectrum_point(dp, dq, state));
    peak = std::max(peak, fine_vals.back());
  }
  TruncationRecord rec;
  rec.trunc = model.truncation();
  rec.checked_points = static_cast<int>(points.size());
  rec.tolerance = tolerance;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double scale = std::max(fine_vals[i], floor_fraction * peak);
    if (scale <= 0.0) continue;
    rec.max_rel_change = std::max(rec.max_rel_change, std::abs(fine_vals[i] - coarse_vals[i]) / scale);
  }
  rec.converged = rec.max_rel_change <= tolerance;
  return rec;
}

double SpectrumGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("axis needs at least one point");
  std::vector<double> axis(n);
  if (n == 1) {
    axis[0] = lo;
    return axis;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) axis[i] = lo + i * step;
  axis.back() = hi;
  return axis;
}

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw DomainError(std::string(name) + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw DomainError(std::string(name) + " axis has non-finite entries");
    if (i > 0 && !(axis[i] > axis[i - 1]))
      throw DomainError(std::string(name) + " axis must be strictly increasing");
  }
}

double point_or_rethrow(const ScatteringModel& model, const MechanicalInitState& state, double dp,
                        double dq) {
  try {
    return model.spectrum_point(dp, dq, state);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "spectrum point (dp=" << dp << ", dq=" << dq << "): " << e.what();
    throw DomainError(msg.str());
  }
}

}  // namespace

SpectrumGrid spectrum_grid(const ScatteringModel& model, const MechanicalInitState& state,
                           const std::vector<double>& p_axis, const std::vector<double>& q_axis,
                           int threads) {
  check_axis(p_axis, "p");
  check_axis(q_axis, "q");
  state.validate();
  SpectrumGrid grid;
  grid.p_axis = p_axis;
  grid.q_axis = q_axis;
  grid.values.assign(p_axis.size() * q_axis.size(), 0.0);
  const bool mirrored = p_axis == q_axis;
  detail::parallel_for(p_axis.size(), threads, [&](std::size_t i) {
    const std::size_t k0 = mirrored ? i : 0;
    for (std::size_t k = k0; k < q_axis.size(); ++k)
      grid.at(i, k) = point_or_rethrow(model, state, p_axis[i], q_axis[k]);
  });
  if (mirrored) {
    for (std::size_t i = 0; i < p_axis.size(); ++i)
      for (std::size_t k = 0; k < i; ++k) grid.at(i, k) = grid.at(k, i);
  }
  return grid;
}

std::vector<std::pair<double, double>> diagonal_spectrum(const ScatteringModel& model,
                                                         const MechanicalInitState& state,
                                                         const std::vector<double>& axis,
                                                         int threads) {
  check_axis(axis, "diagonal");
  state.validate();
  std::vector<std::pair<double, double>> out(axis.size());
  detail::parallel_for(axis.size(), threads, [&](std::size_t i) {
    out[i] = {axis[i], point_or_rethrow(model, state, axis[i], axis[i])};
  });
  return out;
}

}  // namespace optoscatter
