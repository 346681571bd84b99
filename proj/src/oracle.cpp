#include "optoscatter/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace optoscatter {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::numbers::sqrt2;

// Flat view of the state vector: [cavity2 | cavity1 | pairs].
struct Layout {
  int nb1 = 0;
  int n = 0;
  std::size_t n_pairs = 0;
  std::size_t off_b = 0;
  std::size_t off_c = 0;
  std::size_t size = 0;

  Layout(int n_b, int n_modes)
      : nb1(n_b + 1),
        n(n_modes),
        n_pairs(static_cast<std::size_t>(n_modes) * (n_modes + 1) / 2),
        off_b(nb1),
        off_c(nb1 + static_cast<std::size_t>(nb1) * n_modes),
        size(off_c + nb1 * n_pairs) {}
};

std::vector<cplx> pack(const OracleState& s, const Layout& lay) {
  std::vector<cplx> y(lay.size);
  std::copy(s.cavity2.begin(), s.cavity2.end(), y.begin());
  std::copy(s.cavity1.begin(), s.cavity1.end(), y.begin() + lay.off_b);
  std::copy(s.pairs.begin(), s.pairs.end(), y.begin() + lay.off_c);
  return y;
}

void unpack(const std::vector<cplx>& y, const Layout& lay, OracleState& s) {
  std::copy(y.begin(), y.begin() + lay.off_b, s.cavity2.begin());
  std::copy(y.begin() + lay.off_b, y.begin() + lay.off_c, s.cavity1.begin());
  std::copy(y.begin() + lay.off_c, y.end(), s.pairs.begin());
}

double squared_norm(const std::vector<cplx>& y) {
  double acc = 0.0;
  for (const auto& v : y) acc += std::norm(v);
  return acc;
}

// Off-diagonal couplings of the amplitude equations, i.e. d/dt y without the
// energy terms.
class Coupling {
public:
  Coupling(const ModelParams& params, const FCTable& fc, const BathGrid& bath, const Layout& lay,
           int threads)
      : lay_(lay), g_(bath.coupling), threads_(threads) {
    const int nb1 = lay.nb1;
    if (fc.max_index() < nb1 - 1) throw DomainError("FC table does not cover the oracle basis");
    (void)params;
    o01_ = fc.block(0, 1).topLeftCorner(nb1, nb1);
    o10_ = fc.block(1, 0).topLeftCorner(nb1, nb1);
    o12_ = fc.block(1, 2).topLeftCorner(nb1, nb1);
    o21_ = fc.block(2, 1).topLeftCorner(nb1, nb1);
    x_.assign(static_cast<std::size_t>(nb1) * lay.n, 0.0);
    rows_.assign(static_cast<std::size_t>(nb1) * lay.n, 0.0);
  }

  void operator()(const std::vector<cplx>& y, std::vector<cplx>& dy) {
    const int nb1 = lay_.nb1;
    const int n = lay_.n;
    const cplx* a = y.data();
    const cplx* b = y.data() + lay_.off_b;
    const cplx* c = y.data() + lay_.off_c;
    cplx* da = dy.data();
    cplx* db = dy.data() + lay_.off_b;
    cplx* dc = dy.data() + lay_.off_c;

    // x[j, k] = sum_s <j|s~(1)> B[s, k]
    for (int j = 0; j < nb1; ++j) {
      cplx* xr = &x_[static_cast<std::size_t>(j) * n];
      std::fill(xr, xr + n, cplx(0.0));
      for (int s = 0; s < nb1; ++s) {
        const cplx w = o01_(j, s);
        const cplx* br = b + static_cast<std::size_t>(s) * n;
        for (int k = 0; k < n; ++k) xr[k] += w * br[k];
      }
    }

    // Pair derivatives and row sums rows[s, k] = sqrt(2) * sum_p phi_s(p, k),
    // where phi is the symmetric pair wavefunction.
    detail::parallel_for(nb1, threads_, [&](std::size_t j) {
      const cplx* cj = c + j * lay_.n_pairs;
      cplx* dcj = dc + j * lay_.n_pairs;
      const cplx* xr = &x_[j * n];
      cplx* rr = &rows_[j * n];
      std::fill(rr, rr + n, cplx(0.0));
      std::size_t idx = 0;
      for (int p = 0; p < n; ++p) {
        const cplx xp = xr[p];
        cplx row_p = 0.0;
        for (int q = 0; q < p; ++q, ++idx) {
          const cplx v = cj[idx];
          row_p += v;
          rr[q] += v;
          dcj[idx] = -kI * g_ * (xp + xr[q]);
        }
        const cplx v = cj[idx];
        rr[p] += row_p + kSqrt2 * v;
        dcj[idx] = -kI * kSqrt2 * g_ * xp;
        ++idx;
      }
    });

    // Cavity sums.
    std::vector<cplx> b_total(nb1, 0.0);
    for (int s = 0; s < nb1; ++s) {
      const cplx* br = b + static_cast<std::size_t>(s) * n;
      for (int k = 0; k < n; ++k) b_total[s] += br[k];
    }
    for (int j = 0; j < nb1; ++j) {
      cplx acc = 0.0;
      for (int s = 0; s < nb1; ++s) acc += o21_(j, s) * b_total[s];
      da[j] = -kI * kSqrt2 * g_ * acc;
    }
    for (int j = 0; j < nb1; ++j) {
      cplx from_a = 0.0;
      for (int s = 0; s < nb1; ++s) from_a += o12_(j, s) * a[s];
      cplx* dbr = db + static_cast<std::size_t>(j) * n;
      for (int k = 0; k < n; ++k) dbr[k] = kSqrt2 * from_a;
      for (int s = 0; s < nb1; ++s) {
        const cplx w = o10_(j, s);
        const cplx* rr = &rows_[static_cast<std::size_t>(s) * n];
        for (int k = 0; k < n; ++k) dbr[k] += w * rr[k];
      }
      for (int k = 0; k < n; ++k) dbr[k] *= -kI * g_;
    }
  }

private:
  Layout lay_;
  double g_;
  int threads_;
  Eigen::MatrixXcd o01_, o10_, o12_, o21_;
  std::vector<cplx> x_, rows_;
};

}  // namespace

BathGrid BathGrid::uniform(double half_width, int n_modes, double gamma_c) {
  if (!(half_width > 0.0)) throw DomainError("bath half-width must be positive");
  if (n_modes < 3) throw DomainError("bath needs at least three modes");
  if (!(gamma_c > 0.0)) throw DomainError("gamma_c must be positive");
  BathGrid bath;
  bath.detunings = linspace(-half_width, half_width, n_modes);
  bath.spacing = 2.0 * half_width / (n_modes - 1);
  bath.coupling = std::sqrt(gamma_c * bath.spacing / (2.0 * std::numbers::pi));
  return bath;
}

double BathGrid::golden_rule_rate() const {
  return 2.0 * std::numbers::pi * coupling * coupling / spacing;
}

double BathGrid::recurrence_time() const { return 2.0 * std::numbers::pi / spacing; }

double OracleState::norm() const {
  double acc = 0.0;
  for (const auto& v : cavity2) acc += std::norm(v);
  for (const auto& v : cavity1) acc += std::norm(v);
  for (const auto& v : pairs) acc += std::norm(v);
  return acc;
}

double OracleState::intracavity_population() const {
  double acc = 0.0;
  for (const auto& v : cavity2) acc += std::norm(v);
  for (const auto& v : cavity1) acc += std::norm(v);
  return acc;
}

OracleState initialize(const WavepacketParams& wp, int n0, int n_b, const BathGrid& bath,
                       double min_band_fraction, double arrival_delay) {
  wp.validate();
  if (!(arrival_delay >= 0.0)) throw DomainError("arrival delay must be non-negative");
  if (n_b < 0 || n0 < 0 || n0 > n_b) throw DomainError("initial phonon number outside oracle basis");
  OracleState s;
  s.n_b = n_b;
  s.n_modes = bath.n_modes();
  s.cavity2.assign(n_b + 1, 0.0);
  s.cavity1.assign(static_cast<std::size_t>(n_b + 1) * s.n_modes, 0.0);
  s.pairs.assign((n_b + 1) * s.n_pairs(), 0.0);

  const double g = normalization_g(wp);
  const double d = bath.spacing;
  auto lorentz = [&](double x, double center) { return 1.0 / (x - center + kI * wp.epsilon); };
  double norm = 0.0;
  for (int p = 0; p < s.n_modes; ++p) {
    const double dp = bath.detunings[p];
    for (int q = 0; q <= p; ++q) {
      const double dq = bath.detunings[q];
      const cplx amp = g * (lorentz(dp, wp.delta1) * lorentz(dq, wp.delta2) +
                            lorentz(dp, wp.delta2) * lorentz(dq, wp.delta1));
      const cplx phase = std::exp(kI * (dp + dq) * arrival_delay);
      const cplx stored = (p == q ? amp * d / kSqrt2 : amp * d) * phase;
      s.pair(n0, p, q) = stored;
      norm += std::norm(stored);
    }
  }
  if (norm < min_band_fraction) {
    std::ostringstream msg;
    msg << "bath band holds only " << norm << " of the wavepacket norm (need "
        << min_band_fraction << ")";
    throw DomainError(msg.str());
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : s.pairs) v *= scale;
  s.initial_norm = norm;
  return s;
}

OracleState evolve(OracleState state, const ModelParams& params, const FCTable& fc,
                   const BathGrid& bath, double t_final, const OracleOptions& opts) {
  params.validate();
  if (!(opts.dt > 0.0)) throw DomainError("time step must be positive");
  if (bath.n_modes() != state.n_modes) throw DomainError("state and bath disagree on mode count");
  if (t_final < state.time) throw DomainError("t_final lies before the current time");
  const int steps = static_cast<int>(std::ceil((t_final - state.time) / opts.dt - 1e-9));
  if (steps == 0) return state;
  const double h = (t_final - state.time) / steps;

  const Layout lay(state.n_b, state.n_modes);
  const EigenData eig = EigenData::compute(params, state.n_b);
  const double w = params.omega_m;

  // Half-step propagators exp(-i E h / 2) of the diagonal energies.
  std::vector<cplx> half(lay.size);
  for (int j = 0; j < lay.nb1; ++j) half[j] = std::exp(-kI * eig(2, j) * (0.5 * h));
  for (int j = 0; j < lay.nb1; ++j)
    for (int k = 0; k < lay.n; ++k)
      half[lay.off_b + static_cast<std::size_t>(j) * lay.n + k] =
          std::exp(-kI * (eig(1, j) + bath.detunings[k]) * (0.5 * h));
  {
    std::vector<cplx> mode_phase(lay.n);
    for (int k = 0; k < lay.n; ++k) mode_phase[k] = std::exp(-kI * bath.detunings[k] * (0.5 * h));
    for (int j = 0; j < lay.nb1; ++j) {
      const cplx pj = std::exp(-kI * (j * w) * (0.5 * h));
      std::size_t idx = lay.off_c + j * lay.n_pairs;
      for (int p = 0; p < lay.n; ++p)
        for (int q = 0; q <= p; ++q) half[idx++] = pj * mode_phase[p] * mode_phase[q];
    }
  }

  Coupling coupling(params, fc, bath, lay, opts.threads);
  std::vector<cplx> y = pack(state, lay);
  std::vector<cplx> k(lay.size), acc(lay.size), tmp(lay.size);
  const std::size_t size = lay.size;
  const double norm0 = squared_norm(y);

  for (int step = 0; step < steps; ++step) {
    coupling(y, k);
    for (std::size_t i = 0; i < size; ++i) {
      acc[i] = half[i] * (y[i] + (h / 6.0) * k[i]);
      tmp[i] = half[i] * (y[i] + (0.5 * h) * k[i]);
    }
    coupling(tmp, k);
    for (std::size_t i = 0; i < size; ++i) {
      acc[i] += (h / 3.0) * k[i];
      tmp[i] = half[i] * y[i] + (0.5 * h) * k[i];
    }
    coupling(tmp, k);
    for (std::size_t i = 0; i < size; ++i) {
      acc[i] += (h / 3.0) * k[i];
      tmp[i] = half[i] * (half[i] * y[i] + h * k[i]);
    }
    coupling(tmp, k);
    for (std::size_t i = 0; i < size; ++i) y[i] = half[i] * acc[i] + (h / 6.0) * k[i];

    if ((step + 1) % 200 == 0 || step + 1 == steps) {
      const double drift = std::abs(squared_norm(y) - norm0);
      if (drift > opts.norm_tolerance) {
        std::ostringstream msg;
        msg << "norm drifted by " << drift << " at t = " << state.time + (step + 1) * h
            << " with dt = " << h << "; reduce the time step";
        throw ConvergenceError(msg.str());
      }
    }
  }
  unpack(y, lay, state);
  state.time = t_final;
  return state;
}

SpectrumGrid extract_spectrum(const OracleState& state, const BathGrid& bath,
                              const std::vector<int>& mode_indices) {
  SpectrumGrid grid;
  grid.source = "time-domain";
  const std::size_t m = mode_indices.size();
  for (int idx : mode_indices) {
    if (idx < 0 || idx >= state.n_modes) throw DomainError("mode index outside bath");
    grid.p_axis.push_back(bath.detunings[idx]);
  }
  grid.q_axis = grid.p_axis;
  grid.values.assign(m * m, 0.0);
  const double inv_area = state.initial_norm / (bath.spacing * bath.spacing);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const int p = std::max(mode_indices[a], mode_indices[b]);
      const int q = std::min(mode_indices[a], mode_indices[b]);
      double acc = 0.0;
      for (int j = 0; j <= state.n_b; ++j) acc += std::norm(state.pair(j, p, q));
      // Diagonal entries hold C dD / sqrt(2).
      const double value = (p == q ? 2.0 : 1.0) * acc * inv_area;
      grid.at(a, b) = value;
      grid.at(b, a) = value;
    }
  }
  return grid;
}

SpectrumGrid extract_spectrum(const OracleState& state, const BathGrid& bath) {
  std::vector<int> all(state.n_modes);
  for (int k = 0; k < state.n_modes; ++k) all[k] = k;
  return extract_spectrum(state, bath, all);
}

OracleComparison compare_to_analytic(const SpectrumGrid& oracle, const ScatteringModel& model,
                                     const MechanicalInitState& state, int threads) {
  const SpectrumGrid analytic = spectrum_grid(model, state, oracle.p_axis, oracle.q_axis, threads);
  double diff2 = 0.0, ref2 = 0.0, diff_max = 0.0;
  for (std::size_t i = 0; i < analytic.values.size(); ++i) {
    const double d = oracle.values[i] - analytic.values[i];
    diff2 += d * d;
    ref2 += analytic.values[i] * analytic.values[i];
    diff_max = std::max(diff_max, std::abs(d));
  }
  OracleComparison cmp;
  cmp.rel_l2 = std::sqrt(diff2 / ref2);
  cmp.rel_linf = diff_max / analytic.max_value();
  cmp.points = static_cast<int>(analytic.values.size());
  return cmp;
}

std::vector<int> select_modes(const BathGrid& bath, double lo, double hi, int n) {
  std::vector<int> out;
  for (double target : linspace(lo, hi, n)) {
    const double pos = (target - bath.detunings.front()) / bath.spacing;
    const int idx = std::clamp(static_cast<int>(std::lround(pos)), 0, bath.n_modes() - 1);
    if (out.empty() || idx > out.back()) out.push_back(idx);
  }
  return out;
}

}  // namespace optoscatter
