#include "optoscatter/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace optoscatter {

namespace {

// n! for n <= 170 as doubles; larger values overflow.
const std::array<double, 171>& factorials() {
  static const auto table = [] {
    std::array<double, 171> f{};
    f[0] = 1.0;
    for (std::size_t n = 1; n < f.size(); ++n) f[n] = f[n - 1] * static_cast<double>(n);
    return f;
  }();
  return table;
}

double binomial(int n, int k) {
  const auto& f = factorials();
  return f[n] / (f[k] * f[n - k]);
}

// Generalized Laguerre polynomial L_n^{(a)}(x), a >= 0.
double laguerre(int n, int a, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_index(int s, int j) {
  if (s < 0 || j < 0) throw DomainError("Fock indices must be non-negative");
  if (std::max(s, j) > kMaxClosedFormIndex)
    throw std::range_error("Fock index " + std::to_string(std::max(s, j)) +
                           " exceeds closed-form limit " +
                           std::to_string(kMaxClosedFormIndex));
}

void check_photons(int m) {
  if (m < 0 || m > kMaxPhotons)
    throw DomainError("photon number " + std::to_string(m) + " outside 0.." +
                      std::to_string(kMaxPhotons));
}

// Truncated ladder operator b in a dim-dimensional Fock space.
Eigen::MatrixXd lowering(int dim) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

// S(r_m) D(alpha_m) as exponentials of the truncated generators.
Eigen::MatrixXd eigenbasis_transform(int m, const ModelParams& params, int dim) {
  const double r = squeeze_factor(m, params);
  const double alpha = displacement(m, params);
  const Eigen::MatrixXd b = lowering(dim);
  const Eigen::MatrixXd bd = b.transpose();
  const Eigen::MatrixXd squeeze_gen = 0.5 * r * (b * b - bd * bd);
  const Eigen::MatrixXd disp_gen = alpha * (bd - b);
  const Eigen::MatrixXd squeeze = squeeze_gen.exp();
  const Eigen::MatrixXd disp = disp_gen.exp();
  return squeeze * disp;
}

}  // namespace

double ModelParams::xi() const { return std::sqrt(gamma_c / (2.0 * std::numbers::pi)); }

void ModelParams::validate() const {
  if (!(omega_m > 0.0) || !std::isfinite(omega_m))
    throw DomainError("omega_m must be positive and finite");
  if (!(gamma_c > 0.0) || !std::isfinite(gamma_c))
    throw DomainError("gamma_c must be positive and finite");
  if (!std::isfinite(g1) || !std::isfinite(g2)) throw DomainError("couplings must be finite");
  for (int m = 0; m <= kMaxPhotons; ++m) {
    if (!(1.0 + 4.0 * g2 * m / omega_m > 0.0))
      throw DomainError("1 + 4 g2 m / omega_m must be positive for m = " + std::to_string(m));
  }
}

double squeeze_factor(int m, const ModelParams& params) {
  if (m < 0) throw DomainError("photon number must be non-negative");
  const double arg = 4.0 * params.g2 * m / params.omega_m + 1.0;
  if (!(arg > 0.0)) throw DomainError("squeezing undefined: 1 + 4 g2 m / omega_m <= 0");
  return std::log(arg) / 4.0;
}

double displacement(int m, const ModelParams& params) {
  const double r = squeeze_factor(m, params);
  return -params.g1 * std::exp(-3.0 * r) * m / params.omega_m;
}

SqueezeDisplace SqueezeDisplace::for_photons(int m, const ModelParams& params) {
  SqueezeDisplace sd;
  sd.m = m;
  sd.r = squeeze_factor(m, params);
  sd.alpha = displacement(m, params);
  sd.R = std::abs(sd.r);
  sd.theta = sd.r < 0.0 ? std::numbers::pi : 0.0;
  sd.mu = std::cosh(sd.R);
  sd.nu_s = std::polar(std::sinh(sd.R), -sd.theta);
  return sd;
}

cplx hermite_complex(int n, cplx z) {
  if (n < 0) throw DomainError("Hermite degree must be non-negative");
  if (n == 0) return 1.0;
  cplx prev = 1.0;
  cplx cur = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    const cplx next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx displaced_number_overlap(int s, int j, cplx alpha) {
  check_index(s, j);
  const auto& f = factorials();
  const double x = std::norm(alpha);
  const double envelope = std::exp(-0.5 * x);
  if (s >= j) {
    return std::sqrt(f[j] / f[s]) * std::pow(alpha, s - j) * envelope * laguerre(j, s - j, x);
  }
  return std::sqrt(f[s] / f[j]) * std::pow(-std::conj(alpha), j - s) * envelope *
         laguerre(s, j - s, x);
}

cplx overlap_closed_form(int s, int j, double r, cplx alpha) {
  check_index(s, j);
  if (std::abs(r) < kSmallSqueeze) return displaced_number_overlap(s, j, alpha);

  const double R = std::abs(r);
  const double theta = r < 0.0 ? std::numbers::pi : 0.0;
  const double mu = std::cosh(R);
  const cplx nu = std::polar(std::sinh(R), -theta);

  // Principal roots; c1 = sqrt(2 mu nu), c2 = sqrt(-2 mu nu*) on the same
  // sheets as w1 = (nu / 2mu)^{1/2} and w2 = (-nu* / 2mu)^{1/2}.
  const cplx w1 = std::sqrt(nu / (2.0 * mu));
  const cplx w2 = std::sqrt(-std::conj(nu) / (2.0 * mu));
  const cplx c1 = 2.0 * mu * w1;
  const cplx c2 = 2.0 * mu * w2;

  const auto& f = factorials();
  const cplx arg1 = alpha / c1;
  const cplx arg2 = (alpha * std::conj(nu) - std::conj(alpha) * mu) / c2;

  cplx sum = 0.0;
  for (int k = 0; k <= std::min(j, s); ++k) {
    const double coeff = binomial(j, k) * std::pow(2.0, k) * f[s] / f[s - k];
    sum += coeff * std::pow(c1, -k) * hermite_complex(s - k, arg1) * std::pow(w2, j - k) *
           hermite_complex(j - k, arg2);
  }
  const cplx gauss = std::exp(-0.5 * std::norm(alpha) + std::conj(nu) * alpha * alpha / (2.0 * mu));
  return sum * std::pow(w1, s) * gauss / std::sqrt(f[s] * f[j] * mu);
}

RelativeTransform relative_transform(int m, int n, const ModelParams& params) {
  check_photons(m);
  check_photons(n);
  const double rm = squeeze_factor(m, params);
  const double rn = squeeze_factor(n, params);
  const double dr = rn - rm;
  return {dr, displacement(n, params) - displacement(m, params) * std::exp(dr)};
}

cplx fc_overlap(int m, int j, int n, int s, const ModelParams& params) {
  const auto t = relative_transform(m, n, params);
  return overlap_closed_form(j, s, t.r_eff, t.alpha_eff);
}

int default_oracle_dim(int max_index) { return 4 * max_index + 40; }

Eigen::MatrixXcd oracle_overlap_block(int m, int n, int size, const ModelParams& params,
                                      int dim) {
  check_photons(m);
  check_photons(n);
  if (size > dim) throw DomainError("oracle block larger than Fock dimension");
  const Eigen::MatrixXd um = eigenbasis_transform(m, params, dim);
  const Eigen::MatrixXd un = eigenbasis_transform(n, params, dim);
  // Real generators make both transforms orthogonal, so the adjoint is the transpose.
  const Eigen::MatrixXd prod = um.transpose() * un;
  return prod.topLeftCorner(size, size).cast<cplx>();
}

cplx oracle_overlap(int m, int j, int n, int s, const ModelParams& params, int dim) {
  if (j < 0 || s < 0) throw DomainError("Fock indices must be non-negative");
  if (std::max(j, s) >= dim) throw DomainError("oracle dimension too small for indices");
  return oracle_overlap_block(m, n, std::max(j, s) + 1, params, dim)(j, s);
}

cplx oracle_overlap_converged(int m, int j, int n, int s, const ModelParams& params, double tol,
                              int max_dim) {
  int dim = default_oracle_dim(std::max(j, s));
  cplx prev = oracle_overlap(m, j, n, s, params, dim);
  while (2 * dim <= max_dim) {
    dim *= 2;
    const cplx cur = oracle_overlap(m, j, n, s, params, dim);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw ConvergenceError("oracle overlap did not converge by dimension " +
                         std::to_string(max_dim));
}

FCTable::FCTable(const ModelParams& params, int max_index)
    : params_(params), max_index_(max_index) {
  params.validate();
  if (max_index < 0 || max_index > kMaxClosedFormIndex)
    throw DomainError("FCTable max_index out of range");
  const int size = max_index + 1;
  for (int m = 0; m <= kMaxPhotons; ++m) {
    for (int n = m; n <= kMaxPhotons; ++n) {
      Eigen::MatrixXcd block(size, size);
      if (m == n) {
        block.setIdentity();
      } else {
        const auto t = relative_transform(m, n, params);
        for (int j = 0; j < size; ++j)
          for (int s = 0; s < size; ++s)
            block(j, s) = overlap_closed_form(j, s, t.r_eff, t.alpha_eff);
      }
      blocks_[n][m] = block.adjoint();
      blocks_[m][n] = std::move(block);
    }
  }
}

}  // namespace optoscatter
