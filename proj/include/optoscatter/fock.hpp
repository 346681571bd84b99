#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "optoscatter/model.hpp"

namespace optoscatter {

using cplx = std::complex<double>;

/// Squeezing factor r_m = ln(1 + 4 g2 m / omega_m) / 4 of the mechanical
/// eigenbasis with m photons in the cavity.
double squeeze_factor(int m, const ModelParams& params);

/// Displacement alpha_m = -g1 exp(-3 r_m) m / omega_m.
double displacement(int m, const ModelParams& params);

/// Squeeze and displacement of the m-photon mechanical eigenbasis
/// |j~(m)> = S(r) D(alpha) |j>, with the polar form r = R e^{i theta}.
struct SqueezeDisplace {
  int m = 0;
  double r = 0.0;
  double alpha = 0.0;
  double mu = 1.0;           // cosh R
  cplx nu_s{0.0, 0.0};       // e^{-i theta} sinh R
  double R = 0.0;
  double theta = 0.0;

  static SqueezeDisplace for_photons(int m, const ModelParams& params);
};

/// Physicists' Hermite polynomial H_n(z) by the three-term recurrence.
cplx hermite_complex(int n, cplx z);

/// Below this |r| the closed form is replaced by the displaced number-state
/// expression; the closed form divides by sinh R.
inline constexpr double kSmallSqueeze = 1e-8;

/// Quantum numbers beyond this overflow the factorials in the closed form.
inline constexpr int kMaxClosedFormIndex = 150;

/// <s| S(r) D(alpha) |j> for S(r) = exp[(r* b^2 - r b^dag^2)/2] and
/// D(alpha) = exp[alpha b^dag - alpha* b].
///
/// For |r| >= kSmallSqueeze this is the Hermite-polynomial closed form with
/// mu = cosh R and nu_s = e^{-i theta} sinh R. The fractional powers
/// (nu_s/2mu)^{s/2}, (-nu_s*/2mu)^{(j-k)/2} and sqrt(2 mu nu_s) are all taken
/// on the principal branch; integer powers of one principal square root are
/// used so that every half-power of the same base sits on the same sheet.
cplx overlap_closed_form(int s, int j, double r, cplx alpha);

/// <s| D(alpha) |j> via associated Laguerre polynomials.
cplx displaced_number_overlap(int s, int j, cplx alpha);

/// Effective squeeze and displacement such that
/// <j~(m)|s~(n)> = <j| S(r_eff) D(alpha_eff) |s>.
struct RelativeTransform {
  double r_eff = 0.0;
  double alpha_eff = 0.0;
};
RelativeTransform relative_transform(int m, int n, const ModelParams& params);

/// Generalized Franck-Condon factor <j~(m)|s~(n)>.
cplx fc_overlap(int m, int j, int n, int s, const ModelParams& params);

/// Smallest oracle dimension used for indices up to max_index.
int default_oracle_dim(int max_index);

/// Independent check of fc_overlap: builds S(r_m), D(alpha_m) as matrix
/// exponentials of truncated ladder-operator generators in a dim-dimensional
/// Fock space and returns the (j, s) element of
/// D(alpha_m)^dag S(r_m)^dag S(r_n) D(alpha_n).
cplx oracle_overlap(int m, int j, int n, int s, const ModelParams& params, int dim);

/// Dense block of oracle overlaps <j~(m)|s~(n)> for j, s < size, computed at
/// fixed dimension dim (no convergence loop).
Eigen::MatrixXcd oracle_overlap_block(int m, int n, int size, const ModelParams& params,
                                      int dim);

/// oracle_overlap with dimension doubling: starts at default_oracle_dim and
/// doubles until the element moves by less than tol. Throws ConvergenceError
/// if that does not happen by max_dim.
cplx oracle_overlap_converged(int m, int j, int n, int s, const ModelParams& params,
                              double tol = 1e-10, int max_dim = 1024);

/// Cached Franck-Condon factors for photon numbers 0..2 and Fock indices
/// 0..max_index. Immutable once built; safe to share between threads.
class FCTable {
public:
  FCTable() = default;
  FCTable(const ModelParams& params, int max_index);

  int max_index() const { return max_index_; }
  const ModelParams& params() const { return params_; }

  /// <j~(m)|s~(n)>.
  cplx operator()(int m, int j, int n, int s) const { return blocks_[m][n](j, s); }

  /// Matrix with entries (j, s) = <j~(m)|s~(n)>.
  const Eigen::MatrixXcd& block(int m, int n) const { return blocks_[m][n]; }

private:
  ModelParams params_;
  int max_index_ = -1;
  Eigen::MatrixXcd blocks_[kMaxPhotons + 1][kMaxPhotons + 1];
};

}  // namespace optoscatter
