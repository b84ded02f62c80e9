#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cantisim/errors.hpp"
#include "cantisim/quadrature.hpp"

namespace cantisim {

// Piecewise-constant dimensionless density of the end-loaded beam:
// 1 on [0, 1-lf_hat), 1 + mass_ratio/lf_hat on (1-lf_hat, 1].
struct DensityProfile {
  double lf_hat = 0.0;      // loaded fraction of the span, 0 => uniform beam
  double mass_ratio = 0.0;  // added mass / beam mass

  double step_value() const { return lf_hat > 0 ? 1.0 + mass_ratio / lf_hat : 1.0; }
  double value(double xhat) const { return xhat > 1.0 - lf_hat ? step_value() : 1.0; }
  double integral() const { return 1.0 + mass_ratio; }

  void validate() const {
    if (lf_hat < 0.0 || lf_hat >= 1.0)
      throw ConfigError("density profile: loaded fraction must be in [0, 1)");
    if (mass_ratio < 0.0) throw ConfigError("density profile: mass ratio must be >= 0");
    if (mass_ratio > 0.0 && lf_hat == 0.0)
      throw ConfigError("density profile: nonzero mass ratio needs a loaded segment");
  }
};

namespace detail {

inline double clamped_free_char(double l) { return std::cos(l) + 1.0 / std::cosh(l); }

// Per-mode evaluation data for the stable exponential-pairing form
//   phi = s * [ aScaled*e^{-l(1-x)} + b*e^{-lx} + trig(lx) ].
struct ModeCoeffs {
  double lambda, sigma, a_scaled, b, scale;
};

inline ModeCoeffs mode_coeffs(double lambda) {
  const double s = std::sin(lambda), c = std::cos(lambda);
  const double em = std::exp(-lambda);
  const double ds = 0.5 * (1.0 - em * em) + s * em;  // (sinh+sin)*e^{-lambda}
  const double sigma = (0.5 * (1.0 + em * em) + c * em) / ds;
  const double a_scaled = (s - c - em) / (2.0 * ds);  // A*e^{lambda}
  const double b = 1.0 - a_scaled * em;               // B = 1 - A
  return {lambda, sigma, a_scaled, b, 1.0};
}

inline double eval_mode(const ModeCoeffs& m, double xhat, int deriv) {
  const double lx = m.lambda * xhat;
  const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
  double e_part = m.a_scaled * std::exp(-m.lambda * (1.0 - xhat)) + sign * m.b * std::exp(-lx);
  double t_part;
  switch (deriv % 4) {
    case 0: t_part = -std::cos(lx) + m.sigma * std::sin(lx); break;
    case 1: t_part = std::sin(lx) + m.sigma * std::cos(lx); break;
    case 2: t_part = std::cos(lx) - m.sigma * std::sin(lx); break;
    default: t_part = -std::sin(lx) - m.sigma * std::cos(lx); break;
  }
  return m.scale * std::pow(m.lambda, deriv) * (e_part + t_part);
}

}  // namespace detail

// First M roots of cos(l)*cosh(l) + 1 = 0, ascending. Each root is bracketed
// around the asymptote (2k-1)*pi/2 and polished by bisection on the
// overflow-safe form cos(l) + sech(l).
inline std::vector<double> beam_lambdas(int M) {
  if (M < 1) throw ConfigError("beam basis: need at least one mode");
  std::vector<double> out;
  out.reserve(M);
  for (int k = 1; k <= M; ++k) {
    double lo = (2 * k - 1) * M_PI_2 - 0.45, hi = (2 * k - 1) * M_PI_2 + 0.45;
    if (k == 1) lo = 1.2;  // first root sits at 1.875, asymptote less tight
    double flo = detail::clamped_free_char(lo);
    if (flo * detail::clamped_free_char(hi) > 0.0)
      throw NumericalError("beam basis: root bracket failed for mode " + std::to_string(k));
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (flo * detail::clamped_free_char(mid) <= 0.0)
        hi = mid;
      else
        lo = mid, flo = detail::clamped_free_char(lo);
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

// Clamped-free uniform-beam eigenfunctions, rescaled to unit L2 norm on [0,1].
struct BeamBasis {
  int M = 0;
  std::vector<double> lambda;
  std::vector<double> sigma;

  static BeamBasis build(int M) {
    BeamBasis b;
    b.M = M;
    b.lambda = beam_lambdas(M);
    b.coeffs_.reserve(M);
    for (double l : b.lambda) {
      auto mc = detail::mode_coeffs(l);
      const double nrm = composite_gl(
          [&](double x) {
            const double v = detail::eval_mode(mc, x, 0);
            return v * v;
          },
          0.0, 1.0, panels_for(l, 1.0));
      mc.scale = 1.0 / std::sqrt(nrm);
      b.sigma.push_back(mc.sigma);
      b.coeffs_.push_back(mc);
    }
    return b;
  }

  // k is zero-based; deriv in [0,3].
  double phi(int k, double xhat, int deriv = 0) const {
    if (xhat < 0.0 || xhat > 1.0) throw ConfigError("phi: coordinate outside [0,1]");
    return detail::eval_mode(coeffs_[static_cast<size_t>(k)], xhat, deriv);
  }

 private:
  std::vector<detail::ModeCoeffs> coeffs_;
};

namespace detail {

// Weighted Gram matrix  W_km = integral of w(rho) * phi_k * phi_m over [0,1],
// with the integral split exactly at the density jump.
template <typename WeightFn>
Eigen::MatrixXd weighted_gram(const BeamBasis& basis, const DensityProfile& profile,
                              WeightFn&& weight, int panel_scale = 1) {
  const int M = basis.M;
  const double lmax = basis.lambda.back();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M, M);
  const double split = 1.0 - profile.lf_hat;
  const std::pair<double, double> pieces[2] = {{0.0, split}, {split, 1.0}};
  for (auto [x0, x1] : pieces) {
    if (x1 - x0 <= 0.0) continue;
    const int panels = panels_for(lmax, x1 - x0) * panel_scale;
    const int nodes = panels * 16;
    const double pw = (x1 - x0) / panels;
    Eigen::MatrixXd P(M, nodes);
    Eigen::VectorXd wts(nodes);
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < 16; ++i) {
        const int j = p * 16 + i;
        const double x = x0 + p * pw + 0.5 * pw * (kGL16Nodes[i] + 1.0);
        wts[j] = 0.5 * pw * kGL16Weights[i] * weight(profile.value(x));
        for (int k = 0; k < M; ++k) P(k, j) = basis.phi(k, x);
      }
    W += P * wts.asDiagonal() * P.transpose();
  }
  return W;
}

}  // namespace detail

// Galerkin projection matrix alpha_km = lambda_m^4 * integral(phi_k phi_m / rho).
// panel_scale > 1 refines the quadrature (used by the doubling self-check).
inline Eigen::MatrixXd alpha_matrix(const BeamBasis& basis, const DensityProfile& profile,
                                    int panel_scale = 1) {
  profile.validate();
  Eigen::MatrixXd G = detail::weighted_gram(
      basis, profile, [](double rho) { return 1.0 / rho; }, panel_scale);
  for (int m = 0; m < basis.M; ++m) G.col(m) *= std::pow(basis.lambda[m], 4);
  return G;
}

// Mass-weighted Gram  B_km = integral(rho * phi_k * phi_m).
inline Eigen::MatrixXd mass_gram(const BeamBasis& basis, const DensityProfile& profile) {
  return detail::weighted_gram(basis, profile, [](double rho) { return rho; });
}

struct ModalSolution {
  DensityProfile profile;
  Eigen::VectorXd omega_bar;   // ascending
  Eigen::MatrixXd coeff;       // column n = expansion coefficients c_kn of mode n
  Eigen::MatrixXd mass;        // B matrix, kept for orthogonality diagnostics
  double imag_residual = 0.0;  // largest relative imaginary part seen in the eigensolve
};

// Solve the (non-symmetric) eigenproblem alpha c = omega_bar^2 c and rescale
// each mode to the mass-weighted normalization integral(rho f^2) = integral(rho).
inline ModalSolution solve_modes(const Eigen::MatrixXd& alpha, const BeamBasis& basis,
                                 const DensityProfile& profile) {
  profile.validate();
  const int M = basis.M;
  Eigen::EigenSolver<Eigen::MatrixXd> es(alpha);
  if (es.info() != Eigen::Success) throw NumericalError("modal solve: eigensolver failed");

  double imag_res = 0.0;
  std::vector<int> order(M);
  for (int i = 0; i < M; ++i) order[i] = i;
  const auto& vals = es.eigenvalues();
  for (int i = 0; i < M; ++i) {
    const double re = vals[i].real(), im = vals[i].imag();
    imag_res = std::max(imag_res, std::abs(im) / std::max(std::abs(re), 1e-300));
    if (re <= 0.0) throw NumericalError("modal solve: non-positive squared frequency");
  }
  if (imag_res > 1e-8)
    throw NumericalError("modal solve: complex eigenvalue, relative imaginary part " +
                         std::to_string(imag_res));
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vals[a].real() < vals[b].real(); });

  ModalSolution sol;
  sol.profile = profile;
  sol.imag_residual = imag_res;
  sol.omega_bar.resize(M);
  sol.coeff.resize(M, M);
  sol.mass = mass_gram(basis, profile);
  const double target = profile.integral();
  for (int n = 0; n < M; ++n) {
    sol.omega_bar[n] = std::sqrt(vals[order[n]].real());
    Eigen::VectorXd c = es.eigenvectors().col(order[n]).real();
    const double bnorm = c.dot(sol.mass * c);
    if (bnorm <= 0.0) throw NumericalError("modal solve: degenerate eigenvector");
    c *= std::sqrt(target / bnorm);
    // deterministic sign: positive tip deflection
    double tip = 0.0;
    for (int k = 0; k < M; ++k) tip += c[k] * basis.phi(k, 1.0);
    sol.coeff.col(n) = tip < 0.0 ? Eigen::VectorXd(-c) : c;
  }
  return sol;
}

inline double eval_mode_shape(const ModalSolution& sol, const BeamBasis& basis, int n,
                              double xhat) {
  if (n < 0 || n >= sol.coeff.cols()) throw ConfigError("mode shape: mode index out of range");
  double v = 0.0;
  for (int k = 0; k < basis.M; ++k) v += sol.coeff(k, n) * basis.phi(k, xhat);
  return v;
}

inline std::vector<double> eval_mode_shape(const ModalSolution& sol, const BeamBasis& basis,
                                           int n, const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(eval_mode_shape(sol, basis, n, x));
  return out;
}

// max_n | integral(rho f_n^2)/integral(rho) - 1 |
inline double normalization_residual(const ModalSolution& sol) {
  double worst = 0.0;
  for (int n = 0; n < sol.coeff.cols(); ++n) {
    const double d = sol.coeff.col(n).dot(sol.mass * sol.coeff.col(n));
    worst = std::max(worst, std::abs(d / sol.profile.integral() - 1.0));
  }
  return worst;
}

// Largest mass-weighted correlation |<f_n, f_m>_rho| / sqrt(<f_n,f_n><f_m,f_m>)
// over distinct mode pairs among the first `count` modes.
inline double cross_orthogonality(const ModalSolution& sol, int count) {
  count = std::min<int>(count, static_cast<int>(sol.coeff.cols()));
  double worst = 0.0;
  for (int n = 0; n < count; ++n)
    for (int m = 0; m < n; ++m) {
      const double nn = sol.coeff.col(n).dot(sol.mass * sol.coeff.col(n));
      const double mm = sol.coeff.col(m).dot(sol.mass * sol.coeff.col(m));
      const double nm = sol.coeff.col(n).dot(sol.mass * sol.coeff.col(m));
      worst = std::max(worst, std::abs(nm) / std::sqrt(nn * mm));
    }
  return worst;
}

// omega = omega_bar * (a / l^2) * sqrt(E / (12 rho0))
inline double dimensional_frequency(double omega_bar, double a, double l, double E,
                                    double rho0) {
  if (omega_bar < 0.0) throw ConfigError("dimensional frequency: negative frequency");
  if (a <= 0.0 || l <= 0.0 || E <= 0.0 || rho0 <= 0.0)
    throw ConfigError("dimensional frequency: physical parameters must be positive");
  return omega_bar * (a / (l * l)) * std::sqrt(E / (12.0 * rho0));
}

}  // namespace cantisim
