#pragma once

#include <array>
#include <complex>
#include <limits>
#include <vector>

namespace dbdpp {

using Complex = std::complex<double>;

// Potential V on [0, ell) for the half-line problem -phi'' + V phi = lambda phi,
// phi(0) = 1, phi'(0) = 0.
struct PotentialSpec {
  enum class Kind { zero, pwc, table };

  Kind kind = Kind::zero;
  // pwc: jump locations, strictly increasing, with values holding one entry
  // more than breakpoints (value before the first jump first).
  // table: sample abscissae with one value each; linear interpolation,
  // constant extrapolation outside the sampled range.
  std::vector<double> breakpoints;
  std::vector<double> values;
  double ell = std::numeric_limits<double>::infinity();

  void validate() const;
  double operator()(double t) const;
  // Points in (0, b) where V loses smoothness; the integrator restarts there.
  std::vector<double> interior_kinks(double b) const;
};

struct OdeSolution {
  Complex lambda;
  double b = 0;
  Complex phi, dphi;
  double est_error = 0;
};

// States recorded at the requested targets.  Layout per target:
// [phi, phi', w1, w1', w2, w2'] where w_k = d^k phi / d lambda^k, governed by
// w_k'' = (V - lambda) w_k - k w_{k-1} with zero initial data.
struct OdeStates {
  std::vector<std::array<Complex, 6>> at;
  double est_error = 0;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) over [0, max target].
// Targets must be ascending and within [0, ell]; deriv_order in {0, 1, 2}.
OdeStates integrate_schrodinger(const PotentialSpec& v, Complex lambda,
                                const std::vector<double>& targets, double tol,
                                int deriv_order = 0);

OdeSolution solve_schrodinger(const PotentialSpec& v, Complex lambda, double b,
                              double tol = 1e-10);

// Reproducing kernel in integral form,
//   (1/pi) Int_0^b phi_z(t) conj(phi_w(t)) dt,
// by Gauss-Legendre quadrature with quad_n nodes (at least 8).
Complex kernel_integral_form(const PotentialSpec& v, double b, Complex z,
                             Complex w, int quad_n, double tol = 1e-10);

// Same kernel from boundary data,
//   (1/pi) (phi_z(b) conj(phi_w'(b)) - phi_z'(b) conj(phi_w(b))) / (z - conj(w)).
// Indeterminate on the diagonal z = conj(w); the integral form covers it.
Complex kernel_wronskian_form(const PotentialSpec& v, double b, Complex z,
                              Complex w, double tol = 1e-10);

// One-point intensity at real lambda,
//   (1/pi) Int_0^b |phi_lambda|^2 dt / (phi_lambda(b)^2 + phi_lambda'(b)^2).
double intensity_schrodinger(const PotentialSpec& v, double b, double lambda,
                             int quad_n = 64, double tol = 1e-10);

}  // namespace dbdpp
