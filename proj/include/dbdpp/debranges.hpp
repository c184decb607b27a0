#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "dbdpp/schrodinger.hpp"

namespace dbdpp {

// Phase function samples along a grid.  phi is continuous, nondecreasing,
// anchored at phi[0] = -arg E(grid[0]) in (-pi, pi]; derivative[i] equals
// pi * intensity(grid[i]) and is strictly positive.
struct PhaseTable {
  std::vector<double> grid;
  std::vector<double> phi;
  std::vector<double> derivative;
};

// Result of the tail-extrapolated integral of phi'(x)/(1+x^2).
struct ConditionResult {
  double value = 0;
  bool converged = false;
};

// An entire function E with |E(z)| > |E#(z)| on the upper half-plane,
// E#(z) = conj(E(conj z)).  Three constructions:
//   polynomial   E(z) = prod (z + a_i), Im a_i > 0
//   exponential  E(z) = exp(-i a z), a > 0
//   schrodinger  E(z) = phi_z(b) + i phi'_z(b) from -phi'' + V phi = z phi
// The normalized kernel value and the intensity are evaluated through
// unit-modulus data E/|E|, so polynomial degree ~100 cannot overflow.
class DeBrangesFunction {
 public:
  enum class Variant { polynomial, exponential, schrodinger };

  static DeBrangesFunction polynomial(std::vector<Complex> roots);
  static DeBrangesFunction exponential(double a);
  static DeBrangesFunction schrodinger(PotentialSpec v, double b,
                                       double tol = 1e-10);

  Variant variant() const { return variant_; }
  const std::vector<Complex>& roots() const { return roots_; }
  double exponent() const { return a_; }
  const PotentialSpec& potential() const { return potential_; }
  double endpoint() const { return b_; }
  double solver_tolerance() const { return tol_; }

  // E(z); may overflow to inf for extreme polynomial inputs, by design.
  Complex value(Complex z) const;
  // E#(z) = conj(E(conj z)).
  Complex sharp(Complex z) const;
  // A = (E + E#)/2, B = (E - E#)/(2i); both real on the real axis.
  std::pair<Complex, Complex> ab_values(Complex z) const;
  // E'(z)/E(z).
  Complex log_derivative(Complex z) const;
  // E(x)/|E(x)| on the real axis, overflow-safe; RealZeroError when |E(x)|
  // underflows (the kernel is undefined at real zeros of E).
  Complex unit_value(double x) const;
  // Diagonal of the normalized kernel, -Im(E'/E)/pi; strictly positive.
  double intensity(double x) const;
  // Normalized kernel (A(x)B(y) - B(x)A(y)) / (pi (x-y) |E(x)||E(y)|),
  // evaluated symmetrically; near the diagonal it switches to the phase
  // increment form sin(dphi)/(pi (y-x)) and kernel(x,x) = intensity(x).
  double kernel_value(double x, double y) const;

  // Unwrapped phase along a strictly increasing grid.  UnwrapError when the
  // predicted per-step increment reaches pi/2 (grid too coarse to resolve
  // the branch).
  PhaseTable phase(const std::vector<double>& grid) const;

  // Integral of pi*intensity(x)/(1+x^2) over [-T, T] with T doubling from 1
  // up to tail_bound, Richardson tail extrapolation, 32-point panels of unit
  // width.  converged when successive extrapolants differ by < quad_tolerance.
  ConditionResult check_condition(double tail_bound,
                                  double quad_tolerance) const;

  // Pointwise sufficient conditions |A(x)| <= C |x|^{-1/2+eps} |E(x)| for
  // |x| < R and |A(x)| <= C |x|^{1/2-eps} |E(x)| for |x| >= R (same for B),
  // checked on the grid through unit-modulus values.
  bool rigidity_condition_check(double R, double eps, double C,
                                const std::vector<double>& grid) const;

 private:
  DeBrangesFunction() = default;

  struct EvalCache;

  Variant variant_ = Variant::exponential;
  std::vector<Complex> roots_;
  double a_ = 0;
  PotentialSpec potential_;
  double b_ = 0;
  double tol_ = 0;
  std::shared_ptr<EvalCache> cache_;  // schrodinger memo; shared across copies

  std::pair<Complex, Complex> value_and_derivative(Complex z) const;
};

}  // namespace dbdpp
