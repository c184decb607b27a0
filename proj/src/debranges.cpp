#include "dbdpp/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "dbdpp/errors.hpp"
#include "dbdpp/quadrature.hpp"

namespace dbdpp {

namespace {

constexpr double kPi = std::numbers::pi;
// log(1e-300): below this the product |E(x)| has underflowed past any
// meaningful kernel value and the point counts as a real zero.
constexpr double kLogZero = -690.0;

const QuadratureGrid& unit_rule_32() {
  static const QuadratureGrid g = [] {
    QuadratureGrid r;
    r.lo = -1;
    r.hi = 1;
    gauss_legendre(32, r.nodes, r.weights);
    return r;
  }();
  return g;
}

const QuadratureGrid& unit_rule_4() {
  static const QuadratureGrid g = [] {
    QuadratureGrid r;
    r.lo = -1;
    r.hi = 1;
    gauss_legendre(4, r.nodes, r.weights);
    return r;
  }();
  return g;
}

}  // namespace

struct DeBrangesFunction::EvalCache {
  std::mutex m;
  std::map<std::pair<double, double>, std::pair<Complex, Complex>> memo;
};

DeBrangesFunction DeBrangesFunction::polynomial(std::vector<Complex> roots) {
  if (roots.empty())
    throw ConfigError("polynomial: needs at least one root");
  for (const Complex& a : roots) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw ConfigError("polynomial: roots must be finite");
    if (!(a.imag() > 0))
      throw ConfigError("polynomial: roots must have positive imaginary part");
  }
  DeBrangesFunction f;
  f.variant_ = Variant::polynomial;
  f.roots_ = std::move(roots);
  return f;
}

DeBrangesFunction DeBrangesFunction::exponential(double a) {
  if (!std::isfinite(a) || !(a > 0))
    throw ConfigError("exponential: a must be positive");
  DeBrangesFunction f;
  f.variant_ = Variant::exponential;
  f.a_ = a;
  return f;
}

DeBrangesFunction DeBrangesFunction::schrodinger(PotentialSpec v, double b,
                                                 double tol) {
  v.validate();
  if (!(b > 0)) throw ConfigError("schrodinger: b must be positive");
  if (b > v.ell) throw ConfigError("schrodinger: b exceeds ell");
  if (!(tol > 0) || tol > 1e-2)
    throw ConfigError("schrodinger: tol must lie in (0, 1e-2]");
  DeBrangesFunction f;
  f.variant_ = Variant::schrodinger;
  f.potential_ = std::move(v);
  f.b_ = b;
  f.tol_ = tol;
  f.cache_ = std::make_shared<EvalCache>();
  // construction-time sanity: strictly larger modulus than E# above R
  const Complex probes[] = {{0.0, 0.5}, {0.0, 1.0}, {0.0, 2.0},
                            {1.0, 1.0}, {-1.0, 1.0}, {0.3, 0.7}};
  for (Complex z : probes) {
    const double e = std::abs(f.value(z));
    const double es = std::abs(f.sharp(z));
    if (!(es < e * (1.0 + 1e-8)) || !std::isfinite(e))
      throw StructureViolation(
          "schrodinger: |E| > |E#| failed on the upper half-plane "
          "(solver inaccuracy or invalid potential)");
  }
  return f;
}

std::pair<Complex, Complex> DeBrangesFunction::value_and_derivative(
    Complex z) const {
  const std::pair<double, double> key{z.real(), z.imag()};
  std::lock_guard<std::mutex> lock(cache_->m);
  auto it = cache_->memo.find(key);
  if (it != cache_->memo.end()) return it->second;
  const auto st = integrate_schrodinger(potential_, z, {b_}, tol_, 1);
  const Complex i{0.0, 1.0};
  const Complex e = st.at[0][0] + i * st.at[0][1];
  const Complex de = st.at[0][2] + i * st.at[0][3];
  cache_->memo.emplace(key, std::make_pair(e, de));
  return {e, de};
}

Complex DeBrangesFunction::value(Complex z) const {
  switch (variant_) {
    case Variant::polynomial: {
      Complex p = 1.0;
      for (const Complex& a : roots_) p *= z + a;
      return p;
    }
    case Variant::exponential:
      return std::exp(Complex{0.0, -a_} * z);
    case Variant::schrodinger:
      return value_and_derivative(z).first;
  }
  return 0.0;
}

Complex DeBrangesFunction::sharp(Complex z) const {
  return std::conj(value(std::conj(z)));
}

std::pair<Complex, Complex> DeBrangesFunction::ab_values(Complex z) const {
  const Complex e = value(z);
  const Complex es = sharp(z);
  return {(e + es) / 2.0, (e - es) / Complex{0.0, 2.0}};
}

Complex DeBrangesFunction::log_derivative(Complex z) const {
  switch (variant_) {
    case Variant::polynomial: {
      Complex s = 0.0;
      for (const Complex& a : roots_) s += 1.0 / (z + a);
      return s;
    }
    case Variant::exponential:
      return {0.0, -a_};
    case Variant::schrodinger: {
      const auto [e, de] = value_and_derivative(z);
      return de / e;
    }
  }
  return 0.0;
}

Complex DeBrangesFunction::unit_value(double x) const {
  switch (variant_) {
    case Variant::polynomial: {
      Complex u = 1.0;
      double logmag = 0.0;
      for (const Complex& a : roots_) {
        const Complex f = x + a;
        const double m = std::abs(f);
        logmag += std::log(m);
        u *= f / m;
      }
      if (logmag < kLogZero)
        throw RealZeroError("unit_value: |E(x)| underflows (real zero of E)");
      return u;
    }
    case Variant::exponential:
      return {std::cos(a_ * x), -std::sin(a_ * x)};
    case Variant::schrodinger: {
      const Complex e = value_and_derivative(x).first;
      const double m = std::abs(e);
      if (!(m > 1e-150) || !std::isfinite(m))
        throw RealZeroError("unit_value: |E(x)| underflows (real zero of E)");
      return e / m;
    }
  }
  return 1.0;
}

double DeBrangesFunction::intensity(double x) const {
  const double rho = -log_derivative(x).imag() / kPi;
  if (!std::isfinite(rho))
    throw RealZeroError("intensity: E'(x)/E(x) not finite (real zero of E)");
  return rho;
}

double DeBrangesFunction::kernel_value(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw ConfigError("kernel_value: arguments must be finite");
  // canonical ordering makes kernel(x,y) and kernel(y,x) bit-identical
  const double xm = std::min(x, y);
  const double ym = std::max(x, y);
  if (xm == ym) return intensity(xm);
  const double delta = 1e-4 * (1.0 + std::max(std::abs(xm), std::abs(ym)));
  if (ym - xm < delta) {
    // phase-increment form: the integrable quotient cancels catastrophically
    // here, while sin(dphi)/(pi (y-x)) with dphi = pi * int rho keeps full
    // precision using only first derivatives of E
    const auto& rule = unit_rule_4();
    const double mid = 0.5 * (xm + ym);
    const double half = 0.5 * (ym - xm);
    double dphi = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      dphi += rule.weights[i] * intensity(mid + half * rule.nodes[i]);
    dphi *= kPi * half;
    return std::sin(dphi) / (kPi * (ym - xm));
  }
  const Complex ux = unit_value(xm);
  const Complex uy = unit_value(ym);
  return (ux.real() * uy.imag() - ux.imag() * uy.real()) / (kPi * (xm - ym));
}

PhaseTable DeBrangesFunction::phase(const std::vector<double>& grid) const {
  if (grid.empty()) throw ConfigError("phase: grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i]))
      throw ConfigError("phase: grid must be strictly increasing");

  PhaseTable t;
  t.grid = grid;
  t.phi.resize(grid.size());
  t.derivative.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.derivative[i] = kPi * intensity(grid[i]);

  double phi = -std::arg(unit_value(grid[0]));
  if (phi <= -kPi) phi += 2 * kPi;  // anchor branch in (-pi, pi]
  t.phi[0] = phi;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dx = grid[i] - grid[i - 1];
    const double expected = 0.5 * (t.derivative[i - 1] + t.derivative[i]) * dx;
    if (expected >= kPi / 2)
      throw UnwrapError(
          "phase: grid too coarse to resolve the branch (predicted step >= "
          "pi/2)");
    const double raw = -std::arg(unit_value(grid[i]));
    const double base = phi + expected;
    double cand = raw + 2 * kPi * std::round((base - raw) / (2 * kPi));
    if (cand < phi) {
      if (phi - cand < 1e-6 * (1.0 + std::abs(phi)))
        cand = phi;  // roundoff clamp; phi is nondecreasing
      else
        throw UnwrapError("phase: unwrapped phase decreased (branch lost)");
    }
    phi = cand;
    t.phi[i] = phi;
  }
  return t;
}

ConditionResult DeBrangesFunction::check_condition(
    double tail_bound, double quad_tolerance) const {
  if (!(tail_bound > 0))
    throw ConfigError("check_condition: tail_bound must be positive");
  if (!(quad_tolerance > 0))
    throw ConfigError("check_condition: quad_tolerance must be positive");

  const auto& rule = unit_rule_32();
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + half * rule.nodes[i];
      s += rule.weights[i] * kPi * intensity(x) / (1.0 + x * x);
    }
    return s * half;
  };

  double integral = panel(-1.0, 0.0) + panel(0.0, 1.0);
  double T = 1.0;
  double extrapolated = integral;
  double prev_extrapolated = std::numeric_limits<double>::quiet_NaN();
  ConditionResult out;
  while (2 * T <= tail_bound) {
    double wings = 0.0;
    for (double lo = T; lo < 2 * T - 0.5; lo += 1.0)
      wings += panel(lo, lo + 1.0) + panel(-lo - 1.0, -lo);
    const double next = integral + wings;
    // tails of phi'/(1+x^2) decay like 1/T; doubling halves them, so
    // 2 I(2T) - I(T) cancels the leading tail term
    extrapolated = 2 * next - integral;
    integral = next;
    T *= 2;
    if (std::isfinite(prev_extrapolated) &&
        std::abs(extrapolated - prev_extrapolated) < quad_tolerance) {
      out.converged = true;
      break;
    }
    prev_extrapolated = extrapolated;
  }
  out.value = extrapolated;
  return out;
}

bool DeBrangesFunction::rigidity_condition_check(
    double R, double eps, double C, const std::vector<double>& grid) const {
  if (!(R > 0)) throw ConfigError("rigidity_condition_check: R must be > 0");
  if (!(eps > 0) || !(eps < 0.5))
    throw ConfigError("rigidity_condition_check: eps must lie in (0, 1/2)");
  if (!(C > 0)) throw ConfigError("rigidity_condition_check: C must be > 0");
  for (double x : grid) {
    const Complex u = unit_value(x);
    const double ax = std::abs(u.real());
    const double bx = std::abs(u.imag());
    const double r = std::abs(x);
    const double bound =
        r < R ? C * std::pow(r, -0.5 + eps) : C * std::pow(r, 0.5 - eps);
    if (ax > bound || bx > bound) return false;
  }
  return true;
}

}  // namespace dbdpp
