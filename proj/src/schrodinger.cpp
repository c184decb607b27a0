#include "dbdpp/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbdpp/errors.hpp"
#include "dbdpp/quadrature.hpp"

namespace dbdpp {

void PotentialSpec::validate() const {
  if (!(ell > 0)) throw ConfigError("potential: ell must be positive");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(breakpoints) || !finite(values))
    throw ConfigError("potential: entries must be finite");
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i - 1] < v[i])) return false;
    return true;
  };
  switch (kind) {
    case Kind::zero:
      if (!breakpoints.empty() || !values.empty())
        throw ConfigError("potential: zero kind takes no data");
      break;
    case Kind::pwc:
      if (values.size() != breakpoints.size() + 1)
        throw ConfigError(
            "potential: pwc needs one more value than breakpoints");
      if (!increasing(breakpoints))
        throw ConfigError("potential: breakpoints must be strictly increasing");
      if (!breakpoints.empty() && breakpoints.front() <= 0)
        throw ConfigError("potential: breakpoints must lie inside (0, ell)");
      if (std::isfinite(ell) && !breakpoints.empty() &&
          breakpoints.back() >= ell)
        throw ConfigError("potential: breakpoints must lie inside (0, ell)");
      break;
    case Kind::table:
      if (values.size() != breakpoints.size() || values.size() < 2)
        throw ConfigError("potential: table needs matching abscissae/values");
      if (!increasing(breakpoints))
        throw ConfigError("potential: abscissae must be strictly increasing");
      break;
  }
}

double PotentialSpec::operator()(double t) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::pwc: {
      const auto it =
          std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
      return values[static_cast<std::size_t>(it - breakpoints.begin())];
    }
    case Kind::table: {
      if (t <= breakpoints.front()) return values.front();
      if (t >= breakpoints.back()) return values.back();
      const auto it =
          std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
      const std::size_t j = static_cast<std::size_t>(it - breakpoints.begin());
      const double x0 = breakpoints[j - 1], x1 = breakpoints[j];
      const double s = (t - x0) / (x1 - x0);
      return values[j - 1] + s * (values[j] - values[j - 1]);
    }
  }
  return 0.0;
}

std::vector<double> PotentialSpec::interior_kinks(double b) const {
  std::vector<double> k;
  if (kind == Kind::zero) return k;
  for (double t : breakpoints)
    if (t > 0 && t < b) k.push_back(t);
  return k;
}

namespace {

constexpr int kStages = 7;
// Dormand-Prince 5(4) tableau.
constexpr double kC[kStages] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
constexpr double kA[kStages][kStages - 1] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[kStages] = {35.0 / 384,      0, 500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[kStages] = {5179.0 / 57600,    0,           7571.0 / 16695,
                                 393.0 / 640,      -92097.0 / 339200,
                                 187.0 / 2100,     1.0 / 40};

using State = std::array<Complex, 6>;

// Potential restricted to one smooth segment.  pwc pieces freeze to their
// midpoint value so that stage evaluations at a clipped endpoint never read
// the far side of a jump.
struct SegmentPotential {
  const PotentialSpec* v;
  bool constant;
  double cval;

  SegmentPotential(const PotentialSpec& spec, double s0, double s1) : v(&spec) {
    constant = spec.kind != PotentialSpec::Kind::table;
    cval = constant ? spec(0.5 * (s0 + s1)) : 0.0;
  }
  double operator()(double t) const { return constant ? cval : (*v)(t); }
};

// y = (phi, phi', w1, w1', w2, w2'); dimension 2 * (deriv_order + 1).
void rhs(const SegmentPotential& v, Complex lambda, int dim, double t,
         const State& y, State& dy) {
  const Complex q = v(t) - lambda;
  dy[0] = y[1];
  dy[1] = q * y[0];
  if (dim > 2) {
    dy[2] = y[3];
    dy[3] = q * y[2] - y[0];
  }
  if (dim > 4) {
    dy[4] = y[5];
    dy[5] = q * y[4] - 2.0 * y[2];
  }
}

// Composite quadrature over [0, b] split at potential kinks, so every panel
// integrates a smooth function.  Nodes are allocated proportionally to piece
// length, at least 8 per piece.
QuadratureGrid piecewise_grid(const PotentialSpec& v, double b, int quad_n) {
  std::vector<double> edges = v.interior_kinks(b);
  edges.insert(edges.begin(), 0.0);
  edges.push_back(b);
  QuadratureGrid g;
  g.lo = 0.0;
  g.hi = b;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double len = edges[i] - edges[i - 1];
    const int n = std::max(8, static_cast<int>(std::lround(quad_n * len / b)));
    const auto piece = build_grid(edges[i - 1], edges[i], n);
    g.nodes.insert(g.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    g.weights.insert(g.weights.end(), piece.weights.begin(),
                     piece.weights.end());
  }
  return g;
}

}  // namespace

OdeStates integrate_schrodinger(const PotentialSpec& v, Complex lambda,
                                const std::vector<double>& targets, double tol,
                                int deriv_order) {
  v.validate();
  if (deriv_order < 0 || deriv_order > 2)
    throw ConfigError("integrate_schrodinger: deriv_order must be 0, 1 or 2");
  if (!(tol > 0) || tol > 1e-2)
    throw ConfigError("integrate_schrodinger: tol must lie in (0, 1e-2]");
  if (targets.empty())
    throw ConfigError("integrate_schrodinger: no targets given");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] > v.ell)
      throw ConfigError("integrate_schrodinger: target outside [0, ell]");
    if (i > 0 && !(targets[i - 1] < targets[i]))
      throw ConfigError("integrate_schrodinger: targets must be ascending");
  }

  const int dim = 2 * (deriv_order + 1);
  const double endpoint = targets.back();

  OdeStates out;
  out.at.resize(targets.size());

  State y{};
  y[0] = 1.0;  // phi(0) = 1, phi'(0) = 0, derivative chains start at zero
  double t = 0.0;
  std::size_t next_target = 0;

  // Stop points: targets plus potential kinks, so each step sees smooth V.
  std::vector<double> stops = v.interior_kinks(endpoint);
  stops.insert(stops.end(), targets.begin(), targets.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  while (next_target < targets.size() && targets[next_target] <= 0.0) {
    out.at[next_target] = y;
    ++next_target;
  }

  const double total = std::max(endpoint, 1e-12);
  const double hmin = 1e-14 * std::max(1.0, total);
  // Oscillation scale sqrt(|lambda|) sets the opening step.
  double h = std::min(total, 0.25 / (1.0 + std::sqrt(std::abs(lambda))));
  long steps = 0;

  State k[kStages], ytmp, y5;

  for (std::size_t seg = 0; seg < stops.size(); ++seg) {
    const double stop = stops[seg];
    if (stop <= t) continue;
    const SegmentPotential vs(v, t, stop);
    bool segment_done = false;
    while (!segment_done) {
      if (++steps > 2000000)
        throw SolverError("integrate_schrodinger: step budget exhausted");
      if (h < hmin)
        throw SolverError("integrate_schrodinger: step size underflow");
      const bool landing = h >= stop - t;
      const double ht = landing ? stop - t : h;

      rhs(vs, lambda, dim, t, y, k[0]);
      for (int s = 1; s < kStages; ++s) {
        for (int d = 0; d < dim; ++d) {
          Complex acc = 0;
          for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][d];
          ytmp[d] = y[d] + ht * acc;
        }
        rhs(vs, lambda, dim, t + kC[s] * ht, ytmp, k[s]);
      }

      double err = 0;
      for (int d = 0; d < dim; ++d) {
        Complex acc5 = 0, acc4 = 0;
        for (int s = 0; s < kStages; ++s) {
          acc5 += kB5[s] * k[s][d];
          acc4 += kB4[s] * k[s][d];
        }
        y5[d] = y[d] + ht * acc5;
        const double scale = 1.0 + std::max(std::abs(y[d]), std::abs(y5[d]));
        err = std::max(err, ht * std::abs(acc5 - acc4) / scale);
      }

      // error-per-unit-length budget keeps the accumulated estimate near tol
      const double budget = tol * ht / total;
      const double grow = err > 0 ? 0.9 * std::pow(budget / err, 0.2) : 5.0;
      const double hnew = ht * std::clamp(grow, 0.2, 5.0);
      if (err <= budget) {
        y = y5;
        out.est_error += err;
        if (landing) {
          t = stop;  // land exactly on the stop point
          segment_done = true;
          while (next_target < targets.size() && targets[next_target] <= t) {
            out.at[next_target] = y;
            ++next_target;
          }
        } else {
          t += ht;
        }
        // a landing clip must not shrink the step carried into the next segment
        h = landing ? std::max(hnew, h) : hnew;
      } else {
        h = hnew;
      }
    }
  }
  return out;
}

OdeSolution solve_schrodinger(const PotentialSpec& v, Complex lambda, double b,
                              double tol) {
  if (!(b > 0)) throw ConfigError("solve_schrodinger: b must be positive");
  if (b > v.ell) throw ConfigError("solve_schrodinger: b exceeds ell");
  const auto st = integrate_schrodinger(v, lambda, {b}, tol, 0);
  return {lambda, b, st.at[0][0], st.at[0][1], st.est_error};
}

Complex kernel_integral_form(const PotentialSpec& v, double b, Complex z,
                             Complex w, int quad_n, double tol) {
  if (quad_n < 8)
    throw ConfigError("kernel_integral_form: need at least 8 quadrature nodes");
  if (!(b > 0)) throw ConfigError("kernel_integral_form: b must be positive");
  if (b > v.ell) throw ConfigError("kernel_integral_form: b exceeds ell");
  const auto g = piecewise_grid(v, b, quad_n);
  const auto sz = integrate_schrodinger(v, z, g.nodes, tol, 0);
  Complex acc = 0;
  if (w == z) {
    for (int i = 0; i < g.size(); ++i)
      acc += g.weights[i] * sz.at[i][0] * std::conj(sz.at[i][0]);
  } else {
    const auto sw = integrate_schrodinger(v, w, g.nodes, tol, 0);
    for (int i = 0; i < g.size(); ++i)
      acc += g.weights[i] * sz.at[i][0] * std::conj(sw.at[i][0]);
  }
  return acc / std::numbers::pi;
}

Complex kernel_wronskian_form(const PotentialSpec& v, double b, Complex z,
                              Complex w, double tol) {
  const Complex denom = z - std::conj(w);
  if (std::abs(denom) < 1e-12 * (1.0 + std::abs(z) + std::abs(w)))
    throw NumericalError(
        "kernel_wronskian_form: indeterminate at z = conj(w); use the "
        "integral form");
  const auto a = solve_schrodinger(v, z, b, tol);
  const auto c = solve_schrodinger(v, w, b, tol);
  return (a.phi * std::conj(c.dphi) - a.dphi * std::conj(c.phi)) /
         (std::numbers::pi * denom);
}

double intensity_schrodinger(const PotentialSpec& v, double b, double lambda,
                             int quad_n, double tol) {
  if (quad_n < 8)
    throw ConfigError("intensity_schrodinger: need at least 8 quadrature nodes");
  if (!(b > 0)) throw ConfigError("intensity_schrodinger: b must be positive");
  if (b > v.ell) throw ConfigError("intensity_schrodinger: b exceeds ell");
  auto g = piecewise_grid(v, b, quad_n);
  std::vector<double> targets = g.nodes;
  targets.push_back(b);
  const auto st = integrate_schrodinger(v, lambda, targets, tol, 0);
  double mass = 0;
  for (int i = 0; i < g.size(); ++i)
    mass += g.weights[i] * std::norm(st.at[i][0]);
  const auto& end = st.at[targets.size() - 1];
  const double denom = std::norm(end[0]) + std::norm(end[1]);
  if (!(denom > 0) || !std::isfinite(denom))
    throw RealZeroError("intensity_schrodinger: boundary data vanished");
  return mass / (std::numbers::pi * denom);
}

}  // namespace dbdpp
