#include "casimir/stress.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

struct PointSites {
  Site e;
  std::vector<Site> hx;  // 2D only
  std::vector<Site> hy;
};

PointSites sites_at(const MaterialGrid& g, std::size_t node) {
  const int i = g.node_i(node), j = g.node_j(node);
  PointSites p;
  p.e = {Field::Ez, i, j};
  p.hy = {{Field::Hy, i - 1, j}, {Field::Hy, i, j}};
  if (g.dims == 2) p.hx = {{Field::Hx, i, j - 1}, {Field::Hx, i, j}};
  return p;
}

class Lookup {
 public:
  Lookup(const ResponseMap& r, std::size_t len) : r_(r), len_(len) {}

  const std::vector<double>& operator()(Gauge gauge, const Site& src, const Site& probe) const {
    auto it = r_.find({gauge, src, probe});
    if (it == r_.end())
      throw IncompleteCampaign("missing " + std::string(gauge_name(gauge)) +
                               " response for source at (" + std::to_string(src.i) + ", " +
                               std::to_string(src.j) + ")");
    if (it->second.size() != len_)
      throw InvalidArgument("response series have mismatched lengths");
    return it->second;
  }

 private:
  const ResponseMap& r_;
  std::size_t len_;
};

std::size_t common_length(const ResponseMap& r) {
  return r.empty() ? 0 : r.begin()->second.size();
}

}  // namespace

std::vector<Measurement> plan_measurements(const MaterialGrid& g, const SurfacePlan& plan) {
  std::map<std::pair<Gauge, Site>, std::set<Site>> todo;
  std::set<std::size_t> seen;
  for (const auto& pt : plan.points) {
    if (!seen.insert(pt.node).second) continue;
    PointSites s = sites_at(g, pt.node);
    todo[{Gauge::Electric, s.e}].insert(s.e);
    std::vector<Site> hs = s.hy;
    hs.insert(hs.end(), s.hx.begin(), s.hx.end());
    for (const auto& src : hs)
      for (const auto& probe : hs)
        if (g.dims == 2 || probe == src) todo[{Gauge::Magnetic, src}].insert(probe);
  }
  std::vector<Measurement> out;
  for (const auto& [key, probes] : todo)
    out.push_back({SourceSpec{key.second, key.first, 1.0},
                   std::vector<Site>(probes.begin(), probes.end())});
  return out;
}

GammaSeries gamma_accumulate(const ResponseMap& responses, const SurfacePlan& plan,
                             const MaterialGrid& g, int component) {
  if (component < 0 || component >= g.dims)
    throw InvalidArgument("force component out of range");
  const std::size_t n = common_length(responses);
  Lookup R(responses, n);
  GammaSeries out;
  out.component = component;
  out.dt = g.dt;
  out.e.assign(n, 0.0);
  out.h.assign(n, 0.0);
  out.vacuum_subtracted = false;

  for (const auto& pt : plan.points) {
    const PointSites s = sites_at(g, pt.node);
    const double eps = g.eps[pt.node];
    const double mu = g.mu_y[g.hy(s.hy[1].i, s.hy[1].j)];
    const bool diag = pt.comp == component;

    if (diag) {
      const auto& ezz = R(Gauge::Electric, s.e, s.e);
      const double c = -0.5 * eps * pt.weight;
      for (std::size_t m = 0; m < n; ++m) out.e[m] += c * ezz[m];
    }

    // H_ab at the node: self terms averaged over the two adjacent sites,
    // cross terms over the 2 x 2 neighbouring pairs.
    const auto& y0 = R(Gauge::Magnetic, s.hy[0], s.hy[0]);
    const auto& y1 = R(Gauge::Magnetic, s.hy[1], s.hy[1]);
    if (g.dims == 1) {
      // only Hy exists: T_xx = -mu H_yy / 2
      const double c = -0.25 * mu * pt.weight;
      for (std::size_t m = 0; m < n; ++m) out.h[m] += c * (y0[m] + y1[m]);
      continue;
    }
    const auto& x0 = R(Gauge::Magnetic, s.hx[0], s.hx[0]);
    const auto& x1 = R(Gauge::Magnetic, s.hx[1], s.hx[1]);
    if (diag) {
      // mu (H_ii - (H_xx + H_yy) / 2) = +-mu (H_xx - H_yy) / 2
      const double c = (component == 0 ? 0.25 : -0.25) * mu * pt.weight;
      for (std::size_t m = 0; m < n; ++m) out.h[m] += c * ((x0[m] + x1[m]) - (y0[m] + y1[m]));
    } else {
      // component i response to a source along the surface normal j
      const auto& src = component == 0 ? s.hy : s.hx;
      const auto& prb = component == 0 ? s.hx : s.hy;
      const double c = 0.25 * mu * pt.weight;
      for (const auto& a : src)
        for (const auto& b : prb) {
          const auto& r = R(Gauge::Magnetic, a, b);
          for (std::size_t m = 0; m < n; ++m) out.h[m] += c * r[m];
        }
    }
  }
  return out;
}

GammaSeries subtract_vacuum(const GammaSeries& a, const GammaSeries& vac) {
  if (a.dt != vac.dt) throw InvalidArgument("vacuum reference uses a different time step");
  GammaSeries out = a;
  const std::size_t n = std::min(a.e.size(), vac.e.size());
  out.e.resize(n);
  out.h.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    out.e[m] -= vac.e[m];
    out.h[m] -= vac.h[m];
  }
  out.vacuum_subtracted = true;
  return out;
}

std::vector<double> partial_force(const KernelSeries& k, const GammaSeries& gamma) {
  if (k.dt != gamma.dt) throw InvalidArgument("kernel and response time steps differ");
  if (gamma.e.size() != gamma.h.size())
    throw InvalidArgument("electric and magnetic series lengths differ");
  const std::size_t n = gamma.e.size();
  if (k.half.size() < n) throw InvalidArgument("kernel series is shorter than the responses");
  std::vector<double> f(n);
  const double c = gamma.dt / std::numbers::pi;
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    acc += k.half[m].imag() * (gamma.e[m] + gamma.h[m]);
    f[m] = c * acc;
  }
  return f;
}

ForceResult evaluate_convergence(std::vector<double> force, double dt,
                                 const ConvergenceOptions& opt, int component) {
  if (!(opt.tolerance > 0)) throw InvalidArgument("tolerance must be positive");
  ForceResult r;
  r.component = component;
  r.tolerance = opt.tolerance;
  const std::size_t n = force.size();
  r.t.resize(n);
  for (std::size_t m = 0; m < n; ++m) r.t[m] = (static_cast<double>(m) + 0.5) * dt;
  r.force = std::move(force);
  r.delta.assign(n, 0.0);
  if (n == 0) return r;

  const double t_end = r.t.back();
  const auto tail_steps = static_cast<std::size_t>(std::ceil(0.25 * opt.window / dt));
  const std::size_t from = n > tail_steps ? n - std::max<std::size_t>(tail_steps, 1) : 0;
  double sum = 0.0;
  for (std::size_t m = from; m < n; ++m) sum += r.force[m];
  r.force_inf = sum / static_cast<double>(n - from);

  const double den = std::max(std::abs(r.force_inf), opt.scale_floor);
  for (std::size_t m = 0; m < n; ++m)
    r.delta[m] = den > 0 ? std::abs(r.force[m] - r.force_inf) / den
                         : std::abs(r.force[m] - r.force_inf);

  std::size_t first_ok = n;
  while (first_ok > 0 && r.delta[first_ok - 1] <= opt.tolerance) --first_ok;

  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m)
    if (r.t[m] >= t_end - opt.window) worst = std::max(worst, r.delta[m]);
  r.best_delta = worst;

  const double elapsed = static_cast<double>(n) * dt;
  const bool long_enough = elapsed >= opt.min_time * (1.0 - 1e-12) && elapsed >= opt.window;
  if (first_ok < n && long_enough && t_end - r.t[first_ok] >= opt.window) {
    r.converged = true;
    r.truncation_time = r.t[first_ok];
    r.delta_at_truncation = r.delta[first_ok];
  } else {
    r.truncation_time = t_end;
    r.delta_at_truncation = r.delta.back();
  }
  return r;
}

ForceResult convergence(std::vector<double> force, double dt, const ConvergenceOptions& opt,
                        int component) {
  ForceResult r = evaluate_convergence(std::move(force), dt, opt, component);
  if (!r.converged)
    throw BudgetExceeded("force did not converge within the step budget", r.best_delta);
  return r;
}

cplx lattice_green_1d(cplx z, double dx) {
  const cplx q = 2.0 - z * dx * dx;
  const cplx r = std::sqrt(q * q - 4.0);
  cplx lam = 0.5 * (q - r);
  if (std::abs(lam) > 1.0) lam = 0.5 * (q + r);
  return dx * lam / (1.0 - lam * lam);
}

double lattice_vacuum_force(double sigma, double dx, double dt, double eps, double mu) {
  const cplx I{0.0, 1.0};
  auto f = [&](double u) {
    const double xi = u * u;
    const double th = 0.5 * xi * dt;
    const double s = (2.0 / dt) * std::sin(th), c = std::cos(th);
    const cplx om2(s * s, sigma * s * c);
    const cplx gamma = -I * s * eps * mu * lattice_green_1d(om2 * eps * mu, dx);
    return (g_discrete(xi, sigma, dt) * gamma).imag() * 2.0 * u / std::numbers::pi;
  };
  const double umax = std::sqrt(std::numbers::pi / dt);
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, umax, 20,
                                                                          1e-13, &err);
  return v;
}

}  // namespace casimir
