#include "casimir/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

double dx_pow(const MaterialGrid& g) { return g.dims == 2 ? g.dx * g.dx : g.dx; }

double damp_a(const MaterialGrid& g) {
  return (1.0 - 0.5 * g.sigma * g.dt) / (1.0 + 0.5 * g.sigma * g.dt);
}
double damp_b(const MaterialGrid& g) { return 1.0 / (1.0 + 0.5 * g.sigma * g.dt); }

// Advances the node box by one step around the source, clipped to the
// grid (and in 1D to the conductor-bounded segment holding the source).
void grow_box(FieldState& s, const MaterialGrid& g) {
  const int r = static_cast<int>(std::min<long>(s.step + 2, 1L << 30));
  const int si = s.source.site.i, sj = s.source.site.j;
  s.ilo = std::max(si - r, s.clo);
  s.ihi = std::min(si + r + 1, s.chi);
  if (g.dims == 2) {
    s.jlo = std::max(sj - r, 0);
    s.jhi = std::min(sj + r + 1, g.ny);
  }
}

void step_1d(FieldState& s, const MaterialGrid& g, bool electric) {
  grow_box(s, g);
  const double a = damp_a(g), b = damp_b(g);
  const double dt = g.dt, dx = g.dx;
  double* E = s.ez.data();
  double* H = s.hy.data();
  const double* eps = g.eps.data();
  const double* mu = g.mu_y.data();
  const std::uint8_t* pec = g.conductor.data();
  const bool fire = s.step == 0;
  const int lo = s.ilo, hi = s.ihi;

  if (electric) {
    for (int j = lo; j < hi; ++j) H[j] += dt / (mu[j] * dx) * (E[j + 1] - E[j]);
    for (int k = lo + 1; k < hi; ++k) {
      if (pec[k]) continue;
      E[k] = a * E[k] + (b * dt) / (eps[k] * dx) * (H[k] - H[k - 1]);
    }
    if (fire) {
      const int k = s.source.site.i;
      E[k] -= (b * dt / eps[k]) * (s.source.amplitude / (dt * dx));
    }
  } else {
    for (int j = lo; j < hi; ++j)
      H[j] = a * H[j] + (b * dt) / (mu[j] * dx) * (E[j + 1] - E[j]);
    if (fire) {
      const int j = s.source.site.i;
      H[j] -= (b * dt / mu[j]) * (s.source.amplitude / (dt * dx));
    }
    for (int k = lo + 1; k < hi; ++k) {
      if (pec[k]) continue;
      E[k] += dt / (eps[k] * dx) * (H[k] - H[k - 1]);
    }
  }
  ++s.step;
}

void step_2d(FieldState& s, const MaterialGrid& g, bool electric) {
  grow_box(s, g);
  const double a = damp_a(g), b = damp_b(g);
  const double dt = g.dt, dx = g.dx;
  const int nxp = g.nx + 1, nx = g.nx;
  double* E = s.ez.data();
  double* Hx = s.hx.data();
  double* Hy = s.hy.data();
  const bool fire = s.step == 0;
  const double kick_den = dt * dx * dx;

  auto hx_update = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(j) * nxp + i;
    const double curl = -(E[k + nxp] - E[k]);
    if (electric)
      Hx[k] += dt / (g.mu_x[k] * dx) * curl;
    else
      Hx[k] = a * Hx[k] + (b * dt) / (g.mu_x[k] * dx) * curl;
  };
  auto hy_update = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(j) * nx + i;
    const std::size_t e = static_cast<std::size_t>(j) * nxp + i;
    const double curl = E[e + 1] - E[e];
    if (electric)
      Hy[k] += dt / (g.mu_y[k] * dx) * curl;
    else
      Hy[k] = a * Hy[k] + (b * dt) / (g.mu_y[k] * dx) * curl;
  };

  for (int j = s.jlo; j < s.jhi; ++j)
    for (int i = s.ilo; i <= s.ihi; ++i) hx_update(i, j);
  for (int j = s.jlo; j <= s.jhi; ++j)
    for (int i = s.ilo; i < s.ihi; ++i) hy_update(i, j);
  if (fire && !electric) {
    const Site& p = s.source.site;
    if (p.field == Field::Hx) {
      const std::size_t k = g.hx(p.i, p.j);
      Hx[k] -= (b * dt / g.mu_x[k]) * (s.source.amplitude / kick_den);
    } else {
      const std::size_t k = g.hy(p.i, p.j);
      Hy[k] -= (b * dt / g.mu_y[k]) * (s.source.amplitude / kick_den);
    }
  }

  for (int j = std::max(s.jlo, 1); j <= std::min(s.jhi, g.ny - 1); ++j)
    for (int i = std::max(s.ilo, 1); i <= std::min(s.ihi, nx - 1); ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nxp + i;
      if (g.conductor[k]) continue;
      const std::size_t y = static_cast<std::size_t>(j) * nx + i;
      const double curl = (Hy[y] - Hy[y - 1]) - (Hx[k] - Hx[k - nxp]);
      if (electric)
        E[k] = a * E[k] + (b * dt) / (g.eps[k] * dx) * curl;
      else
        E[k] += dt / (g.eps[k] * dx) * curl;
    }
  if (fire && electric) {
    const std::size_t k = g.node(s.source.site.i, s.source.site.j);
    E[k] -= (b * dt / g.eps[k]) * (s.source.amplitude / kick_den);
  }
  ++s.step;
}

}  // namespace

const char* gauge_name(Gauge g) { return g == Gauge::Electric ? "electric" : "magnetic"; }

std::size_t site_index(const MaterialGrid& g, const Site& s) {
  switch (s.field) {
    case Field::Ez: return g.node(s.i, s.j);
    case Field::Hx: return g.hx(s.i, s.j);
    case Field::Hy: return g.hy(s.i, s.j);
  }
  return 0;
}

void check_site(const MaterialGrid& g, const Site& s) {
  bool ok = false;
  switch (s.field) {
    case Field::Ez: ok = s.i >= 0 && s.i <= g.nx && s.j >= 0 && s.j <= g.ny; break;
    case Field::Hx: ok = g.dims == 2 && s.i >= 0 && s.i <= g.nx && s.j >= 0 && s.j < g.ny; break;
    case Field::Hy: ok = s.i >= 0 && s.i < g.nx && s.j >= 0 && s.j <= g.ny; break;
  }
  if (!ok)
    throw GeometryError("site (" + std::to_string(s.i) + ", " + std::to_string(s.j) +
                        ") is not a valid field location");
  if (s.field == Field::Ez && g.conductor[g.node(s.i, s.j)])
    throw GeometryError("site (" + std::to_string(s.i) + ", " + std::to_string(s.j) +
                        ") lies on a conductor");
}

void check_source(const MaterialGrid& g, const SourceSpec& src) {
  check_site(g, src.site);
  const bool e = src.site.field == Field::Ez;
  if (e != (src.gauge == Gauge::Electric))
    throw InvalidArgument("source component does not match its gauge");
}

FieldState::FieldState(const MaterialGrid& g, const SourceSpec& src)
    : dt(g.dt), source(src) {
  check_source(g, src);
  ez.assign(g.eps.size(), 0.0);
  hy.assign(g.mu_y.size(), 0.0);
  if (g.dims == 2) hx.assign(g.mu_x.size(), 0.0);
  clo = 0;
  chi = g.nx;
  if (g.dims == 1) {
    const int si = src.site.i;
    const int right_from = src.site.field == Field::Ez ? si : si + 1;
    clo = si;
    while (clo > 0 && !g.conductor[static_cast<std::size_t>(clo)]) --clo;
    chi = right_from;
    while (chi < g.nx && !g.conductor[static_cast<std::size_t>(chi)]) ++chi;
  }
  ilo = ihi = src.site.i;
  jlo = jhi = src.site.j;
}

void step_electric(FieldState& s, const MaterialGrid& g) {
  if (g.dims == 1)
    step_1d(s, g, true);
  else
    step_2d(s, g, true);
}

void step_magnetic(FieldState& s, const MaterialGrid& g) {
  if (g.dims == 1)
    step_1d(s, g, false);
  else
    step_2d(s, g, false);
}

void step(FieldState& s, const MaterialGrid& g) {
  if (s.source.gauge == Gauge::Electric)
    step_electric(s, g);
  else
    step_magnetic(s, g);
}

double probe_value(const FieldState& s, const MaterialGrid& g, const Site& p) {
  switch (p.field) {
    case Field::Ez: return s.ez[g.node(p.i, p.j)];
    case Field::Hx: return s.hx[g.hx(p.i, p.j)];
    case Field::Hy: return s.hy[g.hy(p.i, p.j)];
  }
  return 0.0;
}

double staggered_energy(const MaterialGrid& g, Gauge gauge, const FieldState& prev,
                        const FieldState& cur) {
  // Both gauges update H from the previous E, then E from the new H. The
  // damped field enters squared at the time it is straddled by the other:
  // electric gauge eps E_p^2 + mu H_p H_c, magnetic gauge mu H_c^2 + eps E_p E_c.
  double we = 0, wh = 0;
  if (gauge == Gauge::Electric) {
    for (std::size_t k = 0; k < g.eps.size(); ++k) we += g.eps[k] * prev.ez[k] * prev.ez[k];
    for (std::size_t k = 0; k < g.mu_y.size(); ++k) wh += g.mu_y[k] * prev.hy[k] * cur.hy[k];
    for (std::size_t k = 0; k < g.mu_x.size(); ++k) wh += g.mu_x[k] * prev.hx[k] * cur.hx[k];
  } else {
    for (std::size_t k = 0; k < g.eps.size(); ++k) we += g.eps[k] * prev.ez[k] * cur.ez[k];
    for (std::size_t k = 0; k < g.mu_y.size(); ++k) wh += g.mu_y[k] * cur.hy[k] * cur.hy[k];
    for (std::size_t k = 0; k < g.mu_x.size(); ++k) wh += g.mu_x[k] * cur.hx[k] * cur.hx[k];
  }
  return (we + wh) * dx_pow(g);
}

std::vector<std::vector<double>> run_impulse(const MaterialGrid& g, const SourceSpec& src,
                                             long n_steps, const std::vector<Site>& probes) {
  if (n_steps < 0) throw InvalidArgument("step count must be non-negative");
  for (const auto& p : probes) check_site(g, p);
  std::vector<std::vector<double>> out(probes.size());
  if (n_steps == 0) return out;
  for (auto& v : out) v.reserve(static_cast<std::size_t>(n_steps));
  FieldState s(g, src);
  for (long n = 0; n < n_steps; ++n) {
    step(s, g);
    for (std::size_t p = 0; p < probes.size(); ++p) out[p].push_back(probe_value(s, g, probes[p]));
  }
  return out;
}

std::complex<double> dtft(const std::vector<double>& series, double xi, double dt,
                          double offset) {
  std::complex<double> acc = 0.0;
  for (std::size_t m = 0; m < series.size(); ++m) {
    const double ph = xi * (static_cast<double>(m) + offset) * dt;
    acc += series[m] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return acc * dt;
}

}  // namespace casimir
