#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casimir/engine.hpp"
#include "casimir/errors.hpp"
#include "casimir/lattice.hpp"

using namespace casimir;

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) mx += x[k], my += y[k];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("no source leaves the fields at zero") {
  MaterialGrid g = build_grid(vacuum_domain(1, 2.0), 16, 1.0);
  for (Gauge gauge : {Gauge::Electric, Gauge::Magnetic}) {
    SourceSpec src{{gauge == Gauge::Electric ? Field::Ez : Field::Hy, 10, 0}, gauge, 0.0};
    FieldState s(g, src);
    for (int n = 0; n < 50; ++n) step(s, g);
    for (double v : s.ez) CHECK(v == 0.0);
    for (double v : s.hy) CHECK(v == 0.0);
  }
}

TEST_CASE("support stays inside the discrete light cone") {
  MaterialGrid g = build_grid(vacuum_domain(1, 10.0), 16, 0.0);
  const int c = g.nx / 2;
  FieldState s(g, {{Field::Ez, c, 0}, Gauge::Electric, 1.0});
  for (int n = 1; n <= 60; ++n) {
    step_electric(s, g);
    for (int i = 0; i <= g.nx; ++i)
      if (std::abs(i - c) > n) CHECK(s.ez[g.node(i)] == 0.0);
  }
}

TEST_CASE("2D support stays inside the light cone") {
  MaterialGrid g = build_grid(vacuum_domain(2, 3.0, 3.0), 10, 1.0);
  const int c = g.nx / 2;
  FieldState s(g, {{Field::Hx, c, c}, Gauge::Magnetic, 1.0});
  for (int n = 1; n <= 8; ++n) {
    step_magnetic(s, g);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (std::max(std::abs(i - c), std::abs(j - c)) > n + 1) CHECK(s.ez[g.node(i, j)] == 0.0);
  }
}

TEST_CASE("energy decays with conductivity and is conserved without it") {
  for (int dims : {1, 2})
    for (Gauge gauge : {Gauge::Electric, Gauge::Magnetic})
      for (double sigma : {0.0, 1.0}) {
        GeometrySpec geom = dims == 1 ? parallel_plates(1.0, 3.0) : vacuum_domain(2, 2.0, 2.0);
        MaterialGrid g = build_grid(geom, 16, sigma);
        const int c = g.nx / 2, cj = dims == 2 ? g.ny / 2 : 0;
        SourceSpec src{{gauge == Gauge::Electric ? Field::Ez : Field::Hy, c, cj}, gauge, 1.0};
        FieldState s(g, src);
        step(s, g);
        std::vector<double> w;
        for (int n = 0; n < 400; ++n) {
          FieldState prev = s;
          step(s, g);
          w.push_back(staggered_energy(g, gauge, prev, s));
        }
        CAPTURE(dims);
        CAPTURE(sigma);
        if (sigma == 0.0) {
          for (double v : w) CHECK(v == doctest::Approx(w.front()).epsilon(1e-10));
        } else {
          for (std::size_t n = 1; n < w.size(); ++n) CHECK(w[n] <= w[n - 1] * (1 + 1e-13));
          CHECK(w[2 * 150] < w[150]);
          CHECK(w.back() < 0.5 * w.front());
        }
      }
}

TEST_CASE("magnetic gauge is the exact dual of the electric gauge") {
  // Dual grid: its node k carries mu of site k, its site m carries eps of
  // node m + 1. The magnetic run's H_j then equals the electric run's E_j.
  GeometrySpec geom = vacuum_domain(1, 12.0);
  MaterialGrid a = build_grid(geom, 20, 2.0);
  for (std::size_t k = 0; k < a.eps.size(); ++k) a.eps[k] = 1.0 + 0.3 * std::sin(0.37 * k);
  for (std::size_t k = 0; k < a.mu_y.size(); ++k) a.mu_y[k] = 1.0 + 0.2 * std::cos(0.51 * k);
  MaterialGrid b = a;
  for (std::size_t k = 0; k < b.mu_y.size(); ++k) b.eps[k] = a.mu_y[k];
  for (std::size_t m = 0; m + 1 < b.eps.size(); ++m) b.mu_y[m] = a.eps[m + 1];

  const int j = a.nx / 2;
  const long steps = 90;  // inside the cone, away from the walls
  FieldState sm(a, {{Field::Hy, j, 0}, Gauge::Magnetic, 1.0});
  FieldState se(b, {{Field::Ez, j, 0}, Gauge::Electric, 1.0});
  for (long n = 0; n < steps; ++n) {
    step_magnetic(sm, a);
    step_electric(se, b);
    REQUIRE(sm.hy[j] == se.ez[j]);
  }
  for (int m = 1; m + 1 < a.nx; ++m) CHECK(sm.hy[m] == se.ez[m]);
}

TEST_CASE("run_impulse bookkeeping") {
  MaterialGrid g = build_grid(parallel_plates(1.0, 3.0), 16, 1.0);
  const int c = g.nx / 2;
  SourceSpec src{{Field::Ez, c, 0}, Gauge::Electric, 1.0};
  auto none = run_impulse(g, src, 0, {{Field::Ez, c, 0}});
  REQUIRE(none.size() == 1);
  CHECK(none[0].empty());
  CHECK_THROWS_AS(run_impulse(g, src, 10, {{Field::Ez, g.i_of(-0.5), 0}}), GeometryError);
  CHECK_THROWS_AS(run_impulse(g, {{Field::Ez, g.i_of(0.5), 0}, Gauge::Electric, 1.0}, 10, {}),
                  GeometryError);
  auto a = run_impulse(g, src, 200, {{Field::Ez, c, 0}});
  auto b = run_impulse(g, src, 200, {{Field::Ez, c, 0}});
  CHECK(a == b);
}

TEST_CASE("dtft of a discrete delta and of a constant") {
  const double dt = 0.05;
  std::vector<double> delta(30, 0.0);
  delta[0] = 1.0 / dt;
  for (double xi : {0.0, 0.3, 7.0, 40.0}) {
    auto v = dtft(delta, xi, dt);
    CHECK(v.real() == doctest::Approx(1.0));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
  const int n = 17;
  std::vector<double> ones(n, 1.0);
  const double xi = 1.3;
  const std::complex<double> z = std::exp(std::complex<double>(0, xi * dt));
  const std::complex<double> closed = dt * (1.0 - std::pow(z, n)) / (1.0 - z);
  auto v = dtft(ones, xi, dt);
  CHECK(std::abs(v - closed) < 1e-13);
}

TEST_CASE("vacuum self-response decays as t^(-3/2)") {
  MaterialGrid g = build_grid(vacuum_domain(1, 30.0), 20, 10.0);
  const int c = g.nx / 2;
  auto r = run_impulse(g, {{Field::Ez, c, 0}, Gauge::Electric, 1.0}, static_cast<long>(10.0 / g.dt),
                       {{Field::Ez, c, 0}});
  std::vector<double> lx, ly;
  for (std::size_t m = 0; m < r[0].size(); ++m) {
    const double t = (m + 0.5) * g.dt;
    if (t < 1.0 || t > 10.0) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(std::abs(r[0][m])));
  }
  CHECK(slope(lx, ly) == doctest::Approx(-1.5).epsilon(0.2 / 1.5));
}

TEST_CASE("a smaller cavity departs from the vacuum response sooner") {
  auto departure = [](double h) {
    MaterialGrid cav = build_grid(parallel_plates(h, h + 1.0), 20, 10.0);
    MaterialGrid vac = build_grid(vacuum_domain(1, 140.0), 20, 10.0);
    const long n = static_cast<long>(60.0 / cav.dt);
    const int cc = cav.i_of(0.0), vc = vac.i_of(0.0);
    auto a = run_impulse(cav, {{Field::Ez, cc, 0}, Gauge::Electric, 1.0}, n, {{Field::Ez, cc, 0}});
    auto b = run_impulse(vac, {{Field::Ez, vc, 0}, Gauge::Electric, 1.0}, n, {{Field::Ez, vc, 0}});
    for (long m = 0; m < n; ++m)
      if (std::abs(a[0][m] - b[0][m]) > 0.01 * std::abs(b[0][m])) return (m + 0.5) * cav.dt;
    return 1e9;
  };
  const double t1 = departure(1.0), t2 = departure(2.0);
  CHECK(t1 < t2);
  CHECK(t2 < 1e9);
}
