#include "casimir/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/stress.hpp"

namespace casimir {

namespace {

constexpr cplx I{0.0, 1.0};

// Discrete curl from free Ez nodes to H sites, plus the index maps.
struct Curl {
  Eigen::SparseMatrix<double> ce;  // H sites x free E nodes
  std::vector<int> e_index;        // node -> column or -1
  std::vector<double> eps_free;
  std::vector<double> mu_h;        // per H row
  std::size_t n_hx = 0;            // Hx rows come first in 2D
};

Curl build_curl(const MaterialGrid& g) {
  Curl c;
  c.e_index.assign(g.n_nodes(), -1);
  int ne = 0;
  for (std::size_t k = 0; k < g.n_nodes(); ++k)
    if (!g.conductor[k]) {
      c.e_index[k] = ne++;
      c.eps_free.push_back(g.eps[k]);
    }
  c.n_hx = g.mu_x.size();
  const std::size_t nh = c.n_hx + g.mu_y.size();
  std::vector<Eigen::Triplet<double>> t;
  const double inv = 1.0 / g.dx;
  auto put = [&](std::size_t row, std::size_t node, double v) {
    const int col = c.e_index[node];
    if (col >= 0) t.emplace_back(static_cast<int>(row), col, v);
  };
  c.mu_h.reserve(nh);
  if (g.dims == 2)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const std::size_t row = g.hx(i, j);
        put(row, g.node(i, j + 1), -inv);
        put(row, g.node(i, j), inv);
      }
  c.mu_h = g.mu_x;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t row = c.n_hx + g.hy(i, j);
      put(row, g.node(i + 1, j), inv);
      put(row, g.node(i, j), -inv);
    }
  c.mu_h.insert(c.mu_h.end(), g.mu_y.begin(), g.mu_y.end());
  c.ce.resize(static_cast<int>(nh), ne);
  c.ce.setFromTriplets(t.begin(), t.end());
  return c;
}

// Row of the source in the gauge's unknown vector.
int source_row(const MaterialGrid& g, const Curl& c, const SourceSpec& src) {
  check_source(g, src);
  switch (src.site.field) {
    case Field::Ez: return c.e_index[g.node(src.site.i, src.site.j)];
    case Field::Hx: return static_cast<int>(g.hx(src.site.i, src.site.j));
    case Field::Hy: return static_cast<int>(c.n_hx + g.hy(src.site.i, src.site.j));
  }
  return -1;
}

// Stiffness K (without the frequency term) for the source's gauge.
Eigen::SparseMatrix<double> stiffness(const Curl& c, Gauge gauge) {
  if (gauge == Gauge::Electric) {
    Eigen::VectorXd inv_mu(c.mu_h.size());
    for (std::size_t k = 0; k < c.mu_h.size(); ++k) inv_mu[static_cast<int>(k)] = 1.0 / c.mu_h[k];
    Eigen::SparseMatrix<double> k = c.ce.transpose() * inv_mu.asDiagonal() * c.ce;
    return k;
  }
  Eigen::VectorXd inv_eps(c.eps_free.size());
  for (std::size_t k = 0; k < c.eps_free.size(); ++k)
    inv_eps[static_cast<int>(k)] = 1.0 / c.eps_free[k];
  Eigen::SparseMatrix<double> k = c.ce * inv_eps.asDiagonal() * c.ce.transpose();
  return k;
}

const std::vector<double>& mass(const Curl& c, Gauge gauge) {
  return gauge == Gauge::Electric ? c.eps_free : c.mu_h;
}

void check_size(const MaterialGrid& g) {
  const long cells = g.dims == 1 ? g.nx : static_cast<long>(g.nx) * g.ny;
  if (cells > 10000)
    throw InvalidArgument("grid too large for the direct frequency-domain solve (" +
                          std::to_string(cells) + " cells)");
}

double dx_pow(const MaterialGrid& g) { return g.dims == 2 ? g.dx * g.dx : g.dx; }

}  // namespace

cplx vacuum_green_1d(double xi, double d) {
  if (!(xi > 0)) throw InvalidArgument("vacuum Green function needs xi > 0");
  return std::exp(I * (xi * std::abs(d))) / (I * xi);
}

cplx vacuum_green_1d_contour(double xi, double sigma, double d) {
  if (!(xi > 0)) throw InvalidArgument("vacuum Green function needs xi > 0");
  const cplx w = omega(xi, sigma);
  return std::exp(I * w * std::abs(d)) / (I * w);
}

cplx FdfdField::at(const MaterialGrid& g, const Site& s) const {
  switch (s.field) {
    case Field::Ez: return ez.empty() ? cplx(0.0) : ez[g.node(s.i, s.j)];
    case Field::Hx: return hx.empty() ? cplx(0.0) : hx[g.hx(s.i, s.j)];
    case Field::Hy: return hy.empty() ? cplx(0.0) : hy[g.hy(s.i, s.j)];
  }
  return 0.0;
}

FdfdField fdfd_solve(const MaterialGrid& g, double xi, const SourceSpec& src) {
  check_size(g);
  const Curl c = build_curl(g);
  const int row = source_row(g, c, src);
  const double th = 0.5 * xi * g.dt;
  const double s = (2.0 / g.dt) * std::sin(th), cs = std::cos(th);
  const cplx om2(s * s, g.sigma * s * cs);

  const Eigen::SparseMatrix<double> k = stiffness(c, src.gauge);
  const auto& m = mass(c, src.gauge);
  Eigen::SparseMatrix<cplx> a = k.cast<cplx>();
  for (int r = 0; r < a.rows(); ++r) a.coeffRef(r, r) -= om2 * m[static_cast<std::size_t>(r)];
  a.makeCompressed();

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(a.rows());
  rhs[row] = I * s * src.amplitude / dx_pow(g);
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolverError("frequency-domain operator is singular");
  Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SolverError("frequency-domain solve failed");

  FdfdField f;
  f.gauge = src.gauge;
  if (src.gauge == Gauge::Electric) {
    f.ez.assign(g.n_nodes(), 0.0);
    for (std::size_t n = 0; n < g.n_nodes(); ++n)
      if (c.e_index[n] >= 0) f.ez[n] = x[c.e_index[n]];
  } else {
    f.hx.assign(x.data(), x.data() + c.n_hx);
    f.hy.assign(x.data() + c.n_hx, x.data() + x.size());
  }
  return f;
}

double wick_green(const MaterialGrid& g, double xi, const SourceSpec& src) {
  const Curl c = build_curl(g);
  const int row = source_row(g, c, src);
  Eigen::SparseMatrix<double> a = stiffness(c, src.gauge);
  const auto& m = mass(c, src.gauge);
  for (int r = 0; r < a.rows(); ++r) a.coeffRef(r, r) += xi * xi * m[static_cast<std::size_t>(r)];
  a.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs[row] = src.amplitude / dx_pow(g);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("imaginary-frequency operator is singular");
  Eigen::VectorXd x = ldlt.solve(rhs);
  return x[row];
}

GaussLaguerre gauss_laguerre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Laguerre order must be positive");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jac(k, k) = 2.0 * k + 1.0;
    if (k + 1 < n) jac(k, k + 1) = jac(k + 1, k) = k + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);
  GaussLaguerre q;
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()[i];
    // w exp(x) = 1 / sum_k psi_k(x)^2 with the bounded Laguerre functions
    // psi_k = L_k(x) exp(-x/2)
    double p0 = std::exp(-0.5 * x), p1 = (1.0 - x) * p0;
    double sum = p0 * p0 + (n > 1 ? p1 * p1 : 0.0);
    for (int k = 1; k + 1 < n; ++k) {
      const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
      sum += p2 * p2;
    }
    q.x.push_back(x);
    q.w_exp.push_back(1.0 / sum);
  }
  return q;
}

WickResult wick_force_1d(double h, int resolution, const WickOptions& opt) {
  GeometrySpec geom = parallel_plates(h, h + 1.0, opt.thickness_cells);
  const MaterialGrid g = build_grid(geom, resolution, 0.0);
  const int ic = g.i_of(0.0);
  check_uniform_site(g, g.node(ic));
  const SourceSpec se{{Field::Ez, ic, 0}, Gauge::Electric, 1.0};
  const SourceSpec h0{{Field::Hy, ic - 1, 0}, Gauge::Magnetic, 1.0};
  const SourceSpec h1{{Field::Hy, ic, 0}, Gauge::Magnetic, 1.0};
  const double eps = g.background_eps, mu = g.background_mu;

  auto integrand = [&](double xi) {
    const double ve = eps * mu * lattice_green_1d(-xi * xi * eps * mu, g.dx).real();
    const double ge = eps * wick_green(g, xi, se) - ve;
    const double gh = 0.5 * mu * (wick_green(g, xi, h0) + wick_green(g, xi, h1)) - ve;
    return 0.5 * xi * xi * (ge + gh) / std::numbers::pi;
  };

  const double alpha = 2.0 * h * std::sqrt(eps * mu);
  double prev = 0.0;
  WickResult r;
  for (int n = opt.n_start; n <= opt.n_max; n *= 2) {
    const GaussLaguerre q = gauss_laguerre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += q.w_exp[static_cast<std::size_t>(i)] *
                                       integrand(q.x[static_cast<std::size_t>(i)] / alpha);
    sum /= alpha;
    if (n > opt.n_start) {
      r.rel_change = std::abs(sum - prev) / std::abs(sum);
      r.force = sum;
      r.nodes = n;
      if (r.rel_change <= opt.rel_tol) return r;
    }
    prev = sum;
  }
  throw BudgetExceeded("imaginary-frequency quadrature did not converge", r.rel_change);
}

double mode_sum_force_1d(double h) {
  if (!(h > 0)) throw InvalidArgument("separation must be positive");
  // finite part of sum_n n exp(-n a) as a -> 0, from explicit mode sums
  auto remainder = [](double a) {
    double s = 0.0;
    const long nmax = static_cast<long>(60.0 / a);
    for (long n = nmax; n >= 1; --n) s += static_cast<double>(n) * std::exp(-a * static_cast<double>(n));
    return s - 1.0 / (a * a);
  };
  const double a = 0.02;
  const double r1 = remainder(a), r2 = remainder(0.5 * a), r4 = remainder(0.25 * a);
  // remainder = z + c a^2 + d a^4 + ...
  const double e1 = (4.0 * r2 - r1) / 3.0, e2 = (4.0 * r4 - r2) / 3.0;
  const double finite = (16.0 * e2 - e1) / 15.0;
  // E(h) = (pi / 2h) * finite; force on the left plate is +dE/dh
  return -std::numbers::pi * finite / (2.0 * h * h);
}

}  // namespace casimir
