#include "casimir/kernel.hpp"

#include <fftw3.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/format.hpp"

namespace casimir {

namespace {

constexpr cplx I{0.0, 1.0};

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Continuous contour Jacobian, (1 + i sigma / 2 xi) / sqrt(1 + i sigma / xi).
cplx jacobian(double xi, double sigma) {
  return (1.0 + I * (0.5 * sigma / xi)) / std::sqrt(1.0 + I * (sigma / xi));
}

// d g_d / d xi by a central difference.
cplx g_discrete_slope(double xi, double sigma, double dt) {
  const double h = 1e-4 * xi;
  return (g_discrete(xi + h, sigma, dt) - g_discrete(xi - h, sigma, dt)) / (2.0 * h);
}

// d/dxi [sqrt(xi) g_d(xi)] at 0 by Richardson extrapolation.
cplx small_xi_slope(double sigma, double dt, cplx c0) {
  const double d = 1e-6 * std::max(sigma, 1.0);
  auto p = [&](double x) { return std::sqrt(x) * g_discrete(x, sigma, dt); };
  return (4.0 * (p(0.5 * d) - c0) / (0.5 * d) - (p(d) - c0) / d) / 3.0;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw SolverError("out of memory for the kernel quadrature");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// One table: sum_m dxi g_m exp(i xi_m tau_n) over the positive half of the
// period, plus endpoint corrections.
std::vector<cplx> kernel_table(const ContourParams& p, double offset, FftwBuffer& buf,
                               fftw_plan plan) {
  const long nq = p.nq, half = nq / 2;
  const double dt = p.dt, sigma = p.sigma;
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(nq) * dt);
  const cplx c0 = g_small_xi_coefficient(sigma);

  for (long m = 0; m < nq; ++m) {
    cplx v = 0.0;
    if (m >= 1 && m <= half) {
      const double xi = static_cast<double>(m) * dxi;
      v = g_discrete(xi, sigma, dt);
      if (m == half) v *= 0.5;
      if (offset != 0.0) v *= std::exp(I * (xi * offset * dt));
    } else if (m == 0 && sigma > 0) {
      // generalized Euler-Maclaurin weight for the xi^(-1/2) endpoint
      v = -boost::math::zeta(0.5) * c0 / std::sqrt(dxi);
    }
    buf.data[m][0] = v.real();
    buf.data[m][1] = v.imag();
  }
  fftw_execute(plan);

  const long n = p.n;
  std::vector<cplx> out(static_cast<std::size_t>(n));
  const double b = std::numbers::pi / dt;
  const cplx gb = g_discrete(b, sigma, dt);
  const cplx gbp = g_discrete_slope(b, sigma, dt);
  const cplx c1 = sigma > 0 ? small_xi_slope(sigma, dt, c0) : cplx(0.0);
  const double zm = boost::math::zeta(-0.5);
  for (long k = 0; k < n; ++k) {
    const double tau = (static_cast<double>(k) + offset) * dt;
    cplx v = dxi * cplx(buf.data[k][0], buf.data[k][1]);
    if (sigma > 0)
      v += -zm * (c1 + I * tau * c0) * std::pow(dxi, 1.5);
    else
      v += (dxi * dxi / 12.0) * (-I);  // smooth endpoint, g_d'(0) = -i
    v += -(dxi * dxi / 12.0) * (gbp + I * tau * gb) * std::exp(I * (tau * b));
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

}  // namespace

cplx omega(double xi, double sigma) {
  if (xi == 0.0) return 0.0;
  return std::sqrt(cplx(xi * xi, sigma * xi));
}

cplx omega_prime(double xi, double sigma) { return jacobian(xi, sigma); }

cplx g_continuous(double xi, double sigma) {
  if (xi < 0.0) return 0.0;
  if (xi == 0.0) {
    if (sigma > 0) throw InvalidArgument("g(xi) is singular at xi = 0 for sigma > 0");
    return 0.0;
  }
  return -I * xi * std::sqrt(1.0 + I * (sigma / xi)) * (1.0 + I * (0.5 * sigma / xi));
}

cplx xi_d(double xi, double dt) {
  const double th = 0.5 * xi * dt;
  return (2.0 / dt) * std::sin(th) * std::exp(-I * th);
}

cplx g_discrete(double xi, double sigma, double dt) {
  if (xi < 0.0) return 0.0;
  if (xi == 0.0) {
    if (sigma > 0) throw InvalidArgument("g_d(xi) is singular at xi = 0 for sigma > 0");
    return 0.0;
  }
  const double th = 0.5 * xi * dt;
  const double s = (2.0 / dt) * std::sin(th), c = std::cos(th);
  const cplx om2(s * s, sigma * s * c);
  return om2 / (I * s) * jacobian(xi, sigma);
}

cplx g_small_xi_coefficient(double sigma) {
  return 0.5 * std::sqrt(I) * std::pow(sigma, 1.5);
}

void ContourParams::validate() const {
  if (!(sigma >= 0)) throw ConfigurationError("sigma must be >= 0");
  if (!(dt > 0)) throw ConfigurationError("time step must be positive");
  if (nq < kMinQuadraturePoints)
    throw ConfigurationError("kernel quadrature needs at least 1e6 points, got " +
                             std::to_string(nq));
  if (nq % 2 != 0) throw ConfigurationError("kernel quadrature point count must be even");
  if (n < 0 || n > nq / 2)
    throw ConfigurationError("kernel series length must lie in [0, N_q / 2]");
}

KernelSeries kernel_series(const ContourParams& p) {
  p.validate();
  KernelSeries k;
  k.sigma = p.sigma;
  k.dt = p.dt;
  k.nq = p.nq;
  if (p.n == 0) return k;

  FftwBuffer buf(static_cast<std::size_t>(p.nq));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(p.nq), buf.data, buf.data, FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  if (!plan) throw SolverError("FFTW could not plan the kernel transform");
  k.integer = kernel_table(p, 0.0, buf, plan);
  k.half = kernel_table(p, 0.5, buf, plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return k;
}

namespace {

std::string cache_header(const ContourParams& p, double sigma_user) {
  return "# sigma_in_2pi_c_over_a=" + fmt(sigma_user) + " dt=" + fmt(p.dt) +
         " N=" + fmt(p.n) + " N_q=" + fmt(p.nq);
}

}  // namespace

std::string kernel_cache_name(const ContourParams& p, double sigma_user) {
  return "kernel_sigma" + fmt(sigma_user) + "_dt" + fmt(p.dt) + "_N" + fmt(p.n) + "_Nq" +
         fmt(p.nq) + ".csv";
}

void write_kernel_cache(const std::filesystem::path& path, const KernelSeries& k,
                        double sigma_user) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write kernel cache " + path.string());
  ContourParams p{k.sigma, k.dt, static_cast<long>(k.size()), k.nq};
  f << cache_header(p, sigma_user) << '\n';
  for (std::size_t n = 0; n < k.integer.size(); ++n)
    f << n << ", " << fmt(k.integer[n].real()) << ", " << fmt(k.integer[n].imag()) << '\n';
  for (std::size_t n = 0; n < k.half.size(); ++n)
    f << n << ".5, " << fmt(k.half[n].real()) << ", " << fmt(k.half[n].imag()) << '\n';
  if (!f) throw IoError("failed writing kernel cache " + path.string());
}

std::optional<KernelSeries> read_kernel_cache(const std::filesystem::path& path,
                                              const ContourParams& p, double sigma_user) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::string line;
  if (!std::getline(f, line) || line != cache_header(p, sigma_user)) return std::nullopt;
  KernelSeries k;
  k.sigma = p.sigma;
  k.dt = p.dt;
  k.nq = p.nq;
  const auto n = static_cast<std::size_t>(p.n);
  k.integer.reserve(n);
  k.half.reserve(n);
  while (std::getline(f, line)) {
    auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return std::nullopt;
    double re, im;
    if (!parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), re) ||
        !parse_double(std::string_view(line).substr(c2 + 1), im))
      return std::nullopt;
    const bool half = line.substr(0, c1).find('.') != std::string::npos;
    (half ? k.half : k.integer).emplace_back(re, im);
  }
  if (k.integer.size() != n || k.half.size() != n) return std::nullopt;
  return k;
}

KernelSeries load_or_compute_kernel(const ContourParams& p, double sigma_user,
                                    const std::filesystem::path& cache_dir) {
  if (!cache_dir.empty()) {
    auto path = cache_dir / kernel_cache_name(p, sigma_user);
    if (auto k = read_kernel_cache(path, p, sigma_user)) return *k;
    KernelSeries k = kernel_series(p);
    write_kernel_cache(path, k, sigma_user);
    return k;
  }
  return kernel_series(p);
}

}  // namespace casimir
