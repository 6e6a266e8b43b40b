#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <vector>

namespace casimir {

using cplx = std::complex<double>;

// All rates and frequencies here are angular, in c/a.

// xi * sqrt(1 + i sigma / xi) on the principal branch; omega(0) = 0.
cplx omega(double xi, double sigma);
cplx omega_prime(double xi, double sigma);

// omega^2 / (i xi) * d omega / d xi, zero for xi < 0. Throws
// InvalidArgument at xi = 0 when sigma > 0 (integrable singularity).
cplx g_continuous(double xi, double sigma);

// (2/dt) sin(xi dt / 2) exp(-i xi dt / 2)
cplx xi_d(double xi, double dt);

// Discrete kernel: Omega^2 / (i s) times the continuous Jacobian, where
// s = (2/dt) sin(xi dt/2), c = cos(xi dt/2) and Omega^2 = s^2 + i sigma s c
// is the symbol of the leapfrog update with time-centred damping.
cplx g_discrete(double xi, double sigma, double dt);

// Limit of sqrt(xi) g(xi) as xi -> 0+.
cplx g_small_xi_coefficient(double sigma);

inline constexpr long kMinQuadraturePoints = 1000000;

struct ContourParams {
  double sigma = 0;  // angular
  double dt = 0;
  long n = 0;        // coefficients kept per table
  long nq = 10000000;

  void validate() const;
};

// Coefficients of g(-t) at t = n dt (integer) and t = (n + 1/2) dt (half).
struct KernelSeries {
  double sigma = 0;
  double dt = 0;
  long nq = 0;
  std::vector<cplx> integer;
  std::vector<cplx> half;

  std::size_t size() const { return integer.size(); }
};

KernelSeries kernel_series(const ContourParams& params);

// Cache file: one header line, then "n, Re g, Im g" rows. Integer rows
// use n = 0, 1, ...; half-step rows use n = 0.5, 1.5, ...
void write_kernel_cache(const std::filesystem::path& path, const KernelSeries& k,
                        double sigma_user);
std::optional<KernelSeries> read_kernel_cache(const std::filesystem::path& path,
                                              const ContourParams& params,
                                              double sigma_user);
std::string kernel_cache_name(const ContourParams& params, double sigma_user);

// Returns the cached series when the file exists and matches, otherwise
// computes and (when cache_dir is non-empty) stores it.
KernelSeries load_or_compute_kernel(const ContourParams& params, double sigma_user,
                                    const std::filesystem::path& cache_dir);

}  // namespace casimir
