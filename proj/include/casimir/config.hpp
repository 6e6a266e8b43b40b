#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/engine.hpp"
#include "casimir/lattice.hpp"

namespace casimir {

enum class Subtraction { Auto, On, Off };

struct NumericConfig {
  int resolution = 40;
  double courant = 0.5;
  double sigma_user = 1.0;  // 2*pi*c/a
  double tolerance = 1e-3;
  double max_time = 400.0;
  double min_time = 0.0;
  long quadrature_points = 10000000;
};

struct CampaignConfig {
  std::vector<Gauge> gauges{Gauge::Electric, Gauge::Magnetic};
  std::vector<int> components{0};
  Subtraction vacuum_subtraction = Subtraction::Auto;
  int workers = 1;
};

struct OutputConfig {
  std::filesystem::path directory = "casimir_out";
  bool emit_series = true;
  bool emit_kernel = true;
  bool emit_summary = true;
  bool plot_data = false;
};

struct RunConfig {
  GeometrySpec geometry;
  bool auto_length = true;  // 1D domain length derived from the time budget
  NumericConfig numeric;
  CampaignConfig campaign;
  OutputConfig output;

  // Throws ValidationError naming the offending field.
  void validate() const;
  bool subtract_vacuum() const;
  // Geometry with the automatic domain length filled in.
  GeometrySpec resolved_geometry() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace casimir
