#include "casimir/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/format.hpp"
#include "casimir/kernel.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"geometry",
       {"dimensions", "domain_length_in_a", "domain_height_in_a", "plate_separation_in_a",
        "plate_thickness_cells", "plates", "epsilon", "mu", "surface", "surface_x_in_a",
        "surface_y_in_a", "surface_offset_in_a", "enclose_plate", "surface_x_min_in_a",
        "surface_x_max_in_a", "surface_y_min_in_a", "surface_y_max_in_a"}},
      {"numeric",
       {"resolution_cells_per_a", "courant", "sigma_in_2pi_c_over_a", "tolerance",
        "max_time_in_a", "min_time_in_a", "kernel_quadrature_points"}},
      {"campaign", {"gauges", "components", "vacuum_subtraction", "workers"}},
      {"output", {"directory", "emit_series", "emit_kernel", "emit_summary", "plot_data"}},
  };
  return keys;
}

const std::set<std::string>& plate_keys() {
  static const std::set<std::string> keys = {"face_in_a", "extends",  "thickness_cells",
                                             "conductor", "epsilon",  "mu",
                                             "y_min_in_a", "y_max_in_a"};
  return keys;
}

bool is_plate_section(const std::string& name) {
  return name.size() > 5 && name.compare(0, 5, "plate") == 0 &&
         std::all_of(name.begin() + 5, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(std::string s) {
  auto sp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && sp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && sp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Section {
 public:
  Section(const pt::ptree* t, std::string name) : t_(t), name_(std::move(name)) {}

  bool has(const std::string& key) const { return t_ && t_->find(key) != t_->not_found(); }
  std::string raw(const std::string& key) const { return trim(t_->get<std::string>(key)); }

  double number(const std::string& key, double def) const {
    if (!has(key)) return def;
    double v;
    if (!parse_double(raw(key), v)) throw ParseError(where(key) + ": not a number");
    return v;
  }
  long integer(const std::string& key, long def) const {
    if (!has(key)) return def;
    double v;
    if (!parse_double(raw(key), v) || v != std::floor(v) || std::abs(v) > 9e15)
      throw ParseError(where(key) + ": not an integer");
    return static_cast<long>(v);
  }
  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    std::string v = raw(key);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ParseError(where(key) + ": expected true or false");
  }
  std::string text(const std::string& key, const std::string& def) const {
    return has(key) ? raw(key) : def;
  }
  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  const pt::ptree* t_;
  std::string name_;
};

Section section(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return Section(it == root.not_found() ? nullptr : &it->second, name);
}

void fail(const std::string& field, const std::string& why) {
  throw ValidationError(field + ": " + why);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("config: ") + e.message() + " (line " +
                     std::to_string(e.line()) + ")");
  }

  std::map<long, const pt::ptree*> plate_sections;
  for (const auto& [name, sub] : root) {
    if (sub.empty()) throw ParseError("unknown key '" + name + "' outside any section");
    const std::set<std::string>* allowed = nullptr;
    if (auto it = allowed_keys().find(name); it != allowed_keys().end())
      allowed = &it->second;
    else if (is_plate_section(name)) {
      allowed = &plate_keys();
      plate_sections[std::stol(name.substr(5))] = &sub;
    } else
      throw ParseError("unknown section [" + name + "]");
    for (const auto& kv : sub)
      if (!allowed->count(kv.first))
        throw ParseError("unknown key '" + name + "." + kv.first + "'");
  }

  RunConfig c;
  GeometrySpec& g = c.geometry;
  Section geo = section(root, "geometry");
  g.dims = static_cast<int>(geo.integer("dimensions", 1));
  g.separation_in_a = geo.number("plate_separation_in_a", 1.0);
  g.epsilon = geo.number("epsilon", 1.0);
  g.mu = geo.number("mu", 1.0);
  const std::string len = geo.text("domain_length_in_a", "auto");
  c.auto_length = len == "auto";
  if (!c.auto_length) g.length_x_in_a = geo.number("domain_length_in_a", 0.0);
  g.length_y_in_a = geo.number("domain_height_in_a", 0.0);
  const int thick = static_cast<int>(geo.integer("plate_thickness_cells", 1));

  const std::string plates = geo.text("plates", plate_sections.empty() ? "pair" : "custom");
  if (!plate_sections.empty()) {
    for (const auto& [idx, sub] : plate_sections) {
      Section p(sub, "plate" + std::to_string(idx));
      PlateSpec ps;
      if (!p.has("face_in_a")) throw ParseError(p.where("face_in_a") + ": required");
      ps.face_in_a = p.number("face_in_a", 0.0);
      const std::string ext = p.text("extends", "left");
      if (ext != "left" && ext != "right") throw ParseError(p.where("extends") + ": expected left or right");
      ps.extends_left = ext == "left";
      ps.thickness_cells = static_cast<int>(p.integer("thickness_cells", thick));
      ps.conductor = p.boolean("conductor", true);
      ps.epsilon = p.number("epsilon", 1.0);
      ps.mu = p.number("mu", 1.0);
      ps.y_min_in_a = p.number("y_min_in_a", ps.y_min_in_a);
      ps.y_max_in_a = p.number("y_max_in_a", ps.y_max_in_a);
      g.plates.push_back(ps);
    }
  } else if (plates == "pair") {
    GeometrySpec pp = parallel_plates(g.separation_in_a, 1.0, thick);
    g.plates = pp.plates;
  } else if (plates != "none") {
    throw ParseError(geo.where("plates") + ": expected pair or none");
  }

  const std::string surf = geo.text("surface", g.dims == 1 ? "single_point" : "closed");
  if (surf == "single_point")
    g.surface.mode = SurfaceMode::SinglePoint;
  else if (surf == "closed")
    g.surface.mode = SurfaceMode::Closed;
  else
    throw ParseError(geo.where("surface") + ": expected single_point or closed");
  g.surface.x_in_a = geo.number("surface_x_in_a", g.surface.x_in_a);
  g.surface.y_in_a = geo.number("surface_y_in_a", 0.0);
  g.surface.offset_in_a = geo.number("surface_offset_in_a", g.surface.offset_in_a);
  g.surface.enclose_plate = static_cast<int>(geo.integer("enclose_plate", 0));
  g.surface.x_min_in_a = geo.number("surface_x_min_in_a", 0.0);
  g.surface.x_max_in_a = geo.number("surface_x_max_in_a", 0.0);
  g.surface.y_min_in_a = geo.number("surface_y_min_in_a", 0.0);
  g.surface.y_max_in_a = geo.number("surface_y_max_in_a", 0.0);

  Section num = section(root, "numeric");
  NumericConfig& n = c.numeric;
  n.resolution = static_cast<int>(num.integer("resolution_cells_per_a", n.resolution));
  n.courant = num.number("courant", n.courant);
  n.sigma_user = num.number("sigma_in_2pi_c_over_a", n.sigma_user);
  n.tolerance = num.number("tolerance", n.tolerance);
  n.max_time = num.number("max_time_in_a", n.max_time);
  n.min_time = num.number("min_time_in_a", n.min_time);
  n.quadrature_points = num.integer("kernel_quadrature_points", n.quadrature_points);

  Section cam = section(root, "campaign");
  if (cam.has("gauges")) {
    c.campaign.gauges.clear();
    for (const auto& s : split_list(cam.raw("gauges"))) {
      if (s == "electric")
        c.campaign.gauges.push_back(Gauge::Electric);
      else if (s == "magnetic")
        c.campaign.gauges.push_back(Gauge::Magnetic);
      else
        throw ParseError(cam.where("gauges") + ": unknown gauge '" + s + "'");
    }
  }
  if (cam.has("components")) {
    c.campaign.components.clear();
    for (const auto& s : split_list(cam.raw("components"))) {
      if (s == "x")
        c.campaign.components.push_back(0);
      else if (s == "y")
        c.campaign.components.push_back(1);
      else
        throw ParseError(cam.where("components") + ": unknown component '" + s + "'");
    }
  }
  const std::string sub = cam.text("vacuum_subtraction", "auto");
  if (sub == "auto")
    c.campaign.vacuum_subtraction = Subtraction::Auto;
  else if (sub == "on" || sub == "true")
    c.campaign.vacuum_subtraction = Subtraction::On;
  else if (sub == "off" || sub == "false")
    c.campaign.vacuum_subtraction = Subtraction::Off;
  else
    throw ParseError(cam.where("vacuum_subtraction") + ": expected auto, on or off");
  c.campaign.workers = static_cast<int>(cam.integer("workers", 1));

  Section out = section(root, "output");
  c.output.directory = out.text("directory", c.output.directory.string());
  c.output.emit_series = out.boolean("emit_series", true);
  c.output.emit_kernel = out.boolean("emit_kernel", true);
  c.output.emit_summary = out.boolean("emit_summary", true);
  c.output.plot_data = out.boolean("plot_data", false);

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

bool RunConfig::subtract_vacuum() const {
  switch (campaign.vacuum_subtraction) {
    case Subtraction::On: return true;
    case Subtraction::Off: return false;
    case Subtraction::Auto: return geometry.surface.mode == SurfaceMode::SinglePoint;
  }
  return false;
}

GeometrySpec RunConfig::resolved_geometry() const {
  GeometrySpec g = geometry;
  if (!auto_length || g.dims != 1) return g;
  double extent = 0.0;
  for (const auto& p : g.plates)
    extent = std::max(extent, std::abs(p.face_in_a) + (p.thickness_cells + 1.0) / numeric.resolution);
  double reach = 1.0;
  if (g.surface.mode == SurfaceMode::Closed) {
    const double off = std::isnan(g.surface.offset_in_a) ? 0.5 * g.separation_in_a
                                                         : g.surface.offset_in_a;
    // the outside point must not see the wall before the time budget ends
    reach = off + 0.5 * numeric.max_time / std::sqrt(g.epsilon * g.mu) + 1.0;
  }
  g.length_x_in_a = 2.0 * (extent + reach);
  return g;
}

void RunConfig::validate() const {
  const auto& g = geometry;
  if (g.dims != 1 && g.dims != 2) fail("geometry.dimensions", "must be 1 or 2");
  if (!(g.separation_in_a > 0)) fail("geometry.plate_separation_in_a", "must be positive");
  if (!(g.epsilon >= 1)) fail("geometry.epsilon", "must be >= 1");
  if (!(g.mu >= 1)) fail("geometry.mu", "must be >= 1");
  if (!auto_length && !(g.length_x_in_a > 0)) fail("geometry.domain_length_in_a", "must be positive");
  if (g.dims == 2) {
    if (auto_length) fail("geometry.domain_length_in_a", "must be given explicitly in 2D");
    if (!(g.length_y_in_a > 0)) fail("geometry.domain_height_in_a", "must be positive in 2D");
    if (g.surface.mode == SurfaceMode::SinglePoint)
      fail("geometry.surface", "single_point is only available in 1D");
  }
  for (std::size_t k = 0; k < g.plates.size(); ++k) {
    const auto& p = g.plates[k];
    const std::string tag = "plate" + std::to_string(k + 1);
    if (!auto_length && !(std::abs(p.face_in_a) < 0.5 * g.length_x_in_a))
      fail("geometry.domain_length_in_a", "must contain every plate face");
    if (p.thickness_cells < 0) fail(tag + ".thickness_cells", "must be >= 0");
    if (!p.conductor && !(p.epsilon >= 1)) fail(tag + ".epsilon", "must be >= 1");
    if (!p.conductor && !(p.mu >= 1)) fail(tag + ".mu", "must be >= 1");
  }

  const auto& n = numeric;
  if (n.resolution < 8) fail("numeric.resolution_cells_per_a", "must be at least 8");
  if (!(n.courant > 0) || n.courant > 1) fail("numeric.courant", "must lie in (0, 1]");
  if (!(n.sigma_user >= 0))
    fail("numeric.sigma_in_2pi_c_over_a", "must be >= 0 (gain media are not allowed)");
  if (!(n.tolerance > 0)) fail("numeric.tolerance", "must be positive");
  if (!(n.max_time > 0)) fail("numeric.max_time_in_a", "must be positive");
  if (!(n.min_time >= 0) || n.min_time > n.max_time)
    fail("numeric.min_time_in_a", "must lie in [0, max_time_in_a]");
  if (n.quadrature_points < kMinQuadraturePoints)
    fail("numeric.kernel_quadrature_points", "must be at least 1000000");
  if (n.quadrature_points % 2 != 0) fail("numeric.kernel_quadrature_points", "must be even");
  const double dt = courant_dt(1.0 / n.resolution, g.dims, n.courant);
  if (n.max_time / dt > 0.5 * static_cast<double>(n.quadrature_points))
    fail("numeric.max_time_in_a", "needs more steps than the kernel quadrature provides");

  if (campaign.gauges.empty()) fail("campaign.gauges", "must name at least one gauge");
  if (campaign.components.empty()) fail("campaign.components", "must name at least one component");
  for (int c : campaign.components)
    if (c >= g.dims) fail("campaign.components", "y is only available in 2D");
  if (campaign.workers < 1) fail("campaign.workers", "must be at least 1");
  if (subtract_vacuum() && g.dims != 1)
    fail("campaign.vacuum_subtraction", "only available in 1D");
}

}  // namespace casimir
