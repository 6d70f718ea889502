#include "cpat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "cpat/error.hpp"

#ifndef CPAT_VERSION
#define CPAT_VERSION "0.0.0"
#endif

namespace cpat {

std::string_view tool_version() { return CPAT_VERSION; }

namespace {

Real real_from(const Json& j, PrecisionContext ctx) {
  if (!j.is_string()) throw Error("expected a decimal string, got " + j.dump());
  try {
    return Real::parse(j.get<std::string>(), ctx);
  } catch (const std::invalid_argument& e) {
    throw Error(e.what());
  }
}

double double_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw Error("expected a decimal string, got " + j.dump());
  return std::stod(j.get<std::string>());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string fixed12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string decimal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json RunManifest::to_json() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "cpat";
  j["tool_version"] = std::string(tool_version());
  j["command"] = command;
  j["precision_bits"] = bits;
  j["config"] = config;
  j["residuals"] = residuals;
  j["wall_seconds"] = decimal(wall_seconds);
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  const int version = field(j, "schema_version").get<int>();
  if (version != kSchemaVersion) {
    throw Error("unsupported schema version " + std::to_string(version) + " (expected " +
                std::to_string(kSchemaVersion) + ")");
  }
  RunManifest m;
  m.command = field(j, "command").get<std::string>();
  m.bits = field(j, "precision_bits").get<int>();
  m.config = field(j, "config");
  m.residuals = field(j, "residuals");
  m.wall_seconds = double_from(field(j, "wall_seconds"));
  return m;
}

Json config_to_json(const PatternConfig& c) {
  Json j;
  j["mode"] = std::string(mode_name(c.mode));
  j["gamma"] = c.gamma.to_exact_string();
  j["alpha"] = c.alpha.to_exact_string();
  j["kappa"] = c.kappa.to_exact_string();
  j["beta"] = c.beta.to_exact_string();
  j["skew"] = c.skew;
  j["size"] = c.size;
  j["bits"] = c.precision.bits();
  j["tol"] = {{"kite", decimal(c.tol.kite)},
              {"angle", decimal(c.tol.angle)},
              {"residual_eps", decimal(c.tol.residual_eps)},
              {"sign_band", decimal(c.tol.sign_band)}};
  return j;
}

PatternConfig config_from_json(const Json& j) {
  PatternConfig c;
  c.mode = parse_mode(field(j, "mode").get<std::string>());
  c.precision = PrecisionContext(field(j, "bits").get<int>());
  c.gamma = real_from(field(j, "gamma"), c.precision);
  c.alpha = real_from(field(j, "alpha"), c.precision);
  c.kappa = real_from(field(j, "kappa"), c.precision);
  c.beta = real_from(field(j, "beta"), c.precision);
  c.skew = field(j, "skew").get<bool>();
  c.size = field(j, "size").get<int>();
  if (c.size < 1) throw Error("config size must be positive");
  const Json& tol = field(j, "tol");
  c.tol.kite = double_from(field(tol, "kite"));
  c.tol.angle = double_from(field(tol, "angle"));
  c.tol.residual_eps = double_from(field(tol, "residual_eps"));
  c.tol.sign_band = double_from(field(tol, "sign_band"));
  return c;
}

Json to_json(const Artifact& a) {
  Json j;
  j["manifest"] = a.manifest.to_json();
  if (a.grid) {
    Json& m = j["manifest"];
    m["grid_config"] = config_to_json(a.grid->config());
    Json grid = Json::array();
    for (int n = 0; n <= a.grid->size(); ++n) {
      for (int m2 = 0; n + m2 <= a.grid->size(); ++m2) {
        const Complex& f = a.grid->at(n, m2);
        grid.push_back({{"n", n}, {"m", m2}, {"re", f.re().to_exact_string()}, {"im", f.im().to_exact_string()}});
      }
    }
    j["grid"] = std::move(grid);
  }
  if (a.radii) {
    const RadiusField& r = *a.radii;
    j["manifest"]["field"] = {{"mode", std::string(mode_name(r.mode()))},
                              {"gamma", r.gamma().to_exact_string()},
                              {"alpha", r.alpha().to_exact_string()},
                              {"M_max", r.M_max()},
                              {"bits", r.context().bits()},
                              {"kite_spread", decimal(r.kite_spread)}};
    Json radii = Json::array();
    for (int N = -r.M_max(); N <= r.M_max(); ++N) {
      for (int M = std::abs(N); M <= r.M_max(); ++M) {
        radii.push_back({{"N", N}, {"M", M}, {"R", r.at(N, M).to_exact_string()}});
      }
    }
    j["radii"] = std::move(radii);
  }
  if (!a.circles.empty()) {
    std::vector<const Circle*> order;
    for (const auto& c : a.circles) order.push_back(&c);
    std::sort(order.begin(), order.end(), [](const Circle* x, const Circle* y) {
      return x->z.N != y->z.N ? x->z.N < y->z.N : x->z.M < y->z.M;
    });
    Json circles = Json::array();
    for (const Circle* c : order) {
      circles.push_back({{"N", c->z.N},
                         {"M", c->z.M},
                         {"cx", c->center.re().to_exact_string()},
                         {"cy", c->center.im().to_exact_string()},
                         {"r", c->radius.to_exact_string()}});
    }
    j["circles"] = std::move(circles);
  }
  return j;
}

Artifact artifact_from_json(const Json& j) {
  Artifact a;
  const Json& manifest = field(j, "manifest");
  a.manifest = RunManifest::from_json(manifest);
  PrecisionContext ctx(std::max(a.manifest.bits, 2));
  if (j.contains("grid")) {
    PatternConfig cfg = config_from_json(field(manifest, "grid_config"));
    ctx = cfg.precision;
    GridMap map(cfg);
    std::vector<bool> seen(map.values().size(), false);
    for (const Json& p : field(j, "grid")) {
      const int n = field(p, "n").get<int>(), m = field(p, "m").get<int>();
      if (!map.contains(n, m)) throw Error("grid point outside the map: " + p.dump());
      map.at(n, m) = Complex(real_from(field(p, "re"), ctx), real_from(field(p, "im"), ctx));
      seen[GridMap::index(n, m)] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw Error("grid is incomplete");
    a.grid = std::move(map);
  }
  if (j.contains("radii")) {
    const Json& f = field(manifest, "field");
    const PrecisionContext fctx(field(f, "bits").get<int>());
    RadiusField r(field(f, "M_max").get<int>(), real_from(field(f, "gamma"), fctx),
                  real_from(field(f, "alpha"), fctx), parse_mode(field(f, "mode").get<std::string>()));
    r.kite_spread = double_from(field(f, "kite_spread"));
    for (const Json& p : field(j, "radii")) {
      const int N = field(p, "N").get<int>(), M = field(p, "M").get<int>();
      if (!r.contains(N, M)) throw Error("radius outside the field: " + p.dump());
      r.set(N, M, real_from(field(p, "R"), fctx));
    }
    a.radii = std::move(r);
  }
  if (j.contains("circles")) {
    for (const Json& p : field(j, "circles")) {
      Circle c;
      c.z = {field(p, "N").get<int>(), field(p, "M").get<int>()};
      c.center = Complex(real_from(field(p, "cx"), ctx), real_from(field(p, "cy"), ctx));
      c.radius = real_from(field(p, "r"), ctx);
      a.circles.push_back(std::move(c));
    }
  }
  return a;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const Artifact& a) { write_text(path, to_json(a).dump(1) + "\n"); }

Artifact read_json(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return artifact_from_json(j);
  } catch (const Json::exception& e) {
    throw Error("'" + path + "' does not match the artifact schema: " + e.what());
  }
}

std::string csv_table(const RunManifest& m, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  const Json mj = m.to_json();
  for (auto it = mj.begin(); it != mj.end(); ++it) {
    out << "# " << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

std::string grid_csv(const Artifact& a) {
  if (!a.grid) throw Error("artifact has no grid");
  std::vector<std::vector<std::string>> rows;
  for (int n = 0; n <= a.grid->size(); ++n) {
    for (int m = 0; n + m <= a.grid->size(); ++m) {
      const Complex& f = a.grid->at(n, m);
      rows.push_back({std::to_string(n), std::to_string(m), f.re().to_exact_string(), f.im().to_exact_string()});
    }
  }
  return csv_table(a.manifest, {"n", "m", "re", "im"}, rows);
}

std::string radii_csv(const Artifact& a) {
  if (!a.radii) throw Error("artifact has no radii");
  const RadiusField& r = *a.radii;
  std::vector<std::vector<std::string>> rows;
  for (int N = -r.M_max(); N <= r.M_max(); ++N) {
    for (int M = std::abs(N); M <= r.M_max(); ++M) {
      rows.push_back({std::to_string(N), std::to_string(M), r.at(N, M).to_exact_string()});
    }
  }
  return csv_table(a.manifest, {"N", "M", "R"}, rows);
}

std::string circles_csv(const Artifact& a) {
  std::vector<std::vector<std::string>> rows;
  for (const Circle& c : a.circles) {
    rows.push_back({std::to_string(c.z.N), std::to_string(c.z.M), c.center.re().to_exact_string(),
                    c.center.im().to_exact_string(), c.radius.to_exact_string()});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    const int xn = std::stoi(x[0]), yn = std::stoi(y[0]);
    return xn != yn ? xn < yn : std::stoi(x[1]) < std::stoi(y[1]);
  });
  return csv_table(a.manifest, {"N", "M", "cx", "cy", "r"}, rows);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string export_svg(const Artifact& a, const SvgOptions& options) {
  const bool draw_circles = options.circles && !a.circles.empty();
  const bool draw_mesh = (options.mesh || !draw_circles) && a.grid.has_value();
  if (!draw_circles && !draw_mesh) throw Error("nothing to draw: the artifact has neither circles nor a grid");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y, double r) {
    xmin = std::min(xmin, x - r);
    xmax = std::max(xmax, x + r);
    ymin = std::min(ymin, y - r);
    ymax = std::max(ymax, y + r);
  };
  if (draw_circles) {
    for (const Circle& c : a.circles) grow(c.center.re().to_double(), c.center.im().to_double(), c.radius.to_double());
  }
  if (draw_mesh) {
    for (const Complex& f : a.grid->values()) {
      if (f.is_finite()) grow(f.re().to_double(), f.im().to_double(), 0.0);
    }
  }
  if (options.axes) grow(0.0, 0.0, 0.0);
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double pad = 0.02 * span;
  const double scale = options.canvas / span;
  // Model (x, y) maps to ((x - xmin + pad)·scale, (ymax - y + pad)·scale).
  auto X = [&](double x) { return fixed12((x - xmin + pad) * scale); };
  auto Y = [&](double y) { return fixed12((ymax - y + pad) * scale); };
  const double width = (xmax - xmin + 2 * pad) * scale, height = (ymax - ymin + 2 * pad) * scale;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed12(width) << "\" height=\""
      << fixed12(height) << "\" viewBox=\"0 0 " << fixed12(width) << " " << fixed12(height) << "\">\n"
      << "<metadata>" << xml_escape(a.manifest.to_json().dump()) << "</metadata>\n";
  const std::string stroke = fixed12(std::max(0.5, options.canvas / 1600.0));
  if (draw_mesh) {
    const GridMap& g = *a.grid;
    out << "<g fill=\"none\" stroke=\"#555555\" stroke-width=\"" << stroke << "\">\n";
    auto segment = [&](int n1, int m1, int n2, int m2) {
      if (!g.is_finite(n1, m1) || !g.is_finite(n2, m2)) return;
      const Complex& p = g.at(n1, m1);
      const Complex& q = g.at(n2, m2);
      out << "<line x1=\"" << X(p.re().to_double()) << "\" y1=\"" << Y(p.im().to_double()) << "\" x2=\""
          << X(q.re().to_double()) << "\" y2=\"" << Y(q.im().to_double()) << "\"/>\n";
    };
    for (int n = 0; n <= g.size(); ++n) {
      for (int m = 0; n + m <= g.size(); ++m) {
        if (g.contains(n + 1, m)) segment(n, m, n + 1, m);
        if (g.contains(n, m + 1)) segment(n, m, n, m + 1);
      }
    }
    out << "</g>\n";
  }
  if (draw_circles) {
    out << "<g fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"" << stroke << "\">\n";
    for (const Circle& c : a.circles) {
      out << "<circle cx=\"" << X(c.center.re().to_double()) << "\" cy=\"" << Y(c.center.im().to_double())
          << "\" r=\"" << fixed12(c.radius.to_double() * scale) << "\"/>\n";
    }
    out << "</g>\n";
  }
  if (options.axes) {
    out << "<g stroke=\"#999999\" stroke-width=\"" << stroke << "\" stroke-dasharray=\"4 4\">\n"
        << "<line x1=\"" << X(xmin - pad) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(xmax + pad) << "\" y2=\""
        << Y(0.0) << "\"/>\n"
        << "<line x1=\"" << X(0.0) << "\" y1=\"" << Y(ymin - pad) << "\" x2=\"" << X(0.0) << "\" y2=\""
        << Y(ymax + pad) << "\"/>\n"
        << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cpat
