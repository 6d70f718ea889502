#include "cpat/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cpat/error.hpp"
#include "cpat/geometry.hpp"
#include "cpat/io.hpp"
#include "cpat/painleve.hpp"
#include "cpat/pattern.hpp"
#include "cpat/riccati.hpp"

namespace cpat {

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

// Rethrows configuration and parsing errors as usage errors.
template <class F>
auto usage_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// Decimal or "p/q".
Real parse_number(const std::string& s, PrecisionContext ctx) {
  return usage_guard([&] {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Real::parse(s, ctx);
    return Real::parse(s.substr(0, slash), ctx) / Real::parse(s.substr(slash + 1), ctx);
  });
}

struct AngleOptions {
  std::string alpha;
  std::string alpha_pi;

  void add(CLI::App* app) {
    auto* a = app->add_option("--alpha", alpha, "Intersection angle in radians");
    auto* p = app->add_option("--alpha-pi", alpha_pi, "Intersection angle as a multiple of pi (decimal or p/q)");
    a->excludes(p);
  }
  Real value(PrecisionContext ctx) const {
    if (!alpha.empty()) return parse_number(alpha, ctx);
    return Real::pi(ctx) * parse_number(alpha_pi.empty() ? "1/2" : alpha_pi, ctx);
  }
  std::string text() const { return !alpha.empty() ? alpha : (alpha_pi.empty() ? "1/2" : alpha_pi) + "·pi"; }
};

struct Output {
  std::string path;
  std::string format;  // json, csv or svg; inferred from the path when empty

  void add(CLI::App* app) {
    app->add_option("--out", path, "Output file (stdout when omitted)");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  }
  std::string resolve(const std::string& fallback) const {
    if (!format.empty()) return format;
    for (const char* ext : {"json", "csv", "svg"}) {
      const std::string suffix = std::string(".") + ext;
      if (path.size() > suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return ext;
      }
    }
    return fallback;
  }
};

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty() || o.path == "-") {
    out << text;
    out.flush();
  } else {
    write_text(o.path, text);
  }
}

std::string command_line(const std::vector<std::string>& args) {
  std::string s = "cpat";
  for (const auto& a : args) s += " " + a;
  return s;
}

PrecisionContext context_for(int bits) {
  return usage_guard([&] { return PrecisionContext(bits); });
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string mode;
  std::string gamma = "0.5";
  AngleOptions angle;
  std::string kappa;
  std::string beta_pi;
  int size = 20;
  int bits = 0;
  double tol = 0.0;
  Output output;
};

Artifact pattern_artifact(const GridMap& map, RunManifest manifest, double tol, std::vector<std::string>& notes) {
  Artifact a;
  const PatternConfig& cfg = map.config();
  manifest.bits = cfg.precision.bits();
  manifest.residuals["kite_spread"] = decimal(max_edge_spread(map));
  manifest.residuals["constraint_residual"] = decimal(map.constraint_residual);
  if (cfg.mode != PatternMode::kappa_variant) {
    try {
      RadiusField field = extract_radius_field(map, tol);
      const FieldResiduals fr = field_residuals(field);
      manifest.residuals["square_max"] = fr.square_max.to_string(6);
      manifest.residuals["ri_max"] = fr.ri_max.to_string(6);
      a.circles = circle_pattern(map, field).circles;
      a.radii = std::move(field);
    } catch (const NotAKite& e) {
      notes.push_back(std::string("no radius field: ") + e.what());
    }
  }
  a.grid = map;
  a.manifest = std::move(manifest);
  return a;
}

std::string render(const Artifact& a, const std::string& format, const SvgOptions& svg = {}) {
  if (format == "json") return to_json(a).dump(1) + "\n";
  if (format == "svg") return export_svg(a, svg);
  if (a.grid) return grid_csv(a);
  if (a.radii) return radii_csv(a);
  return circles_csv(a);
}

int run_generate(const GenerateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits > 0 ? o.bits : 53);
  PatternConfig cfg = usage_guard([&] {
    std::optional<Real> kappa, beta;
    if (!o.kappa.empty()) kappa = parse_number(o.kappa, ctx);
    if (!o.beta_pi.empty()) beta = Real::pi(ctx) * parse_number(o.beta_pi, ctx);
    return PatternConfig::make(parse_mode(o.mode), parse_number(o.gamma, ctx), o.angle.value(ctx), o.size, ctx,
                               kappa, beta);
  });
  if (o.tol > 0) cfg.tol.kite = o.tol;

  RunManifest m;
  m.command = command_line(args);
  GridMap map = [&] {
    if (o.bits > 0) return generate_map(cfg);
    LadderResult lr = generate_with_ladder(cfg);
    m.residuals["ladder_accepted"] = lr.accepted;
    return lr.map;
  }();
  m.config = config_to_json(map.config());
  std::vector<std::string> notes;
  Artifact a = pattern_artifact(map, std::move(m), cfg.tol.kite, notes);
  clock.stamp(a.manifest);
  emit(o.output, render(a, o.output.resolve("json")), out);
  for (const auto& n : notes) err << "note: " << n << "\n";

  const double spread = max_edge_spread(map);
  if (cfg.mode == PatternMode::kappa_variant) return kExitOk;
  if (spread > cfg.tol.kite) {
    if (cfg.skew) {
      err << "warning: kite spread " << spread << " above " << cfg.tol.kite << " (skew initial data)\n";
      return kExitOk;
    }
    err << "error: kite spread " << spread << " above " << cfg.tol.kite << "\n";
    return kExitFailed;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- radii

struct RadiiOptions {
  std::string mode = "zgamma";
  std::string gamma = "0.5";
  AngleOptions angle;
  std::string ri;
  int mmax = 10;
  int bits = 212;
  Output output;
};

int run_radii(const RadiiOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits);
  const PatternMode mode = usage_guard([&] { return parse_mode(o.mode); });
  if (mode == PatternMode::kappa_variant) throw UsageError("radii: the kappa mode has no radius field");
  if (o.mmax < 1) throw UsageError("radii: --mmax must be at least 1");
  const PatternConfig cfg = usage_guard([&] {
    return PatternConfig::make(mode, parse_number(o.gamma, ctx), o.angle.value(ctx), 2 * o.mmax, ctx);
  });

  Artifact a;
  a.manifest.command = command_line(args);
  a.manifest.config = config_to_json(cfg);
  a.manifest.config["mmax"] = o.mmax;
  a.manifest.bits = o.bits;
  try {
    if (mode == PatternMode::zgamma) {
      const Real Ri = o.ri.empty() ? p0_closed(RiccatiParams::make(cfg.gamma, cfg.alpha)) : parse_number(o.ri, ctx);
      a.manifest.config["Ri"] = Ri.to_exact_string();
      a.radii = radii_evolution(Real(1L, ctx), Ri, cfg, o.mmax);
    } else {
      RadiusField f = z2_field(cfg.alpha, o.mmax);
      a.radii = mode == PatternMode::log ? dual_field(f) : std::move(f);
    }
  } catch (const SignLoss& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  const FieldResiduals fr = field_residuals(*a.radii);
  a.manifest.residuals["square_max"] = fr.square_max.to_string(6);
  a.manifest.residuals["ri_max"] = fr.ri_max.to_string(6);
  const ValidationReport sign = check_sign_condition(*a.radii, cfg.tol.sign_band);
  a.manifest.residuals["sign_condition"] = sign.passed;
  clock.stamp(a.manifest);
  emit(o.output, o.output.resolve("csv") == "json" ? to_json(a).dump(1) + "\n" : radii_csv(a), out);
  return kExitOk;
}

// ----------------------------------------------------------------- riccati

struct RiccatiOptionsCli {
  std::string gamma = "0.5";
  AngleOptions angle;
  long n = 100;
  int bits = 256;
  std::string delta = "0";
  bool through = false;
  Output output;
};

std::string_view status_name(RiccatiStatus s) {
  switch (s) {
    case RiccatiStatus::all_positive: return "all_positive";
    case RiccatiStatus::left_positive: return "left_positive";
    case RiccatiStatus::pole_crossing: return "pole_crossing";
  }
  return "?";
}

int run_riccati(const RiccatiOptionsCli& o, const std::vector<std::string>& args, std::ostream& out) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits);
  if (o.n < 0) throw UsageError("riccati: -n must be non-negative");
  const RiccatiParams params =
      usage_guard([&] { return RiccatiParams::make(parse_number(o.gamma, ctx), o.angle.value(ctx)); });
  const Real p0 = p0_closed(params) + parse_number(o.delta, ctx);
  RiccatiOptions ro;
  ro.stop_at_sign_loss = !o.through;
  const RiccatiTrajectory traj = riccati_iterate(p0, params, o.n, ro);

  RunManifest m;
  m.command = command_line(args);
  m.config = {{"gamma", params.gamma.to_exact_string()},
              {"alpha", params.alpha.to_exact_string()},
              {"delta", parse_number(o.delta, ctx).to_exact_string()},
              {"n", o.n},
              {"bits", o.bits}};
  m.bits = o.bits;
  m.residuals = {{"status", std::string(status_name(traj.status))},
                 {"exit_index", traj.exit_index},
                 {"recurrence_residual", riccati_residual(traj).to_string(6)}};
  clock.stamp(m);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < traj.p.size(); ++i) rows.push_back({std::to_string(i), traj.p[i].to_exact_string()});
  if (o.output.resolve("csv") == "json") {
    Json j;
    j["manifest"] = m.to_json();
    Json p = Json::array();
    for (const auto& r : rows) p.push_back({{"n", std::stol(r[0])}, {"p", r[1]}});
    j["p"] = std::move(p);
    emit(o.output, j.dump(1) + "\n", out);
  } else {
    emit(o.output, csv_table(m, {"n", "p"}, rows), out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- painleve

struct ShootOptions {
  std::string gamma = "0.5";
  AngleOptions angle;
  int N = 0;
  int mmax = 30;
  int seed_grid = 64;
  int bits = 212;
  std::string tol = "1e-6";
  Output output;
};

int run_shoot(const ShootOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits);
  if (o.seed_grid < 3) throw UsageError("painleve shoot: --seed-grid must be at least 3");
  const PainleveParams params =
      usage_guard([&] { return PainleveParams::make(parse_number(o.gamma, ctx), o.angle.value(ctx), o.N); });
  if (o.mmax <= o.N) throw UsageError("painleve shoot: --mmax must exceed N");
  const Real q_tol = parse_number(o.tol, ctx);
  ShootingOptions so;
  so.seed_grid = o.seed_grid;

  RunManifest m;
  m.command = command_line(args);
  m.config = {{"gamma", params.gamma.to_exact_string()},
              {"alpha", params.alpha.to_exact_string()},
              {"N", o.N},
              {"mmax", o.mmax},
              {"seed_grid", o.seed_grid},
              {"tol", q_tol.to_exact_string()},
              {"bits", o.bits}};
  m.bits = o.bits;
  ShootingResult r;
  try {
    r = separatrix_bisect(params, o.mmax, q_tol, so);
  } catch (const BracketLost& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  m.residuals = {{"q_lo", r.q_lo.to_exact_string()},
                 {"q_hi", r.q_hi.to_exact_string()},
                 {"M_reached", r.M_reached},
                 {"iterations", r.iterations},
                 {"converged", r.converged},
                 {"dual", r.dual}};
  bool seed_ok = true;
  if (o.N == 0) {
    const Real q = p0_closed(RiccatiParams::make(params.gamma, params.alpha));
    const bool inside = r.q_lo - q_tol <= q && q <= r.q_hi + q_tol;
    m.residuals["q_closed"] = q.to_exact_string();
    m.residuals["q_closed_bracketed"] = inside;
    seed_ok = inside;
  }
  clock.stamp(m);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.width_by_M.size(); ++i) {
    rows.push_back({std::to_string(o.N + 1 + static_cast<int>(i)), r.width_by_M[i].to_string(17)});
  }
  emit(o.output, csv_table(m, {"M", "bracket_width"}, rows), out);
  if (!r.converged) {
    err << "error: bracket did not shrink below the tolerance\n";
    return kExitFailed;
  }
  if (!seed_ok) {
    err << "error: the closed-form seed lies outside the bracket\n";
    return kExitFailed;
  }
  return kExitOk;
}

// -------------------------------------------------------------------- dpii

struct DpiiOptions {
  std::string gamma = "0.5";
  AngleOptions angle;
  int n = 50;
  int bits = 212;
  Output output;
};

int run_dpii(const DpiiOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits);
  if (o.n < 1) throw UsageError("dpii: -n must be at least 1");
  const Real gamma = parse_number(o.gamma, ctx);
  const Real alpha = o.angle.value(ctx);
  usage_guard([&] { return RiccatiParams::make(gamma, alpha); });
  const DpiiTrajectory traj = dpii_trajectory(gamma, alpha, o.n);

  RunManifest m;
  m.command = command_line(args);
  m.config = {{"gamma", gamma.to_exact_string()}, {"alpha", alpha.to_exact_string()}, {"n", o.n}, {"bits", o.bits}};
  m.bits = o.bits;
  Real max_drift(ctx);
  for (const auto& d : traj.drift) max_drift = max(max_drift, d);
  bool in_sector = true;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < traj.x.size(); ++i) {
    const Real a = arg(traj.x[i]);
    in_sector = in_sector && a > 0 && a < alpha;
    rows.push_back({std::to_string(i), traj.x[i].re().to_exact_string(), traj.x[i].im().to_exact_string(),
                    a.to_string(17), i < traj.drift.size() ? traj.drift[i].to_string(6) : ""});
  }
  m.residuals = {{"max_drift", max_drift.to_string(6)}, {"arg_in_sector", in_sector}};
  clock.stamp(m);
  emit(o.output, csv_table(m, {"n", "re", "im", "arg", "drift"}, rows), out);
  return kExitOk;
}

// ------------------------------------------------------------------- check

struct CheckOptions {
  std::string kind;
  std::string file;
  double tol = 0.0;
  int ncap = 14;
  Output output;
};

Json report_json(const ValidationReport& r) {
  Json j;
  j["check"] = r.check;
  j["passed"] = r.passed;
  j["worst"] = decimal(r.worst);
  j["location"] = r.location;
  Json counts = Json::object();
  for (const auto& [k, v] : r.counts) counts[k] = v;
  j["counts"] = std::move(counts);
  j["notes"] = r.notes;
  return j;
}

std::vector<ValidationReport> run_checks(const Artifact& a, const std::string& kind, double tol, int ncap) {
  const bool all = kind == "all";
  std::vector<ValidationReport> reports;
  const bool kites_apply = a.grid && a.grid->config().mode != PatternMode::kappa_variant;
  std::optional<RadiusField> field = a.radii;
  if (!field && kites_apply) {
    try {
      field = extract_radius_field(*a.grid);
    } catch (const NotAKite&) {
    }
  }
  auto need_grid = [&](const char* what) {
    if (!a.grid) throw UsageError(std::string("check ") + what + ": the artifact has no grid");
  };
  if (kind == "kites" || (all && kites_apply)) {
    need_grid("kites");
    reports.push_back(check_kites(*a.grid, tol > 0 ? tol : a.grid->config().tol.kite));
  }
  if (kind == "orient" || (all && a.grid)) {
    need_grid("orient");
    reports.push_back(check_orientation(*a.grid));
  }
  if (kind == "angles" || (all && kites_apply)) {
    need_grid("angles");
    const double angle_tol = (!all && tol > 0) ? tol : a.grid->config().tol.angle;
    if (!field) {
      ValidationReport r;
      r.check = "angles";
      r.passed = false;
      r.location = "radius field";
      r.notes.push_back("no radius field could be extracted (the map is not made of kites)");
      reports.push_back(r);
    } else {
      reports.push_back(check_angles(circle_pattern(*a.grid, *field), angle_tol));
    }
  }
  if (kind == "embed" || (all && a.grid)) {
    need_grid("embed");
    reports.push_back(check_embedded_bruteforce(*a.grid, ncap));
  }
  if (kind == "sign" || (all && field)) {
    if (!field) throw UsageError("check sign: the artifact has no radius field");
    reports.push_back(check_sign_condition(*field, a.grid ? a.grid->config().tol.sign_band : 1e-8));
  }
  return reports;
}

int run_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  const Artifact a = usage_guard([&] { return read_json(o.file); });
  const std::vector<ValidationReport> reports = run_checks(a, o.kind, o.tol, o.ncap);
  Json j = Json::array();
  bool passed = true;
  for (const auto& r : reports) {
    j.push_back(report_json(r));
    passed = passed && r.passed;
    err << r.check << ": " << (r.passed ? "pass" : "FAIL") << (r.location.empty() ? "" : " at " + r.location)
        << "\n";
  }
  emit(o.output, j.dump(1) + "\n", out);
  return passed ? kExitOk : kExitFailed;
}

// ------------------------------------------------------------------ export

struct ExportOptions {
  std::string format;
  std::string file;
  std::string table = "auto";
  bool mesh = false;
  bool no_circles = false;
  bool axes = false;
  std::string out;
};

int run_export(const ExportOptions& o, std::ostream& out) {
  const Artifact a = usage_guard([&] { return read_json(o.file); });
  std::string text;
  if (o.format == "json") {
    text = to_json(a).dump(1) + "\n";
  } else if (o.format == "svg") {
    SvgOptions svg;
    svg.mesh = o.mesh;
    svg.circles = !o.no_circles;
    svg.axes = o.axes;
    text = usage_guard([&] { return export_svg(a, svg); });
  } else {
    text = usage_guard([&] {
      if (o.table == "radii") return radii_csv(a);
      if (o.table == "circles") return circles_csv(a);
      if (o.table == "grid" || a.grid) return grid_csv(a);
      return a.radii ? radii_csv(a) : circles_csv(a);
    });
  }
  emit(Output{o.out, o.format}, text, out);
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepOptions {
  std::string mode = "zgamma";
  std::vector<std::string> gammas{"0.25", "0.5", "0.75", "1.25", "1.5", "1.75"};
  std::vector<std::string> alphas_pi{"1/6", "1/4", "1/2", "2/3"};
  int size = 30;
  int bits = 212;
  int ncap = 14;
  Output output;
};

int run_sweep(const SweepOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  WallClock clock;
  const PrecisionContext ctx = context_for(o.bits);
  const PatternMode mode = usage_guard([&] { return parse_mode(o.mode); });
  std::vector<PatternConfig> configs;
  for (const auto& g : o.gammas) {
    for (const auto& ap : o.alphas_pi) {
      configs.push_back(usage_guard([&] {
        return PatternConfig::make(mode, parse_number(g, ctx), Real::pi(ctx) * parse_number(ap, ctx), o.size, ctx);
      }));
    }
  }
  static const std::vector<std::string> kChecks{"kites", "orient", "angles", "embed", "sign"};
  std::vector<std::vector<std::string>> rows(configs.size());
  std::vector<char> ok(configs.size(), 0);
  const long count = static_cast<long>(configs.size());
  // Independent configurations run in parallel; each one runs serially.
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const PatternConfig& cfg = configs[static_cast<std::size_t>(i)];
    std::vector<std::string>& row = rows[static_cast<std::size_t>(i)];
    row = {o.gammas[static_cast<std::size_t>(i) / o.alphas_pi.size()],
           o.alphas_pi[static_cast<std::size_t>(i) % o.alphas_pi.size()]};
    try {
      GridMap map = generate_map(cfg, Exec::serial);
      Artifact a;
      a.grid = map;
      row.push_back(decimal(max_edge_spread(map)));
      std::map<std::string, bool> status;
      for (const auto& r : run_checks(a, "all", 0.0, o.ncap)) status[r.check] = r.passed;
      bool all = true;
      for (const auto& c : kChecks) {
        const auto it = status.find(c);
        row.push_back(it == status.end() ? "skipped" : (it->second ? "pass" : "FAIL"));
        if (it != status.end()) all = all && it->second;
      }
      row.push_back(all ? "pass" : "FAIL");
      ok[static_cast<std::size_t>(i)] = all;
    } catch (const std::exception& e) {
      row.push_back("error");
      for (std::size_t k = 0; k < kChecks.size(); ++k) row.push_back("");
      row.push_back(std::string("FAIL: ") + e.what());
    }
  }
  RunManifest m;
  m.command = command_line(args);
  m.config = {{"mode", o.mode}, {"size", o.size}, {"bits", o.bits}, {"ncap", o.ncap}};
  m.bits = o.bits;
  const long passed = std::count(ok.begin(), ok.end(), 1);
  m.residuals = {{"configs", count}, {"passed", passed}};
  clock.stamp(m);
  std::vector<std::string> header{"gamma", "alpha_pi", "kite_spread"};
  header.insert(header.end(), kChecks.begin(), kChecks.end());
  header.push_back("overall");
  emit(o.output, csv_table(m, header, rows), out);
  if (passed != count) {
    err << "error: " << (count - passed) << " of " << count << " configurations failed\n";
    return kExitFailed;
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete conformal maps, Schramm-type circle patterns and their radius equations", "cpat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Generate a discrete map and its circle pattern (JSON artifact)");
  g->add_option("mode", gen.mode, "zgamma, z2, log or kappa")
      ->required()
      ->check(CLI::IsMember({"zgamma", "z2", "log", "kappa"}));
  g->add_option("--gamma", gen.gamma, "Exponent gamma in (0,2]")->capture_default_str();
  gen.angle.add(g);
  g->add_option("--kappa", gen.kappa, "Cross-ratio modulus (kappa mode)");
  g->add_option("--beta-pi", gen.beta_pi, "Override the m-axis direction (multiple of pi); skew initial data");
  g->add_option("--size", gen.size, "Largest n+m")->capture_default_str();
  g->add_option("--bits", gen.bits, "Mantissa bits (default: precision ladder 53/106/212/424)");
  g->add_option("--tol", gen.tol, "Kite tolerance (default 1e-10)");
  gen.output.add(g);

  RadiiOptions rad;
  auto* r = app.add_subcommand("radii", "Evolve the radius field from its initial data");
  r->add_option("mode", rad.mode, "zgamma, z2 or log")->check(CLI::IsMember({"zgamma", "z2", "log"}));
  r->add_option("--gamma", rad.gamma, "Exponent gamma")->capture_default_str();
  rad.angle.add(r);
  r->add_option("--ri", rad.ri, "Override the seed R_i (zgamma)");
  r->add_option("--mmax", rad.mmax, "Last row M")->capture_default_str();
  r->add_option("--bits", rad.bits, "Mantissa bits")->capture_default_str();
  rad.output.add(r);

  RiccatiOptionsCli ric;
  auto* rc = app.add_subcommand("riccati", "Iterate the boundary Riccati recurrence from the closed-form p0");
  rc->add_option("--gamma", ric.gamma, "Exponent gamma in (0,2)")->capture_default_str();
  ric.angle.add(rc);
  rc->add_option("-n,--steps", ric.n, "Last index")->capture_default_str();
  rc->add_option("--bits", ric.bits, "Mantissa bits")->capture_default_str();
  rc->add_option("--delta", ric.delta, "Perturbation added to p0")->capture_default_str();
  rc->add_flag("--through", ric.through, "Keep iterating after the first non-positive value");
  ric.output.add(rc);

  ShootOptions sh;
  auto* pl = app.add_subcommand("painleve", "Discrete Painleve system for the radius ratios");
  pl->require_subcommand(1);
  auto* shoot = pl->add_subcommand("shoot", "Bracket the separatrix initial value by nested bisection");
  shoot->add_option("--gamma", sh.gamma, "Exponent gamma in (0,2)")->capture_default_str();
  sh.angle.add(shoot);
  shoot->add_option("--N", sh.N, "Column N")->capture_default_str();
  shoot->add_option("--mmax", sh.mmax, "Survival depth M_max")->capture_default_str();
  shoot->add_option("--seed-grid", sh.seed_grid, "Initial scan points")->capture_default_str();
  shoot->add_option("--bits", sh.bits, "Mantissa bits")->capture_default_str();
  shoot->add_option("--tol", sh.tol, "Bracket width target")->capture_default_str();
  sh.output.add(shoot);

  DpiiOptions dp;
  auto* d = app.add_subcommand("dpii", "Unitary discrete Painleve II orbit");
  d->add_option("--gamma", dp.gamma, "Exponent gamma in (0,2)")->capture_default_str();
  dp.angle.add(d);
  d->add_option("-n,--steps", dp.n, "Last index")->capture_default_str();
  d->add_option("--bits", dp.bits, "Mantissa bits")->capture_default_str();
  dp.output.add(d);

  CheckOptions chk;
  auto* c = app.add_subcommand("check", "Validate a JSON artifact");
  c->add_option("kind", chk.kind, "kites, orient, angles, embed, sign or all")
      ->required()
      ->check(CLI::IsMember({"kites", "orient", "angles", "embed", "sign", "all"}));
  c->add_option("file", chk.file, "JSON artifact")->required();
  c->add_option("--tol", chk.tol, "Tolerance of the selected check (kite tolerance for all)");
  c->add_option("--ncap", chk.ncap, "Brute-force embeddedness range n+m")->capture_default_str();
  chk.output.add(c);

  ExportOptions ex;
  auto* e = app.add_subcommand("export", "Convert a JSON artifact");
  e->add_option("format", ex.format, "svg, json or csv")->required()->check(CLI::IsMember({"svg", "json", "csv"}));
  e->add_option("file", ex.file, "JSON artifact")->required();
  e->add_option("--table", ex.table, "CSV table: grid, radii or circles")
      ->check(CLI::IsMember({"auto", "grid", "radii", "circles"}));
  e->add_flag("--mesh", ex.mesh, "SVG: draw the quad mesh");
  e->add_flag("--no-circles", ex.no_circles, "SVG: omit circles");
  e->add_flag("--axes", ex.axes, "SVG: draw coordinate axes");
  e->add_option("--out", ex.out, "Output file (stdout when omitted)");

  SweepOptions sw;
  auto* s = app.add_subcommand("sweep", "Generate and check a grid of configurations in parallel");
  s->add_option("mode", sw.mode, "zgamma (default)")->check(CLI::IsMember({"zgamma", "z2", "log"}));
  s->add_option("--gamma", sw.gammas, "Comma-separated gammas")->delimiter(',')->capture_default_str();
  s->add_option("--alpha-pi", sw.alphas_pi, "Comma-separated angles as multiples of pi")
      ->delimiter(',')
      ->capture_default_str();
  s->add_option("--size", sw.size, "Largest n+m")->capture_default_str();
  s->add_option("--bits", sw.bits, "Mantissa bits")->capture_default_str();
  s->add_option("--ncap", sw.ncap, "Brute-force embeddedness range")->capture_default_str();
  sw.output.add(s);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return run_generate(gen, args, out, err);
    if (r->parsed()) return run_radii(rad, args, out, err);
    if (rc->parsed()) return run_riccati(ric, args, out);
    if (shoot->parsed()) return run_shoot(sh, args, out, err);
    if (d->parsed()) return run_dpii(dp, args, out);
    if (c->parsed()) return run_check(chk, out, err);
    if (e->parsed()) return run_export(ex, out);
    if (s->parsed()) return run_sweep(sw, args, out, err);
  } catch (const UsageError& ue) {
    err << "usage error: " << ue.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& fe) {
    err << "error: " << fe.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace cpat
