#include "cpat/pattern.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <mutex>
#include <utility>

#include "cpat/error.hpp"
#include "cpat/painleve.hpp"
#include "cpat/riccati.hpp"
#include "cpat/special.hpp"

namespace cpat {

std::string_view mode_name(PatternMode mode) {
  switch (mode) {
    case PatternMode::zgamma: return "zgamma";
    case PatternMode::z2: return "z2";
    case PatternMode::log: return "log";
    case PatternMode::kappa_variant: return "kappa";
  }
  return "?";
}

PatternMode parse_mode(std::string_view name) {
  if (name == "zgamma") return PatternMode::zgamma;
  if (name == "z2") return PatternMode::z2;
  if (name == "log") return PatternMode::log;
  if (name == "kappa" || name == "kappa_variant") return PatternMode::kappa_variant;
  throw Error("unknown pattern mode '" + std::string(name) + "'");
}

PatternConfig PatternConfig::make(PatternMode mode, const Real& gamma, const Real& alpha, int size,
                                  PrecisionContext precision, std::optional<Real> kappa,
                                  std::optional<Real> beta) {
  const PrecisionContext ctx = precision;
  const Real pi = Real::pi(ctx);
  const Real window(1e-3, ctx);
  PatternConfig c;
  c.mode = mode;
  c.precision = ctx;
  c.size = size;
  c.alpha = alpha.rounded_to(ctx);
  if (c.alpha < window || c.alpha > pi - window) {
    throw Error("alpha must lie in [1e-3, pi-1e-3], got " + alpha.to_string(17));
  }
  if (size < 2) throw Error("size must be at least 2");
  if (mode == PatternMode::z2 || mode == PatternMode::log) {
    c.gamma = Real(2L, ctx);
  } else {
    c.gamma = gamma.rounded_to(ctx);
    if (!(c.gamma > 0 && c.gamma <= 2)) throw Error("gamma must lie in (0,2], got " + gamma.to_string(17));
  }
  c.kappa = kappa ? kappa->rounded_to(ctx) : Real(1L, ctx);
  if (!(c.kappa > 0)) throw Error("kappa must be positive");
  if (mode != PatternMode::kappa_variant && !(c.kappa == 1)) {
    throw Error("kappa != 1 requires the kappa mode");
  }
  const Real natural = mode == PatternMode::log ? Real(ctx) : c.gamma * c.alpha;
  if (beta) {
    c.beta = beta->rounded_to(ctx);
    c.skew = !(c.beta == natural);
  } else {
    c.beta = natural;
  }
  return c;
}

PatternConfig PatternConfig::with_precision(PrecisionContext ctx) const {
  PatternConfig c = *this;
  c.precision = ctx;
  c.alpha = alpha.rounded_to(ctx);
  c.gamma = gamma.rounded_to(ctx);
  c.kappa = kappa.rounded_to(ctx);
  c.beta = beta.rounded_to(ctx);
  return c;
}

Complex PatternConfig::lambda() const { return Complex::unit(-2 * alpha) * (kappa * kappa); }

GridMap::GridMap(PatternConfig config) : config_(std::move(config)) {
  const std::size_t s = static_cast<std::size_t>(config_.size);
  values_.assign((s + 1) * (s + 2) / 2, Complex(config_.precision));
}

RadiusField::RadiusField(int M_max, const Real& gamma, const Real& alpha, PatternMode mode)
    : M_max_(M_max), gamma_(gamma), alpha_(alpha), mode_(mode) {
  if (M_max < 0) throw Error("RadiusField: M_max must be >= 0");
  const std::size_t rows = static_cast<std::size_t>(M_max) + 1;
  values_.assign(rows * rows, Real(alpha.context()));
}

Real RadiusField::at(int N, int M) const {
  const Real& v = values_[index(N, M)];
  return inverted_ ? 1 / v : v;
}

RadiusField dual_field(const RadiusField& field) {
  RadiusField out = field;
  out.inverted_ = !field.inverted_;
  if (field.mode_ == PatternMode::z2) out.mode_ = PatternMode::log;
  if (field.mode_ == PatternMode::log) out.mode_ = PatternMode::z2;
  return out;
}

bool operator==(const RadiusField& a, const RadiusField& b) {
  return a.M_max_ == b.M_max_ && a.gamma_ == b.gamma_ && a.alpha_ == b.alpha_ && a.mode_ == b.mode_ &&
         a.inverted_ == b.inverted_ && a.values_ == b.values_;
}

AxisRadii axis_radii(const Real& gamma, int n_max) {
  const PrecisionContext ctx = gamma.context();
  AxisRadii out;
  out.max_rel_diff = Real(ctx);
  out.recurrence.push_back(Real(1L, ctx));
  for (int n = 0; n < n_max; ++n) out.recurrence.push_back(out.recurrence.back() * g_coeff(n, gamma));
  const Real half_g = gamma / 2;
  const Real one_minus = 1 - half_g;
  for (int n = 0; n <= n_max; ++n) {
    const Real nn(n, ctx);
    Real r = n == 0 ? Real(1L, ctx) : gamma_ratio(half_g, nn) / gamma_ratio(one_minus, nn);
    out.max_rel_diff = max(out.max_rel_diff, abs(r - out.recurrence[n]) / out.recurrence[n]);
    out.closed_form.push_back(std::move(r));
  }
  return out;
}

AxisPoints axis_points(const PatternConfig& config) {
  const PrecisionContext ctx = config.precision;
  const int S = config.size;
  const AxisRadii radii = axis_radii(config.gamma, S / 2 + 1);
  const Complex dir = Complex::unit(config.beta) / config.kappa;
  AxisPoints out;
  Real x(ctx);
  for (int n = 0; n <= S; ++n) {
    if (n > 0) x += radii.recurrence[static_cast<std::size_t>(n / 2)];
    out.n_axis.push_back(Complex::real(x));
    out.m_axis.push_back(dir * x);
  }
  return out;
}

namespace {

std::optional<Complex> constraint_term(const Complex& fp, const Complex& f, const Complex& fm) {
  const Complex den = fp - fm;
  if (abs(den).is_zero()) return std::nullopt;
  return (fp - f) * (f - fm) / den;
}

}  // namespace

std::optional<double> constraint_residual_at(const GridMap& map, int n, int m) {
  const PatternConfig& cfg = map.config();
  if (cfg.mode == PatternMode::log) return std::nullopt;
  if (n == 0 && m == 0) return std::nullopt;
  if (!map.is_finite(n, m)) return std::nullopt;
  const Complex& f = map.at(n, m);
  Complex t1(cfg.precision), t2(cfg.precision);
  if (n > 0) {
    if (!map.is_finite(n + 1, m) || !map.is_finite(n - 1, m)) return std::nullopt;
    auto t = constraint_term(map.at(n + 1, m), f, map.at(n - 1, m));
    if (!t) return std::nullopt;
    t1 = *t * (2L * n);
  }
  if (m > 0) {
    if (!map.is_finite(n, m + 1) || !map.is_finite(n, m - 1)) return std::nullopt;
    auto t = constraint_term(map.at(n, m + 1), f, map.at(n, m - 1));
    if (!t) return std::nullopt;
    t2 = *t * (2L * m);
  }
  const Complex lhs = f * cfg.gamma;
  const Real scale = abs(lhs) + abs(t1) + abs(t2);
  if (scale.is_zero()) return 0.0;
  return (abs(lhs - t1 - t2) / scale).to_double();
}

double max_constraint_residual(const GridMap& map, Exec exec) {
  const int S = map.size();
  std::vector<double> per_diag(static_cast<std::size_t>(S) + 1, 0.0);
  auto diag = [&](int d) {
    double worst = 0.0;
    for (int n = 0; n <= d; ++n) {
      if (auto r = constraint_residual_at(map, n, d - n)) worst = std::max(worst, *r);
    }
    per_diag[static_cast<std::size_t>(d)] = worst;
  };
  if (exec == Exec::serial) {
    for (int d = 0; d <= S; ++d) diag(d);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d <= S; ++d) diag(d);
  }
  return *std::max_element(per_diag.begin(), per_diag.end());
}

namespace {

// First exception raised inside an OpenMP region, rethrown afterwards.
class ErrorSlot {
public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  bool failed() {
    std::lock_guard<std::mutex> lock(mu_);
    return static_cast<bool>(error_);
  }
  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

private:
  std::mutex mu_;
  std::exception_ptr error_;
};

void fill_point(GridMap& map, int n, int m, const Complex& lambda) {
  try {
    map.at(n, m) = solve_fourth_point(map.at(n - 1, m - 1), map.at(n, m - 1), map.at(n - 1, m), lambda);
  } catch (const DegenerateQuad& e) {
    throw DegenerateQuad(std::string(e.what()) + " at (n,m)=(" + std::to_string(n) + "," + std::to_string(m) +
                         ")");
  }
}

}  // namespace

GridMap propagate_interior(const PatternConfig& config, Exec exec) {
  if (config.mode != PatternMode::zgamma && config.mode != PatternMode::kappa_variant) {
    throw Error("propagate_interior: mode " + std::string(mode_name(config.mode)) + " is built from radii");
  }
  GridMap map(config);
  const AxisPoints axes = axis_points(config);
  const int S = config.size;
  for (int k = 0; k <= S; ++k) {
    map.at(k, 0) = axes.n_axis[static_cast<std::size_t>(k)];
    map.at(0, k) = axes.m_axis[static_cast<std::size_t>(k)];
  }
  const Complex lambda = config.lambda();
  if (exec == Exec::serial) {
    // Reference sweep: row by row, every dependency is already in place.
    for (int n = 1; n <= S; ++n) {
      for (int m = 1; n + m <= S; ++m) fill_point(map, n, m, lambda);
    }
  } else {
    // Points on one anti-diagonal n+m = d only depend on earlier fronts.
    ErrorSlot slot;
    for (int d = 2; d <= S; ++d) {
#pragma omp parallel for schedule(static)
      for (int n = 1; n < d; ++n) slot.run([&] { fill_point(map, n, d - n, lambda); });
      if (slot.failed()) break;
    }
    slot.rethrow();
  }
  map.constraint_residual = max_constraint_residual(map, exec);
  return map;
}

GridMap generate_map(const PatternConfig& config, Exec exec) {
  switch (config.mode) {
    case PatternMode::zgamma:
    case PatternMode::kappa_variant:
      return propagate_interior(config, exec);
    case PatternMode::z2:
    case PatternMode::log: {
      RadiusField field = z2_field(config.alpha, config.size / 2);
      if (config.mode == PatternMode::log) field = dual_field(field);
      GridMap map = reconstruct_map(field, config);
      map.constraint_residual = max_constraint_residual(map, exec);
      return map;
    }
  }
  throw Error("generate_map: unknown mode");
}

LadderResult generate_with_ladder(const PatternConfig& config, Exec exec) {
  std::optional<LadderResult> last;
  for (int bits : {53, 106, 212, 424}) {
    PatternConfig cfg = config.with_precision(PrecisionContext(bits));
    try {
      GridMap map = generate_map(cfg, exec);
      const double spread = max_edge_spread(map);
      const bool ok = spread < config.tol.kite;
      last = LadderResult{std::move(map), bits, spread, ok};
      if (ok) break;
    } catch (const DegenerateQuad&) {
      if (bits == 424) throw;
    }
  }
  return std::move(*last);
}

std::optional<double> edge_spread_at(const GridMap& map, int n, int m) {
  if ((n + m) % 2 != 0 || !map.is_finite(n, m)) return std::nullopt;
  const Complex& f = map.at(n, m);
  static constexpr std::array<std::array<int, 2>, 4> kNbr{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  std::optional<Real> lo, hi;
  int count = 0;
  for (const auto& d : kNbr) {
    const int a = n + d[0], b = m + d[1];
    if (!map.contains(a, b)) continue;
    if (!map.is_finite(a, b)) return std::nullopt;
    Real len = abs(map.at(a, b) - f);
    if (!lo || len < *lo) lo = len;
    if (!hi || len > *hi) hi = len;
    ++count;
  }
  if (count < 2) return std::nullopt;
  if (hi->is_zero()) return 0.0;
  return ((*hi - *lo) / *hi).to_double();
}

double max_edge_spread(const GridMap& map) {
  double worst = 0.0;
  for (int d = 0; d <= map.size(); d += 2) {
    for (int n = 0; n <= d; ++n) {
      if (auto s = edge_spread_at(map, n, d - n)) worst = std::max(worst, *s);
    }
  }
  return worst;
}

RadiusField extract_radius_field(const GridMap& map, double tol) {
  const PatternConfig& cfg = map.config();
  const int M_max = (map.size() - 1) / 2;
  const Real field_gamma = cfg.mode == PatternMode::log ? Real(cfg.precision) : cfg.gamma;
  RadiusField field(M_max, field_gamma, cfg.alpha, cfg.mode);
  double worst = -1.0;
  LatticeIndex worst_at{};
  static constexpr std::array<std::array<int, 2>, 4> kNbr{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (int M = 0; M <= M_max; ++M) {
    for (int N = -M; N <= M; ++N) {
      const LatticeIndex p = to_lattice({N, M});
      if (!map.is_finite(p.n, p.m)) {
        field.set(N, M, Real::infinity(cfg.precision));
        continue;
      }
      Real sum(cfg.precision);
      int count = 0;
      for (const auto& d : kNbr) {
        const int a = p.n + d[0], b = p.m + d[1];
        if (!map.is_finite(a, b)) continue;
        sum += abs(map.at(a, b) - map.at(p.n, p.m));
        ++count;
      }
      field.set(N, M, sum / count);
      if (auto s = edge_spread_at(map, p.n, p.m); s && *s > worst) {
        worst = *s;
        worst_at = p;
      }
    }
  }
  field.kite_spread = std::max(worst, 0.0);
  if (worst > tol) {
    throw NotAKite("extract_radius_field: edge spread " + Real(worst, map.config().precision).to_string(3) + " at (n,m)=(" +
                       std::to_string(worst_at.n) + "," + std::to_string(worst_at.m) + ")",
                   worst_at.n, worst_at.m);
  }
  return field;
}

namespace {

// Solve the square equation at w for R_{w+1+i}.
Real square_for_corner(long N, long M, const Real& Rw, const Real& R1, const Real& Ri, const Real& g) {
  const Real hg = g / 2;
  Real den = (N + 1) * R1 + (M + 1) * Ri - hg * (R1 + Ri);
  Real num = M * Rw * R1 + N * Ri * Rw + hg * Rw * (R1 + Ri);
  return num / den;
}

// Solve the square equation at w for R_{w+i}.
Real square_for_top(long N, long M, const Real& Rw, const Real& R1, const Real& R1i, const Real& g) {
  const Real hg = g / 2;
  Real den = (M + 1) * R1i - N * Rw - hg * (Rw + R1i);
  Real num = M * Rw * R1 - (N + 1) * R1 * R1i + hg * (Rw + R1i) * R1;
  return num / den;
}

// Solve the Ri equation at z for R_{z+i}.
Real ri_for_top(long N, long M, const Real& Rz, const Real& R1, const Real& Rmi, const Real& t) {
  const Real A = Rz * Rz - R1 * Rmi + t * Rz * (Rmi - R1);
  const Real B = Rmi + R1;
  Real den = (N + M) * A + (M - N) * B * (t * Rz - R1);
  Real num = -(N + M) * R1 * A - (M - N) * B * (Rz * Rz - t * Rz * R1);
  return num / den;
}

}  // namespace

RadiusField radii_evolution(const Real& R0, const Real& Ri, const PatternConfig& config, int M_max) {
  const PrecisionContext ctx = config.precision;
  std::vector<Real> diag;
  switch (config.mode) {
    case PatternMode::zgamma:
      diag = axis_radii(config.gamma, M_max).recurrence;
      break;
    case PatternMode::z2:
      for (int K = 0; K <= M_max; ++K) diag.emplace_back(K, ctx);
      break;
    default:
      throw Error("radii_evolution: mode " + std::string(mode_name(config.mode)) +
                  " has no radius seed (Log is the dual of Z2)");
  }
  const bool origin_seed = config.mode == PatternMode::z2;
  if (!origin_seed && !(R0 > 0)) throw SignLoss("radii_evolution: R_0 must be positive", 0, 0);
  if (!(Ri > 0)) throw SignLoss("radii_evolution: R_i must be positive", 0, 1);

  RadiusField field(M_max, config.gamma, config.alpha, config.mode);
  const Real& g = config.gamma;
  const Real t = cos(config.alpha);
  field.set(0, 0, R0.rounded_to(ctx));
  if (M_max == 0) return field;
  field.set(-1, 1, diag[1]);
  field.set(0, 1, Ri.rounded_to(ctx));
  field.set(1, 1, diag[1]);

  auto put = [&](int N, int M, Real v) {
    if (!v.is_finite() || v.sign() <= 0) {
      throw SignLoss("radii_evolution: non-positive radius " + v.to_string(10) + " at z=" + std::to_string(N) +
                         "+" + std::to_string(M) + "i",
                     N, M);
    }
    field.set(N, M, std::move(v));
  };
  for (int M = 1; M < M_max; ++M) {
    for (int N = -M + 1; N <= M - 1; ++N) {
      put(N, M + 1, ri_for_top(N, M, field.stored(N, M), field.stored(N + 1, M), field.stored(N, M - 1), t));
    }
    put(M, M + 1,
        square_for_corner(M - 1, M, field.stored(M - 1, M), field.stored(M, M), field.stored(M - 1, M + 1), g));
    put(-M, M + 1,
        square_for_top(-M, M, field.stored(-M, M), field.stored(-M + 1, M), field.stored(-M + 1, M + 1), g));
    field.set(M + 1, M + 1, diag[static_cast<std::size_t>(M + 1)]);
    field.set(-M - 1, M + 1, diag[static_cast<std::size_t>(M + 1)]);
  }
  return field;
}

RadiusField z2_field(const Real& alpha, int M_max) {
  const PrecisionContext ctx = alpha.context();
  PatternConfig cfg;
  cfg.mode = PatternMode::z2;
  cfg.precision = ctx;
  cfg.gamma = Real(2L, ctx);
  cfg.alpha = alpha;
  cfg.kappa = Real(1L, ctx);
  cfg.beta = 2 * alpha;
  return radii_evolution(Real(ctx), sin(alpha) / alpha, cfg, M_max);
}

namespace {

Complex reflect(const Complex& p, const Complex& a, const Complex& b) {
  const Complex u = b - a;
  return a + u * conj((p - a) / u);
}

}  // namespace

GridMap reconstruct_map(const RadiusField& field, const PatternConfig& config) {
  PatternConfig cfg = config;
  cfg.size = std::min(config.size, 2 * field.M_max());
  if (cfg.size < 2) throw Error("reconstruct_map: the field needs M_max >= 1");
  const PrecisionContext ctx = cfg.precision;
  const int S = cfg.size;
  GridMap map(cfg);

  const Real R0 = field.at(0, 0).rounded_to(ctx);
  const Real Ri = field.at(0, 1).rounded_to(ctx);
  const Complex e_alpha = Complex::unit(cfg.alpha);
  Complex dn(1, 0, ctx);
  Complex dm(1, 0, ctx);
  if (R0.is_inf()) {
    const Real inf = Real::infinity(ctx);
    map.at(0, 0) = Complex(inf, inf);
    map.at(1, 0) = Complex(ctx);
    map.at(1, 1) = e_alpha * Ri;
    map.at(0, 1) = Complex(Real(ctx), 2 * map.at(1, 1).im());
  } else {
    map.at(0, 0) = Complex(ctx);
    map.at(1, 0) = Complex::real(R0);
    map.at(1, 1) = map.at(1, 0) + e_alpha * Ri;
    map.at(0, 1) = reflect(map.at(1, 0), map.at(0, 0), map.at(1, 1));
    dm = Complex::unit(2 * arg(map.at(1, 1)));
  }
  // Edge (k-1, k) on an axis has the radius of whichever endpoint is a center.
  for (int k = 2; k <= S; ++k) {
    const int e = (k % 2 == 0) ? k : k - 1;
    map.at(k, 0) = map.at(k - 1, 0) + dn * field.at(e / 2, e / 2).rounded_to(ctx);
    map.at(0, k) = map.at(0, k - 1) + dm * field.at(-e / 2, e / 2).rounded_to(ctx);
  }
  const Complex minus_i(0, -1, ctx);
  for (int n = 1; n <= S; ++n) {
    for (int m = 1; n + m <= S; ++m) {
      if (n == 1 && m == 1) continue;
      const Complex& f2 = map.at(n, m - 1);
      const Complex& f4 = map.at(n - 1, m);
      if ((n + m) % 2 != 0) {
        map.at(n, m) = reflect(map.at(n - 1, m - 1), f2, f4);
        continue;
      }
      const SublatticeIndex z = *to_sublattice({n, m});
      const Real R = field.at(z).rounded_to(ctx);
      const Complex u = f4 - f2;
      const Real d = abs(u);
      if (d.is_zero()) {
        throw DegenerateQuad("reconstruct_map: coincident neighbours at (n,m)=(" + std::to_string(n) + "," +
                             std::to_string(m) + ")");
      }
      Real h2 = R * R - d * d / 4;
      if (h2.sign() < 0) {
        if (abs(h2) > 1000L * ctx.eps() * R * R) {
          throw DegenerateQuad("reconstruct_map: circle of radius " + R.to_string(10) +
                               " cannot reach its neighbours at (n,m)=(" + std::to_string(n) + "," +
                               std::to_string(m) + ")");
        }
        h2 = Real(ctx);
      }
      map.at(n, m) = (f2 + f4) / 2L + minus_i * (u / d) * sqrt(h2);
    }
  }
  return map;
}

namespace {

bool touches_origin(const RadiusField& field, std::initializer_list<SublatticeIndex> zs) {
  if (!field.origin_excluded()) return false;
  for (const auto& z : zs) {
    if (z.N == 0 && z.M == 0) return true;
  }
  return false;
}

}  // namespace

std::optional<Real> square_residual(const RadiusField& field, SublatticeIndex z) {
  const SublatticeIndex z1{z.N + 1, z.M}, zi{z.N, z.M + 1}, z1i{z.N + 1, z.M + 1};
  if (!in_V_l(z) || !field.contains(z1) || !field.contains(zi) || !field.contains(z1i)) return std::nullopt;
  if (touches_origin(field, {z, z1, zi, z1i})) return std::nullopt;
  const PrecisionContext ctx = field.context();
  const Real Rz = field.contains(z) ? field.at(z) : Real(ctx);
  const Real R1 = field.at(z1), Ri = field.at(zi), R1i = field.at(z1i);
  const long N = z.N, M = z.M;
  const Real hg = field.gamma() / 2;
  const Real a = M * Rz * R1, b = (N + 1) * R1 * R1i, c = (M + 1) * R1i * Ri, d = N * Ri * Rz;
  const Real rhs = hg * (Rz + R1i) * (R1 + Ri);
  const Real scale = abs(a) + abs(b) + abs(c) + abs(d) + abs(rhs);
  if (scale.is_zero()) return Real(ctx);
  return abs(-a + b + c - d - rhs) / scale;
}

std::optional<Real> ri_residual(const RadiusField& field, SublatticeIndex z) {
  const SublatticeIndex z1{z.N + 1, z.M}, zi{z.N, z.M + 1}, zmi{z.N, z.M - 1};
  if (!in_V_rint(z) || !field.contains(z1) || !field.contains(zi) || !field.contains(zmi)) return std::nullopt;
  if (touches_origin(field, {z, z1, zi, zmi})) return std::nullopt;
  const Real Rz = field.at(z), R1 = field.at(z1), Ri = field.at(zi), Rmi = field.at(zmi);
  const Real t = cos(field.alpha());
  const long N = z.N, M = z.M;
  const Real e1 = (N + M) * (Ri + R1) * (Rz * Rz - R1 * Rmi + t * Rz * (Rmi - R1));
  const Real e2 = (M - N) * (Rmi + R1) * (Rz * Rz - R1 * Ri + t * Rz * (Ri - R1));
  const Real at = abs(t);
  const Real s1 = abs(Real(N + M, field.context())) * (Ri + R1) * (Rz * Rz + R1 * Rmi + at * Rz * (Rmi + R1));
  const Real s2 = abs(Real(M - N, field.context())) * (Rmi + R1) * (Rz * Rz + R1 * Ri + at * Rz * (Ri + R1));
  const Real scale = s1 + s2;
  if (scale.is_zero()) return Real(field.context());
  return abs(e1 + e2) / scale;
}

FieldResiduals field_residuals(const RadiusField& field) {
  const PrecisionContext ctx = field.context();
  FieldResiduals out{Real(ctx), Real(ctx), {}, {}, 0, 0};
  for (int M = -1; M <= field.M_max(); ++M) {
    for (int N = -M - 1; N <= M; ++N) {
      const SublatticeIndex z{N, M};
      if (auto r = square_residual(field, z)) {
        ++out.square_count;
        if (*r > out.square_max || out.square_count == 1) {
          out.square_max = *r;
          out.square_worst = z;
        }
      }
      if (auto r = ri_residual(field, z)) {
        ++out.ri_count;
        if (*r > out.ri_max || out.ri_count == 1) {
          out.ri_max = *r;
          out.ri_worst = z;
        }
      }
    }
  }
  return out;
}

Real painleve_consistency(const RadiusField& field) {
  Real worst(field.context());
  for (int M = 1; M < field.M_max(); ++M) {
    for (int N = -M + 1; N <= M - 1; ++N) {
      const SublatticeIndex z{N, M}, z1{N + 1, M}, zmi{N, M - 1}, zi{N, M + 1}, z1i{N + 1, M + 1};
      if (touches_origin(field, {z, z1, zmi, zi, z1i})) continue;
      const Real Rmi = field.at(zmi);
      PQState s{field.at(z1) / Rmi, field.at(z) / Rmi, M};
      PainleveParams params{field.gamma(), field.alpha(), N};
      PQState next = painleve_step(s, params);
      const Real Rz = field.at(z);
      const Real q_true = field.at(zi) / Rz;
      const Real p_true = field.at(z1i) / Rz;
      worst = max(worst, abs(next.Q - q_true) / abs(q_true));
      worst = max(worst, abs(next.P - p_true) / abs(p_true));
    }
  }
  return worst;
}

AsymptoticFit fit_axis(const std::vector<Complex>& n_axis) {
  if (n_axis.size() < 5) throw Error("fit_axis: need at least 4 axis points");
  const int n_max = static_cast<int>(n_axis.size()) - 1;
  const PrecisionContext ctx = n_axis.back().context();
  Real sx(ctx), sy(ctx), sxx(ctx), sxy(ctx);
  long count = 0;
  for (int n = (n_max + 1) / 2; n <= n_max; ++n) {
    const Real r = abs(n_axis[static_cast<std::size_t>(n)]);
    if (r.sign() <= 0 || !r.is_finite()) continue;
    const Real x = log(Real(n, ctx));
    const Real y = log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw Error("fit_axis: not enough positive axis values");
  const Real slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const Real intercept = (sy - slope * sx) / count;
  Real nan = Real::parse("nan", ctx);
  return {exp(intercept), slope, nan};
}

AsymptoticFit fit_asymptotics(const GridMap& map) {
  std::vector<Complex> axis;
  for (int n = 0; n <= map.size(); ++n) axis.push_back(map.at(n, 0));
  AsymptoticFit fit = fit_axis(axis);
  const PrecisionContext ctx = map.config().precision;
  const Complex e = Complex::unit(map.config().alpha);
  Real worst(ctx);
  bool any = false;
  for (int n = 0; n <= map.size(); ++n) {
    for (int m = 0; n + m <= map.size(); ++m) {
      if ((n == 0 && m == 0) || !map.is_finite(n, m)) continue;
      const Complex& f = map.at(n, m);
      const Real fa = abs(f);
      if (fa.is_zero()) continue;
      const Complex w = Complex(Real(n, ctx), Real(ctx)) + e * static_cast<long>(m);
      const Complex model = Complex::polar(fit.c_fit * pow(abs(w), fit.gamma_fit), fit.gamma_fit * arg(w));
      worst = max(worst, abs(f - model) / fa);
      any = true;
    }
  }
  if (any) fit.conjecture_residual = worst;
  return fit;
}

CirclePattern circle_pattern(const GridMap& map, const RadiusField& field) {
  CirclePattern out;
  out.alpha = map.config().alpha;
  const int M_max = field.M_max();
  std::vector<long> slot(static_cast<std::size_t>(M_max + 1) * static_cast<std::size_t>(M_max + 1), -1);
  auto slot_of = [&](int N, int M) -> long& {
    return slot[static_cast<std::size_t>(M) * static_cast<std::size_t>(M) + static_cast<std::size_t>(N + M)];
  };
  for (int M = 0; M <= M_max; ++M) {
    for (int N = -M; N <= M; ++N) {
      const LatticeIndex p = to_lattice({N, M});
      if (!map.is_finite(p.n, p.m)) continue;
      Real r = field.at(N, M);
      if (!r.is_finite() || r.sign() <= 0) continue;
      slot_of(N, M) = static_cast<long>(out.circles.size());
      out.circles.push_back({map.at(p.n, p.m), std::move(r), {N, M}});
    }
  }
  auto link = [&](auto& pairs, int N, int M, int N2, int M2) {
    if (!field.contains(N2, M2)) return;
    const long a = slot_of(N, M), b = slot_of(N2, M2);
    if (a >= 0 && b >= 0) pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };
  for (int M = 0; M <= M_max; ++M) {
    for (int N = -M; N <= M; ++N) {
      link(out.i_pairs, N, M, N, M + 1);
      link(out.one_pairs, N, M, N + 1, M);
      link(out.half_pairs, N, M, N + 1, M + 1);
      link(out.half_pairs, N, M, N - 1, M + 1);
    }
  }
  return out;
}

}  // namespace cpat
