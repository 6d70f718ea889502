#include "cpat/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cpat/lattice.hpp"

namespace cpat {

namespace {

std::string point_name(int n, int m) { return "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

std::string z_name(SublatticeIndex z) { return "z=" + std::to_string(z.N) + "+" + std::to_string(z.M) + "i"; }

// x·y rounded to a width that holds the product exactly.
Real exact_product(const Real& x, const Real& y) {
  Real out(PrecisionContext(x.bits() + y.bits()));
  mpfr_mul(out.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return out;
}

// (x + y)/2 without rounding.
Real exact_midpoint(const Real& x, const Real& y) {
  if (x.is_zero() || y.is_zero()) {
    Real out = x.is_zero() ? y : x;
    mpfr_div_2ui(out.raw(), out.raw(), 1, MPFR_RNDN);
    return out;
  }
  const long ex = mpfr_get_exp(x.raw()), ey = mpfr_get_exp(y.raw());
  const long lsb = std::min(ex - x.bits(), ey - y.bits());
  Real out(PrecisionContext(static_cast<int>(std::max(ex, ey) - lsb + 2)));
  mpfr_add(out.raw(), x.raw(), y.raw(), MPFR_RNDN);
  mpfr_div_2ui(out.raw(), out.raw(), 1, MPFR_RNDN);
  return out;
}

Complex exact_midpoint(const Complex& a, const Complex& b) {
  return {exact_midpoint(a.re(), b.re()), exact_midpoint(a.im(), b.im())};
}

bool between(const Real& v, const Real& a, const Real& b) { return a <= b ? (a <= v && v <= b) : (b <= v && v <= a); }

bool on_segment(const Complex& p, const Complex& a, const Complex& b) {
  return orientation_sign(a, b, p) == 0 && between(p.re(), a.re(), b.re()) && between(p.im(), a.im(), b.im());
}

bool proper_crossing(const Complex& p1, const Complex& p2, const Complex& q1, const Complex& q2) {
  const int o1 = orientation_sign(p1, p2, q1);
  const int o2 = orientation_sign(p1, p2, q2);
  if (o1 * o2 >= 0) return false;
  const int o3 = orientation_sign(q1, q2, p1);
  const int o4 = orientation_sign(q1, q2, p2);
  return o3 * o4 < 0;
}

using Quad = std::array<Complex, 4>;

// Nonzero winding number with the boundary excluded.
bool strictly_inside(const Complex& p, const Quad& q) {
  int winding = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex& a = q[i];
    const Complex& b = q[(i + 1) % 4];
    if (on_segment(p, a, b)) return false;
    if (a.im() <= p.im()) {
      if (b.im() > p.im() && orientation_sign(a, b, p) > 0) ++winding;
    } else if (b.im() <= p.im() && orientation_sign(a, b, p) < 0) {
      --winding;
    }
  }
  return winding != 0;
}

struct QuadProbe {
  int n = 0;
  int m = 0;
  Quad v;
  std::vector<Complex> probes;
  std::array<double, 4> box{};  // xmin, xmax, ymin, ymax
};

QuadProbe make_probe(const GridMap& map, int n, int m) {
  QuadProbe q;
  q.n = n;
  q.m = m;
  q.v = {map.at(n, m), map.at(n + 1, m), map.at(n + 1, m + 1), map.at(n, m + 1)};
  q.box = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < 4; ++i) {
    q.probes.push_back(q.v[i]);
    q.probes.push_back(exact_midpoint(q.v[i], q.v[(i + 1) % 4]));
    const double x = q.v[i].re().to_double(), y = q.v[i].im().to_double();
    q.box = {std::min(q.box[0], x), std::max(q.box[1], x), std::min(q.box[2], y), std::max(q.box[3], y)};
  }
  for (std::size_t i = 0; i < 2; ++i) {
    Complex mid = exact_midpoint(q.v[i], q.v[i + 2]);
    if (strictly_inside(mid, q.v)) q.probes.push_back(std::move(mid));
  }
  return q;
}

bool boxes_apart(const QuadProbe& a, const QuadProbe& b) {
  const double scale = std::max({std::abs(a.box[0]), std::abs(a.box[1]), std::abs(a.box[2]), std::abs(a.box[3]),
                                 std::abs(b.box[0]), std::abs(b.box[1]), std::abs(b.box[2]), std::abs(b.box[3]), 1.0});
  const double slack = 1e-9 * scale;
  return a.box[1] + slack < b.box[0] || b.box[1] + slack < a.box[0] || a.box[3] + slack < b.box[2] ||
         b.box[3] + slack < a.box[2];
}

bool interiors_overlap(const QuadProbe& a, const QuadProbe& b) {
  if (boxes_apart(a, b)) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (proper_crossing(a.v[i], a.v[(i + 1) % 4], b.v[j], b.v[(j + 1) % 4])) return true;
    }
  }
  for (const auto& p : a.probes) {
    if (strictly_inside(p, b.v)) return true;
  }
  for (const auto& p : b.probes) {
    if (strictly_inside(p, a.v)) return true;
  }
  return false;
}

// Unsigned angle at p between the rays to a and b.
Real angle_at(const Complex& p, const Complex& a, const Complex& b) { return abs(arg((b - p) / (a - p))); }

bool equal_lengths(const Real& x, const Real& y, double tol) {
  return (abs(x - y) / max(x, y)).to_double() <= tol;
}

}  // namespace

namespace {

struct Term {
  const Real& x;
  const Real& y;
  bool negate;
};

// Sign of Σ ±x·y with exact products and one correctly rounded sum.
template <std::size_t K>
int exact_sign(const std::array<Term, K>& terms) {
  std::array<Real, K> products;
  std::array<mpfr_ptr, K> ptrs{};
  for (std::size_t i = 0; i < K; ++i) {
    products[i] = exact_product(terms[i].x, terms[i].y);
    if (terms[i].negate) mpfr_neg(products[i].raw(), products[i].raw(), MPFR_RNDN);
    ptrs[i] = products[i].raw();
  }
  Real sum(PrecisionContext(53));
  mpfr_sum(sum.raw(), ptrs.data(), K, MPFR_RNDN);
  return sum.sign();
}

}  // namespace

int orientation_sign(const Complex& a, const Complex& b, const Complex& c) {
  // det = bx·cy - bx·ay - ax·cy - by·cx + by·ax + ay·cx
  return exact_sign(std::array<Term, 6>{{{b.re(), c.im(), false},
                                         {b.re(), a.im(), true},
                                         {a.re(), c.im(), true},
                                         {b.im(), c.re(), true},
                                         {b.im(), a.re(), false},
                                         {a.im(), c.re(), false}}});
}

int quad_orientation_sign(const Complex& z1, const Complex& z2, const Complex& z3, const Complex& z4) {
  // (z3 - z1) x (z4 - z2), twice the signed area.
  return exact_sign(std::array<Term, 8>{{{z3.re(), z4.im(), false},
                                         {z3.re(), z2.im(), true},
                                         {z1.re(), z4.im(), true},
                                         {z1.re(), z2.im(), false},
                                         {z3.im(), z4.re(), true},
                                         {z3.im(), z2.re(), false},
                                         {z1.im(), z4.re(), false},
                                         {z1.im(), z2.re(), true}}});
}

Real intersection_angle(const Real& d, const Real& R1, const Real& R2) {
  Real c = (d * d - R1 * R1 - R2 * R2) / (2 * R1 * R2);
  if (c > 1L || c < -1L) return Real::parse("nan", d.context());
  return acos(c);
}

std::optional<QuadShape> classify_quad(const GridMap& map, int n, int m, double edge_tol, double angle_tol) {
  if (!map.contains(n + 1, m + 1)) return std::nullopt;
  const std::array<std::array<int, 2>, 4> corner{{{n, m}, {n + 1, m}, {n + 1, m + 1}, {n, m + 1}}};
  for (const auto& c : corner) {
    if (!map.is_finite(c[0], c[1])) return std::nullopt;
  }
  const Complex& z1 = map.at(n, m);
  const Complex& z2 = map.at(n + 1, m);
  const Complex& z3 = map.at(n + 1, m + 1);
  const Complex& z4 = map.at(n, m + 1);
  const Real l12 = abs(z2 - z1), l23 = abs(z3 - z2), l34 = abs(z4 - z3), l41 = abs(z1 - z4);
  if (l12.is_zero() || l23.is_zero() || l34.is_zero() || l41.is_zero()) return std::nullopt;

  const Real& alpha = map.config().alpha;
  const Real pi = Real::pi(alpha.context());
  const bool positive = quad_orientation_sign(z1, z2, z3, z4) >= 0;
  auto near = [&](const Real& a, const Real& b) { return abs(a - b).to_double() <= angle_tol; };
  if ((n + m) % 2 == 0) {
    if (equal_lengths(l12, l41, edge_tol) && equal_lengths(l23, l34, edge_tol)) {
      const Real at2 = angle_at(z2, z1, z3);
      if (positive && near(at2, pi - alpha)) return QuadShape::apex_positive;
      if (!positive && near(at2, alpha)) return QuadShape::apex_negative;
    }
  } else if (equal_lengths(l23, l12, edge_tol) && equal_lengths(l34, l41, edge_tol)) {
    const Real at1 = angle_at(z1, z2, z4);
    if (positive && near(at1, alpha)) return QuadShape::side_alpha;
    if (!positive && near(at1, pi - alpha)) return QuadShape::side_pi_minus_alpha;
  }
  return QuadShape::unclassified;
}

ValidationReport check_kites(const GridMap& map, double tol) {
  ValidationReport r;
  r.check = "kites";
  double worst = 0.0;
  std::string worst_at;
  for (int d = 0; d <= map.size(); d += 2) {
    for (int n = 0; n <= d; ++n) {
      if (auto s = edge_spread_at(map, n, d - n)) {
        ++r.counts["centers"];
        if (worst_at.empty() || *s > worst) {
          worst = *s;
          worst_at = point_name(n, d - n);
        }
      }
    }
  }
  r.worst = worst;
  if (worst > tol) {
    r.passed = false;
    r.location = "center " + worst_at;
  }

  static constexpr std::array<const char*, 5> kNames{"apex_positive", "apex_negative", "side_alpha",
                                                     "side_pi_minus_alpha", "unclassified"};
  for (const char* name : kNames) r.counts[name] = 0;
  std::string first_unclassified;
  for (int d = 0; d + 2 <= map.size(); ++d) {
    for (int n = 0; n <= d; ++n) {
      auto shape = classify_quad(map, n, d - n, tol, map.config().tol.angle);
      if (!shape) {
        ++r.counts["skipped"];
        continue;
      }
      ++r.counts[kNames[static_cast<std::size_t>(*shape)]];
      if (*shape == QuadShape::unclassified && first_unclassified.empty()) first_unclassified = point_name(n, d - n);
    }
  }
  if (!first_unclassified.empty()) {
    r.notes.push_back("first unclassified quad at " + first_unclassified);
    if (r.passed) {
      r.passed = false;
      r.location = "quad " + first_unclassified;
    }
  }
  if (map.config().mode == PatternMode::kappa_variant) {
    r.notes.push_back("kappa variant: the cross-ratio is not unimodular, kites are not expected");
  }
  return r;
}

ValidationReport check_orientation(const GridMap& map) {
  ValidationReport r;
  r.check = "orient";
  const Real eps = map.config().precision.eps();
  long positive = 0, negative = 0, near_zero = 0;
  std::string first_positive, first_negative;
  for (int d = 0; d + 2 <= map.size(); ++d) {
    for (int n = 0; n <= d; ++n) {
      const int m = d - n;
      if (!map.is_finite(n, m) || !map.is_finite(n + 1, m) || !map.is_finite(n + 1, m + 1) ||
          !map.is_finite(n, m + 1)) {
        continue;
      }
      const Complex& z1 = map.at(n, m);
      const Complex& z2 = map.at(n + 1, m);
      const Complex& z3 = map.at(n + 1, m + 1);
      const Complex& z4 = map.at(n, m + 1);
      const Complex u = z3 - z1;
      const Complex v = z4 - z2;
      const Real det = u.re() * v.im() - u.im() * v.re();
      if (abs(det) <= eps * abs(u) * abs(v)) {
        ++near_zero;
        continue;
      }
      if (quad_orientation_sign(z1, z2, z3, z4) > 0) {
        if (positive++ == 0) first_positive = point_name(n, m);
      } else if (negative++ == 0) {
        first_negative = point_name(n, m);
      }
    }
  }
  r.counts = {{"positive", positive}, {"negative", negative}, {"near_zero", near_zero}};
  const long total = positive + negative;
  if (positive > 0 && negative > 0) {
    r.passed = false;
    const bool minority_negative = negative <= positive;
    r.worst = static_cast<double>(std::min(positive, negative)) / static_cast<double>(total);
    r.location = "quad " + (minority_negative ? first_negative : first_positive);
    r.notes.push_back(std::string("majority orientation ") + (minority_negative ? "positive" : "negative"));
  } else if (total > 0) {
    r.notes.push_back(std::string("uniform orientation ") + (negative == 0 ? "positive" : "negative"));
  }
  if (near_zero > 0) r.notes.push_back(std::to_string(near_zero) + " quads with |det| below eps·scale");
  return r;
}

ValidationReport check_angles(const CirclePattern& pattern, double tol) {
  ValidationReport r;
  r.check = "angles";
  const Real pi = Real::pi(pattern.alpha.context());
  auto visit = [&](const auto& pairs, const Real* target, const char* kind) {
    for (const auto& [i, j] : pairs) {
      const Circle& a = pattern.circles[i];
      const Circle& b = pattern.circles[j];
      const Real d = abs(a.center - b.center);
      double dev;
      if (target) {
        const Real theta = intersection_angle(d, a.radius, b.radius);
        dev = theta.is_nan() ? std::numeric_limits<double>::infinity() : abs(theta - *target).to_double();
      } else {
        const Real sum = a.radius + b.radius;
        dev = (abs(d - sum) / sum).to_double();
      }
      ++r.counts[kind];
      if (dev > r.worst) {
        r.worst = dev;
        if (dev > tol) r.location = std::string(kind) + " pair " + z_name(a.z) + ", " + z_name(b.z);
      }
    }
  };
  const Real pi_minus = pi - pattern.alpha;
  visit(pattern.i_pairs, &pattern.alpha, "i_pairs");
  visit(pattern.one_pairs, &pi_minus, "one_pairs");
  visit(pattern.half_pairs, nullptr, "half_pairs");
  r.passed = r.worst <= tol;
  if (r.passed) r.location.clear();
  return r;
}

ValidationReport check_embedded_bruteforce(const GridMap& map, int n_cap, Exec exec) {
  ValidationReport r;
  r.check = "embed";
  const int top = std::min(n_cap, map.size()) - 2;
  std::vector<QuadProbe> quads;
  long skipped = 0;
  for (int d = 0; d <= top; ++d) {
    for (int n = 0; n <= d; ++n) {
      const int m = d - n;
      if (!map.is_finite(n, m) || !map.is_finite(n + 1, m) || !map.is_finite(n + 1, m + 1) ||
          !map.is_finite(n, m + 1)) {
        ++skipped;
        continue;
      }
      quads.push_back(make_probe(map, n, m));
    }
  }
  const long count = static_cast<long>(quads.size());
  long overlaps = 0;
  long first = std::numeric_limits<long>::max();
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) {
      for (long j = i + 1; j < count; ++j) {
        if (interiors_overlap(quads[static_cast<std::size_t>(i)], quads[static_cast<std::size_t>(j)])) {
          ++overlaps;
          first = std::min(first, i * count + j);
        }
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic) reduction(+ : overlaps) reduction(min : first)
    for (long i = 0; i < count; ++i) {
      for (long j = i + 1; j < count; ++j) {
        if (interiors_overlap(quads[static_cast<std::size_t>(i)], quads[static_cast<std::size_t>(j)])) {
          ++overlaps;
          first = std::min(first, i * count + j);
        }
      }
    }
  }
  r.counts = {{"quads", count}, {"pairs", count * (count - 1) / 2}, {"overlapping", overlaps}, {"skipped", skipped}};
  r.worst = static_cast<double>(overlaps);
  if (overlaps > 0) {
    r.passed = false;
    const QuadProbe& a = quads[static_cast<std::size_t>(first / count)];
    const QuadProbe& b = quads[static_cast<std::size_t>(first % count)];
    r.location = "quads " + point_name(a.n, a.m) + " and " + point_name(b.n, b.m);
  }
  return r;
}

ValidationReport check_sign_condition(const RadiusField& field, double band) {
  ValidationReport r;
  r.check = "sign";
  const Real g1 = field.gamma() - 1;
  const Real t = cos(field.alpha());
  long evaluated = 0, near_zero = 0, skipped = 0;
  double worst = 0.0;
  for (int M = 1; M <= field.M_max(); ++M) {
    for (int N = -M; N <= M; ++N) {
      const SublatticeIndex z{N, M};
      if (!in_V_int(z) || !field.contains(N + 1, M)) continue;
      const Real Rz = field.at(N, M), R1 = field.at(N + 1, M), Rmi = field.at(N, M - 1);
      bool usable = true;
      for (const Real* v : {&Rz, &R1, &Rmi}) usable = usable && v->is_finite() && v->sign() > 0;
      if (!usable) {
        ++skipped;
        continue;
      }
      ++evaluated;
      const Real lhs = g1 * (Rz * Rz - R1 * Rmi + t * Rz * (Rmi - R1));
      const Real scale = Rz * Rz + R1 * Rmi + abs(t) * Rz * (Rmi + R1);
      const double rel = (lhs / scale).to_double();
      if (std::abs(rel) < band) ++near_zero;
      if (-rel > worst) {
        worst = -rel;
        if (rel < -band) r.location = z_name(z);
      }
    }
  }
  r.counts = {{"evaluated", evaluated}, {"near_zero", near_zero}, {"skipped", skipped}};
  r.worst = worst;
  r.passed = worst <= band;
  if (r.passed) r.location.clear();
  if (near_zero > 0) r.notes.push_back(std::to_string(near_zero) + " points inside the near-zero band");
  if (skipped > 0) r.notes.push_back(std::to_string(skipped) + " points touching a zero or infinite radius");
  return r;
}

}  // namespace cpat
