// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpat/error.hpp"
#include "cpat/geometry.hpp"
#include "cpat/painleve.hpp"
#include "cpat/pattern.hpp"
#include "cpat/riccati.hpp"

using namespace cpat;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

const std::vector<double> kGammas{0.25, 0.5, 0.75, 1.25, 1.5, 1.75};
const std::vector<std::pair<long, long>> kAlphas{{1, 6}, {1, 4}, {1, 2}, {2, 3}};

Real alpha_of(std::pair<long, long> a, PrecisionContext ctx) { return Real::pi(ctx) * a.first / a.second; }

std::string alpha_text(std::pair<long, long> a) {
  return (a.first == 1 ? "" : std::to_string(a.first)) + "pi/" + std::to_string(a.second);
}

std::string label(double gamma, std::pair<long, long> a) {
  std::ostringstream s;
  s << "(gamma=" << gamma << ", alpha=" << alpha_text(a) << ")";
  return s.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

PatternConfig zgamma(double gamma, std::pair<long, long> a, int size, int bits) {
  const PrecisionContext ctx(bits);
  return PatternConfig::make(PatternMode::zgamma, Real(gamma, ctx), alpha_of(a, ctx), size, ctx);
}

// 1. γ = 1 reproduces the rhombic lattice.
Outcome identity_case() {
  Outcome o;
  double worst = 0.0;
  int max_bits = 0;
  for (const auto& a : kAlphas) {
    const PatternConfig cfg = zgamma(1.0, a, 40, 53);
    const LadderResult lr = generate_with_ladder(cfg);
    max_bits = std::max(max_bits, lr.bits);
    const PrecisionContext ctx = lr.map.config().precision;
    const Complex w = Complex::polar(Real(1L, ctx), lr.map.config().alpha);
    for (int n = 0; n <= 40; ++n) {
      for (int m = 0; n + m <= 40; ++m) {
        const double err = abs(lr.map.at(n, m) - (Complex::real(Real(long(n), ctx)) + w * Real(long(m), ctx))).to_double();
        if (n + m == 0) {
          if (err != 0.0) o.passed = false;
          continue;
        }
        const double scaled = err / (n + m);
        worst = std::max(worst, scaled);
        if (!(scaled < 1e-12)) {
          if (o.passed) o.detail = "first failure at " + alpha_text(a) + " (n,m)=(" + std::to_string(n) + "," +
                                   std::to_string(m) + "); ";
          o.passed = false;
        }
      }
    }
  }
  o.detail += "max |f - (n+m e^{ia})|/(n+m) = " + sci(worst) + " (ladder reached " + std::to_string(max_bits) +
              " bits)";
  return o;
}

// 2. Embeddedness checks on the desk-scale grid.
Outcome embeddedness() {
  Outcome o;
  const std::size_t count = kGammas.size() * kAlphas.size();
  std::vector<std::string> failures(count);
  std::vector<double> spread(count, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    const double g = kGammas[static_cast<std::size_t>(i) / kAlphas.size()];
    const auto a = kAlphas[static_cast<std::size_t>(i) % kAlphas.size()];
    std::string& fail = failures[static_cast<std::size_t>(i)];
    try {
      const GridMap map = generate_map(zgamma(g, a, 30, 212), Exec::serial);
      const ValidationReport kites = check_kites(map, 1e-10);
      spread[static_cast<std::size_t>(i)] = kites.worst;
      const RadiusField field = extract_radius_field(map, 1e-10);
      std::vector<ValidationReport> reports{kites, check_orientation(map),
                                            check_angles(circle_pattern(map, field), 1e-8),
                                            check_sign_condition(field, 1e-8),
                                            check_embedded_bruteforce(map, 14, Exec::serial)};
      for (const auto& r : reports) {
        if (!r.passed) fail += r.check + " ";
      }
    } catch (const Error& e) {
      fail = e.what();
    }
  }
  double worst = 0.0;
  long failed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    worst = std::max(worst, spread[i]);
    if (!failures[i].empty()) {
      if (failed == 0) o.detail = "first failure " + label(kGammas[i / kAlphas.size()], kAlphas[i % kAlphas.size()]) +
                                  ": " + failures[i] + "; ";
      ++failed;
    }
  }
  o.passed = failed == 0;
  o.detail += std::to_string(count - static_cast<std::size_t>(failed)) + "/" + std::to_string(count) +
              " configurations pass kites, orient, angles, sign, embed (n_cap 14); max kite spread " + sci(worst);
  return o;
}

// 3. Riccati separatrix and its unstable neighbours.
Outcome riccati_separatrix() {
  Outcome o;
  long sep_fail = 0, lose_fail = 0, reach_fail = 0;
  std::string first;
  const long cap = 2000;
  for (double g : kGammas) {
    for (const auto& a : kAlphas) {
      const PrecisionContext ctx(256);
      const RiccatiParams params = RiccatiParams::make(Real(g, ctx), alpha_of(a, ctx));
      const Real p0 = p0_closed(params);
      const RiccatiTrajectory sep = riccati_iterate(p0, params, 200);
      if (sep.status != RiccatiStatus::all_positive) {
        ++sep_fail;
        if (first.empty()) {
          first = "separatrix loses positivity at n=" + std::to_string(sep.exit_index) + " " + label(g, a);
        }
      }
      for (double d : {1e-8, -1e-8}) {
        const RiccatiTrajectory t = riccati_iterate(p0 + Real(d, ctx), params, cap, {.stop_at_sign_loss = false});
        if (t.status == RiccatiStatus::all_positive) {
          ++lose_fail;
          if (first.empty()) first = "perturbation " + sci(d) + " stays positive through n=" + std::to_string(cap) +
                                     " " + label(g, a);
          continue;
        }
        bool reached = false;
        const std::size_t from = static_cast<std::size_t>(t.exit_index);
        for (std::size_t k = from; k <= from + 50 && k < t.p.size(); ++k) {
          const double v = t.p[k].to_double();
          if (v > -1.1 && v < -0.9) reached = true;
        }
        if (!reached) ++reach_fail;
      }
    }
  }
  o.passed = sep_fail == 0 && lose_fail == 0 && reach_fail == 0;
  const std::size_t configs = kGammas.size() * kAlphas.size();
  o.detail = "separatrix positive to n=200 in " + std::to_string(configs - static_cast<std::size_t>(sep_fail)) + "/" +
             std::to_string(configs) + "; perturbations losing positivity " +
             std::to_string(2 * configs - static_cast<std::size_t>(lose_fail)) + "/" + std::to_string(2 * configs) +
             ", of which reaching (-1.1,-0.9) within 50 steps " +
             std::to_string(2 * configs - static_cast<std::size_t>(lose_fail + reach_fail)) +
             (first.empty() ? "" : "; first failure: " + first);
  return o;
}

// 4. Hypergeometric and closed-form initial values agree.
Outcome closed_form_agreement() {
  Outcome o;
  double worst = 0.0;
  const PrecisionContext ctx(106);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const Real gamma = Real(2L * i + 1, ctx) / 20;
      const Real alpha = Real::pi(ctx) * (2L * j + 1) / 40;
      const RiccatiParams params = RiccatiParams::make(gamma, alpha);
      const double d = abs(p0_hypergeometric(params) - p0_closed(params)).to_double();
      worst = std::max(worst, d);
    }
  }
  o.passed = worst < 1e-10;
  o.detail = "max |p0_hyp - p0_closed| = " + sci(worst) + " over gamma=(2i+1)/20, alpha=(2j+1)pi/40";
  return o;
}

// 5. Linearization: three-term recurrence and the Riccati ansatz.
Outcome linearization() {
  Outcome o;
  double worst_res = 0.0, worst_ansatz = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (double g : kGammas) {
    for (const auto& a : kAlphas) {
      const PrecisionContext ctx(256);
      const RiccatiParams params = RiccatiParams::make(Real(g, ctx), alpha_of(a, ctx));
      for (int k = 0; k < 2; ++k) {
        const LinearSolution sol = linear_solution(Real(coef(rng), ctx), Real(coef(rng), ctx), params, 50);
        worst_res = std::max(worst_res, linear_residual(sol).to_double());
      }
      const LinearSolution rec = linear_solution(Real(ctx), Real(1L, ctx), params, 50);
      worst_res = std::max(worst_res, linear_residual(rec).to_double());
      const std::vector<Real> p = ansatz_riccati(rec);
      // The forward iteration is unstable; compare where it is still resolved at 256 bits.
      const RiccatiTrajectory traj = riccati_iterate(p0_closed(params), params, 50);
      for (std::size_t n = 0; n < traj.p.size() && n < p.size(); ++n) {
        worst_ansatz = std::max(worst_ansatz, (abs(p[n] - traj.p[n]) / abs(traj.p[n])).to_double());
      }
      if (traj.p.size() < 51) o.passed = false;
    }
  }
  o.passed = o.passed && worst_res < 1e-20 && worst_ansatz < 1e-10;
  o.detail = "max scaled linear residual " + sci(worst_res) + "; c1=0 ansatz vs riccati_iterate rel diff " +
             sci(worst_ansatz) + " (n <= 50, 256 bits)";
  return o;
}

// 6. Duality R -> 1/R, γ -> 2-γ.
Outcome duality() {
  Outcome o;
  double worst = 0.0;
  bool involution = true;
  auto check = [&](const RadiusField& f) {
    const RadiusField d = dual_field(f);
    const FieldResiduals r = field_residuals(d);
    worst = std::max({worst, r.square_max.to_double(), r.ri_max.to_double()});
    involution = involution && dual_field(d) == f;
  };
  for (double g : kGammas) {
    for (const auto& a : kAlphas) check(extract_radius_field(generate_map(zgamma(g, a, 20, 212))));
  }
  for (const auto& a : kAlphas) check(z2_field(alpha_of(a, PrecisionContext(212)), 10));
  o.passed = worst < 1e-15 && involution;
  o.detail = "max relative residual of dual fields " + sci(worst) + " (24 Z^gamma fields, size 20, and 4 Z2 fields " +
             "to M=10, 212 bits); dual(dual(R)) == R " + (involution ? "exactly" : "VIOLATED");
  return o;
}

// 7. Painlevé consistency and separatrix shooting.
Outcome painleve() {
  Outcome o;
  double worst = 0.0;
  for (double g : kGammas) {
    for (const auto& a : kAlphas) {
      const RadiusField f = extract_radius_field(generate_map(zgamma(g, a, 20, 212)));
      worst = std::max(worst, painleve_consistency(f).to_double());
    }
  }
  std::string shots;
  bool bracketed = true;
  for (double g : {0.5, 1.5}) {
    const PrecisionContext ctx(212);
    const PainleveParams params = PainleveParams::make(Real(g, ctx), Real::pi(ctx) / 2, 0);
    const Real q = p0_closed(RiccatiParams::make(params.gamma, params.alpha));
    const Real tol(1e-6, ctx);
    try {
      const ShootingResult r = separatrix_bisect(params, 30, Real(1e-12, ctx));
      const bool ok = r.M_reached == 30 && r.q_lo - tol <= q && q <= r.q_hi + tol;
      bracketed = bracketed && ok;
      shots += " gamma=" + std::to_string(g).substr(0, 3) + ": [" + r.q_lo.to_string(12) + ", " +
               r.q_hi.to_string(12) + "] vs " + q.to_string(12) + (ok ? "" : " MISSED") + ";";
    } catch (const Error& e) {
      bracketed = false;
      shots += std::string(" ") + e.what() + ";";
    }
  }
  o.passed = worst < 1e-15 && bracketed;
  o.detail = "max (P,Q) step residual " + sci(worst) + " (24 fields, size 20, 212 bits); shooting N=0, M_max=30, " +
             "alpha=pi/2:" + shots;
  return o;
}

// 8. Axis asymptotics f_{n,0} ~ c n^γ.
Outcome asymptotics() {
  Outcome o;
  std::string detail;
  for (double g : {0.5, 1.5}) {
    for (const auto& a : kAlphas) {
      const AxisPoints axis = axis_points(zgamma(g, a, 200, 106));
      const AsymptoticFit fit = fit_axis(axis.n_axis);
      const double rel = std::abs(fit.gamma_fit.to_double() - g) / g;
      if (!(rel < 0.01)) o.passed = false;
      if (a == kAlphas.front()) detail += " gamma=" + std::to_string(g).substr(0, 3) + " -> " +
                                          fit.gamma_fit.to_string(8) + " (c=" + fit.c_fit.to_string(6) + ");";
    }
  }
  const AsymptoticFit diag = fit_asymptotics(generate_map(zgamma(0.5, {1, 2}, 40, 212)));
  o.detail = "gamma_fit from n <= 200:" + detail + " conjecture residual (gamma=0.5, alpha=pi/2, size 40) " +
             diag.conjecture_residual.to_string(3) + " (reported only)";
  return o;
}

// 9. Z² and Log radius fields.
Outcome z2_and_log() {
  Outcome o;
  long evaluated = 0;
  for (const auto& a : kAlphas) {
    const RadiusField z2 = z2_field(alpha_of(a, PrecisionContext(212)), 10);
    const RadiusField log = dual_field(z2);
    for (const RadiusField* f : {&z2, &log}) {
      for (int M = 0; M <= 10; ++M) {
        for (int N = -M; N <= M; ++N) {
          if (N == 0 && M == 0) continue;
          const Real R = f->at(N, M);
          if (!(R.sign() > 0) || R.is_inf()) o.passed = false;
        }
      }
      const ValidationReport r = check_sign_condition(*f, 1e-8);
      evaluated += r.counts.at("evaluated");
      if (!r.passed) {
        o.passed = false;
        o.detail += std::string(f == &z2 ? "Z2" : "Log") + " sign condition fails at " + alpha_text(a) + " " +
                    r.location + "; ";
      }
    }
  }
  o.detail += "Z2 and Log fields positive off the origin through M=10 at 212 bits; sign condition evaluated at " +
              std::to_string(evaluated) + " points";
  return o;
}

// 10. Unitary dPII orbit.
Outcome dpii() {
  Outcome o;
  const PrecisionContext ctx(212);
  const Real gamma(0.5, ctx), alpha = Real::pi(ctx) / 2;
  const DpiiTrajectory t = dpii_trajectory(gamma, alpha, 50);
  double drift = 0.0;
  for (const auto& d : t.drift) drift = std::max(drift, d.to_double());
  bool sector = t.x.size() == 51;
  for (const auto& x : t.x) sector = sector && arg(x).sign() > 0 && arg(x) < alpha;
  o.passed = sector && drift < 1e-10;
  o.detail = std::string("arg x_n in (0, pi/2) for n <= 50: ") + (sector ? "yes" : "NO") + "; max drift " + sci(drift);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity case", identity_case},
      {"embeddedness", embeddedness},
      {"Riccati separatrix", riccati_separatrix},
      {"closed-form agreement", closed_form_agreement},
      {"linearization", linearization},
      {"duality", duality},
      {"Painleve consistency", painleve},
      {"asymptotics", asymptotics},
      {"Z2 and Log", z2_and_log},
      {"dPII", dpii},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s  %s: %s [%.1fs]\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
