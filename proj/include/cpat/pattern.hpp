#pragma once

// Construction of the discrete maps Z^γ, Z², Log and the κ-variant:
// boundary values on the axes, interior propagation by the cross-ratio
// equation, the radius field R_z and its evolution equations, reconstruction
// of a map from radii, and the duality R -> 1/R, γ -> 2-γ.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpat/exec.hpp"
#include "cpat/lattice.hpp"
#include "cpat/real.hpp"

namespace cpat {

enum class PatternMode { zgamma, z2, log, kappa_variant };

std::string_view mode_name(PatternMode mode);
/// Accepts "zgamma", "z2", "log" and "kappa". Throws Error otherwise.
PatternMode parse_mode(std::string_view name);

struct Tolerances {
  double kite = 1e-10;             // relative edge spread at centers
  double angle = 1e-8;             // intersection angles, radians
  double residual_eps = 1e6;       // field equation residuals, in units of eps
  double sign_band = 1e-8;         // near-zero band of the sign condition
};

struct PatternConfig {
  PatternMode mode = PatternMode::zgamma;
  Real gamma;
  Real alpha;
  Real kappa;
  Real beta;       // direction of the m-axis; γα unless overridden
  bool skew = false;  // beta was overridden
  int size = 20;   // all (n, m) with n + m <= size
  PrecisionContext precision;
  Tolerances tol;

  /// Validates α ∈ [1e-3, π-1e-3], size >= 2, γ ∈ (0,2) for zgamma and
  /// kappa_variant, κ > 0. For z2 and log γ is fixed to 2 internally.
  static PatternConfig make(PatternMode mode, const Real& gamma, const Real& alpha, int size,
                            PrecisionContext precision, std::optional<Real> kappa = std::nullopt,
                            std::optional<Real> beta = std::nullopt);

  /// Same configuration rounded to another mantissa width.
  PatternConfig with_precision(PrecisionContext ctx) const;

  /// κ² e^{-2iα}.
  Complex lambda() const;
};

/// f_{n,m} on the triangle n, m >= 0, n + m <= size. Points that are not
/// finite (the origin of Log) are stored as infinities.
class GridMap {
public:
  explicit GridMap(PatternConfig config);

  int size() const { return config_.size; }
  const PatternConfig& config() const { return config_; }
  bool contains(int n, int m) const { return n >= 0 && m >= 0 && n + m <= config_.size; }

  const Complex& at(int n, int m) const { return values_[index(n, m)]; }
  Complex& at(int n, int m) { return values_[index(n, m)]; }
  bool is_finite(int n, int m) const { return contains(n, m) && at(n, m).is_finite(); }

  const std::vector<Complex>& values() const { return values_; }

  /// Largest relative residual of the isomonodromic constraint over the
  /// points where it could be evaluated; filled by the generators.
  double constraint_residual = 0.0;

  static std::size_t index(int n, int m) {
    const std::size_t d = static_cast<std::size_t>(n + m);
    return d * (d + 1) / 2 + static_cast<std::size_t>(m);
  }

private:
  PatternConfig config_;
  std::vector<Complex> values_;
};

/// R_z on rows M = 0..M_max, |N| <= M. The dual is kept lazily: values stay
/// stored as computed and `inverted` makes at() return 1/R, so dual∘dual is
/// exactly the identity and the Z² origin value 0 dualizes to +inf.
class RadiusField {
public:
  RadiusField(int M_max, const Real& gamma, const Real& alpha, PatternMode mode);

  int M_max() const { return M_max_; }
  bool contains(int N, int M) const { return M >= 0 && M <= M_max_ && N >= -M && N <= M; }
  bool contains(SublatticeIndex z) const { return contains(z.N, z.M); }

  Real at(int N, int M) const;
  Real at(SublatticeIndex z) const { return at(z.N, z.M); }
  const Real& stored(int N, int M) const { return values_[index(N, M)]; }
  void set(int N, int M, Real value) { values_[index(N, M)] = std::move(value); }

  /// Equation parameter: γ, or 2-γ once inverted.
  Real gamma() const { return inverted_ ? 2 - gamma_ : gamma_; }
  const Real& alpha() const { return alpha_; }
  bool inverted() const { return inverted_; }
  PatternMode mode() const { return mode_; }
  PrecisionContext context() const { return alpha_.context(); }
  /// R_0 is 0 (Z²) or infinite (Log); equations touching z = 0 are skipped.
  bool origin_excluded() const { return mode_ == PatternMode::z2 || mode_ == PatternMode::log; }

  /// Largest relative edge spread seen when the field was extracted from a map.
  double kite_spread = 0.0;

  friend RadiusField dual_field(const RadiusField& field);
  friend bool operator==(const RadiusField& a, const RadiusField& b);

private:
  static std::size_t index(int N, int M) {
    return static_cast<std::size_t>(M) * static_cast<std::size_t>(M) + static_cast<std::size_t>(N + M);
  }

  int M_max_;
  Real gamma_;
  Real alpha_;
  PatternMode mode_;
  bool inverted_ = false;
  std::vector<Real> values_;
};

struct AxisRadii {
  std::vector<Real> recurrence;   // r_{n+1} = g_n r_n, r_0 = 1
  std::vector<Real> closed_form;  // Γ(n+γ/2)Γ(1-γ/2) / (Γ(γ/2)Γ(n+1-γ/2))
  Real max_rel_diff;
};

/// r_0..r_{n_max}. Throws PoleError at γ = 2.
AxisRadii axis_radii(const Real& gamma, int n_max);

struct AxisPoints {
  std::vector<Complex> n_axis;  // f_{n,0}
  std::vector<Complex> m_axis;  // f_{0,m}
};

/// Boundary values for zgamma and kappa_variant: f_{n,0} is real with edge
/// lengths r_{⌊n/2⌋} (edge ending at n), f_{0,m} = e^{iβ}|f_{m,0}|/κ.
AxisPoints axis_points(const PatternConfig& config);

/// Relative residual of the isomonodromic constraint at (n, m), or nullopt
/// when a required neighbour is missing or a denominator vanishes.
std::optional<double> constraint_residual_at(const GridMap& map, int n, int m);
/// Largest constraint residual over the map.
double max_constraint_residual(const GridMap& map, Exec exec = Exec::parallel);

/// Axis values plus cross-ratio propagation of the interior, front by front.
/// Exec::serial is the row-major reference sweep. Throws DegenerateQuad with
/// the offending location.
GridMap propagate_interior(const PatternConfig& config, Exec exec = Exec::parallel);

/// Any mode: zgamma/kappa_variant by propagation, z2 and log by
/// reconstruction from their radius fields.
GridMap generate_map(const PatternConfig& config, Exec exec = Exec::parallel);

struct LadderResult {
  GridMap map;
  int bits = 0;
  double kite_spread = 0.0;
  bool accepted = false;
};

/// Retries generate_map at 53, 106, 212 and 424 bits until the kite spread
/// drops below config.tol.kite. Returns the last attempt if none succeeds.
LadderResult generate_with_ladder(const PatternConfig& config, Exec exec = Exec::parallel);

/// Relative spread (max-min)/max of the incident edge lengths at a center;
/// nullopt for non-centers, isolated points or non-finite neighbourhoods.
std::optional<double> edge_spread_at(const GridMap& map, int n, int m);
/// Largest edge spread over all centers with at least two edges.
double max_edge_spread(const GridMap& map);

/// R_z = mean incident edge length at every center whose row M is complete,
/// i.e. M <= (size-1)/2. Throws NotAKite at the worst center when the spread
/// exceeds tol.
RadiusField extract_radius_field(const GridMap& map, double tol);
inline RadiusField extract_radius_field(const GridMap& map) {
  return extract_radius_field(map, map.config().tol.kite);
}

/// Evolution of R over V row by row from R_0, R_i and the diagonal values.
/// zgamma uses r_K from axis_radii on both diagonals. Throws SignLoss at the
/// first non-positive or non-finite radius.
RadiusField radii_evolution(const Real& R0, const Real& Ri, const PatternConfig& config, int M_max);

/// Z² seed: R_0 = 0, R_i = sin α/α, diagonal radii r_K = K.
RadiusField z2_field(const Real& alpha, int M_max);

/// R -> 1/R, γ -> 2-γ.
RadiusField dual_field(const RadiusField& field);

/// Rebuilds f from radii: f_{0,0} = 0, f_{1,0} = R_0, f_{1,1} = f_{1,0} + R_i e^{iα}
/// and f_{0,1} the mirror image of f_{1,0} in the line through f_{0,0}, f_{1,1}.
/// Odd points are mirror images across the line of their two neighbouring
/// centers; centers sit at distance R_z from both neighbours on the
/// positively oriented side. For Log (R_0 = inf) f_{0,0} is the point at
/// infinity, f_{1,0} = 0 and both axes run parallel to the real axis.
GridMap reconstruct_map(const RadiusField& field, const PatternConfig& config);

/// Relative residual of the square equation at z (R_z = 0 for z outside V),
/// nullopt when z is outside V_l or a radius is missing or excluded.
std::optional<Real> square_residual(const RadiusField& field, SublatticeIndex z);
/// Relative residual of the Ri equation at z ∈ V_rint.
std::optional<Real> ri_residual(const RadiusField& field, SublatticeIndex z);

struct FieldResiduals {
  Real square_max;
  Real ri_max;
  SublatticeIndex square_worst;
  SublatticeIndex ri_worst;
  long square_count = 0;
  long ri_count = 0;
};

FieldResiduals field_residuals(const RadiusField& field);

/// Largest relative mismatch between the radii ratios (P, Q) at row M+1 and
/// one Painlevé step from row M, over all z with the needed neighbours.
Real painleve_consistency(const RadiusField& field);

struct AsymptoticFit {
  Real c_fit;
  Real gamma_fit;
  /// max |f - c (n + e^{iα} m)^γ| / |f| over the map; NaN without interior data.
  Real conjecture_residual;
};

/// Least squares of log f_{n,0} against log n over n ∈ [n_max/2, n_max].
AsymptoticFit fit_axis(const std::vector<Complex>& n_axis);
/// fit_axis plus the diagnostic residual over the whole map.
AsymptoticFit fit_asymptotics(const GridMap& map);

struct Circle {
  Complex center;
  Real radius;
  SublatticeIndex z;
};

struct CirclePattern {
  std::vector<Circle> circles;
  /// Index pairs into circles. i_pairs intersect at α, one_pairs at π-α.
  std::vector<std::pair<std::size_t, std::size_t>> i_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> one_pairs;
  /// Diagonal half-neighbours z, z±1+i, which touch.
  std::vector<std::pair<std::size_t, std::size_t>> half_pairs;
  Real alpha;
};

/// Circles centered at f_{n,m} with radius R_z for every z in the field whose
/// center is a finite map point. Zero and infinite radii are skipped.
CirclePattern circle_pattern(const GridMap& map, const RadiusField& field);

}  // namespace cpat
