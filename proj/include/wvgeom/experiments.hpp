#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wvgeom/blochgeo.hpp"
#include "wvgeom/majorana.hpp"
#include "wvgeom/weakval.hpp"

namespace wvgeom::experiments {

/// (2, 1, j)/√6
PureState spin1_pre();
/// diag(1, 0, −1)
Observable spin1_sz();
/// (cos θ, e^{jξ} sin θ/√2, sin θ/√2)
PureState spin1_post(double theta, double xi);

struct SweepFlags {
  bool divergent = false;
  bool pi_jump_adjacent = false;
  bool degenerate_triangle = false;
};

struct SweepRow {
  double theta = 0.0;
  double xi = 0.0;
  double wv_re = 0.0;
  double wv_im = 0.0;
  double wv_mod = 0.0;
  double wv_arg = 0.0;
  double wv_arg_unwrapped = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double star1_theta = 0.0;
  double star1_phi = 0.0;
  double star2_theta = 0.0;
  double star2_phi = 0.0;
  double star_angle_deg = 0.0;
  double overlap_pre_post_mod = 0.0;
  SweepFlags flags;
};

/// Column names in canonical order.
const std::vector<std::string>& sweep_columns();
/// Value of a named column; flags come back as 0 or 1. Throws Validation for
/// an unknown name.
double sweep_column(const SweepRow& row, std::string_view name);
bool is_flag_column(std::string_view name);

/// The S_z family with its pre-selected state and one coherent mapping
/// shared by every post-selected state.
class Spin1Family {
 public:
  /// Checks ⟨S_z⟩ = 1/2 and ⟨S_z²⟩ = 5/6 on the pre-selected state.
  explicit Spin1Family(const Tolerances& tol = {});

  const Observable& observable() const { return sz_; }
  const PureState& pre() const { return pre_; }
  const PureState& effective() const { return eff_; }
  const majorana::CoherentMapping& mapping() const { return mapping_; }

  struct Point {
    SweepRow row;
    majorana::StarSet stars;
  };

  /// Row with stars ordered θ-descending; divergent points keep the star
  /// columns and report NaN for everything derived from the weak value.
  Point evaluate(double theta, double xi) const;
  SweepRow row(double theta, double xi) const { return evaluate(theta, xi).row; }

  /// Direct weak value; infinite modulus when pre and post are orthogonal.
  Complex weak_value(double theta, double xi) const;
  double modulus(double theta, double xi) const;
  /// Great-circle angle between the two post-state stars, in degrees.
  double star_angle(double theta, double xi) const;
  /// min over θ of |⟨post(θ, ξ)|pre⟩|.
  double min_overlap(double xi) const;

  /// Full decomposition at one point, for scenes. Throws as decompose_argument.
  majorana::ArgumentDecomposition decompose(double theta, double xi) const;

 private:
  Tolerances tol_;
  Observable sz_;
  PureState pre_;
  PureState eff_;
  majorana::CoherentMapping mapping_;
};

SweepRow spin1_point(double theta, double xi);

struct SweepConfig {
  std::vector<double> theta_grid;
  std::vector<double> xi_grid;
  bool track_stars = true;
  bool unwrap = true;
  std::vector<std::string> outputs;  // empty selects every column
};

/// CSV with a header row; floats at 17 significant digits, flags as 0/1.
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& columns);

/// Throws Validation for empty or non-increasing grids, values outside
/// [0, π] × [0, 2π], or unknown output columns.
void validate(const SweepConfig& config);

/// Unwrapped steps within this distance of π are flagged as jumps and kept.
inline constexpr double kPiJumpWindow = 0.3;

/// Rows θ-major in grid order. Star tracking and unwrapping run along each
/// ξ line.
std::vector<SweepRow> sweep(const SweepConfig& config, const Tolerances& tol = {});

struct ExtremaLocus {
  std::vector<double> xi;
  std::vector<double> theta_max;
  std::vector<double> theta_min;
  std::vector<double> max_modulus;  // NaN where divergent
  std::vector<double> min_modulus;
  std::vector<bool> divergent;      // the modulus is unbounded in θ
};

/// Per ξ: scan θ ∈ [0, π) with step ≤ `theta_step`, then golden-section
/// refinement of argmax/argmin of |A_w| to 1e-8. θ is reported in [0, π).
ExtremaLocus extrema_locus(const std::vector<double>& xi_grid, double theta_step = 1e-3,
                           const Tolerances& tol = {});

struct StarAngleMap {
  std::vector<double> theta_grid;
  std::vector<double> xi_grid;
  std::vector<std::vector<double>> degrees;  // [theta index][xi index]
  std::vector<double> column_min;            // min over θ per ξ
  std::vector<double> column_argmin;
  std::vector<double> angle_at_theta_max;
  ExtremaLocus locus;
};

StarAngleMap star_angle_map(const std::vector<double>& theta_grid,
                            const std::vector<double>& xi_grid, double locus_theta_step = 1e-3,
                            const Tolerances& tol = {});

/// Long-format CSV "theta,xi,star_angle_deg".
std::string star_angle_csv(const StarAngleMap& map);
/// "xi,theta_max,theta_min,max_modulus,min_modulus,divergent"
std::string locus_csv(const ExtremaLocus& locus);
std::string star_angle_svg(const StarAngleMap& map);

/// CNOT with control on the first qubit.
Observable cnot();
/// (1, −j, 1, −j)/2
PureState cnot_pre();
/// (1, 0, −2, 0)/√5
PureState cnot_post();

struct CnotReport {
  weakval::WeakValueResult weak_value;
  majorana::ArgumentDecomposition full;
  majorana::QutritReduction reduction;
  majorana::ArgumentDecomposition reduced;
  blochgeo::SceneGraph full_scene;
  blochgeo::SceneGraph reduced_scene;
  blochgeo::SceneGraph cp2_scene;
};

CnotReport cnot_case(const Tolerances& tol = {});

}  // namespace wvgeom::experiments
