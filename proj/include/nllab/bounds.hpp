#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nllab {

struct HelstromError {
  double exact = 0.0;       // (1 - sqrt(1 - 4 q0 q1 delta^2)) / 2
  double relaxation = 0.0;  // q0 q1 delta^2
};

/// Minimum error for telling two pure states with priors q0, q1 and overlap
/// delta apart.
HelstromError helstrom_error(double q0, double q1, double delta);

struct EtaBound {
  double p_error = 0.0;
  double optimal_eps = 0.0;  // (2/3) / (n (n-1))
};

/// (2/27) eta^2 / n^5 and the stopping threshold that achieves it.
EtaBound perror_from_eta(double eta, std::size_t n);

/// The objective maximized by the stopping threshold:
/// f(eps) = 1/2 (1/n - (n-1) eps) (eta eps)^2.
double stopping_objective(double eps, double eta, std::size_t n);

enum class BoundFamily { Domino, DominoType, RotatedDomino, Custom };
std::string to_string(BoundFamily f);

struct BoundReport {
  BoundFamily family = BoundFamily::Custom;
  std::size_t n = 0;
  std::size_t L = 0;
  double c = 0.0;
  std::optional<int> D;
  std::optional<double> theta;
  double eta_lower = 0.0;
  double p_error_lower = 0.0;
  std::vector<std::string> provenance;

  // Rotated family only: the computed constant and the bound it gives
  // before rounding c up.
  std::optional<double> C_exact;
  std::optional<double> c_sharp;
  std::optional<double> eta_sharp;
  std::optional<double> p_error_sharp;
};

/// eta >= 1/(c L) and the resulting error bound.
BoundReport perror_from_rigidity(double c, std::size_t L, std::size_t n);

/// c = 4, L = 2, n = 9.
BoundReport domino_constants();

/// Domino-type tiling of diameter D on a dA x dB grid: c = 2D, L = 2.
BoundReport domino_type_constants(int D, int dA, int dB);

/// The rounded-up constant used for the certified rotated-domino row.
inline constexpr double kRotatedCertifiedC = 114.0;

/// Rotated domino basis with smallest angle theta. Certified row uses
/// c = 114 / sin 2theta; the sharp values with c = C / sin 2theta are
/// reported alongside. Throws DomainError for theta <= 0 or theta > pi/4.
BoundReport rotated_constants(double theta);
BoundReport rotated_constants(const std::array<double, 4>& angles);

/// C(s) = max of the three branches below, for s > 3.
std::array<double, 3> appendix_branches(double s);
double appendix_C(double s);
/// r(s) with 1/r(s) = min{(1/14)(1/3 - 1/s), (1/3 - 1/s) / (2(1 + sqrt2 s))}.
double appendix_r(double s);

/// 6(1 + 6 sqrt2 + 2 sqrt(3(6 + sqrt2))).
double appendix_C_closed_form();
/// 3 + sqrt(9 + 3/sqrt2).
double appendix_s_star_closed_form();

struct ConstantMin {
  double s_star = 0.0;
  double C = 0.0;
  std::map<double, double> table;  // s -> C(s) on an integer grid 4..20
};

/// Golden-section search of C(s) over (3, 100] to a bracket of 1e-10.
ConstantMin appendix_constant_min();

}  // namespace nllab
