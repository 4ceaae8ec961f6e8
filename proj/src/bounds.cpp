#include "nllab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nllab/errors.hpp"

namespace nllab {

HelstromError helstrom_error(double q0, double q1, double delta) {
  if (!(q0 >= 0.0 && q1 >= 0.0) || std::abs(q0 + q1 - 1.0) > 1e-12) {
    throw DomainError("helstrom_error: priors must be nonnegative and sum to 1");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("helstrom_error: overlap must lie in [0, 1]");
  }
  const double x = 4.0 * q0 * q1 * delta * delta;
  HelstromError out;
  // (1 - sqrt(1 - x)) / 2 without the cancellation at small x.
  out.exact = x / (2.0 * (1.0 + std::sqrt(std::max(0.0, 1.0 - x))));
  out.relaxation = q0 * q1 * delta * delta;
  return out;
}

EtaBound perror_from_eta(double eta, std::size_t n) {
  if (n < 2) throw DomainError("perror_from_eta: need n >= 2");
  if (!(eta >= 0.0)) throw DomainError("perror_from_eta: eta must be nonnegative");
  const double nd = static_cast<double>(n);
  return {(2.0 / 27.0) * eta * eta / std::pow(nd, 5), (2.0 / 3.0) / (nd * (nd - 1.0))};
}

double stopping_objective(double eps, double eta, std::size_t n) {
  const double nd = static_cast<double>(n);
  return 0.5 * (1.0 / nd - (nd - 1.0) * eps) * (eta * eps) * (eta * eps);
}

std::string to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::Domino: return "domino";
    case BoundFamily::DominoType: return "domino_type";
    case BoundFamily::RotatedDomino: return "rotated_domino";
    case BoundFamily::Custom: return "custom";
  }
  return "custom";
}

BoundReport perror_from_rigidity(double c, std::size_t L, std::size_t n) {
  if (!(c > 0.0)) throw DomainError("perror_from_rigidity: c must be positive");
  if (L < 1) throw DomainError("perror_from_rigidity: L must be at least 1");
  if (n < 2) throw DomainError("perror_from_rigidity: need n >= 2");
  BoundReport r;
  r.n = n;
  r.L = L;
  r.c = c;
  r.eta_lower = 1.0 / (c * static_cast<double>(L));
  r.p_error_lower = perror_from_eta(r.eta_lower, n).p_error;
  r.provenance = {"rigidity->eta", "eta->p_error"};
  return r;
}

BoundReport domino_constants() {
  BoundReport r = perror_from_rigidity(4.0, 2, 9);
  r.family = BoundFamily::Domino;
  r.provenance.insert(r.provenance.begin(), "domino-rigidity");
  return r;
}

BoundReport domino_type_constants(int D, int dA, int dB) {
  if (D < 1) throw DomainError("domino_type_constants: diameter must be at least 1");
  if (dA < 1 || dB < 1) throw DomainError("domino_type_constants: dimensions must be positive");
  BoundReport r = perror_from_rigidity(2.0 * D, 2, static_cast<std::size_t>(dA) * dB);
  r.family = BoundFamily::DominoType;
  r.D = D;
  r.provenance.insert(r.provenance.begin(), "dimbox-rigidity");
  return r;
}

BoundReport rotated_constants(double theta) {
  if (!(theta > 0.0)) {
    throw DomainError("rotated_constants: theta <= 0 makes the bound vanish (standard basis limit)");
  }
  if (theta > std::numbers::pi / 4.0 + 1e-15) {
    throw DomainError("rotated_constants: theta must be at most pi/4");
  }
  const double sin2 = std::sin(2.0 * theta);
  const double C = appendix_constant_min().C;
  BoundReport r = perror_from_rigidity(kRotatedCertifiedC / sin2, 2, 9);
  r.family = BoundFamily::RotatedDomino;
  r.theta = theta;
  r.provenance.insert(r.provenance.begin(), "rotated-rigidity");
  r.C_exact = C;
  const BoundReport sharp = perror_from_rigidity(C / sin2, 2, 9);
  r.c_sharp = sharp.c;
  r.eta_sharp = sharp.eta_lower;
  r.p_error_sharp = sharp.p_error_lower;
  return r;
}

BoundReport rotated_constants(const std::array<double, 4>& angles) {
  return rotated_constants(*std::min_element(angles.begin(), angles.end()));
}

std::array<double, 3> appendix_branches(double s) {
  if (!(s > 3.0)) throw DomainError("appendix_branches: need s > 3");
  const double lin = 1.0 + std::numbers::sqrt2 * s;
  const double pole = 3.0 * s / (s - 3.0);
  return {8.0 * lin, 14.0 * pole, 2.0 * lin * pole};
}

double appendix_C(double s) {
  const auto b = appendix_branches(s);
  return std::max({b[0], b[1], b[2]});
}

double appendix_r(double s) {
  if (!(s > 3.0)) throw DomainError("appendix_r: need s > 3");
  const double gap = 1.0 / 3.0 - 1.0 / s;
  const double inv = std::min(gap / 14.0, gap / (2.0 * (1.0 + std::numbers::sqrt2 * s)));
  return 1.0 / inv;
}

double appendix_C_closed_form() {
  return 6.0 * (1.0 + 6.0 * std::numbers::sqrt2 +
                2.0 * std::sqrt(3.0 * (6.0 + std::numbers::sqrt2)));
}

double appendix_s_star_closed_form() {
  return 3.0 + std::sqrt(9.0 + 3.0 / std::numbers::sqrt2);
}

ConstantMin appendix_constant_min() {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 3.0 + 1e-9;
  double hi = 100.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = appendix_C(x1);
  double f2 = appendix_C(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = appendix_C(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = appendix_C(x2);
    }
  }
  ConstantMin out;
  out.s_star = (lo + hi) / 2.0;
  out.C = appendix_C(out.s_star);
  for (int s = 4; s <= 20; ++s) out.table[s] = appendix_C(s);
  return out;
}

}  // namespace nllab
