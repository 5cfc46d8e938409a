#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qdarwin/registers.hpp"

namespace qdarwin {

using std::numbers::pi;

// Total: U_phi * U_diss (dissipation acts first). Reversed: U_diss * U_phi.
enum class OperatorOrder { Total, Reversed };

struct GateSpec {
  double phi = pi / 2;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double gamma = 0.0;
  OperatorOrder order = OperatorOrder::Total;
};

namespace detail {
inline constexpr double kRangeSlack = 1e-12;

inline void check_angle(double v, double lo, double hi, const char* name) {
  if (!std::isfinite(v) || v < lo - kRangeSlack || v > hi + kRangeSlack)
    throw Error(ErrorCode::ParamOutOfRange, std::string(name) + "=" + std::to_string(v));
}
}  // namespace detail

inline void validate(const GateSpec& s) {
  detail::check_angle(s.phi, 0.0, pi, "phi");
  detail::check_angle(s.gamma, 0.0, pi, "gamma");
  if (!std::isfinite(s.alpha1) || !std::isfinite(s.alpha2))
    throw Error(ErrorCode::ParamOutOfRange, "alpha not finite");
  detail::check_angle(s.alpha1 + s.alpha2, 0.0, pi, "alpha1+alpha2");
}

inline Gate controlled_u(double phi) {
  detail::check_angle(phi, 0.0, pi, "phi");
  const double c = std::cos(phi), s = std::sin(phi);
  Gate g = Gate::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(2, 2) = c;
  g(2, 3) = s;
  g(3, 2) = s;
  g(3, 3) = -c;
  return g;
}

// exp[(i/2)(a1 XX + a2 YY - g ZZ)] assembled in the Bell basis where all three terms are diagonal
inline Gate diss_unitary(double alpha1, double alpha2, double gamma) {
  validate(GateSpec{pi / 2, alpha1, alpha2, gamma, OperatorOrder::Total});
  const Complex I(0.0, 1.0);
  const Complex phi_p = std::exp(0.5 * I * (alpha1 - alpha2 - gamma));
  const Complex phi_m = std::exp(0.5 * I * (-alpha1 + alpha2 - gamma));
  const Complex psi_p = std::exp(0.5 * I * (alpha1 + alpha2 + gamma));
  const Complex psi_m = std::exp(0.5 * I * (-alpha1 - alpha2 + gamma));
  Gate g = Gate::Zero();
  g(0, 0) = g(3, 3) = 0.5 * (phi_p + phi_m);
  g(0, 3) = g(3, 0) = 0.5 * (phi_p - phi_m);
  g(1, 1) = g(2, 2) = 0.5 * (psi_p + psi_m);
  g(1, 2) = g(2, 1) = 0.5 * (psi_p - psi_m);
  return g;
}

inline Gate total_unitary(const GateSpec& s) {
  validate(s);
  const Gate cu = controlled_u(s.phi);
  const Gate diss = diss_unitary(s.alpha1, s.alpha2, s.gamma);
  return s.order == OperatorOrder::Total ? Gate(cu * diss) : Gate(diss * cu);
}

// principal argument in (-pi, pi]
inline double phase(Complex z) {
  double a = std::arg(z);
  if (a <= -pi + 1e-12) a = pi;
  return a;
}

inline std::array<Complex, 4> gate_spectrum(const Gate& g) {
  require_unitary(g);
  Eigen::ComplexEigenSolver<Gate> es(g, false);
  std::array<Complex, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return phase(a) < phase(b); });
  return ev;
}

inline const char* order_name(OperatorOrder o) { return o == OperatorOrder::Total ? "Tot" : "Reversed"; }

}  // namespace qdarwin
