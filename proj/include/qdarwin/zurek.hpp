#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdarwin/gates.hpp"

namespace qdarwin {

struct ZurekCase {
  GateSpec gate;
  int k = 1;
  int n = 1;
  std::vector<Complex> system;  // 2^k amplitudes; {a, b} for k = 1
};

namespace detail {

inline PureState product_with_ground(const RegisterLayout& l, const std::vector<Complex>& sys) {
  InitialParams p{sys};
  ComplexVector s = system_amplitudes(l, p, false);
  ComplexVector psi = ComplexVector::Zero(l.dim());
  for (Eigen::Index i = 0; i < s.size(); ++i) psi(i << l.n) = s(i);
  return PureState(l, std::move(psi));
}

}  // namespace detail

// each environment qubit j (left to right) meets system qubit j mod k exactly once
inline PureState zurek_evolve(const ZurekCase& c) {
  const RegisterLayout l = system_environment(c.k, c.n);
  const Gate g = total_unitary(c.gate);
  PureState psi = detail::product_with_ground(l, c.system);
  for (int j = 0; j < l.n; ++j) psi = apply_two_qubit(psi, g, j % l.k, l.env_qubit(j));
  return psi;
}

inline DensityMatrix zurek_evolve(const DensityMatrix& rho, const GateSpec& spec) {
  const RegisterLayout& l = rho.layout();
  if (l.k < 1 || l.n < 1) throw Error(ErrorCode::BadParams, "need an S-E state");
  const Gate g = total_unitary(spec);
  DensityMatrix out = rho;
  for (int j = 0; j < l.n; ++j) out = apply_two_qubit(out, g, j % l.k, l.env_qubit(j));
  return out;
}

enum class ZurekTag {
  Eq3_5,
  Eq4_1_Tot,
  Eq4_1_Rev,
  Eq5_1_Tot,
  Eq5_1_Rev,
  Eq5_2_Tot,
  Eq5_2_Rev,
  Eq5_3,
  Eq5_4,
  AppendixG2,
  AppendixG3,
};

inline constexpr std::array<std::pair<ZurekTag, std::string_view>, 11> kZurekTags{{
    {ZurekTag::Eq3_5, "eq_3_5"},
    {ZurekTag::Eq4_1_Tot, "eq_4_1_tot"},
    {ZurekTag::Eq4_1_Rev, "eq_4_1_rev"},
    {ZurekTag::Eq5_1_Tot, "eq_5_1_tot"},
    {ZurekTag::Eq5_1_Rev, "eq_5_1_rev"},
    {ZurekTag::Eq5_2_Tot, "eq_5_2_tot"},
    {ZurekTag::Eq5_2_Rev, "eq_5_2_rev"},
    {ZurekTag::Eq5_3, "eq_5_3"},
    {ZurekTag::Eq5_4, "eq_5_4"},
    {ZurekTag::AppendixG2, "appendix_G2"},
    {ZurekTag::AppendixG3, "appendix_G3"},
}};

inline ZurekTag parse_zurek_tag(std::string_view s) {
  for (const auto& [t, name] : kZurekTags)
    if (name == s) return t;
  throw Error(ErrorCode::UnknownCase, std::string(s));
}

inline std::string_view tag_name(ZurekTag t) {
  for (const auto& [tag, name] : kZurekTags)
    if (tag == t) return name;
  return "?";
}

struct ZurekParams {
  Complex a{1.0 / std::numbers::sqrt2, 0.0};
  Complex b{1.0 / std::numbers::sqrt2, 0.0};
  int n = 2;
  double alpha1 = 0.0;  // G2/G3 only
  double alpha2 = 0.0;
};

// the gate each closed form belongs to
inline GateSpec zurek_gate(ZurekTag t, const ZurekParams& p = {}) {
  const auto Tot = OperatorOrder::Total;
  const auto Rev = OperatorOrder::Reversed;
  switch (t) {
    case ZurekTag::Eq3_5: return {pi / 2, 0.0, 0.0, 0.0, Tot};
    case ZurekTag::Eq4_1_Tot: return {pi / 2, pi / 2, pi / 2, 0.0, Tot};
    case ZurekTag::Eq4_1_Rev: return {pi / 2, pi / 2, pi / 2, 0.0, Rev};
    case ZurekTag::Eq5_1_Tot: return {pi / 2, 2 * pi / 3, pi / 3, 0.0, Tot};
    case ZurekTag::Eq5_1_Rev: return {pi / 2, 2 * pi / 3, pi / 3, 0.0, Rev};
    case ZurekTag::Eq5_2_Tot: return {pi / 2, 0.0, 0.0, pi, Tot};
    case ZurekTag::Eq5_2_Rev: return {pi / 2, 0.0, 0.0, pi, Rev};
    case ZurekTag::Eq5_3: return {pi / 2, pi / 2, pi / 2, pi, Tot};
    case ZurekTag::Eq5_4: return {pi / 2, pi / 2, pi / 2, pi, Rev};
    case ZurekTag::AppendixG2: return {pi / 2, p.alpha1, p.alpha2, 0.0, Tot};
    case ZurekTag::AppendixG3: return {pi / 2, p.alpha1, p.alpha2, 0.0, Rev};
  }
  throw Error(ErrorCode::UnknownCase, "tag");
}

inline bool fixed_n2(ZurekTag t) {
  return t == ZurekTag::Eq5_1_Tot || t == ZurekTag::Eq5_1_Rev || t == ZurekTag::AppendixG2 ||
         t == ZurekTag::AppendixG3;
}

// closed-form output amplitudes; kets |s e_1 ... e_n>, e_1 next to the system
inline PureState zurek_closed_form(ZurekTag t, const ZurekParams& p) {
  if (std::abs(std::norm(p.a) + std::norm(p.b) - 1.0) > 1e-12)
    throw Error(ErrorCode::BadAmplitudes, "|a|^2+|b|^2 != 1");
  if (fixed_n2(t) && p.n != 2) throw Error(ErrorCode::BadParams, std::string(tag_name(t)) + " requires n=2");
  const RegisterLayout l = system_environment(1, p.n);
  const int n = p.n;
  const Complex a = p.a, b = p.b, I(0.0, 1.0);
  const Eigen::Index zero = 0, ones = (Eigen::Index(1) << n) - 1, sys1 = Eigen::Index(1) << n;
  const Eigen::Index e1 = Eigen::Index(1) << (n - 1);  // |1 0_{n-1}>
  const Complex mi_n = std::pow(-I, n);
  const double r3 = std::sqrt(3.0);
  ComplexVector v = ComplexVector::Zero(l.dim());
  switch (t) {
    case ZurekTag::Eq3_5:
    case ZurekTag::Eq4_1_Rev:
      v(zero) = a;
      v(sys1 | ones) = b;
      break;
    case ZurekTag::Eq4_1_Tot:
      v(zero) = a;
      v(e1) = I * b;
      break;
    case ZurekTag::Eq5_1_Tot:
      v(0b000) = 0.75 * a;
      v(0b100) = I * r3 / 4.0 * a;
      v(0b001) = -0.5 * a;
      v(0b010) = I * r3 / 2.0 * b;
      v(0b110) = -0.5 * b;
      break;
    case ZurekTag::Eq5_1_Rev:
      v(0b000) = 0.75 * a + I * r3 / 4.0 * b;
      v(0b010) = -0.25 * a + I * r3 / 4.0 * b;
      v(0b101) = -0.25 * b + I * r3 / 4.0 * a;
      v(0b111) = 0.75 * b + I * r3 / 4.0 * a;
      break;
    case ZurekTag::Eq5_2_Tot:
      v(zero) = mi_n * a;
      v(sys1 | ones) = mi_n * ((n % 2) ? -1.0 : 1.0) * b;
      break;
    case ZurekTag::Eq5_2_Rev:
    case ZurekTag::Eq5_4:
      v(zero) = mi_n * a;
      v(sys1 | ones) = mi_n * b;
      break;
    case ZurekTag::Eq5_3:
      v(zero) = mi_n * a;
      v(e1) = mi_n * (-I) * b;
      break;
    case ZurekTag::AppendixG2: {
      const double cd = std::cos(0.5 * (p.alpha1 - p.alpha2)), sd = std::sin(0.5 * (p.alpha1 - p.alpha2));
      const double cs = std::cos(0.5 * (p.alpha1 + p.alpha2)), ss = std::sin(0.5 * (p.alpha1 + p.alpha2));
      v(0b000) = a * cd * cd;
      v(0b100) = a * I * cd * sd;
      v(0b010) = b * I * cd * ss;
      v(0b110) = b * (I * I) * ss * sd;
      v(0b001) = a * (I * I) * ss * sd;
      v(0b101) = a * I * sd * cs;
      v(0b011) = b * I * ss * cs;
      v(0b111) = b * cs * cs;
      break;
    }
    case ZurekTag::AppendixG3: {
      const double cd = std::cos(0.5 * (p.alpha1 - p.alpha2)), sd = std::sin(0.5 * (p.alpha1 - p.alpha2));
      v(0b000) = a * cd * cd + I * b * cd * sd;
      v(0b010) = I * b * cd * sd + (I * I) * a * sd * sd;
      v(0b101) = (I * I) * b * sd * sd + I * a * sd * cd;
      v(0b111) = I * a * sd * cd + b * cd * cd;
      break;
    }
  }
  return PureState(l, std::move(v));
}

inline ZurekCase zurek_case(ZurekTag t, const ZurekParams& p) {
  return ZurekCase{zurek_gate(t, p), 1, p.n, {p.a, p.b}};
}

// closed-form eigenvalue formulas for rho_S of the n=2 asymmetric outputs
inline std::array<double, 2> zurek_system_spectrum(ZurekTag t, Complex a, Complex b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) throw Error(ErrorCode::BadAmplitudes, "|a|^2+|b|^2 != 1");
  const double a2 = std::norm(a), b2 = std::norm(b);
  if (t == ZurekTag::Eq5_1_Tot) {
    const double root = std::sqrt((3 * a2 + 4 * b2) * (3 * a2 + 4 * b2) + 4 * a2);
    return {0.5 + root / 8.0, 0.5 - root / 8.0};
  }
  if (t == ZurekTag::Eq5_1_Rev) {
    const Complex I(0.0, 1.0);
    const Complex cross = 2.0 * I * std::sqrt(3.0) / 16.0 * (std::conj(a) * b - a * std::conj(b));
    return {(10.0 / 16.0 * a2 + 6.0 / 16.0 * b2 + cross).real(), (10.0 / 16.0 * b2 + 6.0 / 16.0 * a2 - cross).real()};
  }
  throw Error(ErrorCode::UnknownCase, std::string(tag_name(t)) + " has no closed-form spectrum");
}

}  // namespace qdarwin
