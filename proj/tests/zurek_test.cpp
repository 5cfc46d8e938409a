#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace qdarwin;

namespace {

const Complex I(0.0, 1.0);
const double r2 = 1.0 / std::numbers::sqrt2;

double fidelity(const PureState& a, const PureState& b) { return std::norm(a.amplitudes().dot(b.amplitudes())); }

ZurekParams params(Complex a, Complex b, int n, double a1 = 0.0, double a2 = 0.0) {
  ZurekParams p;
  p.a = a;
  p.b = b;
  p.n = n;
  p.alpha1 = a1;
  p.alpha2 = a2;
  return p;
}

// evolve with the dense embedding, one environment qubit at a time
ComplexVector dense_single_pass(const GateSpec& g, Complex a, Complex b, int n) {
  const int nq = n + 1;
  ComplexVector v = ComplexVector::Zero(Eigen::Index(1) << nq);
  v(0) = a;
  v(Eigen::Index(1) << n) = b;
  const Gate u = total_unitary(g);
  for (int j = 1; j <= n; ++j) v = oracle::embed(nq, u, 0, j) * v;
  return v;
}

double system_entropy(const PureState& psi) {
  return von_neumann_entropy(reduce_to(psi.density(), {0}));
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadParams;
}

}  // namespace

TEST(ZurekEvolve, CnotBranching) {
  for (int n : {1, 3, 6}) {
    const auto psi = zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq3_5), 1, n, {0.6, 0.8}});
    ComplexVector want = ComplexVector::Zero(psi.amplitudes().size());
    want(0) = 0.6;
    want(want.size() - 1) = 0.8;
    EXPECT_LE((psi.amplitudes() - want).norm(), 1e-15);
  }
}

TEST(ZurekEvolve, SymmetricTotalKillsEntropy) {
  const int n = 5;
  const auto psi = zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq4_1_Tot), 1, n, {0.6, 0.8}});
  ComplexVector want = ComplexVector::Zero(64);
  want(0) = 0.6;
  want(Eigen::Index(1) << (n - 1)) = I * 0.8;  // |0>|1 0_{n-1}>
  EXPECT_LE((psi.amplitudes() - want).norm(), 1e-12);
  for (const auto& pt : pip(psi.density(), 1.0).points) {
    EXPECT_NEAR(pt.H_S, 0.0, 1e-12);
    EXPECT_NEAR(pt.H_E, 0.0, 1e-12);
    EXPECT_NEAR(pt.H_SE, 0.0, 1e-12);
  }
}

TEST(ZurekEvolve, SymmetricReversedRestoresBranching) {
  const int n = 4;
  const auto psi = zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq4_1_Rev), 1, n, {0.6, 0.8}});
  const auto ref = zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq3_5), 1, n, {0.6, 0.8}});
  EXPECT_LE((psi.amplitudes() - ref.amplitudes()).norm(), 1e-12);
}

TEST(ZurekEvolve, MatchesDenseOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double s = pi * u(rng), f = u(rng);
    const GateSpec g{pi * u(rng), s * f, s * (1 - f), pi * u(rng), t % 2 ? OperatorOrder::Reversed : OperatorOrder::Total};
    const double th = pi * u(rng);
    const Complex a = std::cos(th), b = std::sin(th) * std::exp(I * (2 * pi * u(rng)));
    const int n = 1 + t % 4;
    const auto psi = zurek_evolve(ZurekCase{g, 1, n, {a, b}});
    EXPECT_LE((psi.amplitudes() - dense_single_pass(g, a, b, n)).norm(), 1e-12);
  }
}

TEST(ZurekEvolve, MixedInputAgreesWithPure) {
  const GateSpec g{pi / 2, 0.3, 0.4, 0.5, OperatorOrder::Total};
  const auto pure = zurek_evolve(ZurekCase{g, 1, 3, {0.6, 0.8}});
  const auto rho = initial_state(InitialFamily::ZurekGround, {1, 3}, InitialParams::ab(0.6, 0.8));
  EXPECT_LE(oracle::max_abs(zurek_evolve(rho, g).matrix() - pure.density().matrix()), 1e-12);
}

TEST(ZurekEvolve, BadAmplitudes) {
  EXPECT_EQ(code_of([] { zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq3_5), 1, 2, {0.6, 0.6}}); }),
            ErrorCode::BadAmplitudes);
}

TEST(ZurekClosedForm, EveryTagMatchesEvolution) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [tag, name] : kZurekTags) {
    for (int t = 0; t < 5; ++t) {
      const double th = pi * u(rng);
      const Complex a = std::cos(th), b = std::sin(th) * std::exp(I * (2 * pi * u(rng)));
      const double s = pi * u(rng), f = u(rng);
      for (int n : {1, 2, 3, 5}) {
        if (fixed_n2(tag) && n != 2) continue;
        const auto p = params(a, b, n, s * f, s * (1 - f));
        const auto cf = zurek_closed_form(tag, p);
        const auto ev = zurek_evolve(zurek_case(tag, p));
        EXPECT_GE(fidelity(cf, ev), 1 - 1e-12) << name << " n=" << n;
        EXPECT_LE((cf.amplitudes() - ev.amplitudes()).norm(), 1e-12) << name << " n=" << n;
      }
    }
  }
}

TEST(ZurekClosedForm, AsymmetricTotalAmplitudes) {
  const Complex a = 0.6, b = 0.8;
  const auto v = zurek_closed_form(ZurekTag::Eq5_1_Tot, params(a, b, 2)).amplitudes();
  const double r3 = std::sqrt(3.0);
  EXPECT_EQ(v(0b000), 0.75 * a);
  EXPECT_EQ(v(0b100), I * r3 / 4.0 * a);
  EXPECT_EQ(v(0b001), -0.5 * a);
  EXPECT_EQ(v(0b010), I * r3 / 2.0 * b);
  EXPECT_EQ(v(0b110), -0.5 * b);
  EXPECT_EQ(v(0b011), 0.0);
}

TEST(ZurekClosedForm, GeneralFormReducesToSpecialCases) {
  const Complex a = 0.6, b = Complex(0.0, 0.8);
  const auto g2 = zurek_closed_form(ZurekTag::AppendixG2, params(a, b, 2, 2 * pi / 3, pi / 3));
  const auto e51 = zurek_closed_form(ZurekTag::Eq5_1_Tot, params(a, b, 2));
  EXPECT_LE((g2.amplitudes() - e51.amplitudes()).norm(), 1e-15);
  const auto g3 = zurek_closed_form(ZurekTag::AppendixG3, params(a, b, 2, 2 * pi / 3, pi / 3));
  const auto e51r = zurek_closed_form(ZurekTag::Eq5_1_Rev, params(a, b, 2));
  EXPECT_LE((g3.amplitudes() - e51r.amplitudes()).norm(), 1e-15);
  const auto g0 = zurek_closed_form(ZurekTag::AppendixG2, params(a, b, 2, 0.0, 0.0));
  const auto e35 = zurek_closed_form(ZurekTag::Eq3_5, params(a, b, 2));
  EXPECT_LE((g0.amplitudes() - e35.amplitudes()).norm(), 1e-15);
}

TEST(ZurekClosedForm, Errors) {
  EXPECT_EQ(code_of([] { parse_zurek_tag("eq_9_9"); }), ErrorCode::UnknownCase);
  EXPECT_EQ(parse_zurek_tag("appendix_G3"), ZurekTag::AppendixG3);
  EXPECT_EQ(code_of([] { zurek_closed_form(ZurekTag::Eq5_1_Tot, params(r2, r2, 3)); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { zurek_closed_form(ZurekTag::Eq3_5, params(0.6, 0.6, 3)); }), ErrorCode::BadAmplitudes);
}

TEST(ZurekCases, DephasingOrderIndependentAndDarwinian) {
  const int n = 8;
  const auto ref = pip(zurek_evolve(ZurekCase{zurek_gate(ZurekTag::Eq3_5), 1, n, {r2, r2}}).density(), 1.0);
  for (ZurekTag t : {ZurekTag::Eq5_2_Tot, ZurekTag::Eq5_2_Rev}) {
    const auto c = pip(zurek_evolve(ZurekCase{zurek_gate(t), 1, n, {r2, r2}}).density(), 1.0);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(c.points[i].MI, ref.points[i].MI, 1e-12);
      EXPECT_NEAR(c.points[i].H_SE, ref.points[i].H_SE, 1e-12);
    }
  }
}

TEST(ZurekCases, SymmetricWithDephasingHasNoEntropy) {
  for (int n : {2, 4, 6}) {
    const auto psi = zurek_closed_form(ZurekTag::Eq5_3, params(0.6, 0.8, n));
    for (const auto& pt : pip(psi.density(), 1.0).points) {
      EXPECT_NEAR(pt.H_S, 0.0, 1e-12);
      EXPECT_NEAR(pt.H_E, 0.0, 1e-12);
      EXPECT_NEAR(pt.H_SE, 0.0, 1e-12);
    }
  }
}

TEST(ZurekSpectrum, TotalAtEqualWeights) {
  const auto l = zurek_system_spectrum(ZurekTag::Eq5_1_Tot, r2, r2);
  EXPECT_NEAR(l[0], 0.5 + std::sqrt(14.25) / 8.0, 1e-15);
  EXPECT_NEAR(l[0], 0.9719, 1e-4);
}

TEST(ZurekSpectrum, ReversedAtGroundInput) {
  const auto l = zurek_system_spectrum(ZurekTag::Eq5_1_Rev, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(l[0], 10.0 / 16.0);
}

TEST(ZurekSpectrum, TraceCondition) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double th = pi * u(rng);
    const Complex a = std::cos(th), b = std::sin(th) * std::exp(I * (2 * pi * u(rng)));
    for (ZurekTag tag : {ZurekTag::Eq5_1_Tot, ZurekTag::Eq5_1_Rev}) {
      const auto l = zurek_system_spectrum(tag, a, b);
      EXPECT_NEAR(l[0] + l[1], 1.0, 1e-12);
    }
  }
  EXPECT_EQ(code_of([] { zurek_system_spectrum(ZurekTag::Eq3_5, r2, r2); }), ErrorCode::UnknownCase);
}

TEST(ZurekSpectrum, AgreesWithDiagonalization) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double th = pi * u(rng);
    const Complex a = std::cos(th), b = std::sin(th) * std::exp(I * (2 * pi * u(rng)));
    for (ZurekTag tag : {ZurekTag::Eq5_1_Tot, ZurekTag::Eq5_1_Rev}) {
      const auto psi = zurek_evolve(zurek_case(tag, params(a, b, 2)));
      RealVector formula(2);
      const auto l = zurek_system_spectrum(tag, a, b);
      formula << l[0], l[1];
      EXPECT_NEAR(entropy_of_spectrum(formula), system_entropy(psi), 1e-10) << tag_name(tag) << " t=" << t;
    }
  }
}
