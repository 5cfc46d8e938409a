#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qdarwin;

namespace {

const Complex I(0.0, 1.0);
const double r2 = 1.0 / std::numbers::sqrt2;

GateSpec sym(double a, OperatorOrder o = OperatorOrder::Total) { return {pi / 2, a, a, 0.0, o}; }
const GateSpec kAsym{pi / 2, 2 * pi / 3, pi / 3, 0.0, OperatorOrder::Total};
const GateSpec kCnot{pi / 2, 0.0, 0.0, 0.0, OperatorOrder::Total};
const GateSpec kDephase{pi / 2, 0.0, 0.0, pi, OperatorOrder::Total};

bool has(const std::vector<Complex>& v, Complex z) {
  for (auto x : v)
    if (std::abs(x - z) < 1e-9) return true;
  return false;
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

void expect_orthonormal(const std::vector<ComplexMatrix>& b) {
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      EXPECT_NEAR(std::abs(hs_inner(b[i], b[j]) - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
}

// residual measured with the dense embedding, not the library kernel
double attractor_residual_max(const AttractorSector& s, const Gate& g, const InteractionDigraph& d) {
  const int nq = d.layout().qubits();
  double worst = 0.0;
  for (const auto& x : s.basis)
    for (const auto& e : d.edges()) {
      const ComplexMatrix u = oracle::embed(nq, g, e.system, d.layout().env_qubit(e.environment));
      worst = std::max(worst, (u * x * u.adjoint() - s.lambda * x).norm());
    }
  return worst;
}

ComplexMatrix dense_ground_split(Eigen::Index D, double c0, double c1) {
  ComplexMatrix m = ComplexMatrix::Identity(D, D) * c1;
  m(0, 0) = c0;
  return m;
}

}  // namespace

TEST(CandidateEigenvalues, Examples) {
  const auto c = candidate_eigenvalues(kCnot);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_TRUE(has(c, 1.0));
  EXPECT_TRUE(has(c, -1.0));
  const auto d = candidate_eigenvalues(kDephase);
  EXPECT_EQ(d.size(), 4u);
  for (Complex z : {Complex(1.0), Complex(-1.0), I, -I}) EXPECT_TRUE(has(d, z));
  const auto id = candidate_eigenvalues(Gate::Identity());
  ASSERT_EQ(id.size(), 1u);
  EXPECT_TRUE(has(id, 1.0));
}

TEST(CandidateEigenvalues, AllPairProducts) {
  const Gate g = total_unitary(kAsym);
  const auto ev = gate_spectrum(g);
  const auto c = candidate_eigenvalues(g);
  for (auto a : ev)
    for (auto b : ev) EXPECT_TRUE(has(c, a * std::conj(b)));
  for (auto z : c) EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
}

TEST(SolveAttractors, SymmetricGroundPair) {
  const auto d = uniform_digraph({1, 2});
  const auto s = solve_attractors(sym(pi / 2), d, 1.0);
  ASSERT_EQ(s.dimension, 2);
  EXPECT_EQ(s.dimension, oracle::attractor_dimension(total_unitary(sym(pi / 2)), d, 1.0));
  const ComplexMatrix p0 = dense_ground_split(8, 1.0, 0.0);
  const ComplexMatrix rest = dense_ground_split(8, 0.0, 1.0 / std::sqrt(7.0));
  EXPECT_LE(subspace_distance(s.basis, {p0, rest}), 1e-8);
  // canonical seeding puts the ground projector first
  EXPECT_LE((s.basis[0] - p0).norm(), 1e-8);
  expect_orthonormal(s.basis);
}

TEST(SolveAttractors, SymmetricOtherSectorsEmpty) {
  for (int n : {2, 3}) {
    const auto d = uniform_digraph({1, n});
    for (double a : {pi / 6, pi / 3, pi / 2}) {
      const Gate g = total_unitary(sym(a));
      for (Complex l : candidate_eigenvalues(g)) {
        if (std::abs(l - 1.0) < 1e-9) continue;
        const auto s = solve_attractors(g, d, l);
        EXPECT_EQ(s.dimension, 0) << "n=" << n << " alpha=" << a << " lambda=" << l;
        if (n == 2) EXPECT_EQ(s.dimension, oracle::attractor_dimension(g, d, l));
      }
    }
  }
}

TEST(SolveAttractors, AsymmetricIdentityOnly) {
  const auto d = uniform_digraph({1, 2});
  const auto s = solve_attractors(kAsym, d, 1.0);
  ASSERT_EQ(s.dimension, 1);
  ComplexMatrix x = s.basis[0];
  x *= std::abs(x(0, 0)) / x(0, 0);  // fix the global phase
  EXPECT_LE((x - ComplexMatrix::Identity(8, 8) / std::sqrt(8.0)).norm(), 1e-8);
}

TEST(SolveAttractors, AgreesWithSvdOracle) {
  for (const GateSpec& g : {sym(pi / 3), kAsym, kCnot, kDephase, GateSpec{pi / 3, 0.7, 0.2, 1.0, OperatorOrder::Reversed}}) {
    for (int n : {1, 2}) {
      const auto d = uniform_digraph({1, n});
      const Gate u = total_unitary(g);
      for (Complex l : candidate_eigenvalues(u)) {
        const auto s = solve_attractors(u, d, l);
        EXPECT_EQ(s.dimension, oracle::attractor_dimension(u, d, l));
        EXPECT_EQ(s.rank + s.dimension, d.layout().dim() * d.layout().dim());
        EXPECT_LE(attractor_residual_max(s, u, d), 1e-8);
        expect_orthonormal(s.basis);
      }
    }
  }
}

TEST(SolveAttractors, DephasingMatchesPureDecoherence) {
  for (int n : {1, 2, 3}) {
    const auto d = uniform_digraph({1, n});
    const auto a = solve_attractor_space(kDephase, d);
    const auto b = solve_attractor_space(kCnot, d);
    EXPECT_EQ(a.dimension(I), 0);
    EXPECT_EQ(a.dimension(-I), 0);
    for (Complex l : {Complex(1.0), Complex(-1.0)}) {
      ASSERT_NE(a.find(l), nullptr);
      ASSERT_NE(b.find(l), nullptr);
      EXPECT_EQ(a.dimension(l), b.dimension(l));
      EXPECT_LE(subspace_distance(a.find(l)->basis, b.find(l)->basis), 1e-8);
    }
  }
}

TEST(SolveAttractors, OrderDoesNotChangeDimensions) {
  for (double a : {pi / 6, pi / 2}) {
    const auto d = uniform_digraph({1, 2});
    const auto t = solve_attractor_space(sym(a), d);
    const auto r = solve_attractor_space(sym(a, OperatorOrder::Reversed), d);
    EXPECT_EQ(t.total_dimension(), r.total_dimension());
    EXPECT_EQ(t.dimension(1.0), r.dimension(1.0));
  }
}

TEST(SolveAttractors, Errors) {
  const auto d = uniform_digraph({1, 2});
  EXPECT_EQ(code_of([&] { solve_attractors(kCnot, d, 0.5); }), ErrorCode::BadLambda);
  EXPECT_EQ(code_of([&] { solve_attractors(kCnot, uniform_digraph({1, 6}), 1.0); }), ErrorCode::TooLarge);
}

TEST(AsymptoticState, MaximallyMixedFixed) {
  const auto a = solve_attractor_space(sym(pi / 2), uniform_digraph({1, 2}));
  const auto mixed = DensityMatrix::from_matrix({1, 2}, ComplexMatrix::Identity(8, 8) / 8.0);
  EXPECT_LE(oracle::max_abs(asymptotic_limit(mixed, a).state.matrix() - mixed.matrix()), 1e-12);
  EXPECT_LE(oracle::max_abs(asymptotic_state(mixed, a, 17).matrix() - mixed.matrix()), 1e-12);
}

TEST(AsymptoticState, ExcitedEnvironment) {
  for (int n : {2, 3}) {
    const RegisterLayout l{1, n};
    const auto a = solve_attractor_space(sym(pi / 2), uniform_digraph(l));
    const auto rho = initial_state(InitialFamily::EnvExcited, l, InitialParams::ab(0.6, 0.8));
    const auto out = asymptotic_limit(rho, a);
    const double D = double(l.dim());
    EXPECT_LT(trace_distance(out.state, DensityMatrix::from_matrix(l, dense_ground_split(l.dim(), 0.0, 1.0 / (D - 1)))),
              1e-10);
    EXPECT_LT(out.oscillatory_norm, 1e-10);
  }
}

TEST(AsymptoticState, AsymmetricIsMaximallyMixed) {
  const RegisterLayout l{1, 2};
  const auto a = solve_attractor_space(kAsym, uniform_digraph(l));
  const auto rho = initial_state(InitialFamily::ZurekGround, l, InitialParams::ab(r2, r2));
  EXPECT_LT(oracle::max_abs(asymptotic_limit(rho, a).state.matrix() - ComplexMatrix::Identity(8, 8) / 8.0), 1e-10);
}

TEST(AsymptoticState, MatchesIteration) {
  struct Case {
    GateSpec g;
    InitialFamily f;
    int n;
  };
  const Case cases[] = {
      {sym(pi / 2), InitialFamily::ZurekGround, 2}, {sym(pi / 3), InitialFamily::GhzMixture, 3},
      {kAsym, InitialFamily::ZurekGround, 3},       {sym(pi / 2, OperatorOrder::Reversed), InitialFamily::EnvExcited, 4},
      {sym(pi / 2), InitialFamily::EntangledSx, 4},
  };
  for (const auto& c : cases) {
    const RegisterLayout l{1, c.n};
    const auto d = uniform_digraph(l);
    const auto rho = initial_state(c.f, l, InitialParams::ab(0.6, 0.8));
    Schedule s;
    s.max_iterations = 2000;
    s.epsilon = 1e-10;
    const auto it = iterate(rho, c.g, d, s);
    const auto lim = asymptotic_limit(rho, solve_attractor_space(c.g, d));
    EXPECT_LT(trace_distance(it.state, lim.state), 1e-6) << family_name(c.f) << " n=" << c.n;
  }
}

TEST(AsymptoticState, PeriodTwoSector) {
  // CNOT-only: lambda = -1 sector is non-empty, so lambda^N alternates
  const RegisterLayout l{1, 1};
  const auto a = solve_attractor_space(kCnot, uniform_digraph(l));
  ASSERT_GT(a.dimension(-1.0), 0);
  const auto rho = initial_state(InitialFamily::ZurekGround, l, InitialParams::ab(0.6, 0.8));
  // single edge: the map is exactly U . U^H, so even/odd N agree with direct conjugation
  const Gate g = total_unitary(kCnot);
  auto direct = rho;
  for (int N = 1; N <= 4; ++N) {
    direct = apply_two_qubit(direct, g, 0, 1);
    EXPECT_LE(oracle::max_abs(asymptotic_state(rho, a, N).matrix() - direct.matrix()), 1e-10) << N;
  }
}

TEST(AsymptoticState, NotSolved) {
  const auto rho = initial_state(InitialFamily::ZurekGround, {1, 2}, InitialParams::ab(r2, r2));
  EXPECT_EQ(code_of([&] { asymptotic_limit(rho, AttractorSpace{}); }), ErrorCode::NotSolved);
  const auto other = solve_attractor_space(kCnot, uniform_digraph({1, 1}));
  EXPECT_EQ(code_of([&] { asymptotic_state(rho, other, 3); }), ErrorCode::NotSolved);
}

TEST(ClosedFormAttractor, Families) {
  const auto s = closed_form_attractor(AttractorFamily::SymmetricDiss, 1, 1);
  ASSERT_EQ(s.sectors.size(), 1u);
  ASSERT_EQ(s.sectors[0].basis.size(), 2u);
  EXPECT_EQ(s.sectors[0].basis[0].rows(), 4);
  expect_orthonormal(s.sectors[0].basis);
  const auto a = closed_form_attractor(AttractorFamily::AsymmetricDiss, 2, 3);
  ASSERT_EQ(a.sectors[0].basis.size(), 1u);
  EXPECT_LE((a.sectors[0].basis[0] - ComplexMatrix::Identity(32, 32) * std::pow(2.0, -2.5)).norm(), 1e-15);
  const auto z = closed_form_attractor(AttractorFamily::DephasingZero, 1, 2);
  EXPECT_EQ(z.dimension(I), 0);
  EXPECT_EQ(z.dimension(-I), 0);
  EXPECT_EQ(z.total_dimension(), 0);
  EXPECT_EQ(code_of([] { parse_attractor_family("thermal"); }), ErrorCode::UnknownFamily);
}

TEST(ClosedFormAttractor, SymmetricMatchesSolverForNAtLeastTwo) {
  for (int n : {2, 3}) {
    const auto cf = closed_form_attractor(AttractorFamily::SymmetricDiss, 1, n);
    const auto s = solve_attractors(sym(pi / 3), uniform_digraph({1, n}), 1.0);
    EXPECT_LE(subspace_distance(cf.sectors[0].basis, s.basis), 1e-8);
  }
}

TEST(ClosedFormStationary, GroundSplitN2) {
  StationaryParams p;
  p.n = 2;
  const auto s = closed_form_stationary(StationaryFamily::Eq4_1_1, p);
  ComplexMatrix want = ComplexMatrix::Identity(8, 8) / 14.0;
  want(0, 0) += 3.0 / 7.0;
  EXPECT_LE(oracle::max_abs(s.state.matrix() - want), 1e-15);
}

TEST(ClosedFormStationary, KQubit) {
  StationaryParams p;
  p.k = 2;
  p.n = 2;
  p.p0 = 0.25;
  const auto s = closed_form_stationary(StationaryFamily::Eq4_1_6, p);
  ComplexMatrix want = ComplexMatrix::Identity(16, 16) * (0.75 / 15.0);
  want(0, 0) = 0.25;
  EXPECT_LE(oracle::max_abs(s.state.matrix() - want), 1e-15);
}

TEST(ClosedFormStationary, MaximallyMixed) {
  StationaryParams p;
  p.n = 3;
  const auto s = closed_form_stationary(StationaryFamily::Eq5_5, p);
  EXPECT_LE(oracle::max_abs(s.state.matrix() - ComplexMatrix::Identity(16, 16) / 16.0), 1e-15);
}

TEST(ClosedFormStationary, FamiliesAreStatesAndMatchLimits) {
  for (int n : {2, 3, 4}) {
    const RegisterLayout l{1, n};
    const auto a = solve_attractor_space(sym(pi / 2), uniform_digraph(l));
    StationaryParams p;
    p.n = n;
    p.a_sq = 0.36;
    const auto ip = InitialParams::ab(0.6, 0.8);
    const std::pair<StationaryFamily, InitialFamily> pairs[] = {
        {StationaryFamily::Eq4_1_1, InitialFamily::ZurekGround},
        {StationaryFamily::Eq4_1_3, InitialFamily::EnvExcited},
        {StationaryFamily::Eq4_1_5_Out1, InitialFamily::GhzMixture},
        {StationaryFamily::Eq4_1_5_Out2, InitialFamily::EnvMaximallyMixed},
    };
    for (const auto& [sf, inf] : pairs) {
      const auto cf = closed_form_stationary(sf, p);
      EXPECT_TRUE(cf.state.check().ok());
      EXPECT_LT(trace_distance(cf.state, asymptotic_limit(initial_state(inf, l, ip), a).state), 1e-10)
          << family_name(inf) << " n=" << n;
    }
  }
}

TEST(ClosedFormStationary, Errors) {
  StationaryParams p;
  p.a_sq = 1.2;
  EXPECT_EQ(code_of([&] { closed_form_stationary(StationaryFamily::Eq4_1_1, p); }), ErrorCode::BadParams);
  StationaryParams q;
  q.k = 2;
  EXPECT_EQ(code_of([&] { closed_form_stationary(StationaryFamily::Eq4_1_1, q); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { parse_stationary_family("eq_9"); }), ErrorCode::UnknownFamily);
}
