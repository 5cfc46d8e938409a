#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdarwin/channel.hpp"

namespace qdarwin {

inline constexpr int kMaxAttractorQubits = 6;
inline constexpr double kLambdaTol = 1e-9;

inline std::vector<Complex> candidate_eigenvalues(const Gate& g) {
  const auto spec = gate_spectrum(g);
  std::vector<Complex> out;
  for (Complex a : spec)
    for (Complex b : spec) {
      const Complex l = a * std::conj(b);
      bool seen = false;
      for (Complex o : out) seen = seen || std::abs(o - l) <= kLambdaTol;
      if (!seen) out.push_back(l);
    }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return phase(a) < phase(b); });
  return out;
}

inline std::vector<Complex> candidate_eigenvalues(const GateSpec& s) { return candidate_eigenvalues(total_unitary(s)); }

struct AttractorSector {
  Complex lambda{1.0, 0.0};
  int dimension = 0;
  Eigen::Index rank = 0;  // rank of the stacked constraint matrix
  std::vector<ComplexMatrix> basis;
};

struct AttractorSpace {
  RegisterLayout layout{};
  std::vector<AttractorSector> sectors;

  const AttractorSector* find(Complex lambda, double tol = kLambdaTol) const {
    for (const auto& s : sectors)
      if (std::abs(s.lambda - lambda) <= tol) return &s;
    return nullptr;
  }
  int dimension(Complex lambda) const {
    const auto* s = find(lambda);
    return s ? s->dimension : 0;
  }
  int total_dimension() const {
    int t = 0;
    for (const auto& s : sectors) t += s.dimension;
    return t;
  }
};

// dense U_e on the full register
inline ComplexMatrix embed_gate(const RegisterLayout& l, const Gate& g, int i, int j) {
  auto p = detail::pair_index(l, i, j);
  ComplexMatrix u = ComplexMatrix::Identity(l.dim(), l.dim());
  for (Eigen::Index c = 0; c < l.dim(); ++c) {
    ComplexVector col = u.col(c);
    detail::apply_in_place(col, g, p);
    u.col(c) = col;
  }
  return u;
}

inline double attractor_residual(const ComplexMatrix& x, const Gate& g, const InteractionDigraph& d, Complex lambda) {
  double worst = 0.0;
  for (const Edge& e : d.edges()) {
    auto p = detail::pair_index(d.layout(), e.system, d.layout().env_qubit(e.environment));
    ComplexMatrix y = x;
    detail::conjugate_in_place(y, g, p);
    worst = std::max(worst, (y - lambda * x).norm());
  }
  return worst;
}

namespace detail {

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

inline ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

}  // namespace detail

// Column-major vec: vec(U X U^H) = (conj(U) (x) U) vec(X). One D^2 x D^2 block per edge;
// blocks are folded into a running triangular factor so memory stays at two blocks.
inline AttractorSector solve_attractors(const Gate& g, const InteractionDigraph& d, Complex lambda,
                                        double tol = kRankTol) {
  if (std::abs(std::abs(lambda) - 1.0) > kLambdaTol)
    throw Error(ErrorCode::BadLambda, "|lambda| must be 1");
  const RegisterLayout& l = d.layout();
  if (l.qubits() > kMaxAttractorQubits)
    throw Error(ErrorCode::TooLarge, "k+n=" + std::to_string(l.qubits()) + " exceeds " +
                                         std::to_string(kMaxAttractorQubits));
  require_unitary(g);
  const Eigen::Index D = l.dim(), D2 = D * D;

  ComplexMatrix r;
  for (const Edge& e : d.edges()) {
    const ComplexMatrix u = embed_gate(l, g, e.system, l.env_qubit(e.environment));
    ComplexMatrix block = kron(u.conjugate(), u);
    block.diagonal().array() -= lambda;
    if (r.size() == 0) {
      r = std::move(block);
    } else {
      ComplexMatrix stacked(r.rows() + D2, D2);
      stacked << r, block;
      Eigen::HouseholderQR<ComplexMatrix> hq(stacked);
      r = hq.matrixQR().topRows(D2).triangularView<Eigen::Upper>();
    }
  }
  const NullspaceResult ns = nullspace(r, tol);

  AttractorSector out;
  out.lambda = lambda;
  out.rank = ns.rank;
  out.dimension = int(ns.basis.cols());
  if (out.dimension == 0) return out;

  // canonical seeds first so the textbook bases come out verbatim when they lie in the span
  std::vector<ComplexMatrix> seeds;
  ComplexMatrix p0 = ComplexMatrix::Zero(D, D);
  p0(0, 0) = 1.0;
  for (const ComplexMatrix& s : {p0, ComplexMatrix(ComplexMatrix::Identity(D, D))}) {
    const ComplexVector v = detail::vec(s);
    const ComplexVector proj = ns.basis * (ns.basis.adjoint() * v);
    if ((v - proj).norm() <= 1e-8 * v.norm()) seeds.push_back(s);
  }
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) seeds.push_back(detail::unvec(ns.basis.col(c), D));
  auto ortho = gram_schmidt_hs(seeds, 1e-6);
  ortho.resize(std::min<std::size_t>(ortho.size(), out.dimension));
  out.basis = std::move(ortho);
  return out;
}

inline AttractorSector solve_attractors(const GateSpec& s, const InteractionDigraph& d, Complex lambda,
                                        double tol = kRankTol) {
  return solve_attractors(total_unitary(s), d, lambda, tol);
}

inline AttractorSpace solve_attractor_space(const Gate& g, const InteractionDigraph& d, double tol = kRankTol) {
  AttractorSpace a;
  a.layout = d.layout();
  for (Complex l : candidate_eigenvalues(g)) a.sectors.push_back(solve_attractors(g, d, l, tol));
  return a;
}

inline AttractorSpace solve_attractor_space(const GateSpec& s, const InteractionDigraph& d, double tol = kRankTol) {
  return solve_attractor_space(total_unitary(s), d, tol);
}

// largest HS distance from an element of one span to the other span (1 when dimensions differ)
inline double subspace_distance(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) return 1.0;
  auto one_way = [](const std::vector<ComplexMatrix>& x, const std::vector<ComplexMatrix>& y) {
    double worst = 0.0;
    for (const auto& v : x) {
      ComplexMatrix r = v;
      for (const auto& q : y) r -= hs_inner(q, v) * q;
      worst = std::max(worst, r.norm());
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

struct AsymptoticResult {
  DensityMatrix state;         // lambda = 1 part
  ComplexMatrix oscillatory;   // lambda != 1 part at N = 0
  double oscillatory_norm = 0.0;
};

namespace detail {
inline void require_solved(const DensityMatrix& rho, const AttractorSpace& a) {
  if (a.sectors.empty() || !(a.layout == rho.layout()))
    throw Error(ErrorCode::NotSolved, "attractor space does not match the state layout");
}
}  // namespace detail

// sum over sectors of lambda^N Tr(rho X^H) X
inline DensityMatrix asymptotic_state(const DensityMatrix& rho, const AttractorSpace& a, long n_steps) {
  detail::require_solved(rho, a);
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& s : a.sectors) {
    const Complex ln = std::pow(s.lambda / std::abs(s.lambda), double(n_steps));
    for (const auto& x : s.basis) out += ln * hs_inner(x, rho.matrix()) * x;
  }
  return DensityMatrix::unchecked(rho.layout(), std::move(out));
}

inline AsymptoticResult asymptotic_limit(const DensityMatrix& rho, const AttractorSpace& a) {
  detail::require_solved(rho, a);
  ComplexMatrix fixed = ComplexMatrix::Zero(rho.dim(), rho.dim());
  ComplexMatrix osc = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& s : a.sectors) {
    const bool one = std::abs(s.lambda - Complex(1.0, 0.0)) <= kLambdaTol;
    for (const auto& x : s.basis) (one ? fixed : osc) += hs_inner(x, rho.matrix()) * x;
  }
  AsymptoticResult r;
  r.state = DensityMatrix::unchecked(rho.layout(), std::move(fixed));
  r.oscillatory_norm = osc.norm();
  r.oscillatory = std::move(osc);
  return r;
}

enum class AttractorFamily { SymmetricDiss, AsymmetricDiss, DephasingZero };

inline AttractorFamily parse_attractor_family(std::string_view s) {
  if (s == "symmetric_diss") return AttractorFamily::SymmetricDiss;
  if (s == "asymmetric_diss") return AttractorFamily::AsymmetricDiss;
  if (s == "dephasing_zero") return AttractorFamily::DephasingZero;
  throw Error(ErrorCode::UnknownFamily, std::string(s));
}

inline ComplexMatrix ground_projector(Eigen::Index d) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(0, 0) = 1.0;
  return p;
}

inline AttractorSpace closed_form_attractor(AttractorFamily f, int k, int n) {
  AttractorSpace a;
  a.layout = system_environment(k, n);
  const Eigen::Index D = a.layout.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(D, D);
  switch (f) {
    case AttractorFamily::SymmetricDiss: {
      const ComplexMatrix p0 = ground_projector(D);
      a.sectors.push_back({Complex(1.0, 0.0), 2, 0, {p0, (id - p0) / std::sqrt(double(D - 1))}});
      break;
    }
    case AttractorFamily::AsymmetricDiss:
      a.sectors.push_back({Complex(1.0, 0.0), 1, 0, {id / std::sqrt(double(D))}});
      break;
    case AttractorFamily::DephasingZero:
      a.sectors.push_back({Complex(0.0, 1.0), 0, 0, {}});
      a.sectors.push_back({Complex(0.0, -1.0), 0, 0, {}});
      break;
  }
  return a;
}

enum class StationaryFamily { Eq4_1_1, Eq4_1_3, Eq4_1_5_Out1, Eq4_1_5_Out2, Eq4_1_6, Eq5_5 };

inline StationaryFamily parse_stationary_family(std::string_view s) {
  if (s == "eq_4_1_1") return StationaryFamily::Eq4_1_1;
  if (s == "eq_4_1_3") return StationaryFamily::Eq4_1_3;
  if (s == "eq_4_1_5_out1") return StationaryFamily::Eq4_1_5_Out1;
  if (s == "eq_4_1_5_out2") return StationaryFamily::Eq4_1_5_Out2;
  if (s == "eq_4_1_6") return StationaryFamily::Eq4_1_6;
  if (s == "eq_5_5") return StationaryFamily::Eq5_5;
  throw Error(ErrorCode::UnknownFamily, std::string(s));
}

struct StationaryParams {
  int k = 1;
  int n = 1;
  double a_sq = 0.5;                // |a|^2 of the system input
  std::optional<double> p0;         // <0_k|rho_S|0_k>, defaults to 2^-k
};

struct StationaryState {
  StationaryFamily family{};
  StationaryParams params;
  DensityMatrix state;
};

// c0 |0><0| + c1 (I - |0><0|)
inline ComplexMatrix ground_split(Eigen::Index D, double c0, double c1) {
  ComplexMatrix m = ComplexMatrix::Zero(D, D);
  m.diagonal().setConstant(c1);
  m(0, 0) = c0;
  return m;
}

inline StationaryState closed_form_stationary(StationaryFamily f, const StationaryParams& p) {
  if (!(p.a_sq >= 0.0 && p.a_sq <= 1.0)) throw Error(ErrorCode::BadParams, "|a|^2 outside [0,1]");
  const RegisterLayout l = system_environment(p.k, p.n);
  const bool needs_k1 = f == StationaryFamily::Eq4_1_1 || f == StationaryFamily::Eq4_1_3 ||
                        f == StationaryFamily::Eq4_1_5_Out1 || f == StationaryFamily::Eq4_1_5_Out2;
  if (needs_k1 && p.k != 1) throw Error(ErrorCode::BadParams, "family is defined for k=1");
  const Eigen::Index D = l.dim();
  const double rest = double(D - 1);
  const double a2 = p.a_sq, b2 = 1.0 - p.a_sq;
  ComplexMatrix m;
  switch (f) {
    case StationaryFamily::Eq4_1_1:
      // |b|^2/(D-1) I + (|a|^2 - |b|^2/(D-1)) P0
      m = ground_split(D, a2, b2 / rest);
      break;
    case StationaryFamily::Eq4_1_3:
      m = ground_split(D, 0.0, 1.0 / rest);
      break;
    case StationaryFamily::Eq4_1_5_Out1:
      // normalized; the raw prefactors only sum to trace 1/2
      m = ground_split(D, 0.5 * a2, (1.0 - 0.5 * a2) / rest);
      break;
    case StationaryFamily::Eq4_1_5_Out2: {
      const double w = std::pow(2.0, -p.n) * a2;
      m = ground_split(D, w, (1.0 - w) / rest);
      break;
    }
    case StationaryFamily::Eq4_1_6: {
      const double p0 = p.p0.value_or(std::pow(2.0, -p.k));
      if (!(p0 >= 0.0 && p0 <= 1.0)) throw Error(ErrorCode::BadParams, "p0 outside [0,1]");
      m = ground_split(D, p0, (1.0 - p0) / rest);
      break;
    }
    case StationaryFamily::Eq5_5:
      m = ground_split(D, 1.0 / double(D), 1.0 / double(D));
      break;
  }
  return StationaryState{f, p, DensityMatrix::from_matrix(l, std::move(m))};
}

}  // namespace qdarwin
