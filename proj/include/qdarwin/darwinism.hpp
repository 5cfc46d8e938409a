#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdarwin/registers.hpp"

namespace qdarwin {

inline constexpr double kClampTol = 1e-8;

// bits; eigenvalues in [-1e-8, 0) count as zero
inline double entropy_of_spectrum(const RealVector& w) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double x = w(i);
    if (x < -kClampTol) throw Error(ErrorCode::NotAState, "eigenvalue " + std::to_string(x));
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x < -kClampTol) throw Error(ErrorCode::NotAState, "negative probability");
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

inline RealVector state_spectrum(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  if (hermitian_defect(m) > kHermitianTol) throw Error(ErrorCode::NotAState, "not Hermitian");
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > 1e-10) throw Error(ErrorCode::NotAState, "trace != 1");
  return hermitian_eigenvalues(m);
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of_spectrum(state_spectrum(rho)); }

// total weight removed by clamping
inline double clamped_weight(const DensityMatrix& rho) {
  double w = 0.0;
  const RealVector e = state_spectrum(rho);
  for (Eigen::Index i = 0; i < e.size(); ++i)
    if (e(i) < 0.0) w += -e(i);
  return w;
}

// pointer basis given as the columns of a unitary on S
inline std::vector<double> pointer_probabilities(const DensityMatrix& rho_s, const ComplexMatrix& basis) {
  const Eigen::Index d = rho_s.dim();
  if (basis.rows() != d || basis.cols() != d) throw Error(ErrorCode::BadBasis, "basis must span the system space");
  if ((basis.adjoint() * basis - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(ErrorCode::BadBasis, "basis is not orthonormal");
  std::vector<double> p(d);
  for (Eigen::Index i = 0; i < d; ++i) p[i] = (basis.col(i).adjoint() * rho_s.matrix() * basis.col(i))(0, 0).real();
  return p;
}

inline double classical_entropy(const DensityMatrix& rho_s, const ComplexMatrix& basis) {
  return shannon_entropy(pointer_probabilities(rho_s, basis));
}

inline double classical_entropy(const DensityMatrix& rho_s) {
  return classical_entropy(rho_s, ComplexMatrix::Identity(rho_s.dim(), rho_s.dim()));
}

// H_class of the system part of a full S-E state, computational pointer basis
inline double system_classical_entropy(const DensityMatrix& rho_se) {
  std::vector<int> sys(rho_se.layout().k);
  std::iota(sys.begin(), sys.end(), 0);
  return classical_entropy(reduce_to(rho_se, sys));
}

// Environment qubits (0-based within E) listed in the order they are traced out.
struct TraceOrdering {
  std::vector<int> order;
  std::string label;

  // environment qubits that survive when only L remain
  std::vector<int> kept(int L) const {
    return std::vector<int>(order.end() - L, order.end());
  }
};

inline TraceOrdering right_to_left(int n) {
  TraceOrdering t;
  for (int j = n - 1; j >= 0; --j) t.order.push_back(j);
  t.label = "right-to-left";
  return t;
}

inline std::vector<TraceOrdering> random_orderings(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TraceOrdering> out;
  for (int c = 0; c < count; ++c) {
    TraceOrdering t = right_to_left(n);
    std::shuffle(t.order.begin(), t.order.end(), rng);
    t.label = "random:" + std::to_string(seed) + ":" + std::to_string(c);
    out.push_back(std::move(t));
  }
  return out;
}

inline void check_ordering(const TraceOrdering& t, int n) {
  if (int(t.order.size()) != n) throw Error(ErrorCode::IndexOutOfRange, "ordering must list every environment qubit");
  std::vector<bool> seen(n, false);
  for (int j : t.order) {
    if (j < 0 || j >= n) throw Error(ErrorCode::IndexOutOfRange, "environment qubit " + std::to_string(j));
    if (seen[j]) throw Error(ErrorCode::DuplicateIndex, "environment qubit " + std::to_string(j));
    seen[j] = true;
  }
}

struct EntropyReport {
  double f = 0.0;
  int L = 0;
  double H_S = 0.0;
  double H_E = 0.0;
  double H_SE = 0.0;
  double H_class = 0.0;
  double MI = 0.0;

  double ratio() const { return H_class > 0.0 ? MI / H_class : 0.0; }
};

namespace detail {

inline double system_entropy(const DensityMatrix& rho) {
  std::vector<int> sys(rho.layout().k);
  std::iota(sys.begin(), sys.end(), 0);
  return von_neumann_entropy(reduce_to(rho, sys));
}

inline EntropyReport report_with(const DensityMatrix& rho, int L, const TraceOrdering& t, double h_class, double h_s) {
  const RegisterLayout& l = rho.layout();
  if (L < 1 || L > l.n) throw Error(ErrorCode::IndexOutOfRange, "L=" + std::to_string(L));
  check_ordering(t, l.n);
  std::vector<int> env;
  for (int j : t.kept(L)) env.push_back(l.env_qubit(j));
  std::sort(env.begin(), env.end());
  std::vector<int> se(l.k);
  std::iota(se.begin(), se.end(), 0);
  se.insert(se.end(), env.begin(), env.end());
  EntropyReport r;
  r.L = L;
  r.f = double(L) / double(l.n);
  r.H_S = h_s;
  r.H_E = von_neumann_entropy(reduce_to(rho, env));
  r.H_SE = L == l.n ? von_neumann_entropy(rho) : von_neumann_entropy(reduce_to(rho, se));
  r.H_class = h_class;
  r.MI = r.H_S + r.H_E - r.H_SE;
  return r;
}

}  // namespace detail

inline EntropyReport mutual_information(const DensityMatrix& rho_se, int L, const TraceOrdering& t, double h_class) {
  if (rho_se.layout().k < 1 || rho_se.layout().n < 1) throw Error(ErrorCode::BadParams, "need an S-E state");
  return detail::report_with(rho_se, L, t, h_class, detail::system_entropy(rho_se));
}

inline EntropyReport mutual_information(const DensityMatrix& rho_se, int L, const TraceOrdering& t) {
  return mutual_information(rho_se, L, t, system_classical_entropy(rho_se));
}

struct PipCurve {
  int k = 0;
  int n = 0;
  std::string ordering;
  std::vector<EntropyReport> points;  // L = 1..n

  double terminal_ratio() const { return points.empty() ? 0.0 : points.back().ratio(); }
};

inline PipCurve pip(const DensityMatrix& rho_se, double h_class, const TraceOrdering& t) {
  const RegisterLayout& l = rho_se.layout();
  if (l.k < 1 || l.n < 1) throw Error(ErrorCode::BadParams, "need an S-E state");
  check_ordering(t, l.n);
  PipCurve c;
  c.k = l.k;
  c.n = l.n;
  c.ordering = t.label;
  const double hs = detail::system_entropy(rho_se);
  for (int L = 1; L <= l.n; ++L) c.points.push_back(detail::report_with(rho_se, L, t, h_class, hs));
  return c;
}

inline PipCurve pip(const DensityMatrix& rho_se, double h_class) { return pip(rho_se, h_class, right_to_left(rho_se.layout().n)); }

struct PipEnsemble {
  std::vector<PipCurve> curves;
  std::vector<double> spread;  // per L: max minus min of MI/H_class over orderings
  double max_spread() const { return spread.empty() ? 0.0 : *std::max_element(spread.begin(), spread.end()); }
};

inline PipEnsemble pip(const DensityMatrix& rho_se, double h_class, const std::vector<TraceOrdering>& ts) {
  if (ts.empty()) throw Error(ErrorCode::BadParams, "no orderings");
  PipEnsemble e;
  for (const auto& t : ts) e.curves.push_back(pip(rho_se, h_class, t));
  const int n = rho_se.layout().n;
  for (int i = 0; i < n; ++i) {
    double lo = e.curves[0].points[i].ratio(), hi = lo;
    for (const auto& c : e.curves) {
      lo = std::min(lo, c.points[i].ratio());
      hi = std::max(hi, c.points[i].ratio());
    }
    e.spread.push_back(hi - lo);
  }
  return e;
}

struct RedundancyResult {
  std::optional<double> f_star;
  std::optional<double> R;
  double delta = 0.0;
};

inline RedundancyResult redundancy(const PipCurve& c, double tol = 0.01) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParams, "plateau tolerance must be positive");
  RedundancyResult r;
  for (const auto& p : c.points) {
    if (p.H_class <= 0.0) break;
    if (p.MI >= (1.0 - tol) * p.H_class) {
      r.f_star = p.f;
      r.R = 1.0 / p.f;
      break;
    }
  }
  return r;
}

struct DarwinismVerdict {
  bool holds = false;
  bool entropy_matches = false;  // H(S) close to H_class
  std::vector<int> violating_L;
};

inline DarwinismVerdict darwinism_criterion(const PipCurve& c, int k, double tol = 0.01) {
  DarwinismVerdict v;
  if (c.points.empty()) return v;
  const double hc = c.points.front().H_class;
  v.entropy_matches = std::abs(c.points.front().H_S - hc) <= tol * std::max(hc, 1e-300);
  for (const auto& p : c.points)
    if (p.L >= k && p.L <= c.n - 1 && !(p.MI >= (1.0 - tol) * hc)) v.violating_L.push_back(p.L);
  v.holds = hc > 0.0 && v.entropy_matches && v.violating_L.empty();
  return v;
}

}  // namespace qdarwin
