#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdarwin/error.hpp"

namespace qdarwin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kRankTol = 1e-9;
inline constexpr double kHermitianTol = 1e-10;

struct HermitianEigenResult {
  RealVector eigenvalues;  // ascending
  ComplexMatrix eigenvectors;
};

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, std::string(what) + ": " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, what);
}

inline double hermitian_defect(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r <= c; ++r)
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return worst;
}

inline bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
  return true;
}

inline void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  require_square(m, "hermitian input");
  require_finite(m, "hermitian input");
  if (m.size() == 0) throw Error(ErrorCode::EmptyMatrix, "hermitian input");
  double d = hermitian_defect(m);
  if (d > tol) throw Error(ErrorCode::NotHermitian, "asymmetry " + std::to_string(d));
}

inline HermitianEigenResult hermitian_eigs(const ComplexMatrix& m, double tol = kHermitianTol) {
  require_hermitian(m, tol);
  const Eigen::Index d = m.rows();
  HermitianEigenResult out;
  if (is_diagonal(m)) {
    std::vector<Eigen::Index> idx(d);
    for (Eigen::Index i = 0; i < d; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](auto a, auto b) { return m(a, a).real() < m(b, b).real(); });
    out.eigenvalues.resize(d);
    out.eigenvectors = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      out.eigenvalues(i) = m(idx[i], idx[i]).real();
      out.eigenvectors(idx[i], i) = 1.0;
    }
    return out;
  }
  // solver reads the lower triangle only; symmetrize so both halves count
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  return out;
}

// eigenvalues only, ascending
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m, double tol = kHermitianTol) {
  require_hermitian(m, tol);
  if (is_diagonal(m)) {
    RealVector w = m.diagonal().real();
    std::sort(w.data(), w.data() + w.size());
    return w;
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Eigen::Index rank_from_diagonal(const ComplexMatrix& qr, Eigen::Index n, double tol) {
  double biggest = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) biggest = std::max(biggest, std::abs(qr(i, i)));
  if (biggest == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(qr(i, i)) > tol * biggest) ++r;
  return r;
}

inline Eigen::Index rank_via_qr(const ComplexMatrix& m, double tol = kRankTol) {
  if (m.size() == 0) throw Error(ErrorCode::EmptyMatrix, "rank_via_qr");
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParams, "rank tolerance must be positive");
  require_finite(m, "rank_via_qr");
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
  return rank_from_diagonal(qr.matrixQR(), std::min(m.rows(), m.cols()), tol);
}

struct NullspaceResult {
  Eigen::Index rank = 0;
  ComplexMatrix basis;  // orthonormal columns
};

// Tall inputs are first compressed to their triangular factor (same nullspace).
// The pivoted QR of the adjoint then splits C^cols into range(m^H) and null(m).
inline NullspaceResult nullspace(const ComplexMatrix& m, double tol = kRankTol) {
  if (m.size() == 0) throw Error(ErrorCode::EmptyMatrix, "nullspace");
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParams, "rank tolerance must be positive");
  require_finite(m, "nullspace");
  const Eigen::Index cols = m.cols();
  ComplexMatrix a;
  if (m.rows() > cols) {
    Eigen::HouseholderQR<ComplexMatrix> hq(m);
    a = hq.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  } else {
    a = m;
  }
  ComplexMatrix ah = a.adjoint();
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(ah);
  NullspaceResult out;
  out.rank = rank_from_diagonal(qr.matrixQR(), std::min(ah.rows(), ah.cols()), tol);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(cols, cols);
  out.basis = q.rightCols(cols - out.rank);
  return out;
}

// <X,Y> = Tr(X^H Y)
inline Complex hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline double hs_norm(const ComplexMatrix& x) { return x.norm(); }

inline std::vector<ComplexMatrix> gram_schmidt_hs(const std::vector<ComplexMatrix>& basis,
                                                  double tol = 1e-10) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParams, "tolerance must be positive");
  std::vector<ComplexMatrix> out;
  if (basis.empty()) return out;
  const auto rows = basis.front().rows(), cols = basis.front().cols();
  for (const auto& b : basis) {
    if (b.rows() != rows || b.cols() != cols) throw Error(ErrorCode::ShapeMismatch, "gram_schmidt_hs");
    require_finite(b, "gram_schmidt_hs");
    const double n0 = hs_norm(b);
    if (n0 == 0.0) continue;
    ComplexMatrix v = b;
    // two passes of modified GS keep orthogonality near machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) v -= hs_inner(q, v) * q;
    const double nv = hs_norm(v);
    if (nv <= tol * n0) continue;
    out.push_back(v / nv);
  }
  return out;
}

}  // namespace qdarwin
