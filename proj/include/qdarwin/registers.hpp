#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qdarwin/numerics.hpp"

namespace qdarwin {

inline constexpr int kMaxQubits = 12;

// System qubits take the most significant bits. Global qubit q lives at bit (k+n-1-q).
// Reduced layouts (after a partial trace) may have k == 0 or n == 0.
struct RegisterLayout {
  int k = 1;
  int n = 1;

  int qubits() const { return k + n; }
  Eigen::Index dim() const { return Eigen::Index(1) << qubits(); }
  int env_qubit(int j) const { return k + j; }
  bool operator==(const RegisterLayout&) const = default;

  std::string str() const { return "(k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")"; }
};

inline RegisterLayout make_layout(int k, int n, int max_qubits = kMaxQubits) {
  if (k < 0 || n < 0 || k + n < 1)
    throw Error(ErrorCode::BadParams, "register needs at least one qubit");
  if (k + n > max_qubits)
    throw Error(ErrorCode::SizeOverflow, "k+n=" + std::to_string(k + n) + " exceeds " +
                                             std::to_string(max_qubits));
  return RegisterLayout{k, n};
}

// full S-E register: both parts non-empty
inline RegisterLayout system_environment(int k, int n, int max_qubits = kMaxQubits) {
  if (k < 1 || n < 1) throw Error(ErrorCode::BadParams, "k and n must be >= 1");
  return make_layout(k, n, max_qubits);
}

inline void check_matrix_shape(const RegisterLayout& l, const ComplexMatrix& m) {
  if (m.rows() != l.dim() || m.cols() != l.dim())
    throw Error(ErrorCode::ShapeMismatch, "matrix does not fit layout " + l.str());
}

struct StateCheck {
  double hermitian_defect = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_tol = 1e-8) const {
    return hermitian_defect <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -psd_tol;
  }
};

inline StateCheck check_state(const ComplexMatrix& m) {
  StateCheck c;
  c.hermitian_defect = hermitian_defect(m);
  c.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  if (c.hermitian_defect <= 1e-8) c.min_eigenvalue = hermitian_eigenvalues(m, 1e-8)(0);
  else c.min_eigenvalue = -1.0;
  return c;
}

class DensityMatrix {
 public:
  DensityMatrix() = default;

  // validated construction
  static DensityMatrix from_matrix(const RegisterLayout& layout, ComplexMatrix m) {
    check_matrix_shape(layout, m);
    require_finite(m, "density matrix");
    StateCheck c = check_state(m);
    if (!c.ok())
      throw Error(ErrorCode::NotAState,
                  "hermitian defect " + std::to_string(c.hermitian_defect) + ", trace error " +
                      std::to_string(c.trace_error) + ", min eigenvalue " +
                      std::to_string(c.min_eigenvalue));
    return DensityMatrix(layout, std::move(m));
  }

  // for kernels that preserve the invariants by construction
  static DensityMatrix unchecked(const RegisterLayout& layout, ComplexMatrix m) {
    check_matrix_shape(layout, m);
    return DensityMatrix(layout, std::move(m));
  }

  const RegisterLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  Complex trace() const { return data_.trace(); }
  double purity() const { return (data_ * data_).trace().real(); }
  StateCheck check() const { return check_state(data_); }

 private:
  DensityMatrix(const RegisterLayout& l, ComplexMatrix m) : layout_(l), data_(std::move(m)) {}
  RegisterLayout layout_{};
  ComplexMatrix data_;
};

class PureState {
 public:
  PureState() = default;
  PureState(const RegisterLayout& layout, ComplexVector amps) : layout_(layout), amps_(std::move(amps)) {
    if (amps_.size() != layout_.dim()) throw Error(ErrorCode::ShapeMismatch, "amplitude count");
    require_finite(amps_, "amplitudes");
    if (std::abs(amps_.norm() - 1.0) > 1e-12)
      throw Error(ErrorCode::BadAmplitudes, "norm " + std::to_string(amps_.norm()));
  }

  const RegisterLayout& layout() const { return layout_; }
  const ComplexVector& amplitudes() const { return amps_; }
  ComplexVector& mutable_amplitudes() { return amps_; }
  DensityMatrix density() const {
    return DensityMatrix::unchecked(layout_, amps_ * amps_.adjoint());
  }

 private:
  RegisterLayout layout_{};
  ComplexVector amps_;
};

enum class InitialFamily {
  ZurekGround,
  EnvExcited,
  GhzMixture,
  EnvMaximallyMixed,
  EntangledSx,
  KUniformPure,
};

inline constexpr std::string_view family_name(InitialFamily f) {
  switch (f) {
    case InitialFamily::ZurekGround: return "zurek_ground";
    case InitialFamily::EnvExcited: return "env_excited";
    case InitialFamily::GhzMixture: return "ghz_mixture";
    case InitialFamily::EnvMaximallyMixed: return "env_maximally_mixed";
    case InitialFamily::EntangledSx: return "entangled_sx";
    case InitialFamily::KUniformPure: return "k_uniform_pure";
  }
  return "?";
}

inline InitialFamily parse_initial_family(std::string_view s) {
  for (auto f : {InitialFamily::ZurekGround, InitialFamily::EnvExcited, InitialFamily::GhzMixture,
                 InitialFamily::EnvMaximallyMixed, InitialFamily::EntangledSx, InitialFamily::KUniformPure})
    if (family_name(f) == s) return f;
  throw Error(ErrorCode::UnknownFamily, std::string(s));
}

// System amplitudes in the computational basis of S (length 2^k). Empty means uniform.
struct InitialParams {
  std::vector<Complex> system;

  static InitialParams ab(Complex a, Complex b) { return InitialParams{{a, b}}; }
};

inline ComplexVector system_amplitudes(const RegisterLayout& l, const InitialParams& p, bool force_uniform) {
  const Eigen::Index ds = Eigen::Index(1) << l.k;
  ComplexVector s(ds);
  if (force_uniform || p.system.empty()) {
    s.setConstant(Complex(std::pow(2.0, -0.5 * l.k), 0.0));
    return s;
  }
  if (Eigen::Index(p.system.size()) != ds)
    throw Error(ErrorCode::BadAmplitudes, "expected " + std::to_string(ds) + " system amplitudes");
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < ds; ++i) {
    s(i) = p.system[i];
    norm2 += std::norm(p.system[i]);
  }
  if (!s.allFinite() || std::abs(norm2 - 1.0) > 1e-12)
    throw Error(ErrorCode::BadAmplitudes, "sum of |amplitude|^2 = " + std::to_string(norm2));
  return s;
}

inline DensityMatrix initial_state(InitialFamily family, const RegisterLayout& layout,
                                   const InitialParams& params = {}) {
  const RegisterLayout l = system_environment(layout.k, layout.n);
  const Eigen::Index de = Eigen::Index(1) << l.n;
  const Eigen::Index d = l.dim();
  ComplexVector s = system_amplitudes(l, params, family == InitialFamily::KUniformPure);
  ComplexMatrix rs = s * s.adjoint();
  ComplexMatrix re = ComplexMatrix::Zero(de, de);
  switch (family) {
    case InitialFamily::ZurekGround:
    case InitialFamily::KUniformPure:
      re(0, 0) = 1.0;
      break;
    case InitialFamily::EnvExcited:
      re(de - 1, de - 1) = 1.0;
      break;
    case InitialFamily::GhzMixture:
      re(0, 0) = 0.5;
      re(de - 1, de - 1) = 0.5;
      break;
    case InitialFamily::EnvMaximallyMixed:
      re.diagonal().setConstant(1.0 / double(de));
      break;
    case InitialFamily::EntangledSx: {
      if (l.k != 1) throw Error(ErrorCode::BadParams, "entangled_sx is defined for k=1");
      // a|0>|s1...s1> + b|1>|s2...s2>, |s1,2> = (|0> +- |1>)/sqrt2
      ComplexVector psi = ComplexVector::Zero(d);
      const double amp = std::pow(2.0, -0.5 * l.n);
      for (Eigen::Index e = 0; e < de; ++e) {
        int ones = __builtin_popcountll(static_cast<unsigned long long>(e));
        psi(e) = s(0) * amp;
        psi(de + e) = s(1) * amp * ((ones % 2) ? -1.0 : 1.0);
      }
      return DensityMatrix::unchecked(l, psi * psi.adjoint());
    }
  }
  return DensityMatrix::unchecked(l, kron(rs, re));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, int max_qubits = kMaxQubits) {
  const auto& la = a.layout();
  const auto& lb = b.layout();
  if (la.qubits() + lb.qubits() > max_qubits)
    throw Error(ErrorCode::SizeOverflow, "tensor product too large");
  if (la.n > 0 && lb.k > 0)
    throw Error(ErrorCode::LayoutMismatch, "system qubits must precede environment qubits");
  RegisterLayout l{la.k + lb.k, la.n + lb.n};
  return DensityMatrix::unchecked(l, kron(a.matrix(), b.matrix()));
}

inline Eigen::Index qubit_bit(const RegisterLayout& l, int q) {
  return Eigen::Index(1) << (l.qubits() - 1 - q);
}

inline void check_qubit(const RegisterLayout& l, int q) {
  if (q < 0 || q >= l.qubits())
    throw Error(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(q) + " not in " + l.str());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& discard) {
  const RegisterLayout& l = rho.layout();
  const int nq = l.qubits();
  std::vector<bool> gone(nq, false);
  for (int q : discard) {
    check_qubit(l, q);
    if (gone[q]) throw Error(ErrorCode::DuplicateIndex, "qubit " + std::to_string(q));
    gone[q] = true;
  }
  if (int(discard.size()) == nq) throw Error(ErrorCode::BadParams, "cannot discard every qubit");
  if (discard.empty()) return rho;

  std::vector<int> keep, drop;
  int k2 = 0;
  for (int q = 0; q < nq; ++q) {
    if (gone[q]) {
      drop.push_back(q);
    } else {
      keep.push_back(q);
      if (q < l.k) ++k2;
    }
  }
  RegisterLayout out_l{k2, int(keep.size()) - k2};

  auto offsets = [&](const std::vector<int>& qs) {
    const Eigen::Index m = Eigen::Index(1) << qs.size();
    std::vector<Eigen::Index> off(m, 0);
    for (Eigen::Index x = 0; x < m; ++x)
      for (std::size_t t = 0; t < qs.size(); ++t)
        if ((x >> (qs.size() - 1 - t)) & 1) off[x] |= qubit_bit(l, qs[t]);
    return off;
  };
  const auto kb = offsets(keep);
  const auto tb = offsets(drop);
  const Eigen::Index dk = kb.size();
  const auto& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index c = 0; c < dk; ++c)
    for (Eigen::Index r = 0; r < dk; ++r) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index t : tb) acc += m(kb[r] | t, kb[c] | t);
      out(r, c) = acc;
    }
  return DensityMatrix::unchecked(out_l, std::move(out));
}

// reduced state on the listed qubits (kept in register order)
inline DensityMatrix reduce_to(const DensityMatrix& rho, const std::vector<int>& keep) {
  std::vector<bool> kept(rho.layout().qubits(), false);
  for (int q : keep) {
    check_qubit(rho.layout(), q);
    kept[q] = true;
  }
  std::vector<int> discard;
  for (int q = 0; q < rho.layout().qubits(); ++q)
    if (!kept[q]) discard.push_back(q);
  return partial_trace(rho, discard);
}

using Gate = Eigen::Matrix4cd;

inline double unitarity_defect(const Gate& g) {
  return (g.adjoint() * g - Gate::Identity()).cwiseAbs().maxCoeff();
}

inline void require_unitary(const Gate& g, double tol = 1e-10) {
  if (!g.allFinite() || unitarity_defect(g) > tol) throw Error(ErrorCode::NotUnitary, "two-qubit gate");
}

namespace detail {

struct PairIndex {
  std::vector<Eigen::Index> base;
  Eigen::Index bi = 0, bj = 0;
};

inline PairIndex pair_index(const RegisterLayout& l, int i, int j) {
  check_qubit(l, i);
  check_qubit(l, j);
  if (i == j) throw Error(ErrorCode::SameQubit, "qubit " + std::to_string(i));
  PairIndex p;
  p.bi = qubit_bit(l, i);
  p.bj = qubit_bit(l, j);
  const Eigen::Index mask = p.bi | p.bj;
  p.base.reserve(l.dim() / 4);
  for (Eigen::Index x = 0; x < l.dim(); ++x)
    if ((x & mask) == 0) p.base.push_back(x);
  return p;
}

// in place: M <- U_ij M U_ij^H. Local gate index is 2*bit_i + bit_j.
inline void conjugate_in_place(ComplexMatrix& m, const Gate& g, const PairIndex& p) {
  const Eigen::Index d = m.rows();
  const Gate gc = g.conjugate();
  Complex* data = m.data();
  // left factor acts on rows, column by column
  for (Eigen::Index c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for (Eigen::Index x : p.base) {
      const Eigen::Index ix[4] = {x, x | p.bj, x | p.bi, x | p.bi | p.bj};
      const Complex v0 = col[ix[0]], v1 = col[ix[1]], v2 = col[ix[2]], v3 = col[ix[3]];
      for (int a = 0; a < 4; ++a)
        col[ix[a]] = g(a, 0) * v0 + g(a, 1) * v1 + g(a, 2) * v2 + g(a, 3) * v3;
    }
  }
  // right factor U^H mixes columns
  for (Eigen::Index x : p.base) {
    Complex* c0 = data + x * d;
    Complex* c1 = data + (x | p.bj) * d;
    Complex* c2 = data + (x | p.bi) * d;
    Complex* c3 = data + (x | p.bi | p.bj) * d;
    for (Eigen::Index r = 0; r < d; ++r) {
      const Complex w0 = c0[r], w1 = c1[r], w2 = c2[r], w3 = c3[r];
      c0[r] = gc(0, 0) * w0 + gc(0, 1) * w1 + gc(0, 2) * w2 + gc(0, 3) * w3;
      c1[r] = gc(1, 0) * w0 + gc(1, 1) * w1 + gc(1, 2) * w2 + gc(1, 3) * w3;
      c2[r] = gc(2, 0) * w0 + gc(2, 1) * w1 + gc(2, 2) * w2 + gc(2, 3) * w3;
      c3[r] = gc(3, 0) * w0 + gc(3, 1) * w1 + gc(3, 2) * w2 + gc(3, 3) * w3;
    }
  }
}

inline void apply_in_place(ComplexVector& v, const Gate& g, const PairIndex& p) {
  for (Eigen::Index x : p.base) {
    const Eigen::Index ix[4] = {x, x | p.bj, x | p.bi, x | p.bi | p.bj};
    const Complex v0 = v[ix[0]], v1 = v[ix[1]], v2 = v[ix[2]], v3 = v[ix[3]];
    for (int a = 0; a < 4; ++a) v[ix[a]] = g(a, 0) * v0 + g(a, 1) * v1 + g(a, 2) * v2 + g(a, 3) * v3;
  }
}

}  // namespace detail

inline DensityMatrix apply_two_qubit(const DensityMatrix& rho, const Gate& g, int i, int j) {
  auto p = detail::pair_index(rho.layout(), i, j);
  require_unitary(g);
  ComplexMatrix m = rho.matrix();
  detail::conjugate_in_place(m, g, p);
  return DensityMatrix::unchecked(rho.layout(), std::move(m));
}

inline PureState apply_two_qubit(const PureState& psi, const Gate& g, int i, int j) {
  auto p = detail::pair_index(psi.layout(), i, j);
  require_unitary(g);
  PureState out = psi;
  detail::apply_in_place(out.mutable_amplitudes(), g, p);
  return out;
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.layout() == sigma.layout()))
    throw Error(ErrorCode::LayoutMismatch, rho.layout().str() + " vs " + sigma.layout().str());
  RealVector w = hermitian_eigenvalues(rho.matrix() - sigma.matrix(), 1e-8);
  return 0.5 * w.cwiseAbs().sum();
}

}  // namespace qdarwin
