#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "qdarwin/gates.hpp"

namespace qdarwin {

// edge e = (system qubit i, environment qubit j); indices are local to S and E
struct Edge {
  int system = 0;
  int environment = 0;
  bool operator==(const Edge&) const = default;
};

class InteractionDigraph {
 public:
  InteractionDigraph() = default;

  static InteractionDigraph make(const RegisterLayout& layout, std::vector<Edge> edges,
                                 std::vector<double> probabilities) {
    if (edges.empty()) throw Error(ErrorCode::BadParams, "digraph needs at least one edge");
    if (edges.size() != probabilities.size())
      throw Error(ErrorCode::BadParams, "one probability per edge");
    for (std::size_t a = 0; a < edges.size(); ++a) {
      const Edge& e = edges[a];
      if (e.system < 0 || e.system >= layout.k || e.environment < 0 || e.environment >= layout.n)
        throw Error(ErrorCode::IndexOutOfRange, "edges must run from S to E");
      for (std::size_t b = 0; b < a; ++b)
        if (edges[b] == e) throw Error(ErrorCode::DuplicateIndex, "repeated edge");
    }
    double sum = 0.0;
    for (double p : probabilities) {
      if (!(p > 0.0) || p > 1.0) throw Error(ErrorCode::BadParams, "edge probability outside (0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::BadParams, "probabilities must sum to 1");
    InteractionDigraph d;
    d.layout_ = layout;
    d.edges_ = std::move(edges);
    d.p_ = std::move(probabilities);
    return d;
  }

  const RegisterLayout& layout() const { return layout_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& probabilities() const { return p_; }
  std::size_t size() const { return edges_.size(); }

 private:
  RegisterLayout layout_{};
  std::vector<Edge> edges_;
  std::vector<double> p_;
};

inline std::vector<Edge> complete_edges(const RegisterLayout& l) {
  std::vector<Edge> e;
  for (int i = 0; i < l.k; ++i)
    for (int j = 0; j < l.n; ++j) e.push_back({i, j});
  return e;
}

inline InteractionDigraph uniform_digraph(const RegisterLayout& layout) {
  const RegisterLayout l = system_environment(layout.k, layout.n);
  auto edges = complete_edges(l);
  std::vector<double> p(edges.size(), 1.0 / double(edges.size()));
  return InteractionDigraph::make(l, std::move(edges), std::move(p));
}

// complete edge set with p_e proportional to the given positive weights
inline InteractionDigraph weighted_digraph(const RegisterLayout& layout, const std::vector<double>& weights) {
  const RegisterLayout l = system_environment(layout.k, layout.n);
  auto edges = complete_edges(l);
  if (weights.size() != edges.size()) throw Error(ErrorCode::BadParams, "one weight per edge");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::BadParams, "weights must be positive");
    total += w;
  }
  std::vector<double> p;
  for (double w : weights) p.push_back(w / total);
  return InteractionDigraph::make(l, std::move(edges), std::move(p));
}

namespace detail {

// splits [0, count) into contiguous blocks; each index is handled exactly once, so the
// arithmetic per entry is independent of the thread count
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (t == 1) {
    fn(std::size_t(0), count);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + t - 1) / t;
    for (std::size_t w = 0; w < t; ++w) {
      const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&fn, &errors, w, lo, hi] {
        try {
          fn(lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void conjugate_parallel(ComplexMatrix& m, const Gate& g, const PairIndex& p, int threads) {
  const Eigen::Index d = m.rows();
  if (threads <= 1 || d < 256) {
    conjugate_in_place(m, g, p);
    return;
  }
  const Gate gc = g.conjugate();
  Complex* data = m.data();
  parallel_for(std::size_t(d), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) {
      Complex* col = data + c * d;
      for (Eigen::Index x : p.base) {
        const Eigen::Index ix[4] = {x, x | p.bj, x | p.bi, x | p.bi | p.bj};
        const Complex v0 = col[ix[0]], v1 = col[ix[1]], v2 = col[ix[2]], v3 = col[ix[3]];
        for (int a = 0; a < 4; ++a)
          col[ix[a]] = g(a, 0) * v0 + g(a, 1) * v1 + g(a, 2) * v2 + g(a, 3) * v3;
      }
    }
  });
  parallel_for(p.base.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      const Eigen::Index x = p.base[b];
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
  });
}

}  // namespace detail

// One application of the averaged map: sum_e p_e U_e rho U_e^H, edges summed in list order.
class Stepper {
 public:
  Stepper(const Gate& g, const InteractionDigraph& d, int threads = 1) : gate_(g), graph_(d), threads_(threads) {
    require_unitary(g);
    for (const Edge& e : d.edges())
      pairs_.push_back(detail::pair_index(d.layout(), e.system, d.layout().env_qubit(e.environment)));
  }

  DensityMatrix operator()(const DensityMatrix& rho) const {
    if (!(rho.layout() == graph_.layout()))
      throw Error(ErrorCode::LayoutMismatch, rho.layout().str() + " vs " + graph_.layout().str());
    const auto& p = graph_.probabilities();
    if (pairs_.size() == 1 && p[0] == 1.0) {
      ComplexMatrix m = rho.matrix();
      detail::conjugate_parallel(m, gate_, pairs_[0], threads_);
      return DensityMatrix::unchecked(rho.layout(), std::move(m));
    }
    ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
    ComplexMatrix work;
    for (std::size_t e = 0; e < pairs_.size(); ++e) {
      work = rho.matrix();
      detail::conjugate_parallel(work, gate_, pairs_[e], threads_);
      acc += p[e] * work;
    }
    return DensityMatrix::unchecked(rho.layout(), std::move(acc));
  }

  const Gate& gate() const { return gate_; }
  const InteractionDigraph& digraph() const { return graph_; }

 private:
  Gate gate_;
  InteractionDigraph graph_;
  int threads_ = 1;
  std::vector<detail::PairIndex> pairs_;
};

inline DensityMatrix step(const DensityMatrix& rho, const Gate& g, const InteractionDigraph& d, int threads = 1) {
  return Stepper(g, d, threads)(rho);
}

inline DensityMatrix step(const DensityMatrix& rho, const GateSpec& s, const InteractionDigraph& d, int threads = 1) {
  return step(rho, total_unitary(s), d, threads);
}

struct Schedule {
  long max_iterations = 1000;
  long checkpoint_stride = 10;
  double epsilon = 1e-9;
  // false: run exactly max_iterations steps and only record distances
  bool stop_on_convergence = true;
  int threads = 1;
};

struct IterationReport {
  DensityMatrix state;
  long iterations = 0;
  std::vector<double> checkpoint_distances;
  bool converged = false;
  // checkpoint distances non-increasing within 1e-10 (diagnostic only)
  bool monotone = true;

  double last_distance() const {
    return checkpoint_distances.empty() ? 0.0 : checkpoint_distances.back();
  }
};

inline void validate(const Schedule& s) {
  if (s.max_iterations < 0) throw Error(ErrorCode::BadParams, "max_iterations must be >= 0");
  if (s.checkpoint_stride < 1) throw Error(ErrorCode::BadParams, "checkpoint_stride must be >= 1");
  if (!(s.epsilon > 0.0)) throw Error(ErrorCode::BadParams, "epsilon must be positive");
}

inline IterationReport iterate(const DensityMatrix& rho0, const Gate& g, const InteractionDigraph& d,
                               const Schedule& schedule = {}) {
  validate(schedule);
  Stepper stepper(g, d, schedule.threads);
  IterationReport rep;
  rep.state = rho0;
  if (!(rho0.layout() == d.layout()))
    throw Error(ErrorCode::LayoutMismatch, rho0.layout().str() + " vs " + d.layout().str());
  DensityMatrix checkpoint = rho0;
  while (rep.iterations < schedule.max_iterations) {
    rep.state = stepper(rep.state);
    ++rep.iterations;
    if (rep.iterations % schedule.checkpoint_stride != 0) continue;
    const double dist = trace_distance(rep.state, checkpoint);
    if (!rep.checkpoint_distances.empty() && dist > rep.checkpoint_distances.back() + 1e-10)
      rep.monotone = false;
    rep.checkpoint_distances.push_back(dist);
    checkpoint = rep.state;
    if (dist < schedule.epsilon) {
      rep.converged = true;
      if (schedule.stop_on_convergence) break;
    } else {
      rep.converged = false;
    }
  }
  return rep;
}

inline IterationReport iterate(const DensityMatrix& rho0, const GateSpec& s, const InteractionDigraph& d,
                               const Schedule& schedule = {}) {
  return iterate(rho0, total_unitary(s), d, schedule);
}

}  // namespace qdarwin
