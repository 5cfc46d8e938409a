#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qdarwin/attractor.hpp"
#include "qdarwin/channel.hpp"
#include "qdarwin/darwinism.hpp"
#include "qdarwin/experiment.hpp"
#include "qdarwin/zurek.hpp"

namespace qdarwin::harness {

bool ScenarioResult::converged() const {
  for (const auto& c : convergence)
    if (c.required && !c.converged) return false;
  return true;
}

namespace {

const std::vector<std::string> kPipColumns{"f", "L", "H_S", "H_E", "H_SE", "MI_over_Hclass"};

InitialParams system_params(const ExperimentConfig& c, int k) {
  if (k != 1) return {};
  return InitialParams::ab(Complex(std::sqrt(c.a_squared), 0.0), Complex(std::sqrt(1.0 - c.a_squared), 0.0));
}

DensityMatrix initial_for(const ExperimentConfig& c, InitialFamily fam, int k, int n) {
  return initial_state(fam, RegisterLayout{k, n}, system_params(c, k));
}

double h_class_of(const DensityMatrix& rho0) { return system_classical_entropy(rho0); }

InteractionDigraph digraph_for(const ExperimentConfig& c, int k, int n) {
  const RegisterLayout l{k, n};
  if (c.probabilities == "linear") {
    std::vector<double> w;
    for (int e = 1; e <= k * n; ++e) w.push_back(double(e));
    return weighted_digraph(l, w);
  }
  return uniform_digraph(l);
}

Schedule converging(const ExperimentConfig& c) {
  Schedule s;
  s.max_iterations = c.max_iterations;
  s.checkpoint_stride = c.checkpoint_stride;
  s.epsilon = c.epsilon;
  s.threads = c.threads;
  return s;
}

void require_state(const DensityMatrix& rho, const std::string& what) {
  const StateCheck chk = rho.check();
  if (!chk.ok())
    throw Error(ErrorCode::NotAState, what + ": hermitian defect " + std::to_string(chk.hermitian_defect) +
                                          ", trace error " + std::to_string(chk.trace_error) + ", min eigenvalue " +
                                          std::to_string(chk.min_eigenvalue));
}

ConvergenceEntry entry(const std::string& label, const IterationReport& r, bool required) {
  return ConvergenceEntry{label, r.iterations, r.converged, required, r.last_distance(), r.monotone};
}

std::vector<TraceOrdering> orderings_for(const ExperimentConfig& c, int n) {
  std::vector<TraceOrdering> ts{right_to_left(n)};
  if (c.orderings > 1) {
    auto more = random_orderings(n, c.orderings - 1, c.seed);
    ts.insert(ts.end(), more.begin(), more.end());
  }
  return ts;
}

Table pip_table(const std::string& name, const PipCurve& curve) {
  Table t{name, kPipColumns, {}};
  for (const auto& p : curve.points) t.rows.push_back({p.f, double(p.L), p.H_S, p.H_E, p.H_SE, p.ratio()});
  return t;
}

// right-to-left PIP table, plus a spread table when several orderings are requested
void add_pip(ScenarioResult& out, const ExperimentConfig& c, const std::string& name, const DensityMatrix& rho,
             double h_class) {
  const auto ts = orderings_for(c, rho.layout().n);
  const PipEnsemble e = pip(rho, h_class, ts);
  out.tables.push_back(pip_table(name, e.curves.front()));
  if (ts.size() > 1) {
    Table s{name + "_ordering_spread", {"f", "L", "max_spread"}, {}};
    for (std::size_t i = 0; i < e.spread.size(); ++i)
      s.rows.push_back({e.curves.front().points[i].f, double(i + 1), e.spread[i]});
    out.tables.push_back(std::move(s));
  }
}

DensityMatrix iterate_to_rest(ScenarioResult& out, const ExperimentConfig& c, const std::string& label,
                              const DensityMatrix& rho0, const GateSpec& g) {
  const IterationReport r = iterate(rho0, g, digraph_for(c, rho0.layout().k, rho0.layout().n), converging(c));
  out.convergence.push_back(entry(label, r, true));
  require_state(r.state, label);
  return r.state;
}

void fig1(ScenarioResult& out, const ExperimentConfig& c) {
  const DensityMatrix rho0 = initial_for(c, InitialFamily::ZurekGround, 1, c.n);
  const double hc = h_class_of(rho0);
  const DensityMatrix single = zurek_evolve(rho0, c.gate);
  require_state(single, "single pass");
  add_pip(out, c, "fig1_zurek_single_pass", single, hc);
  add_pip(out, c, "fig1_zurek_iterated", iterate_to_rest(out, c, "fig1_zurek_iterated", rho0, c.gate), hc);
}

void fig3(ScenarioResult& out, const ExperimentConfig& c) {
  struct Curve {
    const char* name;
    InitialFamily fam;
    bool asymmetric;
  };
  const Curve curves[] = {
      {"fig3_ground", InitialFamily::ZurekGround, false},
      {"fig3_ghz_mixture", InitialFamily::GhzMixture, false},
      {"fig3_env_maximally_mixed", InitialFamily::EnvMaximallyMixed, false},
      {"fig3_entangled_sx", InitialFamily::EntangledSx, false},
      {"fig3_asymmetric", InitialFamily::ZurekGround, true},
  };
  for (const auto& cv : curves) {
    const DensityMatrix rho0 = initial_for(c, cv.fam, 1, c.n);
    GateSpec g = c.gate;
    if (cv.asymmetric) {
      g.alpha1 = 2 * pi / 3;
      g.alpha2 = pi / 3;
    }
    // pointer probabilities of S are |a|^2, |b|^2 for every family
    const double hc = h_class_of(rho0);
    add_pip(out, c, cv.name, iterate_to_rest(out, c, cv.name, rho0, g), hc);
  }
}

void fig4(ScenarioResult& out, const ExperimentConfig& c) {
  const DensityMatrix rho0 = initial_for(c, parse_initial_family(c.initial), c.k, c.n);
  const double hc = h_class_of(rho0);
  const int P = c.sweep_points;
  std::vector<std::vector<double>> rows(P);
  std::vector<ConvergenceEntry> conv(P);
  const auto graph = digraph_for(c, c.k, c.n);
  detail::parallel_for(std::size_t(P), c.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double alpha = double(i + 1) * (pi / 2) / double(P);
      GateSpec g = c.gate;
      g.alpha1 = g.alpha2 = alpha;
      Schedule s;
      s.max_iterations = c.iterations;
      s.checkpoint_stride = c.checkpoint_stride;
      s.epsilon = c.epsilon;
      s.stop_on_convergence = false;
      const IterationReport r = iterate(rho0, g, graph, s);
      require_state(r.state, "sweep point");
      const PipCurve curve = pip(r.state, hc);
      double best = 0.0;
      for (const auto& p : curve.points) best = std::max(best, p.ratio());
      rows[i] = {alpha, best, curve.points.front().H_S};
      conv[i] = entry("fig4_alpha_" + std::to_string(i + 1), r, false);
    }
  });
  out.tables.push_back(Table{"fig4_alpha_sweep", {"alpha", "MI_max_over_Hclass", "H_S"}, std::move(rows)});
  out.convergence.insert(out.convergence.end(), conv.begin(), conv.end());
}

void fig5(ScenarioResult& out, const ExperimentConfig& c) {
  const DensityMatrix rho0 = initial_for(c, parse_initial_family(c.initial), c.k, c.n);
  const double hc = h_class_of(rho0);
  GateSpec tot = c.gate, rev = c.gate;
  tot.order = OperatorOrder::Total;
  rev.order = OperatorOrder::Reversed;
  const auto graph = digraph_for(c, c.k, c.n);
  const Stepper st(total_unitary(tot), graph, c.threads), sr(total_unitary(rev), graph, c.threads);
  DensityMatrix a = rho0, b = rho0;
  long done = 0;
  Table detail{"fig5_order_diff", {"N", "f", "L", "diff_over_Hclass"}, {}};
  Table summary{"fig5_order_diff_max", {"N", "max_diff_over_Hclass"}, {}};
  for (long N : c.schedule) {
    for (; done < N; ++done) {
      a = st(a);
      b = sr(b);
    }
    require_state(a, "Tot order");
    require_state(b, "Reversed order");
    const PipCurve pa = pip(a, hc), pb = pip(b, hc);
    double worst = 0.0;
    for (std::size_t i = 0; i < pa.points.size(); ++i) {
      const double d = std::abs(pa.points[i].MI - pb.points[i].MI) / hc;
      worst = std::max(worst, d);
      detail.rows.push_back({double(N), pa.points[i].f, double(pa.points[i].L), d});
    }
    summary.rows.push_back({double(N), worst});
  }
  out.tables.push_back(std::move(detail));
  out.tables.push_back(std::move(summary));
}

void fig6(ScenarioResult& out, const ExperimentConfig& c) {
  Table terminal{"fig6_kqubit_terminal", {"k", "MI_over_Hclass", "closed_form_MI_over_Hclass"}, {}};
  for (int k : c.ks) {
    const DensityMatrix rho0 = initial_for(c, InitialFamily::KUniformPure, k, c.n);
    const double hc = h_class_of(rho0);
    const std::string name = "fig6_kqubit_k" + std::to_string(k);
    const DensityMatrix fin = iterate_to_rest(out, c, name, rho0, c.gate);
    add_pip(out, c, name, fin, hc);
    StationaryParams sp;
    sp.k = k;
    sp.n = c.n;
    const auto cf = closed_form_stationary(StationaryFamily::Eq4_1_6, sp);
    const double closed = mutual_information(cf.state, c.n, right_to_left(c.n), hc).ratio();
    terminal.rows.push_back({double(k), mutual_information(fin, c.n, right_to_left(c.n), hc).ratio(), closed});
  }
  out.tables.push_back(std::move(terminal));
}

void table1(ScenarioResult& out, const ExperimentConfig& c) {
  Table t{"table1", {"n", "MI_closed_form", "MI_iterated"}, {}};
  for (int n = c.n_min; n <= c.n_max; ++n) {
    StationaryParams sp;
    sp.n = n;
    sp.a_sq = c.a_squared;
    const DensityMatrix rho0 = initial_for(c, InitialFamily::ZurekGround, 1, n);
    const double hc = h_class_of(rho0);
    const auto cf = closed_form_stationary(StationaryFamily::Eq4_1_1, sp);
    const double closed = mutual_information(cf.state, n, right_to_left(n), hc).ratio();
    double iterated = std::numeric_limits<double>::quiet_NaN();
    if (n <= c.iterated_max_n) {
      const DensityMatrix fin = iterate_to_rest(out, c, "table1_n" + std::to_string(n), rho0, c.gate);
      iterated = mutual_information(fin, n, right_to_left(n), hc).ratio();
    }
    t.rows.push_back({double(n), closed, iterated});
  }
  out.tables.push_back(std::move(t));
}

void attractor_report(ScenarioResult& out, const ExperimentConfig& c) {
  const auto graph = digraph_for(c, c.k, c.n);
  const Gate g = total_unitary(c.gate);
  const AttractorSpace space = solve_attractor_space(g, graph);
  Table dims{"attractor_report", {"lambda_re", "lambda_im", "dimension", "rank", "max_residual"}, {}};
  Table basis{"attractor_report_basis", {"lambda_re", "lambda_im", "index", "row", "col", "re", "im"}, {}};
  for (const auto& s : space.sectors) {
    double worst = 0.0;
    for (const auto& x : s.basis) worst = std::max(worst, attractor_residual(x, g, graph, s.lambda));
    dims.rows.push_back({s.lambda.real(), s.lambda.imag(), double(s.dimension), double(s.rank), worst});
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
      const auto& x = s.basis[i];
      for (Eigen::Index col = 0; col < x.cols(); ++col)
        for (Eigen::Index row = 0; row < x.rows(); ++row)
          if (std::abs(x(row, col)) > 1e-14)
            basis.rows.push_back({s.lambda.real(), s.lambda.imag(), double(i), double(row), double(col),
                                  x(row, col).real(), x(row, col).imag()});
    }
  }
  out.tables.push_back(std::move(dims));
  out.tables.push_back(std::move(basis));
}

}  // namespace

ScenarioResult compute_scenario(const ExperimentConfig& c) {
  check_config(c);
  ScenarioResult out;
  if (c.scenario == "fig1_zurek") fig1(out, c);
  else if (c.scenario == "fig3_dissipative_pips") fig3(out, c);
  else if (c.scenario == "fig4_alpha_sweep") fig4(out, c);
  else if (c.scenario == "fig5_order_diff") fig5(out, c);
  else if (c.scenario == "fig6_kqubit") fig6(out, c);
  else if (c.scenario == "table1") table1(out, c);
  else if (c.scenario == "attractor_report") attractor_report(out, c);
  for (const auto& e : out.convergence)
    if (e.required && !e.converged)
      out.notes.push_back(e.label + ": no convergence after " + std::to_string(e.iterations) + " steps");
  return out;
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  char buf[64];
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isnan(row[i])) std::snprintf(buf, sizeof buf, "nan");
      else std::snprintf(buf, sizeof buf, "%.15g", row[i]);
      s += (i ? "," : "");
      s += buf;
    }
    s += '\n';
  }
  return s;
}

}  // namespace qdarwin::harness
