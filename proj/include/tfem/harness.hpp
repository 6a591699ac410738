#pragma once

// Experiment layer: convergence series, C-sensitivity sweeps, band-extent
// studies and the seeded random-function regression suite.
//
// Mesh resolution rule: a target mesh size h selects the even grid count
// n = round(sqrt(2)/h), i.e. the grid whose longest cell edge matches h.
// Policies evaluate J_min at the target h.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfem/assembly.hpp"
#include "tfem/mortar.hpp"
#include "tfem/norms.hpp"
#include "tfem/problems.hpp"
#include "tfem/solve.hpp"
#include "tfem/tempering.hpp"

namespace tfem {

inline int grid_n_for(double h_target) {
  const double raw = std::sqrt(2.0) / h_target;
  int n = int(std::lround(raw / 2.0)) * 2;
  return std::max(n, 2);
}

struct StudyRow {
  std::string study;
  int dim = 2;
  int order = 1;
  double h = 0.0;      // target mesh size (report abscissa)
  double hbar = 0.0;
  double C = 0.0;
  double k = 0.0;
  double Jmin = 0.0;
  double l2 = 0.0;
  double h1_out = 0.0;
  double jump = 0.0;
  long ndof = 0;
  double seconds = 0.0;
  double extra = 0.0;  // study-specific (band extent L, test id, ...)
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;
  double l2_slope = 0.0;
  double h1_slope = 0.0;
};

inline std::pair<double, double> policy_Ck(const TemperPolicy& policy, int dim) {
  if (const auto* p = std::get_if<PowerLawPolicy>(&policy)) return {p->C, p->k};
  if (const auto* p = std::get_if<HighOrderPolicy>(&policy)) return {p->C, 2.2 + 0.8 * p->order};
  if (const auto* p = std::get_if<TheoreticalOptPolicy>(&policy))
    return {(p->w2 / p->w1) * std::sqrt(3.0 * p->Cc / 8.0), double(dim + 1)};
  return {0.0, 0.0};
}

// Least-squares slope of log(err) against log(h) over the last `npts` rows.
inline double fitted_slope(const std::vector<double>& h, const std::vector<double>& err,
                           std::size_t npts = 4) {
  const std::size_t n = std::min(npts, h.size());
  if (n < 2) return 0.0;
  const std::size_t off = h.size() - n;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = off; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = double(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

struct MeshFamily {
  int dim = 2;
  int order = 1;
  bool band = false;
  double extent = 1.0;
  std::function<double(double)> hbar_rule;  // width from target h; null = 0
};

struct RunOptions {
  SolverConfig solver;
  bool timing = true;
  bool compute_jump = true;
};

inline Mesh make_family_mesh(const MeshFamily& fam, double h_target) {
  const int n = grid_n_for(h_target);
  if (!fam.band) return build_structured_mesh(fam.dim, n);
  BandSpec spec;
  spec.width = fam.hbar_rule ? fam.hbar_rule(h_target) : 0.0;
  spec.extent = fam.extent;
  return build_band_mesh(fam.dim, n, spec);
}

struct SolveOutcome {
  Eigen::VectorXd solution;
  long ndof = 0;
  double seconds = 0.0;
};

inline SolveOutcome solve_problem_on(const Mesh& mesh, int order, const TemperPolicy& policy,
                                     const ManufacturedProblem& prob, double h_policy,
                                     const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  SparseSystem sys = assemble_poisson(mesh, order, policy, prob.source, prob.dirichlet, h_policy);
  SolveOutcome out;
  out.ndof = long(sys.matrix.rows());
  out.solution = solve(sys, opt.solver);
  if (opt.timing)
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline StudyRow measure_row(const Mesh& mesh, int order, const ManufacturedProblem& prob,
                            const Eigen::VectorXd& sol, const RunOptions& opt) {
  StudyRow row;
  const DofMap dofs(mesh, order);
  row.l2 = l2_error(mesh, dofs, sol, prob.exact);
  row.h1_out = h1_error_outside_band(mesh, dofs, sol, prob.grad);
  if (opt.compute_jump && mesh.dim == 2 && order == 1 && mesh.hbar == 0.0 &&
      !mesh.band_nodes.empty()) {
    row.jump = jump_norm(extract_gamma(mesh), sol);
  }
  return row;
}

inline ConvergenceReport run_convergence(const ManufacturedProblem& prob, const MeshFamily& fam,
                                         const TemperPolicy& policy,
                                         const std::vector<double>& h_list,
                                         const RunOptions& opt = {},
                                         const std::string& study_name = "convergence") {
  ConvergenceReport rep;
  std::vector<double> hs, l2s, h1s;
  for (const double h : h_list) {
    const Mesh mesh = make_family_mesh(fam, h);
    const auto out = solve_problem_on(mesh, fam.order, policy, prob, h, opt);
    StudyRow row = measure_row(mesh, fam.order, prob, out.solution, opt);
    row.study = study_name;
    row.dim = fam.dim;
    row.order = fam.order;
    row.h = h;
    row.hbar = mesh.hbar > 0 ? mesh.hbar : 0.0;
    std::tie(row.C, row.k) = policy_Ck(policy, fam.dim);
    row.Jmin = jmin(policy, h, fam.dim, fam.order);
    row.ndof = out.ndof;
    row.seconds = out.seconds;
    rep.rows.push_back(row);
    hs.push_back(h);
    l2s.push_back(row.l2);
    h1s.push_back(row.h1_out);
  }
  rep.l2_slope = fitted_slope(hs, l2s);
  rep.h1_slope = fitted_slope(hs, h1s);
  return rep;
}

// Errors against C at fixed h, exponent k = dim + 1 unless overridden.
inline std::vector<StudyRow> sweep_C(const ManufacturedProblem& prob, const MeshFamily& fam,
                                     double h_target, const std::vector<double>& C_list,
                                     double k_exponent = -1.0, const RunOptions& opt = {}) {
  const double k = k_exponent > 0 ? k_exponent : double(fam.dim + 1);
  std::vector<StudyRow> rows;
  const Mesh mesh = make_family_mesh(fam, h_target);
  for (const double C : C_list) {
    const TemperPolicy policy = PowerLawPolicy{C, k};
    const auto out = solve_problem_on(mesh, fam.order, policy, prob, h_target, opt);
    StudyRow row = measure_row(mesh, fam.order, prob, out.solution, opt);
    row.study = "sweep-c";
    row.dim = fam.dim;
    row.order = fam.order;
    row.h = h_target;
    row.hbar = mesh.hbar > 0 ? mesh.hbar : 0.0;
    row.C = C;
    row.k = k;
    row.Jmin = C * std::pow(h_target, k);
    row.ndof = out.ndof;
    row.seconds = out.seconds;
    rows.push_back(row);
  }
  return rows;
}

// Error against (C, extent) at fixed h. The problem should be band-periodic
// so every extent sees the same trace data.
inline std::vector<StudyRow> study_band_extent(const ManufacturedProblem& prob, int dim,
                                               double h_target,
                                               const std::vector<double>& extents,
                                               const std::vector<double>& C_list,
                                               const RunOptions& opt = {}) {
  std::vector<StudyRow> rows;
  for (const double L : extents) {
    MeshFamily fam;
    fam.dim = dim;
    fam.band = true;
    fam.extent = L;
    const Mesh mesh = make_family_mesh(fam, h_target);
    for (const double C : C_list) {
      const TemperPolicy policy = PowerLawPolicy{C, double(dim + 1)};
      const auto out = solve_problem_on(mesh, 1, policy, prob, h_target, opt);
      StudyRow row = measure_row(mesh, 1, prob, out.solution, opt);
      row.study = "band-extent";
      row.dim = dim;
      row.order = 1;
      row.h = h_target;
      row.C = C;
      row.k = double(dim + 1);
      row.Jmin = C * std::pow(h_target, dim + 1);
      row.ndof = out.ndof;
      row.seconds = out.seconds;
      row.extra = L;
      rows.push_back(row);
    }
  }
  return rows;
}

struct RandomSuiteResult {
  std::vector<StudyRow> rows;  // one per test: l2/h1 are the TFEM relative
                               // errors, jump/extra reuse: see below
  int within_5pct_h1 = 0;
  double worst_l2_ratio = 0.0;
};

// For each seed: random closed-form u on a random rectangle, solved with the
// tempered scheme on a collapsed-band mesh and with plain FEM on the regular
// mesh; records relative errors of both. Row fields: l2/h1_out = TFEM
// relative errors, jump = reference relative L2, extra = reference relative H1.
inline RandomSuiteResult random_suite(int n_tests, std::uint64_t seed0, int n_grid = 40,
                                      const RunOptions& opt = {}) {
  RandomSuiteResult res;
  for (int t = 0; t < n_tests; ++t) {
    const RandomProblemSpec spec = random_problem(seed0 + std::uint64_t(t));
    const double h_policy = std::sqrt(2.0) * std::max(spec.Lx, spec.Ly) / n_grid;
    const TemperPolicy policy = PowerLawPolicy{1.0, 3.0};

    BandSpec bs;
    bs.extent = spec.band_fraction;
    Mesh band = build_band_mesh(2, n_grid, bs);
    Mesh regular = build_structured_mesh(2, n_grid);
    for (Mesh* m : {&band, &regular})
      for (auto& v : m->vertices) {
        v.coords[0] *= spec.Lx;
        v.coords[1] *= spec.Ly;
      }
    band.h *= std::max(spec.Lx, spec.Ly);
    regular.h *= std::max(spec.Lx, spec.Ly);

    const auto out_t = solve_problem_on(band, 1, policy, spec.problem, h_policy, opt);
    const auto out_r = solve_problem_on(regular, 1, FixedPolicy{1e-300}, spec.problem, h_policy, opt);

    const DofMap dofs_t(band, 1), dofs_r(regular, 1);
    const double un = l2_norm_exact(regular, spec.problem.exact);
    const double gn = h1_norm_exact(regular, spec.problem.grad, H1Region::Everywhere);
    StudyRow row;
    row.study = "random-suite";
    row.dim = 2;
    row.order = 1;
    row.h = h_policy;
    row.C = 1.0;
    row.k = 3.0;
    row.Jmin = std::pow(h_policy, 3.0);
    row.l2 = l2_error(band, dofs_t, out_t.solution, spec.problem.exact) / un;
    row.h1_out = h1_error_outside_band(band, dofs_t, out_t.solution, spec.problem.grad) /
                 std::max(gn, 1e-300);
    row.jump = l2_error(regular, dofs_r, out_r.solution, spec.problem.exact) / un;
    row.extra = h1_error_outside_band(regular, dofs_r, out_r.solution, spec.problem.grad) /
                std::max(gn, 1e-300);
    row.ndof = out_t.ndof;
    row.seconds = out_t.seconds + out_r.seconds;
    res.rows.push_back(row);

    if (row.h1_out <= 1.05 * row.extra) ++res.within_5pct_h1;
    res.worst_l2_ratio = std::max(res.worst_l2_ratio, row.l2 / std::max(row.jump, 1e-300));
  }
  return res;
}

}  // namespace tfem
