#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "smooth_sdp/certify.hpp"
#include "smooth_sdp/linalg.hpp"
#include "smooth_sdp/phasecut.hpp"
#include "smooth_sdp/serialization.hpp"
#include "smooth_sdp/smoothing.hpp"
#include "smooth_sdp/solver.hpp"

namespace smooth_sdp::cli {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void apply_thread_cap() {
  if (const char* s = std::getenv("SMOOTH_SDP_THREADS")) {
    const int t = std::atoi(s);
    if (t >= 1) Eigen::setNbThreads(t);
  }
}

Json run_record(const std::string& command, Json parameters, std::uint64_t seed,
                double wall_time, Json outputs) {
  Json j;
  j["command"] = command;
  j["parameters"] = std::move(parameters);
  j["seed"] = seed;
  j["wall_time_seconds"] = wall_time;
  j["outputs"] = std::move(outputs);
  return j;
}

Json optional_json(const std::optional<std::string>& s) {
  return s ? Json(*s) : Json(nullptr);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  Index d = 0;
  double oversampling = 10.0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto inst =
      phasecut::generate_instance(a.d, a.oversampling, a.noise_sigma, a.seed);
  io::write_text_file(a.out, io::dump(io::instance_to_json(inst)));
  out << "n=" << inst.n << " d=" << inst.d << " seed=" << inst.seed << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  Index k = 0;
  std::optional<double> eps_g;
  std::optional<double> eps_h;
  double sigma_w = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> wigner_seed;
  double c0 = 1.0;
  int max_iters = 1000;
  int lanczos_iters = 100;
  std::string report;
  std::optional<std::string> y_out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto inst = io::instance_from_json(io::read_json_file(a.instance));
  const SelfAdjointMatrix cost = phasecut::build_cost(inst);
  const SdpProblem problem = phasecut::build_sdp(inst, cost);
  const Index n = problem.n();
  const Index k = a.k > 0 ? a.k : phasecut::default_rank(n);
  const double r = problem.trace_bound();
  const double kb = problem.projector_bound();
  if (!(a.sigma_w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "--sigma-w must be >= 0");

  SelfAdjointMatrix active = cost;
  std::optional<SelfAdjointMatrix> wigner;
  const std::uint64_t wigner_seed = a.wigner_seed.value_or(a.seed + 1);
  if (a.sigma_w > 0.0) {
    PerturbedCost p =
        perturb_cost(cost, WignerSpec{n, a.sigma_w, FieldTag::kComplex, wigner_seed});
    active = p.cost;
    wigner = p.wigner;
  }

  SolverOptions opts;
  opts.eps_g = a.eps_g;
  opts.eps_H = a.eps_h;
  opts.seed = a.seed;
  opts.max_outer_iters = a.max_iters;
  opts.lanczos_iters = a.lanczos_iters;
  const SolveResult res = solve(problem, active, k, std::nullopt, opts);

  const FactorPoint point = build_factor_point(problem, active, res.y);
  const double active_norm = linalg::operator_norm(active, a.seed);
  const Certificate cert =
      certify(point, CertificateInputs{res.eps_g, res.eps_H, res.sosp.sigma_k, r, kb,
                                       active_norm});
  const double gap_measured =
      deterministic_gap_bound(cert.lambda_min_S, res.sosp.grad_norm, r);
  const double eps_h_measured = std::max(0.0, -res.sosp.hess_lower_bound);
  const phasecut::PhasecutSolution sol = phasecut::round_solution(inst, cost, res.y);

  Json o;
  o["converged"] = res.converged;
  o["outer_iterations"] = res.outer_iterations;
  o["hessian_applications"] = res.hessian_applications;
  o["objective"] = res.objective_value;
  o["grad_norm"] = res.sosp.grad_norm;
  o["hess_lower_bound"] = res.sosp.hess_lower_bound;
  o["sigma_k"] = res.sosp.sigma_k;
  o["feas_residual"] = res.sosp.feas_residual;
  o["lanczos_converged"] = res.sosp.lanczos_converged;
  o["lambda_min_S"] = cert.lambda_min_S;
  o["dual_lower_bound"] = cert.dual_lower_bound;
  o["cost_norm_op"] = active_norm;
  o["zeta"] = cert.zeta;
  o["deterministic_gap_bound_target"] = cert.gap_upper_bound;
  o["deterministic_gap_bound_measured"] = gap_measured;
  o["eigenvalue_bound_target"] = cert.eigenvalue_bound;
  o["eigenvalue_bound_measured"] = sosp_eigenvalue_bound(
      eps_h_measured, res.sosp.sigma_k, active_norm, kb, r);
  o["rounded_objective"] = sol.objective;
  o["relative_error"] = sol.relative_error ? Json(*sol.relative_error) : Json(nullptr);

  if (wigner) {
    const double w_norm = linalg::operator_norm(*wigner, wigner_seed);
    const double cost_norm = linalg::operator_norm(cost, a.seed);
    const FactorPoint plain = build_factor_point(problem, cost, res.y);
    SmoothedParams sp;
    sp.trace_bound = r;
    sp.projector_bound = kb;
    sp.cost_norm = cost_norm;
    sp.n = static_cast<double>(n);
    sp.m = static_cast<double>(problem.m());
    sp.sigma_w = a.sigma_w;
    sp.delta = 1.0;
    sp.c0 = a.c0;
    const double eta_value = eta(sp);
    o["wigner_norm_op"] = w_norm;
    o["wigner_norm_event"] = w_norm <= 3.0 * a.sigma_w * std::sqrt(static_cast<double>(n));
    o["unperturbed_objective"] = plain.objective();
    o["unperturbed_dual_lower_bound"] = dual_lower_bound(plain, r);
    o["unperturbed_gap_bound"] = unperturbed_gap_bound(gap_measured, w_norm, r);
    o["unperturbed_gap_bound_3sigma"] = unperturbed_gap_bound(
        gap_measured, 3.0 * a.sigma_w * std::sqrt(static_cast<double>(n)), r);
    o["eta_nonrigorous"] = eta_value;
    o["theorem_gap_bound_nonrigorous"] = theorem_gap_bound(res.eps_g, res.eps_H, eta_value, r);
    o["fosp_sigma_bound_nonrigorous"] =
        fosp_sigma_bound(res.eps_g, a.sigma_w, static_cast<double>(n), k, a.c0);
  }

  Json p;
  p["instance"] = a.instance;
  p["k"] = k;
  p["eps_g"] = res.eps_g;
  p["eps_h"] = res.eps_H;
  p["sigma_w"] = a.sigma_w;
  p["wigner_seed"] = a.sigma_w > 0.0 ? Json(wigner_seed) : Json(nullptr);
  p["c0"] = a.c0;
  p["max_iters"] = a.max_iters;
  p["lanczos_iters"] = a.lanczos_iters;
  p["report"] = a.report;
  p["y_out"] = optional_json(a.y_out);
  p["n"] = n;
  p["d"] = inst.d;

  if (a.y_out) io::write_text_file(*a.y_out, io::dump(io::factor_to_json(res.y)));
  const Json record = run_record("solve", std::move(p), a.seed, seconds_since(t0), std::move(o));
  io::write_text_file(a.report, io::dump(record));

  out << (res.converged ? "converged" : "not converged") << " objective=" << num(res.objective_value)
      << " grad_norm=" << num(res.sosp.grad_norm) << " iterations=" << res.outer_iterations
      << "\n";
  return res.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------- certify

struct Source {
  std::optional<std::string> instance;
  std::optional<std::string> problem;
};

SdpProblem load_problem(const Source& s) {
  if (s.instance.has_value() == s.problem.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --instance or --problem");
  }
  if (s.instance) return phasecut::build_sdp(io::instance_from_json(io::read_json_file(*s.instance)));
  return io::problem_from_json(io::read_json_file(*s.problem));
}

SelfAdjointMatrix cost_from_json(const Json& j, const SdpProblem& problem) {
  const FieldTag field = io::field_from_string(j.at("field").get<std::string>());
  const Index n = j.at("n").get<Index>();
  if (n != problem.n() || field != problem.field()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost file does not match the problem");
  }
  return SelfAdjointMatrix(io::matrix_from_json(j.at("C"), n, n, field), field);
}

struct CertifyArgs {
  Source source;
  std::string y;
  std::optional<std::string> cost;
  std::optional<double> eps_g;
  std::optional<double> eps_h;
  std::uint64_t seed = 0;
  int lanczos_iters = 100;
  std::optional<std::string> out;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const SdpProblem problem = load_problem(a.source);
  SelfAdjointMatrix active = problem.cost();
  if (a.cost) {
    try {
      active = cost_from_json(io::read_json_file(*a.cost), problem);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("cost file: ") + e.what());
    }
  }
  const Matrix y = io::factor_from_json(io::read_json_file(a.y));
  if (y.rows() != problem.n()) throw Error(ErrorCode::kDimensionMismatch, "Y must have n rows");
  if (problem.field() == FieldTag::kReal && !y.imag().isZero(0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "complex Y for a real-field problem");
  }

  const FactorPoint point = build_factor_point(problem, active, y);
  const SospReport sosp = measure_sosp_at(point, a.lanczos_iters, a.seed).report;
  const double cost_norm = linalg::operator_norm(active, a.seed);
  const double r = problem.trace_bound();
  const double eps_g = a.eps_g.value_or(sosp.grad_norm);
  const double eps_h = a.eps_h.value_or(std::max(0.0, -sosp.hess_lower_bound));
  const Certificate cert = certify(
      point, CertificateInputs{eps_g, eps_h, sosp.sigma_k, r, problem.projector_bound(), cost_norm});

  Json o;
  o["certificate"] = io::certificate_to_json(cert);
  o["sosp"] = io::sosp_to_json(sosp);
  o["deterministic_gap_bound_measured"] =
      deterministic_gap_bound(cert.lambda_min_S, sosp.grad_norm, r);
  o["deterministic_gap_bound_target"] = cert.gap_upper_bound;
  o["eigenvalue_bound_holds"] = cert.lambda_min_S >= cert.eigenvalue_bound;

  Json p;
  p["instance"] = optional_json(a.source.instance);
  p["problem"] = optional_json(a.source.problem);
  p["y"] = a.y;
  p["cost"] = optional_json(a.cost);
  p["eps_g"] = a.eps_g ? Json(*a.eps_g) : Json(nullptr);
  p["eps_h"] = a.eps_h ? Json(*a.eps_h) : Json(nullptr);
  p["lanczos_iters"] = a.lanczos_iters;
  const std::string text =
      io::dump(run_record("certify", std::move(p), a.seed, seconds_since(t0), std::move(o)));
  if (a.out) {
    io::write_text_file(*a.out, text);
    out << "lambda_min_S=" << num(cert.lambda_min_S)
        << " dual_lower_bound=" << num(cert.dual_lower_bound)
        << " gap_upper_bound=" << num(cert.gap_upper_bound) << "\n";
  } else {
    out << text;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- perturb

struct PerturbArgs {
  Source source;
  double sigma_w = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out) {
  if (!(a.sigma_w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "--sigma-w must be >= 0");
  const SdpProblem problem = load_problem(a.source);
  const PerturbedCost p =
      perturb_cost(problem.cost(), WignerSpec{problem.n(), a.sigma_w, problem.field(), a.seed});
  const double w_norm = linalg::operator_norm(p.wigner, a.seed);
  const bool event = wigner_norm_event(p.wigner, a.sigma_w, problem.n());

  Json info;
  info["sigma_w"] = a.sigma_w;
  info["seed"] = a.seed;
  info["wigner_norm_op"] = w_norm;
  info["wigner_norm_event"] = event;

  Json j;
  if (a.source.problem) {
    j = io::problem_to_json(problem.with_cost(p.cost));
  } else {
    j["field"] = io::to_string(problem.field());
    j["n"] = problem.n();
    j["C"] = io::matrix_to_json(p.cost.matrix(), problem.field());
  }
  j["perturbation"] = std::move(info);
  io::write_text_file(a.out, io::dump(j));
  out << "wigner_norm_op=" << num(w_norm) << " wigner_norm_event=" << (event ? "true" : "false")
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- rank-bound

struct RankBoundArgs {
  double n = 0, m = 0, delta = 0, sigma_w = 0, c0 = 1.0, r = 0, k = 0, c_norm = 0;
};

int cmd_rank_bound(const RankBoundArgs& a, std::ostream& out) {
  SmoothedParams p;
  p.trace_bound = a.r;
  p.projector_bound = a.k;
  p.cost_norm = a.c_norm;
  p.n = a.n;
  p.m = a.m;
  p.sigma_w = a.sigma_w;
  p.delta = a.delta;
  p.c0 = a.c0;
  const Index k_min = min_rank(p);
  out << "k_min=" << k_min << "\n";
  out << "kappa=" << num(kappa(a.r, a.k, a.c_norm, a.n, a.sigma_w)) << "\n";
  out << "eta=" << num(eta(p)) << "\n";
  out << "rank_rhs=" << num(min_rank_rhs(p)) << "\n";
  out << "delta_term=" << num(std::sqrt(std::log(1.0 / a.delta))) << "\n";
  out << "note: c0=" << num(a.c0)
      << " stands in for an unknown universal constant; k_min and eta are not rigorous\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<Index> d_list;
  double oversampling = 10.0;
  int repeats = 4;
  std::string k_mode = "sqrt";
  std::uint64_t seed = 0;
  std::string csv;
  double noise_sigma = 1.0;
  int parallel = 1;
  std::optional<double> eps_g;
  std::optional<double> eps_h;
  int max_iters = 1000;
};

struct BenchRow {
  Index d = 0, n = 0, k = 0;
  std::uint64_t seed = 0;
  double wall_time = 0, objective = 0, grad_norm = 0, gap = 0;
  bool converged = false;
};

BenchRow bench_cell(const BenchArgs& a, Index d, std::uint64_t cell_seed) {
  const auto inst = phasecut::generate_instance(d, a.oversampling, a.noise_sigma, cell_seed);
  const SdpProblem problem = phasecut::build_sdp(inst);
  BenchRow row;
  row.d = d;
  row.n = inst.n;
  row.k = a.k_mode == "full" ? inst.n : phasecut::default_rank(inst.n);
  row.seed = cell_seed;
  SolverOptions opts;
  opts.eps_g = a.eps_g;
  opts.eps_H = a.eps_h;
  opts.seed = cell_seed;
  opts.max_outer_iters = a.max_iters;
  const SolveResult res = solve(problem, problem.cost(), row.k, std::nullopt, opts);
  const FactorPoint point = build_factor_point(problem, problem.cost(), res.y);
  row.wall_time = res.wall_time;
  row.objective = res.objective_value;
  row.grad_norm = res.sosp.grad_norm;
  row.gap = deterministic_gap_bound(point, res.sosp.grad_norm, problem.trace_bound());
  row.converged = res.converged;
  return row;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.d_list.empty()) throw Error(ErrorCode::kInvalidArgument, "--d-list is empty");
  if (a.repeats < 1 || a.parallel < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--repeats and --parallel must be >= 1");
  }
  // Fail on an unwritable path before spending time on solves.
  io::write_text_file(a.csv, std::string(kBenchHeader) + "\n");

  struct Cell {
    Index d;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Index d : a.d_list) {
    for (int r = 0; r < a.repeats; ++r) {
      // Independent of --k-mode so both modes see the same instances.
      cells.push_back({d, a.seed + 1000 * static_cast<std::uint64_t>(d) +
                              static_cast<std::uint64_t>(r)});
    }
  }
  std::vector<BenchRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        rows[i] = bench_cell(a, cells[i].d, cells[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(a.parallel, static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ostringstream csv;
  csv << kBenchHeader << "\n";
  bool all_converged = true;
  for (const BenchRow& r : rows) {
    csv << r.d << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << num(r.wall_time) << ','
        << num(r.objective) << ',' << num(r.grad_norm) << ',' << num(r.gap) << "\n";
    all_converged = all_converged && r.converged;
  }
  io::write_text_file(a.csv, csv.str());
  out << "wrote " << rows.size() << " rows to " << a.csv << "\n";
  return all_converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Burer-Monteiro solver, certificates and PhaseCut tooling", "smooth-sdp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a phase-retrieval instance");
  g->add_option("--d", gen.d, "Signal dimension")->required()->check(CLI::PositiveNumber);
  g->add_option("--oversampling", gen.oversampling, "Measurements per signal entry")
      ->capture_default_str();
  g->add_option("--noise-sigma", gen.noise_sigma, "Measurement noise standard deviation")
      ->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Instance JSON path")->required();

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "Solve the PhaseCut relaxation of an instance");
  s->add_option("--instance", sv.instance)->required();
  s->add_option("--k", sv.k, "Factor rank (default ceil(sqrt(n)))");
  s->add_option("--eps-g", sv.eps_g, "Gradient-norm target");
  s->add_option("--eps-h", sv.eps_h, "Hessian eigenvalue target");
  s->add_option("--sigma-w", sv.sigma_w, "Wigner perturbation level")->capture_default_str();
  s->add_option("--seed", sv.seed)->capture_default_str();
  s->add_option("--wigner-seed", sv.wigner_seed, "Seed of W (default seed + 1)");
  s->add_option("--c0", sv.c0, "Universal constant used by non-rigorous bounds")
      ->capture_default_str();
  s->add_option("--max-iters", sv.max_iters)->capture_default_str();
  s->add_option("--lanczos-iters", sv.lanczos_iters)->capture_default_str();
  s->add_option("--report", sv.report, "RunRecord JSON path")->required();
  s->add_option("--y-out", sv.y_out, "Write the final factor Y here");

  CertifyArgs ct;
  auto* c = app.add_subcommand("certify", "Certify an existing factor Y");
  c->add_option("--instance", ct.source.instance);
  c->add_option("--problem", ct.source.problem);
  c->add_option("--y", ct.y, "Factor JSON")->required();
  c->add_option("--cost", ct.cost, "Active cost JSON, e.g. from perturb");
  c->add_option("--eps-g", ct.eps_g, "Target eps_g (default: measured)");
  c->add_option("--eps-h", ct.eps_h, "Target eps_H (default: measured)");
  c->add_option("--seed", ct.seed)->capture_default_str();
  c->add_option("--lanczos-iters", ct.lanczos_iters)->capture_default_str();
  c->add_option("--out", ct.out, "Output path (default stdout)");

  PerturbArgs pt;
  auto* p = app.add_subcommand("perturb", "Emit C + W for a Wigner matrix W");
  p->add_option("--instance", pt.source.instance);
  p->add_option("--problem", pt.source.problem);
  p->add_option("--sigma-w", pt.sigma_w)->required();
  p->add_option("--seed", pt.seed)->capture_default_str();
  p->add_option("--out", pt.out)->required();

  RankBoundArgs rb;
  auto* r = app.add_subcommand("rank-bound", "Smoothed-analysis rank condition");
  r->add_option("--n", rb.n)->required();
  r->add_option("--m", rb.m)->required();
  r->add_option("--delta", rb.delta)->required();
  r->add_option("--sigma-w", rb.sigma_w)->required();
  r->add_option("--c0", rb.c0)->capture_default_str();
  r->add_option("--R", rb.r)->required();
  r->add_option("--K", rb.k)->required();
  r->add_option("--c-norm", rb.c_norm)->required();

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "Timing sweep over signal sizes, CSV output");
  b->add_option("--d-list", bn.d_list, "Comma-separated signal dimensions")
      ->required()
      ->delimiter(',');
  b->add_option("--oversampling", bn.oversampling)->capture_default_str();
  b->add_option("--repeats", bn.repeats)->capture_default_str();
  b->add_option("--k-mode", bn.k_mode)
      ->check(CLI::IsMember({"sqrt", "full"}))
      ->capture_default_str();
  b->add_option("--seed", bn.seed)->capture_default_str();
  b->add_option("--csv", bn.csv)->required();
  b->add_option("--noise-sigma", bn.noise_sigma)->capture_default_str();
  b->add_option("--parallel", bn.parallel)->capture_default_str();
  b->add_option("--eps-g", bn.eps_g);
  b->add_option("--eps-h", bn.eps_h);
  b->add_option("--max-iters", bn.max_iters)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  apply_thread_cap();
  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (s->parsed()) return cmd_solve(sv, out);
    if (c->parsed()) return cmd_certify(ct, out);
    if (p->parsed()) return cmd_perturb(pt, out);
    if (r->parsed()) return cmd_rank_bound(rb, out);
    if (b->parsed()) return cmd_bench(bn, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace smooth_sdp::cli
