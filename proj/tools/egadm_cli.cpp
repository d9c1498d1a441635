// egadm: generate instances, solve one, or run a benchmark sweep.
//
// Exit codes: 0 converged (or command finished), 2 iteration cap hit, 1 error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egadm/bench.hpp"
#include "egadm/instance_io.hpp"

namespace fs = std::filesystem;
using namespace egadm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCap = 2;

struct SharedFlags {
  std::string gamma;  // number or "auto"
  std::optional<double> safety;
  double tol = 1e-4;
  long max_iters = 20000;
  bool monitor_lemma = false;
  double alpha = 5e-4;
  double beta = 5e-2;
};

void add_solver_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--gamma", f.gamma, "step size, a positive number or 'auto'");
  cmd->add_option("--safety", f.safety, "auto step factor: gamma = safety / (2 L_hat)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "stopping tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters, "iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--monitor-lemma", f.monitor_lemma,
                "evaluate the extragradient descent inequality (egl)");
  cmd->add_option("--alpha", f.alpha, "fused: l1 weight")->capture_default_str();
  cmd->add_option("--beta", f.beta, "fused: fusion weight")->capture_default_str();
}

bench::SolverOverrides overrides_from(const SharedFlags& f) {
  bench::SolverOverrides o;
  if (f.gamma == "auto") {
    o.auto_gamma = true;
  } else if (!f.gamma.empty()) {
    std::size_t used = 0;
    double g = 0.0;
    try {
      g = std::stod(f.gamma, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.gamma.size() || !(g > 0.0)) {
      throw CLI::ValidationError("--gamma", "expected a positive number or 'auto'");
    }
    o.gamma = g;
  }
  o.safety = f.safety;
  o.tol = f.tol;
  o.max_iters = f.max_iters;
  o.monitor_lemma = f.monitor_lemma;
  return o;
}

Variant variant_from(const std::string& s) {
  const auto v = parse_variant(s);
  if (!v) throw CLI::ValidationError("--variant", "expected gl, gal, egl or egal");
  return *v;
}

std::vector<Variant> variants_from(const std::string& list) {
  std::vector<Variant> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(variant_from(tok));
  if (out.empty()) throw CLI::ValidationError("--variants", "empty list");
  return out;
}

bench::Dims dims_from(const std::string& s, bench::ProblemKind kind) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stol(tok));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--dims", "bad entry '" + s + "'");
    }
  }
  if (kind == bench::ProblemKind::BasisPursuit) {
    if (v.size() != 3) throw CLI::ValidationError("--dims", "bp expects n,m,s");
    return {v[0], v[1], v[2]};
  }
  if (v.size() != 2) throw CLI::ValidationError("--dims", "fused expects n,m");
  return {v[0], v[1], 0};
}

void write_coef(const std::string& path, const Vector& x) {
  if (path.empty()) return;
  io::write_vector(path, x);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extragradient alternating direction solvers"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded instance directory");
  gen->require_subcommand(1);
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  long gen_n = 0, gen_m = 0, gen_s = 0;
  std::string gen_pattern = "blocks";

  auto* gen_bp = gen->add_subcommand("bp", "basis pursuit instance");
  gen_bp->add_option("--n", gen_n, "signal length")->required();
  gen_bp->add_option("--m", gen_m, "measurements")->required();
  gen_bp->add_option("--s", gen_s, "sparsity")->required();
  gen_bp->add_option("--seed", gen_seed)->capture_default_str();
  gen_bp->add_option("--out", gen_out, "output directory")->required();

  auto* gen_fused = gen->add_subcommand("fused", "fused logistic instance");
  gen_fused->add_option("--pattern", gen_pattern, "simple or blocks")
      ->check(CLI::IsMember({"simple", "blocks"}))
      ->capture_default_str();
  gen_fused->add_option("--n", gen_n, "features")->required();
  gen_fused->add_option("--m", gen_m, "samples")->required();
  gen_fused->add_option("--seed", gen_seed)->capture_default_str();
  gen_fused->add_option("--out", gen_out, "output directory")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance, print JSON");
  std::string solve_dir, solve_variant = "egl", emit_coef;
  SharedFlags solve_flags;
  solve_cmd->add_option("instance", solve_dir, "instance directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  solve_cmd->add_option("--variant", solve_variant, "gl, gal, egl or egal")
      ->capture_default_str();
  solve_cmd->add_option("--emit-coef", emit_coef, "write x, one value per line");
  add_solver_flags(solve_cmd, solve_flags);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "seeded sweep, CSV output");
  std::string bench_problem = "bp", bench_out, bench_variants = "gl,gal,egl,egal",
              bench_pattern = "blocks";
  std::vector<std::string> bench_dims;
  int bench_instances = 10;
  std::uint64_t bench_seed = 1;
  SharedFlags bench_flags;
  bench_cmd->add_option("--problem", bench_problem, "bp or fused")
      ->check(CLI::IsMember({"bp", "fused"}))
      ->capture_default_str();
  bench_cmd->add_option("--dims", bench_dims, "n,m,s (bp) or n,m (fused); repeatable")
      ->required();
  bench_cmd->add_option("--instances", bench_instances, "instances per dims entry")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--variants,--variant", bench_variants,
                        "comma-separated variant list")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "seed base")->capture_default_str();
  bench_cmd->add_option("--pattern", bench_pattern, "fused: simple or blocks")
      ->check(CLI::IsMember({"simple", "blocks"}))
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "CSV path (summary goes to <stem>.summary.csv)")
      ->required();
  add_solver_flags(bench_cmd, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (gen->parsed()) {
      if (gen_bp->parsed()) {
        io::write_instance(gen_out, bp::generate_bp(gen_n, gen_m, gen_s, gen_seed));
      } else {
        const auto pattern = *fused::parse_pattern(gen_pattern);
        io::write_instance(gen_out, fused::generate(pattern, gen_n, gen_m, gen_seed));
      }
      std::cout << fs::path(gen_out).string() << '\n';
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      const Variant v = variant_from(solve_variant);
      const auto o = overrides_from(solve_flags);
      bench::SolveOutput out;
      if (io::detect_kind(solve_dir) == io::InstanceKind::BasisPursuit) {
        out = bench::solve_instance(io::read_bp_instance(solve_dir), v, o);
      } else {
        const fused::FusedLogisticConfig fc{solve_flags.alpha, solve_flags.beta,
                                            std::nullopt, 0.9};
        out = bench::solve_instance(io::read_fused_instance(solve_dir), v, o, fc);
      }
      std::cout << bench::to_json(out.row).dump() << '\n';
      if (!out.row.failure.empty()) {
        std::cerr << "egadm: " << out.row.failure << '\n';
        return kExitError;
      }
      write_coef(emit_coef, out.coefficients);
      return out.row.converged ? kExitOk : kExitCap;
    }

    if (bench_cmd->parsed()) {
      bench::BenchSpec spec;
      spec.kind = bench_problem == "bp" ? bench::ProblemKind::BasisPursuit
                                        : bench::ProblemKind::FusedLogistic;
      for (const auto& d : bench_dims) spec.dims.push_back(dims_from(d, spec.kind));
      spec.instances = bench_instances;
      spec.variants = variants_from(bench_variants);
      spec.seed_base = bench_seed;
      spec.solver = overrides_from(bench_flags);
      spec.pattern = *fused::parse_pattern(bench_pattern);
      spec.alpha = bench_flags.alpha;
      spec.beta = bench_flags.beta;

      const auto rows = bench::run_bench(spec);
      const fs::path csv(bench_out);
      {
        std::ofstream f(csv, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + csv.string());
        bench::write_csv(f, rows);
      }
      fs::path summary = csv;
      summary.replace_extension();
      summary += ".summary.csv";
      {
        std::ofstream f(summary, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + summary.string());
        bench::write_summary(f, rows);
      }
      bench::write_summary(std::cout, rows);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "egadm: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "egadm: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
