#include "egadm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace egadm::bench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void apply_gamma(SolverConfig& sc, const SolverOverrides& o,
                 std::optional<double> fallback) {
  if (o.safety) sc.safety = *o.safety;
  if (o.gamma) {
    sc.gamma = *o.gamma;
  } else if (o.auto_gamma || o.safety) {
    sc.gamma.reset();
  } else {
    sc.gamma = fallback;
  }
}

ResultRow failed_row(std::string problem, Variant v, std::uint64_t seed,
                     const std::exception& e) {
  ResultRow row;
  row.problem = std::move(problem);
  row.variant = v;
  row.seed = seed;
  row.failure = e.what();
  if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) {
    row.iterations = d->iteration();
  }
  return row;
}

}  // namespace

std::string problem_id(const bp::BasisPursuitInstance& inst) {
  return "bp-n" + std::to_string(inst.n()) + "-m" + std::to_string(inst.m()) +
         "-s" + std::to_string(inst.s);
}

std::string problem_id(const fused::FusedLogisticInstance& inst) {
  return "fused-" + std::string(fused::to_string(inst.pattern)) + "-n" +
         std::to_string(inst.n()) + "-m" + std::to_string(inst.m());
}

SolverConfig bp_config(Variant v, const SolverOverrides& o) {
  SolverConfig sc;
  sc.variant = v;
  apply_gamma(sc, o, bp::kDefaultGamma);
  sc.max_iters = o.max_iters;
  if (o.tol) sc.stop.tol = *o.tol;
  sc.monitor_lemma = o.monitor_lemma;
  return sc;
}

SolverConfig fused_config(Variant v, const SolverOverrides& o,
                          const fused::FusedLogisticConfig& fc) {
  SolverConfig sc = fused::algorithm1_config(fc, fused::default_stop_rule(),
                                             o.max_iters);
  sc.variant = v;
  apply_gamma(sc, o, fc.gamma);
  if (o.tol) sc.stop.tol = *o.tol;
  sc.monitor_lemma = o.monitor_lemma;
  return sc;
}

SolveOutput solve_instance(const bp::BasisPursuitInstance& inst, Variant v,
                           const SolverOverrides& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutput out;
  try {
    const TwoBlockProblem p = bp::as_problem(inst);
    const SolveReport r = solve(p, bp_config(v, o));
    out.row.iterations = r.iterations;
    out.row.converged = r.converged;
    out.row.lemma_violations = r.lemma_violations;
    out.row.gamma = r.gamma;
    out.row.error = bp::recovery_error(inst, r.final_state.x);
    out.coefficients = r.final_state.x;
  } catch (const std::exception& e) {
    out.row = failed_row({}, v, inst.seed, e);
  }
  out.row.problem = problem_id(inst);
  out.row.variant = v;
  out.row.seed = inst.seed;
  out.row.seconds = seconds_since(t0);
  return out;
}

SolveOutput solve_instance(const fused::FusedLogisticInstance& inst, Variant v,
                           const SolverOverrides& o,
                           const fused::FusedLogisticConfig& fc) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutput out;
  try {
    const TwoBlockProblem p = fused::as_problem(inst, fc);
    const SolveReport r = solve(p, fused_config(v, o, fc));
    out.row.iterations = r.iterations;
    out.row.converged = r.converged;
    out.row.lemma_violations = r.lemma_violations;
    out.row.gamma = r.gamma;
    out.coefficients = fused::coefficients(r, inst.n());
    const auto sp = fused::sparsity_report(out.coefficients);
    out.row.l0 = sp.l0;
    out.row.tv0 = sp.tv0;
  } catch (const std::exception& e) {
    out.row = failed_row({}, v, inst.seed, e);
  }
  out.row.problem = problem_id(inst);
  out.row.variant = v;
  out.row.seed = inst.seed;
  out.row.seconds = seconds_since(t0);
  return out;
}

std::vector<ResultRow> run_bench(const BenchSpec& spec) {
  if (spec.instances < 1) throw std::invalid_argument("bench: instances must be >= 1");
  if (spec.dims.empty()) throw std::invalid_argument("bench: empty dimension list");
  if (spec.variants.empty()) throw std::invalid_argument("bench: empty variant list");

  std::vector<ResultRow> rows;
  rows.reserve(spec.dims.size() * spec.variants.size() *
               static_cast<std::size_t>(spec.instances));
  const fused::FusedLogisticConfig fc{spec.alpha, spec.beta, std::nullopt, 0.9};

  for (const Dims& d : spec.dims) {
    if (spec.kind == ProblemKind::BasisPursuit) {
      std::vector<bp::BasisPursuitInstance> insts;
      for (int i = 0; i < spec.instances; ++i) {
        insts.push_back(bp::generate_bp(d.n, d.m, d.s, spec.seed_base + i));
      }
      for (Variant v : spec.variants)
        for (const auto& inst : insts)
          rows.push_back(solve_instance(inst, v, spec.solver).row);
    } else {
      std::vector<fused::FusedLogisticInstance> insts;
      for (int i = 0; i < spec.instances; ++i) {
        insts.push_back(fused::generate(spec.pattern, d.n, d.m, spec.seed_base + i));
      }
      for (Variant v : spec.variants)
        for (const auto& inst : insts)
          rows.push_back(solve_instance(inst, v, spec.solver, fc).row);
    }
  }
  return rows;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Fields never contain commas or quotes except problem ids we build
// ourselves; quote defensively anyway.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.problem) << ',' << to_string(r.variant) << ',' << r.seed
        << ',' << r.iterations << ',' << (r.error ? format_real(*r.error) : "")
        << ',' << (r.l0 ? std::to_string(*r.l0) : "") << ','
        << (r.tv0 ? std::to_string(*r.tv0) : "") << ',' << format_real(r.seconds)
        << ',' << (r.converged ? "true" : "false") << ',' << r.lemma_violations
        << "\r\n";
  }
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  struct Acc {
    std::vector<double> iters, err, l0, tv0, secs;
    long count = 0, converged = 0;
  };
  // keep first-seen order of (problem, variant)
  std::vector<std::pair<std::string, Variant>> order;
  std::map<std::pair<std::string, int>, Acc> acc;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.problem, static_cast<int>(r.variant));
    if (!acc.count(key)) order.emplace_back(r.problem, r.variant);
    Acc& a = acc[key];
    ++a.count;
    if (r.converged) ++a.converged;
    a.iters.push_back(static_cast<double>(r.iterations));
    if (r.error) a.err.push_back(*r.error);
    if (r.l0) a.l0.push_back(static_cast<double>(*r.l0));
    if (r.tv0) a.tv0.push_back(static_cast<double>(*r.tv0));
    a.secs.push_back(r.seconds);
  }
  auto med = [](const std::vector<double>& v) {
    return v.empty() ? std::string() : format_real(median(v));
  };
  out << "problem,variant,runs,converged,median_iters,median_err,median_l0,"
         "median_tv0,median_seconds\r\n";
  for (const auto& [problem, v] : order) {
    const Acc& a = acc.at({problem, static_cast<int>(v)});
    out << csv_field(problem) << ',' << to_string(v) << ',' << a.count << ','
        << a.converged << ',' << med(a.iters) << ',' << med(a.err) << ','
        << med(a.l0) << ',' << med(a.tv0) << ',' << med(a.secs) << "\r\n";
  }
}

nlohmann::json to_json(const ResultRow& r) {
  nlohmann::json j;
  j["problem"] = r.problem;
  j["variant"] = std::string(to_string(r.variant));
  j["seed"] = r.seed;
  j["iters"] = r.iterations;
  j["err"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  j["l0"] = r.l0 ? nlohmann::json(*r.l0) : nlohmann::json(nullptr);
  j["tv0"] = r.tv0 ? nlohmann::json(*r.tv0) : nlohmann::json(nullptr);
  j["seconds"] = r.seconds;
  j["converged"] = r.converged;
  j["lemma_violations"] = r.lemma_violations;
  j["gamma"] = r.gamma;
  if (!r.failure.empty()) j["error_message"] = r.failure;
  return j;
}

}  // namespace egadm::bench
