#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "egadm/basis_pursuit.hpp"
#include "egadm/fused_logistic.hpp"
#include "egadm/solver.hpp"

namespace egadm::bench {

enum class ProblemKind { BasisPursuit, FusedLogistic };

struct Dims {
  Index n = 0;
  Index m = 0;
  Index s = 0;  ///< basis pursuit only
};

/// Shared solver knobs. Step size resolution: an explicit gamma wins; else
/// auto_gamma (or an explicit safety) gives safety / (2 L_hat); else the
/// problem default (kDefaultGamma for basis pursuit, auto for fused).
struct SolverOverrides {
  std::optional<double> gamma;
  bool auto_gamma = false;
  std::optional<double> safety;
  std::optional<double> tol;  ///< default 1e-4 under the problem's stop rule
  long max_iters = 20000;
  bool monitor_lemma = false;
};

struct BenchSpec {
  ProblemKind kind = ProblemKind::BasisPursuit;
  std::vector<Dims> dims;
  int instances = 10;
  std::vector<Variant> variants{Variant::GL, Variant::GAL, Variant::EGL,
                                Variant::EGAL};
  std::uint64_t seed_base = 1;  ///< instance i uses seed_base + i
  SolverOverrides solver;
  fused::Pattern pattern = fused::Pattern::Blocks;
  double alpha = 5e-4;
  double beta = 5e-2;
};

struct ResultRow {
  std::string problem;
  Variant variant = Variant::EGL;
  std::uint64_t seed = 0;
  long iterations = 0;
  std::optional<double> error;  ///< |x - x_hat| (basis pursuit)
  std::optional<Index> l0;      ///< fused
  std::optional<Index> tv0;     ///< fused
  double seconds = 0.0;
  bool converged = false;
  long lemma_violations = 0;
  double gamma = 0.0;
  std::string failure;  ///< empty unless the solve threw
};

struct SolveOutput {
  ResultRow row;
  Vector coefficients;  ///< empty when the solve failed
};

std::string problem_id(const bp::BasisPursuitInstance& inst);
std::string problem_id(const fused::FusedLogisticInstance& inst);

SolverConfig bp_config(Variant v, const SolverOverrides& o);
SolverConfig fused_config(Variant v, const SolverOverrides& o,
                          const fused::FusedLogisticConfig& fc);

/// Solver errors (divergence, bad step) become failed rows.
SolveOutput solve_instance(const bp::BasisPursuitInstance& inst, Variant v,
                           const SolverOverrides& o);
SolveOutput solve_instance(const fused::FusedLogisticInstance& inst, Variant v,
                           const SolverOverrides& o,
                           const fused::FusedLogisticConfig& fc);

/// Rows ordered by dims entry, then variant, then seed.
std::vector<ResultRow> run_bench(const BenchSpec& spec);

inline constexpr const char* kCsvHeader =
    "problem,variant,seed,iters,err,l0,tv0,seconds,converged,lemma_violations";

/// %.17g
std::string format_real(double v);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Per (problem, variant): count, converged count, median iters, err, l0,
/// tv0 and seconds.
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows);

nlohmann::json to_json(const ResultRow& row);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> v);

}  // namespace egadm::bench
