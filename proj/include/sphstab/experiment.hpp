#pragma once

// Perturbed-instance generation and the recovery experiment harness: every
// (eps, replicate) pair is perturbed, recovered, cross-checked with Procrustes
// and reported as one CSV row.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphstab/packing_json.hpp"
#include "sphstab/polytopes.hpp"

namespace sphstab {

enum class PerturbationMode { TangentGaussian, TangentUniform };

std::string to_string(PerturbationMode mode);
/// "tangent-gaussian" / "tangent-uniform"; throws InputError otherwise.
PerturbationMode parse_perturbation_mode(const std::string& name);

/// Seed of the stream for replicate `replicate` at grid position `eps_index`.
/// Streams depend only on these three numbers, so results do not depend on
/// the order in which rows are computed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t eps_index, std::uint64_t replicate);

/// Moves every vertex inside its tangent space by an angle <= eps and
/// renormalizes. A move that brings the point closer than 2(phi - eps) to an
/// already placed point is re-drawn (100 tries), then shortened. eps = 0
/// returns the vertices unchanged. Throws HypothesisError for eps < 0 or when
/// the separation cannot be met.
Packing perturb(const PolytopeSpec& polytope, double eps, std::uint64_t seed,
                PerturbationMode mode = PerturbationMode::TangentUniform);

struct ExperimentConfig {
  PolytopeType type{PolytopeKind::Simplex, 3};
  std::vector<double> eps;
  int seeds = 10;
  std::uint64_t seed = 1;
  PerturbationMode mode = PerturbationMode::TangentUniform;
  std::string out;  // empty: caller decides
  int jobs = 1;
  bool timing = false;     // wall time breaks byte-identical output, so it is opt-in
  bool procrustes = true;  // Procrustes cross-check per row
};

/// Throws InputError for an empty or non-positive eps list, seeds < 1 or jobs < 1.
void validate_config(const ExperimentConfig& config);

struct ExperimentRow {
  std::string kind;
  int d = 0;
  double eps = 0.0;
  int eps_index = 0;
  int seed = 0;  // replicate index
  double min_separation = 0.0;
  int k = 0;
  double max_deviation = 0.0;
  double ratio = 0.0;  // max_deviation / eps
  double constant = 0.0;
  double certified_bound = 0.0;
  bool pass = false;
  double procrustes_max_deviation = 0.0;
  double agreement = 0.0;  // max(a/b, b/a) of the two deviations, 1 when both vanish
  std::optional<bool> step1_ok;  // icosahedron / 600-cell only
  std::string status;            // "ok", "exploratory" or "error: ..."
  std::optional<double> wall_time;
  bool failed() const { return !pass || status.rfind("error", 0) == 0; }
};

struct ExperimentSummary {
  double eps = 0.0;
  int rows = 0;
  int passed = 0;
  double max_deviation = 0.0;
  double max_ratio = 0.0;
  double max_agreement = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;  // eps-major, then replicate
  std::vector<ExperimentSummary> summaries;
  int failures() const;
};

/// Runs every (eps, replicate) pair on `jobs` threads; per-row exceptions are
/// recorded in the row status. Output order is fixed by the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Versioned CSV: a "# sphstab experiment csv v1" comment, the header, the
/// rows and one summary row per eps (seed column "summary").
std::string experiment_csv(const ExperimentResult& result);

}  // namespace sphstab
