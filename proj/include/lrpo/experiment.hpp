#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrpo/generators.hpp"
#include "lrpo/params.hpp"
#include "lrpo/partition.hpp"
#include "lrpo/seeds.hpp"

namespace lrpo {

struct ExperimentSpec {
    GeneratorKind generator = GeneratorKind::Cycle;
    std::uint64_t n = 64;
    Params params;
    std::uint32_t seed_count = 10;     // independent seed resamplings
    std::uint64_t rng_seed = 1;        // graph generation + per-run seed derivation
    std::uint64_t label_universe = 0;  // 0: labels are 1..n
    std::uint32_t oracle_checks = 4;   // local-oracle cross-checks per run
};

struct RunRecord {
    std::uint32_t run_index = 0;
    std::uint64_t seed_digest = 0;
    std::uint64_t cut_edges = 0;
    double cut_fraction = 0;  // cut / (d * n)
    std::uint64_t max_component = 0;
    std::uint64_t sum_x = 0;  // charging quantity, summed over phases
    std::uint64_t cutoff_phase = 0;  // first h with |F_h| < beta*n (0 = never)
    std::uint64_t oracle_max_queries = 0;
};

struct Report {
    ExperimentSpec spec;
    std::uint64_t edges = 0;
    RandomnessLedger ledger;
    std::vector<RunRecord> runs;
    double mean_cut_fraction = 0;
    double median_cut_fraction = 0;
    double q23_cut_fraction = 0;  // 2/3-quantile, mirroring the 2/3 success bound
    std::uint64_t max_component = 0;
    double mean_sum_x_over_n = 0;
};

/// Runs global_partition over fresh seed bundles, re-validating every
/// partition invariant per run and cross-checking random local-oracle
/// queries against the global components. Any violation throws
/// std::runtime_error with a counterexample description.
Report run_experiment(const ExperimentSpec& spec);

std::string report_to_json(const Report& report);
std::string report_to_csv(const Report& report);

struct CalibrationResult {
    bool found = false;
    Params params;
    double median_cut_fraction = 1.0;
    std::uint32_t points_tried = 0;
    std::string summary;
};

/// Deterministic grid search over the documented practical lattice
/// (phi-major ascending), returning the first point whose median
/// cut_fraction over `runs_per_point` fresh seeds meets the target with the
/// component-size bound intact. found=false reports a calibration failure.
CalibrationResult calibrate(GeneratorKind generator, std::uint64_t n, double target,
                            double epsilon = 0.5, std::uint64_t rng_seed = 1,
                            std::uint32_t runs_per_point = 21);

}  // namespace lrpo
