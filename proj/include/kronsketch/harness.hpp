#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kronsketch/bounds.hpp"
#include "kronsketch/core.hpp"
#include "kronsketch/cp.hpp"
#include "kronsketch/sketch.hpp"

namespace kronsketch {

// Input distributions of the synthetic benchmark: dense standard normal
// factors; 3-sparse factors with N(0, 100^2) values at distinct uniform
// positions; single-spike factors with one entry equal to 100 at a uniform
// position.
enum class InputDistribution { Normal, Sparse3, Spike };

std::string to_string(InputDistribution dist);
InputDistribution input_distribution_from_string(const std::string& name);

KronVector gen_input(InputDistribution dist, std::span<const Index> shape,
                     std::uint64_t seed);

// Distortion statistics of one (kind, J) cell.
struct TrialStats {
    std::string kind;
    Index j = 0;
    Index trials = 0;  // trials with a nonzero denominator
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation (n-1)
    double max = 0.0;
    std::uint64_t seed = 0;
    double wallclock_ms = 0.0;
};

struct ExperimentConfig {
    std::vector<Index> shape;
    InputDistribution dist = InputDistribution::Normal;
    std::vector<SketchKind> kinds;
    std::vector<Index> j_grid;
    Index trials = 1000;
    std::uint64_t seed = 0;
    bool with_replacement = false;  // kfjlt row-sampling mode
    int threads = 1;                // 0 = hardware concurrency
    bool timing = true;             // set false for byte-stable CSV output
    bool keep_trials = false;       // retain raw per-trial metrics
    bool include_gaussian = false;  // force the dense baseline into exp2
    Index cap = kMaterializeCap;
};

struct ExperimentResult {
    std::vector<TrialStats> stats;
    // Raw per-trial metrics aligned with `stats`, when keep_trials is set.
    std::vector<std::vector<double>> trial_values;
    Index skipped_pairs = 0;          // identical input pairs (exp1)
    Index rank_deficient_events = 0;  // sampling marginals renormalized
};

// Synthetic pairwise-distance benchmark: per (kind, J, trial) a fresh input
// pair and a fresh operator, metric |  ||f(x)-f(y)|| / ||x-y||  - 1 |.
// Seeds per trial come from derive_seed(master, tag, kind, J, trial), so
// results are independent of scheduling.
ExperimentResult run_experiment1(const ExperimentConfig& cfg);

// CP-pair distance benchmark: the pair stays fixed, only operators are
// redrawn; metric | est/exact - 1 | with the exact Frobenius distance
// computed once. The kfjlt kind runs on a zero-row-padded copy when factor
// sizes are not powers of two (padding changes nothing about the distance).
// The dense gaussian baseline is excluded unless include_gaussian is set.
ExperimentResult run_experiment2(const ExperimentConfig& cfg,
                                 const CpTensor& a, const CpTensor& b);

// Percentage of rows removed by a sketch of output size j on an ambient
// dimension of dim.
double row_reduction_percent(Index dim, Index j);

// Versioned CSV schema shared by the experiment subcommands.
std::string csv_schema_version();
std::string csv_header();
std::string csv_row(const TrialStats& s);
void write_csv(std::ostream& out, std::span<const TrialStats> stats);

// One row of the bound-calculator sweep.
struct BoundsRow {
    double eps = 0.0;
    double delta = 0.0;
    double subspace = 0.0;    // Kronecker subspace-embedding bound
    double jlt = 0.0;         // pairwise-distance bound
    double simplified = 0.0;  // large-N simplified form
    double jin = 0.0;         // comparison bound (Jin, Kolda & Ward)
    double min_bound = 0.0;
};

std::vector<BoundsRow> bounds_table(const BoundInputs& base,
                                    std::span<const double> eps_values,
                                    std::span<const double> delta_values,
                                    double c1 = 1.0, double c2 = 1.0,
                                    double c = 1.0,
                                    LogBase log_base = LogBase::E);

// Chunked parallel loop with a shared atomic cursor; fn must be safe to run
// concurrently for distinct indices. threads <= 1 runs inline; 0 uses the
// hardware concurrency.
void parallel_for(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace kronsketch
