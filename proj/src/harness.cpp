#include "kronsketch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "kronsketch/hadamard.hpp"
#include "kronsketch/rng.hpp"

namespace kronsketch {

std::string to_string(InputDistribution dist) {
    switch (dist) {
        case InputDistribution::Normal: return "normal";
        case InputDistribution::Sparse3: return "sparse3";
        case InputDistribution::Spike: return "spike";
    }
    return "?";
}

InputDistribution input_distribution_from_string(const std::string& name) {
    if (name == "normal") return InputDistribution::Normal;
    if (name == "sparse3") return InputDistribution::Sparse3;
    if (name == "spike") return InputDistribution::Spike;
    throw std::invalid_argument("unknown input distribution: " + name);
}

KronVector gen_input(InputDistribution dist, std::span<const Index> shape,
                     std::uint64_t seed) {
    shape_dim(shape);
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Eigen::VectorXd> factors;
    factors.reserve(shape.size());
    for (Index n : shape) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        switch (dist) {
            case InputDistribution::Normal:
                for (Index i = 0; i < n; ++i) f[i] = normal(rng);
                break;
            case InputDistribution::Sparse3: {
                if (n < 3)
                    throw std::invalid_argument(
                        "gen_input: sparse3 needs factor sizes >= 3");
                // Three distinct positions via partial Fisher-Yates.
                std::vector<Index> pool(n);
                std::iota(pool.begin(), pool.end(), Index(0));
                for (int k = 0; k < 3; ++k) {
                    std::uniform_int_distribution<Index> d(k, n - 1);
                    std::swap(pool[k], pool[d(rng)]);
                    f[pool[k]] = 100.0 * normal(rng);
                }
                break;
            }
            case InputDistribution::Spike: {
                std::uniform_int_distribution<Index> d(0, n - 1);
                f[d(rng)] = 100.0;
                break;
            }
        }
        factors.push_back(std::move(f));
    }
    return KronVector(std::move(factors));
}

void parallel_for(Index n, int threads, const std::function<void(Index)>& fn) {
    if (threads == 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (Index i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(
        std::min<Index>(n, static_cast<Index>(threads)));
    std::atomic<Index> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const Index i = cursor.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

namespace {

struct Accumulated {
    Index used = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double max = 0.0;
};

Accumulated reduce_metrics(const std::vector<double>& values) {
    Accumulated acc;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        ++acc.used;
        sum += v;
        acc.max = std::max(acc.max, v);
    }
    if (acc.used == 0) return acc;
    acc.mean = sum / static_cast<double>(acc.used);
    if (acc.used > 1) {
        double ss = 0.0;
        for (double v : values) {
            if (std::isnan(v)) continue;
            const double d = v - acc.mean;
            ss += d * d;
        }
        acc.std_dev = std::sqrt(ss / static_cast<double>(acc.used - 1));
    }
    return acc;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

ExperimentResult run_experiment1(const ExperimentConfig& cfg) {
    if (cfg.shape.empty() || cfg.j_grid.empty() || cfg.kinds.empty())
        throw std::invalid_argument(
            "run_experiment1: shape, J grid and kinds must be nonempty");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_experiment1: trials must be >= 1");

    ExperimentResult result;
    std::atomic<Index> skipped{0};
    std::atomic<Index> deficient{0};

    for (SketchKind kind : cfg.kinds) {
        const auto kind_id = static_cast<std::uint64_t>(kind);
        for (Index j : cfg.j_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<double> values(
                cfg.trials, std::numeric_limits<double>::quiet_NaN());

            parallel_for(cfg.trials, cfg.threads, [&](Index trial) {
                const std::uint64_t in_seed = derive_seed(
                    cfg.seed, "exp1.input", kind_id, j, trial);
                const std::uint64_t op_seed =
                    derive_seed(cfg.seed, "exp1.op", kind_id, j, trial);

                const KronVector x = gen_input(cfg.dist, cfg.shape,
                                               derive_seed(in_seed, "x"));
                const KronVector y = gen_input(cfg.dist, cfg.shape,
                                               derive_seed(in_seed, "y"));
                const double denom = kron_distance(x, y);
                if (denom <= 0.0) {  // identical pair, metric undefined
                    skipped.fetch_add(1);
                    return;
                }

                SketchOptions options;
                options.with_replacement = cfg.with_replacement;
                options.materialize_cap = cfg.cap;
                // The sampling kind estimates row scores of the matrix the
                // trial actually sketches: the two inputs side by side.
                std::vector<Eigen::MatrixXd> pair_factors;
                if (kind == SketchKind::Sampling) {
                    pair_factors.reserve(cfg.shape.size());
                    for (std::size_t p = 0; p < cfg.shape.size(); ++p) {
                        Eigen::MatrixXd f(cfg.shape[p], 2);
                        f.col(0) = x.factor(p);
                        f.col(1) = y.factor(p);
                        pair_factors.push_back(std::move(f));
                    }
                }
                std::optional<KrMatrix> target;
                if (!pair_factors.empty()) {
                    target.emplace(std::move(pair_factors));
                    options.sampling_target = &*target;
                }

                const auto op =
                    make_sketch(kind, cfg.shape, j, op_seed, options);
                if (const auto* s =
                        dynamic_cast<const SamplingSketch*>(op.get());
                    s && s->rank_deficient())
                    deficient.fetch_add(1);

                const double num = (op->apply(x) - op->apply(y)).norm();
                values[trial] = std::abs(num / denom - 1.0);
            });

            const Accumulated acc = reduce_metrics(values);
            TrialStats row;
            row.kind = to_string(kind);
            row.j = j;
            row.trials = acc.used;
            row.mean = acc.mean;
            row.std_dev = acc.std_dev;
            row.max = acc.max;
            row.seed = cfg.seed;
            row.wallclock_ms = cfg.timing ? elapsed_ms(t0) : 0.0;
            result.stats.push_back(std::move(row));
            if (cfg.keep_trials) result.trial_values.push_back(values);
        }
    }
    result.skipped_pairs = skipped.load();
    result.rank_deficient_events = deficient.load();
    return result;
}

ExperimentResult run_experiment2(const ExperimentConfig& cfg,
                                 const CpTensor& a, const CpTensor& b) {
    if (cfg.j_grid.empty() || cfg.kinds.empty())
        throw std::invalid_argument(
            "run_experiment2: J grid and kinds must be nonempty");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_experiment2: trials must be >= 1");

    const double exact = cp_distance_exact(a, b);
    if (!(exact > 0.0))
        throw std::runtime_error(
            "run_experiment2: zero distance between the CP tensors, the "
            "distortion metric is undefined");

    const StackedKr stacked = stack_cp_pair(a, b);
    const std::vector<Index> shape = stacked.stacked.shape();

    // Zero-row padding to power-of-two factor sizes for the kfjlt kind.
    // Padded rows are zero rows of the stacked matrix, so the represented
    // columns and the distance are unchanged.
    bool needs_pad = false;
    for (Index n : shape)
        if (!is_pow2(n)) needs_pad = true;
    std::optional<StackedKr> padded;
    std::vector<Index> padded_shape;
    if (needs_pad) {
        std::vector<Eigen::MatrixXd> pf;
        pf.reserve(shape.size());
        for (std::size_t p = 0; p < shape.size(); ++p) {
            const Index n = next_pow2(shape[p]);
            Eigen::MatrixXd f =
                Eigen::MatrixXd::Zero(n, stacked.stacked.cols());
            f.topRows(shape[p]) = stacked.stacked.factor(p);
            pf.push_back(std::move(f));
            padded_shape.push_back(n);
        }
        padded = StackedKr{KrMatrix(std::move(pf)), stacked.u};
    } else {
        padded_shape = shape;
    }

    ExperimentResult result;
    std::atomic<Index> deficient{0};

    for (SketchKind kind : cfg.kinds) {
        if (kind == SketchKind::Gaussian && !cfg.include_gaussian)
            continue;  // dense baseline excluded by default
        const bool use_padded = (kind == SketchKind::Kfjlt) && needs_pad;
        const StackedKr& input = use_padded ? *padded : stacked;
        const std::vector<Index>& op_shape =
            use_padded ? padded_shape : shape;
        const auto kind_id = static_cast<std::uint64_t>(kind);

        for (Index j : cfg.j_grid) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<double> values(
                cfg.trials, std::numeric_limits<double>::quiet_NaN());

            parallel_for(cfg.trials, cfg.threads, [&](Index trial) {
                const std::uint64_t op_seed =
                    derive_seed(cfg.seed, "exp2.op", kind_id, j, trial);
                SketchOptions options;
                options.with_replacement = cfg.with_replacement;
                options.materialize_cap = cfg.cap;
                options.sampling_target = &input.stacked;
                const auto op =
                    make_sketch(kind, op_shape, j, op_seed, options);
                if (const auto* s =
                        dynamic_cast<const SamplingSketch*>(op.get());
                    s && s->rank_deficient())
                    deficient.fetch_add(1);
                const double est = (op->apply(input.stacked) * input.u).norm();
                values[trial] = std::abs(est / exact - 1.0);
            });

            const Accumulated acc = reduce_metrics(values);
            TrialStats row;
            row.kind = to_string(kind);
            row.j = j;
            row.trials = acc.used;
            row.mean = acc.mean;
            row.std_dev = acc.std_dev;
            row.max = acc.max;
            row.seed = cfg.seed;
            row.wallclock_ms = cfg.timing ? elapsed_ms(t0) : 0.0;
            result.stats.push_back(std::move(row));
            if (cfg.keep_trials) result.trial_values.push_back(values);
        }
    }
    result.rank_deficient_events = deficient.load();
    return result;
}

double row_reduction_percent(Index dim, Index j) {
    if (dim < 1) throw std::invalid_argument("row_reduction_percent: dim < 1");
    return 100.0 * (1.0 - static_cast<double>(j) / static_cast<double>(dim));
}

std::string csv_schema_version() { return "kronsketch-csv-v1"; }

std::string csv_header() {
    return "kind,J,trials,mean,std,max,seed,wallclock_ms";
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string csv_row(const TrialStats& s) {
    std::string row = s.kind;
    row += ',' + std::to_string(s.j);
    row += ',' + std::to_string(s.trials);
    row += ',' + format_double(s.mean);
    row += ',' + format_double(s.std_dev);
    row += ',' + format_double(s.max);
    row += ',' + std::to_string(s.seed);
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", s.wallclock_ms);
    row += ',';
    row += wall;
    return row;
}

void write_csv(std::ostream& out, std::span<const TrialStats> stats) {
    out << "# " << csv_schema_version() << '\n' << csv_header() << '\n';
    for (const TrialStats& s : stats) out << csv_row(s) << '\n';
}

std::vector<BoundsRow> bounds_table(const BoundInputs& base,
                                    std::span<const double> eps_values,
                                    std::span<const double> delta_values,
                                    double c1, double c2, double c,
                                    LogBase log_base) {
    std::vector<BoundsRow> rows;
    for (double eps : eps_values) {
        for (double delta : delta_values) {
            BoundInputs b = base;
            b.eps = eps;
            b.delta = delta;
            BoundsRow row;
            row.eps = eps;
            row.delta = delta;
            row.subspace = j_subspace(b);
            row.jlt = j_jlt(b);
            row.simplified = j_simplified(b, c1, c2, log_base);
            row.jin = j_jin(b, c, log_base);
            row.min_bound = std::min(std::min(row.subspace, row.jlt),
                                     std::min(row.simplified, row.jin));
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace kronsketch
