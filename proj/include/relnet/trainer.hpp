#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relnet/dataset.hpp"
#include "relnet/reliability.hpp"
#include "relnet/rng.hpp"
#include "relnet/sso.hpp"
#include "relnet/ubcn.hpp"

namespace relnet {

// Seed used whenever the caller does not pass one. Never wall-clock.
inline constexpr std::uint64_t kDefaultSeed = 1;

// Stream phase tags. Every random stream in the system is keyed as
// derive(master_seed, {phase, ...indices...}); see rng::derive. Fitness
// evaluation streams are keyed per (run, generation, solution) and fork one
// child per instance, which makes every result independent of evaluation
// order and of the worker count.
enum SeedPhase : std::uint64_t {
    kPhaseSwarmInit = 1,
    kPhaseSsoUpdate = 2,
    kPhaseFitness = 3,
    kPhasePredict = 4,
    kPhaseFoldShuffle = 5,
    kPhaseFoldTrain = 6,
    kPhaseFoldEval = 7,
};

inline std::uint64_t fitness_seed(std::uint64_t master, int run, int gen, int sol) {
    return rng::derive(master, {kPhaseFitness, static_cast<std::uint64_t>(run),
                                static_cast<std::uint64_t>(gen),
                                static_cast<std::uint64_t>(sol)});
}

struct TrainConfig {
    int n_run = 30;
    int n_gen = 50;
    int n_sol = 10;
    int folds = 10;
    SimParams sim;
    SsoParams sso;
    std::uint64_t master_seed = kDefaultSeed;
    int n_threads = 0; // 0 = library default; 1 = serial reference path

    void validate() const;
};

// Trained classifier: topology size, best arc reliabilities, the frozen
// data transform, simulation sizing (the bounds table is rebuilt from it on
// load) and the recorded fitness of the best solution together with the
// stream key it was evaluated under.
struct Model {
    int n = 0;
    std::vector<double> arc_rel;
    TransformSpec transform;
    SimParams sim;
    BoundsTable bounds;
    double fitness = 0.0;
    std::uint64_t fitness_seed = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Outcome of classifying every instance of a dataset against one arc
// reliability vector. predicted/sims_used are indexed by instance.
struct BatchOutcome {
    std::vector<std::uint8_t> predicted;
    std::vector<int> sims_used;
    long long total_sims = 0;
    long long correct = 0;
};

// Serial reference implementation of the batch classification sweep; the
// OpenMP kernel must reproduce it exactly.
BatchOutcome classify_batch_serial(const Topology& topo, std::span<const double> arc_rel,
                                   const TransformedDataset& data, const BoundsTable& bounds,
                                   std::uint64_t eval_seed, bool early_stop = true);

// OpenMP kernel: instances in parallel, one derived stream per instance,
// results written by index and reduced after the loop.
BatchOutcome classify_batch_parallel(const Topology& topo, std::span<const double> arc_rel,
                                     const TransformedDataset& data,
                                     const BoundsTable& bounds, std::uint64_t eval_seed,
                                     int n_threads, bool early_stop = true);

// n_threads == 1 selects the serial reference path.
BatchOutcome classify_batch(const Topology& topo, std::span<const double> arc_rel,
                            const TransformedDataset& data, const BoundsTable& bounds,
                            std::uint64_t eval_seed, int n_threads, bool early_stop = true);

// Fraction of instances whose predicted class matches y01.
double fitness(std::span<const double> solution, const TransformedDataset& data,
               const Topology& topo, const BoundsTable& bounds, std::uint64_t eval_seed,
               int n_threads = 1);

// Optional per-generation trace of the recorded global-best fitness.
struct TrainLog {
    std::vector<double> best_fitness_per_gen;
};

// One full training run: random swarm, then n_gen-1 rounds of per-solution
// step updates. Personal bests replace on strict improvement only, and the
// global best is only examined when the personal best improved.
Model train(const TransformedDataset& data, const TransformSpec& spec, const Topology& topo,
            const TrainConfig& config, int run_index = 0, TrainLog* log = nullptr);

struct RunRecord {
    int run = 0;
    double fitness = 0.0;
};

// n_run independent trainings with per-run derived streams; the returned
// model is the one with the highest recorded training fitness (first on
// ties).
std::pair<Model, std::vector<RunRecord>> run_many(const TransformedDataset& data,
                                                  const TransformSpec& spec,
                                                  const Topology& topo,
                                                  const TrainConfig& config);

struct PredictResult {
    std::string label;
    ImcsOutcome outcome;
};

// Transform one raw instance with the stored spec, classify it and map the
// class back to the original label token.
PredictResult predict(const Model& model, std::span<const double> raw_instance,
                      rng::Stream& stream);

// Per-fold cross-validation report. mean_sims/sims_fraction and the
// confusion counts describe the held-out evaluation; train_accuracy is the
// best run's recorded training fitness. full_test_accuracy and agreement
// are filled only by the dual-decision benchmark (-1 otherwise).
struct FoldReport {
    int fold = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double mean_sims = 0.0;
    double sims_fraction = 0.0;
    long long tp = 0, fp = 0, tn = 0, fn = 0;
    double wall_seconds = 0.0;
    double best_fitness = 0.0;
    double full_test_accuracy = -1.0;
    double agreement = -1.0;
};

struct CrossValResult {
    std::vector<FoldReport> folds;
    FoldReport aggregate; // column means; confusion counts and wall time summed
    int n_instances = 0;
    int n_attributes = 0;
};

// Stratified fold assignment from a seeded shuffle: per-label indices are
// shuffled and dealt round-robin, so fold class counts differ by at most
// one. Indices refer to raw instance order.
std::vector<int> assign_folds(const RawDataset& raw, int folds, std::uint64_t master_seed);

// Tenfold-style cross-validation: the class map and transform are fit on
// each training portion only. dual_eval additionally classifies every test
// instance without early stopping (same streams) and records the
// decision-agreement rate.
CrossValResult cross_validate(const RawDataset& raw, const TrainConfig& config,
                              bool dual_eval = false);

} // namespace relnet
