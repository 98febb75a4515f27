#include "relnet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relnet {

void TrainConfig::validate() const {
    if (n_run < 1 || n_gen < 1 || n_sol < 1)
        throw std::invalid_argument("train config: counts must be at least 1");
    sim.validate();
    sso.validate();
}

namespace {

void classify_one(ConnectivitySampler& sampler, std::span<const double> arc_rel,
                  const TransformedDataset& data, const BoundsTable& bounds,
                  std::uint64_t eval_seed, int k, bool early_stop, BatchOutcome& out) {
    rng::Stream stream(rng::derive(eval_seed, static_cast<std::uint64_t>(k)));
    const ImcsOutcome r = imcs_classify(sampler, arc_rel, data.node_reliability_vectors[k],
                                        bounds, stream, early_stop);
    out.predicted[k] = static_cast<std::uint8_t>(r.predicted_class);
    out.sims_used[k] = r.sims_used;
}

void reduce_batch(const TransformedDataset& data, BatchOutcome& out) {
    for (int k = 0; k < data.n_instances(); ++k) {
        out.total_sims += out.sims_used[k];
        out.correct += out.predicted[k] == data.y01[k] ? 1 : 0;
    }
}

void check_batch_args(const Topology& topo, std::span<const double> arc_rel,
                      const TransformedDataset& data) {
    if (data.n_instances() == 0)
        throw std::invalid_argument("classify_batch: empty dataset");
    if (arc_rel.size() != static_cast<std::size_t>(topo.n_var()))
        throw std::invalid_argument("classify_batch: arc vector does not match topology");
    if (data.n_attributes() != topo.n())
        throw std::invalid_argument("classify_batch: dataset does not match topology");
}

} // namespace

BatchOutcome classify_batch_serial(const Topology& topo, std::span<const double> arc_rel,
                                   const TransformedDataset& data, const BoundsTable& bounds,
                                   std::uint64_t eval_seed, bool early_stop) {
    check_batch_args(topo, arc_rel, data);
    const int n = data.n_instances();
    BatchOutcome out;
    out.predicted.resize(n);
    out.sims_used.resize(n);
    ConnectivitySampler sampler(topo);
    for (int k = 0; k < n; ++k)
        classify_one(sampler, arc_rel, data, bounds, eval_seed, k, early_stop, out);
    reduce_batch(data, out);
    return out;
}

BatchOutcome classify_batch_parallel(const Topology& topo, std::span<const double> arc_rel,
                                     const TransformedDataset& data,
                                     const BoundsTable& bounds, std::uint64_t eval_seed,
                                     int n_threads, bool early_stop) {
    check_batch_args(topo, arc_rel, data);
    const int n = data.n_instances();
    BatchOutcome out;
    out.predicted.resize(n);
    out.sims_used.resize(n);
#ifdef _OPENMP
    const int nt = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
    {
        ConnectivitySampler sampler(topo);
#pragma omp for schedule(dynamic, 8)
        for (int k = 0; k < n; ++k)
            classify_one(sampler, arc_rel, data, bounds, eval_seed, k, early_stop, out);
    }
#else
    (void)n_threads;
    ConnectivitySampler sampler(topo);
    for (int k = 0; k < n; ++k)
        classify_one(sampler, arc_rel, data, bounds, eval_seed, k, early_stop, out);
#endif
    reduce_batch(data, out);
    return out;
}

BatchOutcome classify_batch(const Topology& topo, std::span<const double> arc_rel,
                            const TransformedDataset& data, const BoundsTable& bounds,
                            std::uint64_t eval_seed, int n_threads, bool early_stop) {
    if (n_threads == 1)
        return classify_batch_serial(topo, arc_rel, data, bounds, eval_seed, early_stop);
    return classify_batch_parallel(topo, arc_rel, data, bounds, eval_seed, n_threads,
                                   early_stop);
}

double fitness(std::span<const double> solution, const TransformedDataset& data,
               const Topology& topo, const BoundsTable& bounds, std::uint64_t eval_seed,
               int n_threads) {
    const BatchOutcome out = classify_batch(topo, solution, data, bounds, eval_seed, n_threads);
    return static_cast<double>(out.correct) / data.n_instances();
}

Model train(const TransformedDataset& data, const TransformSpec& spec, const Topology& topo,
            const TrainConfig& config, int run_index, TrainLog* log) {
    config.validate();
    if (data.n_instances() == 0) throw std::invalid_argument("train: empty dataset");
    if (data.n_attributes() != topo.n())
        throw std::invalid_argument("train: dataset does not match topology");

    const std::uint64_t master = config.master_seed;
    const auto run = static_cast<std::uint64_t>(run_index);
    const BoundsTable bounds = build_bounds(data.theta, config.sim);

    rng::Stream init_stream(rng::derive(master, {kPhaseSwarmInit, run}));
    Swarm swarm = init_swarm(config.n_sol, topo.n_var(), init_stream);

    // first evaluation: P_i = X_i, G = first best
    for (int sol = 0; sol < config.n_sol; ++sol) {
        swarm.fit_x[sol] = fitness(swarm.x[sol], data, topo, bounds,
                                   fitness_seed(master, run_index, 1, sol), config.n_threads);
        swarm.fit_p[sol] = swarm.fit_x[sol];
    }
    const auto best = std::max_element(swarm.fit_x.begin(), swarm.fit_x.end());
    const int best_sol = static_cast<int>(best - swarm.fit_x.begin());
    swarm.g = swarm.x[best_sol];
    swarm.fit_g = *best;
    std::uint64_t g_eval_seed = fitness_seed(master, run_index, 1, best_sol);
    if (log) log->best_fitness_per_gen.push_back(swarm.fit_g);

    for (int gen = 2; gen <= config.n_gen; ++gen) {
        for (int sol = 0; sol < config.n_sol; ++sol) {
            rng::Stream step_stream(rng::derive(
                master, {kPhaseSsoUpdate, run, static_cast<std::uint64_t>(gen),
                         static_cast<std::uint64_t>(sol)}));
            swarm.x[sol] =
                update_solution(swarm.x[sol], swarm.p[sol], swarm.g, config.sso, step_stream);

            const std::uint64_t eval_seed = fitness_seed(master, run_index, gen, sol);
            swarm.fit_x[sol] =
                fitness(swarm.x[sol], data, topo, bounds, eval_seed, config.n_threads);

            // the global best is only examined when the personal best improved
            if (swarm.fit_x[sol] > swarm.fit_p[sol]) {
                swarm.p[sol] = swarm.x[sol];
                swarm.fit_p[sol] = swarm.fit_x[sol];
                if (swarm.fit_x[sol] > swarm.fit_g) {
                    swarm.g = swarm.x[sol];
                    swarm.fit_g = swarm.fit_x[sol];
                    g_eval_seed = eval_seed;
                }
            }
        }
        if (log) log->best_fitness_per_gen.push_back(swarm.fit_g);
    }

    Model model;
    model.n = topo.n();
    model.arc_rel = swarm.g;
    model.transform = spec;
    model.sim = config.sim;
    model.bounds = bounds;
    model.fitness = swarm.fit_g;
    model.fitness_seed = g_eval_seed;
    model.seed = master;
    return model;
}

std::pair<Model, std::vector<RunRecord>> run_many(const TransformedDataset& data,
                                                  const TransformSpec& spec,
                                                  const Topology& topo,
                                                  const TrainConfig& config) {
    config.validate();
    std::vector<RunRecord> records;
    records.reserve(config.n_run);
    Model best;
    for (int run = 0; run < config.n_run; ++run) {
        Model model = train(data, spec, topo, config, run);
        records.push_back({run, model.fitness});
        if (run == 0 || model.fitness > best.fitness) best = std::move(model);
    }
    return {std::move(best), std::move(records)};
}

PredictResult predict(const Model& model, std::span<const double> raw_instance,
                      rng::Stream& stream) {
    if (raw_instance.size() != static_cast<std::size_t>(model.n))
        throw std::invalid_argument("predict: expected " + std::to_string(model.n) +
                                    " attribute values, got " +
                                    std::to_string(raw_instance.size()));
    const Topology topo(model.n);
    const std::vector<double> node_rel = apply_transform(model.transform, raw_instance);
    const ImcsOutcome outcome = imcs_classify(topo, model.arc_rel, node_rel, model.bounds,
                                              stream);
    PredictResult result;
    result.outcome = outcome;
    result.label = outcome.predicted_class == 1 ? model.transform.class_map.label_for_one
                                                : model.transform.class_map.label_for_zero;
    return result;
}

std::vector<int> assign_folds(const RawDataset& raw, int folds, std::uint64_t master_seed) {
    if (folds < 2) throw std::invalid_argument("cross-validation requires at least 2 folds");
    if (raw.n_instances() < folds)
        throw std::invalid_argument("cross-validation requires at least one instance per fold");

    // per-label index groups, label order fixed by sorting for determinism
    std::vector<std::string> labels_sorted;
    for (const auto& label : raw.labels)
        if (std::find(labels_sorted.begin(), labels_sorted.end(), label) ==
            labels_sorted.end())
            labels_sorted.push_back(label);
    std::sort(labels_sorted.begin(), labels_sorted.end());

    rng::Stream shuffle_stream(rng::derive(master_seed, kPhaseFoldShuffle));
    std::vector<int> fold_of(raw.n_instances(), 0);
    for (const auto& label : labels_sorted) {
        std::vector<int> group;
        for (int i = 0; i < raw.n_instances(); ++i)
            if (raw.labels[i] == label) group.push_back(i);
        for (std::size_t i = group.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(shuffle_stream.u01() * i);
            std::swap(group[i - 1], group[j]);
        }
        for (std::size_t i = 0; i < group.size(); ++i)
            fold_of[group[i]] = static_cast<int>(i % folds);
    }
    return fold_of;
}

namespace {

RawDataset subset(const RawDataset& raw, const std::vector<int>& fold_of, int fold,
                  bool keep_fold) {
    RawDataset out;
    out.n_attributes = raw.n_attributes;
    for (int i = 0; i < raw.n_instances(); ++i)
        if ((fold_of[i] == fold) == keep_fold) {
            out.instances.push_back(raw.instances[i]);
            out.labels.push_back(raw.labels[i]);
        }
    return out;
}

TransformedDataset transform_with(const TransformSpec& spec, const RawDataset& raw) {
    TransformedDataset out;
    out.theta = spec.class_map.theta;
    out.y01.resize(raw.n_instances());
    out.node_reliability_vectors.reserve(raw.n_instances());
    for (int i = 0; i < raw.n_instances(); ++i) {
        out.node_reliability_vectors.push_back(
            apply_transform(spec, raw.instances[i]));
        out.y01[i] = raw.labels[i] == spec.class_map.label_for_one ? 1 : 0;
    }
    return out;
}

} // namespace

CrossValResult cross_validate(const RawDataset& raw, const TrainConfig& config,
                              bool dual_eval) {
    config.validate();
    {
        std::vector<std::string> distinct;
        for (const auto& label : raw.labels)
            if (std::find(distinct.begin(), distinct.end(), label) == distinct.end())
                distinct.push_back(label);
        if (distinct.size() != 2)
            throw DataError("cross-validation requires exactly two classes");
    }
    const std::vector<int> fold_of = assign_folds(raw, config.folds, config.master_seed);

    CrossValResult result;
    result.n_instances = raw.n_instances();
    result.n_attributes = raw.n_attributes;
    result.folds.reserve(config.folds);

    for (int fold = 0; fold < config.folds; ++fold) {
        const auto t0 = std::chrono::steady_clock::now();

        const RawDataset train_raw = subset(raw, fold_of, fold, false);
        const RawDataset test_raw = subset(raw, fold_of, fold, true);
        const ClassMap cmap = map_classes(train_raw);
        if (cmap.single_label)
            throw DataError("fold " + std::to_string(fold + 1) +
                            ": training portion has a single class");
        auto [spec, train_data] = fit_transform(train_raw, cmap);
        const Topology topo(raw.n_attributes);

        TrainConfig fold_config = config;
        fold_config.master_seed =
            rng::derive(config.master_seed, {kPhaseFoldTrain, static_cast<std::uint64_t>(fold)});
        auto [model, records] = run_many(train_data, spec, topo, fold_config);

        const TransformedDataset test_data = transform_with(spec, test_raw);
        const std::uint64_t eval_seed = rng::derive(
            config.master_seed, {kPhaseFoldEval, static_cast<std::uint64_t>(fold)});
        const BatchOutcome eval = classify_batch(topo, model.arc_rel, test_data, model.bounds,
                                                 eval_seed, config.n_threads);

        FoldReport report;
        report.fold = fold + 1;
        report.train_accuracy = model.fitness;
        report.best_fitness = model.fitness;
        report.test_accuracy = static_cast<double>(eval.correct) / test_data.n_instances();
        report.mean_sims = static_cast<double>(eval.total_sims) / test_data.n_instances();
        report.sims_fraction = report.mean_sims / config.sim.n_sim;
        for (int k = 0; k < test_data.n_instances(); ++k) {
            const bool actual = test_data.y01[k] != 0;
            const bool predicted = eval.predicted[k] != 0;
            if (predicted && actual) ++report.tp;
            if (predicted && !actual) ++report.fp;
            if (!predicted && !actual) ++report.tn;
            if (!predicted && actual) ++report.fn;
        }

        if (dual_eval) {
            const BatchOutcome full = classify_batch(topo, model.arc_rel, test_data,
                                                     model.bounds, eval_seed,
                                                     config.n_threads, /*early_stop=*/false);
            long long agree = 0;
            long long full_correct = 0;
            for (int k = 0; k < test_data.n_instances(); ++k) {
                agree += full.predicted[k] == eval.predicted[k] ? 1 : 0;
                full_correct += full.predicted[k] == test_data.y01[k] ? 1 : 0;
            }
            report.agreement = static_cast<double>(agree) / test_data.n_instances();
            report.full_test_accuracy =
                static_cast<double>(full_correct) / test_data.n_instances();
        }

        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.folds.push_back(report);
    }

    FoldReport& agg = result.aggregate;
    agg.fold = 0;
    const double nf = static_cast<double>(result.folds.size());
    double full_acc = 0.0;
    double agree = 0.0;
    for (const FoldReport& f : result.folds) {
        agg.train_accuracy += f.train_accuracy;
        agg.test_accuracy += f.test_accuracy;
        agg.mean_sims += f.mean_sims;
        agg.sims_fraction += f.sims_fraction;
        agg.best_fitness += f.best_fitness;
        agg.tp += f.tp;
        agg.fp += f.fp;
        agg.tn += f.tn;
        agg.fn += f.fn;
        agg.wall_seconds += f.wall_seconds;
        full_acc += f.full_test_accuracy;
        agree += f.agreement;
    }
    agg.train_accuracy /= nf;
    agg.test_accuracy /= nf;
    agg.mean_sims /= nf;
    agg.sims_fraction /= nf;
    agg.best_fitness /= nf;
    if (dual_eval) {
        agg.full_test_accuracy = full_acc / nf;
        agg.agreement = agree / nf;
    }
    return result;
}

} // namespace relnet
