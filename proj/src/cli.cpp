#include "relnet/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "relnet/model_io.hpp"
#include "relnet/trainer.hpp"

namespace relnet {

namespace {

using nlohmann::json;

struct Options {
    std::string data_path;
    std::string model_path;
    std::string out_path;
    std::string config_path;
    std::string format = "auto";
    int runs = 30;
    int gens = 50;
    int sols = 10;
    int folds = 10;
    int nsim = 2000;
    int dnsim = 100;
    int threads = 0; // 0 = all available workers
    double alpha = 0.01;
    double peps = 0.9;
    double cg = 0.4;
    double cp = 0.2;
    double cw = 0.1;
    std::uint64_t seed = kDefaultSeed;
};

// Option handles needed to decide flag-vs-config precedence after parsing.
struct TrainingFlags {
    CLI::Option* runs = nullptr;
    CLI::Option* gens = nullptr;
    CLI::Option* sols = nullptr;
    CLI::Option* folds = nullptr;
    CLI::Option* nsim = nullptr;
    CLI::Option* dnsim = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* peps = nullptr;
    CLI::Option* cg = nullptr;
    CLI::Option* cp = nullptr;
    CLI::Option* cw = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* threads = nullptr;
};

void add_data_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--data", opt.data_path, "input dataset file")->required();
    sub->add_option("--format", opt.format, "dataset format: auto, csv, libsvm")
        ->check(CLI::IsMember({"auto", "csv", "libsvm"}));
}

TrainingFlags add_training_flags(CLI::App* sub, Options& opt) {
    TrainingFlags f;
    sub->add_option("--config", opt.config_path, "JSON config file (flags override it)");
    f.runs = sub->add_option("--runs", opt.runs, "independent training runs");
    f.gens = sub->add_option("--gens", opt.gens, "generations per run");
    f.sols = sub->add_option("--sols", opt.sols, "solutions in the swarm");
    f.folds = sub->add_option("--folds", opt.folds, "cross-validation folds");
    f.nsim = sub->add_option("--nsim", opt.nsim, "Monte Carlo samples per classification");
    f.dnsim = sub->add_option("--dnsim", opt.dnsim, "samples per early-stopping interval");
    f.alpha = sub->add_option("--alpha", opt.alpha, "confidence level for the bounds");
    f.peps = sub->add_option("--peps", opt.peps, "variance bound parameter");
    f.cg = sub->add_option("--cg", opt.cg, "probability of copying the global best");
    f.cp = sub->add_option("--cp", opt.cp, "probability of copying the personal best");
    f.cw = sub->add_option("--cw", opt.cw, "probability of keeping the current value");
    f.seed = sub->add_option("--seed", opt.seed, "master seed (fixed default, never wall-clock)");
    f.threads = sub->add_option("--threads", opt.threads,
                                "worker count for fitness evaluation (0 = all)");
    return f;
}

ClassPosition class_position_for(DataFormat format) {
    return format == DataFormat::libsvm ? ClassPosition::libsvm_leading
                                        : ClassPosition::last_column;
}

// auto: the first non-blank line of a LIBSVM file contains "index:value"
// pairs; a CSV line never holds a colon in numeric fields.
DataFormat resolve_format(const std::string& requested, const std::string& path) {
    if (requested == "csv") return DataFormat::csv;
    if (requested == "libsvm") return DataFormat::libsvm;
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        return line.find(':') != std::string::npos ? DataFormat::libsvm : DataFormat::csv;
    }
    throw DataError(path + ": file is empty");
}

RawDataset load_for(const Options& opt) {
    const DataFormat format = resolve_format(opt.format, opt.data_path);
    return load_dataset(opt.data_path, format, class_position_for(format));
}

// Precedence: explicit flag > config-file key > built-in default. `opt`
// already holds flag-or-default values, so only unset flags are replaced.
template <typename T>
void take(const json& cfg, const std::string& path, const char* key, const CLI::Option* flag,
          T& value) {
    if (flag != nullptr && flag->count() > 0) return;
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(path + ": bad value for \"" + std::string(key) + "\"");
    }
}

TrainConfig build_config(const Options& opt, const TrainingFlags& f) {
    Options merged = opt;
    if (!opt.config_path.empty()) {
        json cfg;
        try {
            cfg = json::parse(read_text_file(opt.config_path));
        } catch (const json::exception& e) {
            throw DataError(opt.config_path + ": not valid JSON (" + e.what() + ")");
        }
        const std::string& path = opt.config_path;
        take(cfg, path, "runs", f.runs, merged.runs);
        take(cfg, path, "gens", f.gens, merged.gens);
        take(cfg, path, "sols", f.sols, merged.sols);
        take(cfg, path, "folds", f.folds, merged.folds);
        take(cfg, path, "seed", f.seed, merged.seed);
        take(cfg, path, "threads", f.threads, merged.threads);
        if (cfg.contains("sim")) {
            const json& sim = cfg.at("sim");
            take(sim, path, "n_sim", f.nsim, merged.nsim);
            take(sim, path, "delta_n_sim", f.dnsim, merged.dnsim);
            take(sim, path, "alpha", f.alpha, merged.alpha);
            take(sim, path, "p_eps", f.peps, merged.peps);
        }
        if (cfg.contains("sso")) {
            const json& sso = cfg.at("sso");
            take(sso, path, "c_g", f.cg, merged.cg);
            take(sso, path, "c_p", f.cp, merged.cp);
            take(sso, path, "c_w", f.cw, merged.cw);
        }
    }

    TrainConfig config;
    config.n_run = merged.runs;
    config.n_gen = merged.gens;
    config.n_sol = merged.sols;
    config.folds = merged.folds;
    config.master_seed = merged.seed;
    config.n_threads = merged.threads;
    config.sim.n_sim = merged.nsim;
    config.sim.delta_n_sim = merged.dnsim;
    config.sim.alpha = merged.alpha;
    config.sim.p_eps = merged.peps;
    config.sso.c_g = merged.cg;
    config.sso.c_p = merged.cp;
    config.sso.c_w = merged.cw;
    config.validate();
    return config;
}

std::string pct(double fraction, int precision = 4) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << fraction * 100.0;
    return out.str();
}

int cmd_inspect(const Options& opt) {
    const RawDataset raw = load_for(opt);
    const ClassMap cmap = map_classes(raw);
    auto [spec, data] = fit_transform(raw, cmap);

    std::ostringstream out;
    out << "dataset: " << opt.data_path << "\n";
    out << "instances: " << raw.n_instances() << ", attributes: " << raw.n_attributes
        << "\n";
    out << "class 1: \"" << cmap.label_for_one << "\" (" << cmap.count_one
        << " instances)\n";
    out << "class 0: \"" << cmap.label_for_zero << "\" ("
        << cmap.count_total - cmap.count_one << " instances)\n";
    out << "theta: " << std::setprecision(17) << cmap.theta << "\n\n";
    out << "attribute         min          max        r_s  flip\n";
    out << std::fixed;
    for (int a = 0; a < spec.n_attributes(); ++a) {
        const AttributeTransform& at = spec.attributes[a];
        out << std::setw(9) << a + 1 << std::setprecision(6) << std::setw(13) << at.min
            << std::setw(13) << at.max << std::setprecision(4) << std::setw(11) << at.r_s
            << std::setw(6) << (at.flip ? "yes" : "no") << "\n";
    }
    std::cout << out.str();
    return 0;
}

int cmd_train(const Options& opt, const TrainConfig& config) {
    const RawDataset raw = load_for(opt);
    const ClassMap cmap = map_classes(raw);
    auto [spec, data] = fit_transform(raw, cmap);
    const Topology topo(raw.n_attributes);

    auto [model, records] = run_many(data, spec, topo, config);
    model.config_digest = config_digest(config);
    save_model(model, opt.out_path);

    int best_run = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].fitness > records[best_run].fitness) best_run = static_cast<int>(i);
    std::cout << "model: " << opt.out_path << "\n"
              << "best training fitness: " << std::fixed << std::setprecision(6)
              << model.fitness << " (run " << best_run + 1 << " of " << config.n_run
              << ")\n";
    return 0;
}

int cmd_predict(const Options& opt) {
    const Model model = load_model(opt.model_path);
    const DataFormat format = resolve_format(opt.format, opt.data_path);
    const auto instances = load_instances(opt.data_path, format, model.n);

    std::ostringstream lines;
    for (std::size_t k = 0; k < instances.size(); ++k) {
        rng::Stream stream(rng::derive(opt.seed, {kPhasePredict, k}));
        lines << predict(model, instances[k], stream).label << "\n";
    }
    if (opt.out_path.empty()) {
        std::cout << lines.str();
    } else {
        write_text_file(lines.str(), opt.out_path);
        std::cout << "predicted " << instances.size() << " instances -> " << opt.out_path
                  << "\n";
    }
    return 0;
}

void print_fold_row(std::ostream& os, const FoldReport& f, bool dual, bool aggregate) {
    if (aggregate)
        os << " avg";
    else
        os << std::setw(4) << f.fold;
    os << std::setw(10) << pct(f.train_accuracy) << std::setw(10) << pct(f.test_accuracy);
    if (dual) os << std::setw(10) << pct(f.full_test_accuracy) << std::setw(9)
                 << pct(f.agreement, 2);
    os << std::fixed << std::setprecision(2) << std::setw(11) << f.mean_sims << std::setw(8)
       << pct(f.sims_fraction, 2) << std::setw(9) << f.wall_seconds << "\n";
}

int cmd_crossval(const Options& opt, const TrainConfig& config, bool dual_eval) {
    const RawDataset raw = load_for(opt);
    const CrossValResult result = cross_validate(raw, config, dual_eval);

    std::ostringstream out;
    out << (dual_eval ? "simulation-savings benchmark: " : "cross-validation: ")
        << opt.data_path << "\n";
    out << "instances " << result.n_instances << ", attributes " << result.n_attributes
        << ", seed " << config.master_seed << ", digest " << config_digest(config) << "\n";
    out << "runs " << config.n_run << ", gens " << config.n_gen << ", sols " << config.n_sol
        << ", folds " << config.folds << ", nsim " << config.sim.n_sim << ", threads "
        << config.n_threads << "\n\n";
    out << "fold    train%     test%";
    if (dual_eval) out << "     full%   agree%";
    out << "  sims/inst   sims%  seconds\n";
    for (const FoldReport& f : result.folds) print_fold_row(out, f, dual_eval, false);
    print_fold_row(out, result.aggregate, dual_eval, true);

    if (dual_eval) {
        out << "\nmean sims fraction: " << pct(result.aggregate.sims_fraction, 2) << "% of "
            << config.sim.n_sim << " samples\n";
        out << "decision agreement (early stop vs full run): "
            << pct(result.aggregate.agreement, 2) << "%\n";
    }
    std::cout << out.str();

    if (!opt.out_path.empty()) {
        write_text_file(report_to_json_string(result, config,
                                              dual_eval ? "bench-sims" : "crossval",
                                              opt.data_path),
                        opt.out_path);
        std::cout << "\nreport: " << opt.out_path << "\n";
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"binary classifier built on network reliability estimation"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* inspect = app.add_subcommand(
        "inspect", "show the class map, theta and per-attribute transform of a dataset");
    add_data_flags(inspect, opt);

    CLI::App* train =
        app.add_subcommand("train", "train a model and write it as JSON");
    add_data_flags(train, opt);
    train->add_option("--out", opt.out_path, "model output path")->required();
    const TrainingFlags train_flags = add_training_flags(train, opt);

    CLI::App* predict =
        app.add_subcommand("predict", "classify instances with a trained model");
    predict->add_option("--model", opt.model_path, "model JSON path")->required();
    add_data_flags(predict, opt);
    predict->add_option("--out", opt.out_path, "write labels here instead of stdout");
    CLI::Option* predict_seed =
        predict->add_option("--seed", opt.seed, "seed for the classification streams");

    CLI::App* crossval = app.add_subcommand(
        "crossval", "stratified k-fold cross-validation with a report");
    add_data_flags(crossval, opt);
    crossval->add_option("--out", opt.out_path, "JSON report path");
    const TrainingFlags crossval_flags = add_training_flags(crossval, opt);

    CLI::App* bench = app.add_subcommand(
        "bench-sims",
        "cross-validation measuring early-stopping savings and decision agreement");
    add_data_flags(bench, opt);
    bench->add_option("--out", opt.out_path, "JSON report path");
    const TrainingFlags bench_flags = add_training_flags(bench, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << "relnet: " << e.what() << "\n";
        return 1;
    }
    (void)predict_seed;

    try {
        if (inspect->parsed()) return cmd_inspect(opt);
        if (train->parsed()) return cmd_train(opt, build_config(opt, train_flags));
        if (predict->parsed()) return cmd_predict(opt);
        if (crossval->parsed())
            return cmd_crossval(opt, build_config(opt, crossval_flags), false);
        if (bench->parsed()) return cmd_crossval(opt, build_config(opt, bench_flags), true);
    } catch (const std::invalid_argument& e) {
        std::cerr << "relnet: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "relnet: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("relnet");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace relnet
