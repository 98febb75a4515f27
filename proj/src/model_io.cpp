#include "relnet/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relnet {

namespace {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x00000100000001B3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xF];
    return out;
}

json sim_to_json(const SimParams& sim) {
    return json{{"n_sim", sim.n_sim},
                {"delta_n_sim", sim.delta_n_sim},
                {"alpha", sim.alpha},
                {"p_eps", sim.p_eps},
                {"z_half_alpha", sim.z_half_alpha}};
}

SimParams sim_from_json(const json& j) {
    SimParams sim;
    sim.n_sim = j.at("n_sim").get<int>();
    sim.delta_n_sim = j.at("delta_n_sim").get<int>();
    sim.alpha = j.at("alpha").get<double>();
    sim.p_eps = j.at("p_eps").get<double>();
    sim.z_half_alpha = j.at("z_half_alpha").get<double>();
    return sim;
}

json transform_to_json(const TransformSpec& spec) {
    json attributes = json::array();
    for (const AttributeTransform& at : spec.attributes)
        attributes.push_back(json{{"min", at.min},
                                  {"max", at.max},
                                  {"flip", at.flip},
                                  {"r_s", at.r_s}});
    const ClassMap& cm = spec.class_map;
    return json{{"attributes", std::move(attributes)},
                {"class_map", json{{"label_for_one", cm.label_for_one},
                                   {"label_for_zero", cm.label_for_zero},
                                   {"count_one", cm.count_one},
                                   {"count_total", cm.count_total},
                                   {"single_label", cm.single_label}}},
                {"theta", cm.theta}};
}

TransformSpec transform_from_json(const json& j) {
    TransformSpec spec;
    for (const json& a : j.at("attributes")) {
        AttributeTransform at;
        at.min = a.at("min").get<double>();
        at.max = a.at("max").get<double>();
        at.flip = a.at("flip").get<bool>();
        at.r_s = a.at("r_s").get<double>();
        spec.attributes.push_back(at);
    }
    const json& cm = j.at("class_map");
    spec.class_map.label_for_one = cm.at("label_for_one").get<std::string>();
    spec.class_map.label_for_zero = cm.at("label_for_zero").get<std::string>();
    spec.class_map.count_one = cm.at("count_one").get<long long>();
    spec.class_map.count_total = cm.at("count_total").get<long long>();
    spec.class_map.single_label = cm.at("single_label").get<bool>();
    spec.class_map.theta = j.at("theta").get<double>();
    return spec;
}

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw DataError(context + ": " + message);
}

json fold_to_json(const FoldReport& f, bool aggregate) {
    json j{{"train_accuracy", f.train_accuracy},
           {"test_accuracy", f.test_accuracy},
           {"mean_sims", f.mean_sims},
           {"sims_fraction", f.sims_fraction},
           {"tp", f.tp},
           {"fp", f.fp},
           {"tn", f.tn},
           {"fn", f.fn}};
    if (!aggregate) j["fold"] = f.fold;
    if (f.full_test_accuracy >= 0.0) {
        j["full_test_accuracy"] = f.full_test_accuracy;
        j["agreement"] = f.agreement;
    }
    return j;
}

} // namespace

std::string config_digest(const TrainConfig& config) {
    const json j{{"runs", config.n_run},
                 {"gens", config.n_gen},
                 {"sols", config.n_sol},
                 {"folds", config.folds},
                 {"sim", sim_to_json(config.sim)},
                 {"sso", json{{"c_g", config.sso.c_g},
                              {"c_p", config.sso.c_p},
                              {"c_w", config.sso.c_w}}}};
    return hex64(fnv1a64(j.dump()));
}

std::string model_to_json_string(const Model& model) {
    const json j{{"format", "relnet-model"},
                 {"version", 1},
                 {"n", model.n},
                 {"arc_ordering", "pairs-then-source-then-sink/v1"},
                 {"arc_rel", model.arc_rel},
                 {"transform", transform_to_json(model.transform)},
                 {"sim", sim_to_json(model.sim)},
                 {"fitness", model.fitness},
                 {"fitness_seed", model.fitness_seed},
                 {"seed", model.seed},
                 {"config_digest", model.config_digest}};
    return j.dump(2) + "\n";
}

Model model_from_json_string(const std::string& text, const std::string& context) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(context, std::string("not valid JSON (") + e.what() + ")");
    }

    Model model;
    try {
        if (j.at("format").get<std::string>() != "relnet-model")
            fail(context, "not a model file (format tag mismatch)");
        if (j.at("version").get<int>() != 1)
            fail(context, "unsupported model version " + j.at("version").dump());
        if (j.at("arc_ordering").get<std::string>() != "pairs-then-source-then-sink/v1")
            fail(context, "unknown arc ordering " + j.at("arc_ordering").dump());

        model.n = j.at("n").get<int>();
        if (model.n < 1) fail(context, "n must be at least 1");
        model.arc_rel = j.at("arc_rel").get<std::vector<double>>();
        model.transform = transform_from_json(j.at("transform"));
        model.sim = sim_from_json(j.at("sim"));
        model.fitness = j.at("fitness").get<double>();
        model.fitness_seed = j.at("fitness_seed").get<std::uint64_t>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.config_digest = j.at("config_digest").get<std::string>();
    } catch (const json::exception& e) {
        fail(context, std::string("model schema mismatch (") + e.what() + ")");
    }

    const Topology topo(model.n);
    if (model.arc_rel.size() != static_cast<std::size_t>(topo.n_var()))
        fail(context, "arc_rel has " + std::to_string(model.arc_rel.size()) +
                          " entries, expected " + std::to_string(topo.n_var()));
    for (double v : model.arc_rel)
        if (!(v >= 0.0 && v <= 1.0)) fail(context, "arc_rel value outside [0,1]");
    if (model.transform.n_attributes() != model.n)
        fail(context, "transform lists " + std::to_string(model.transform.n_attributes()) +
                          " attributes, expected " + std::to_string(model.n));
    const double theta = model.transform.class_map.theta;
    if (!(theta >= 0.0 && theta <= 1.0)) fail(context, "theta outside [0,1]");
    if (!(model.fitness >= 0.0 && model.fitness <= 1.0))
        fail(context, "fitness outside [0,1]");
    try {
        model.sim.validate();
    } catch (const std::invalid_argument& e) {
        fail(context, e.what());
    }
    model.bounds = build_bounds(theta, model.sim);
    return model;
}

void save_model(const Model& model, const std::string& path) {
    write_text_file(model_to_json_string(model), path);
}

Model load_model(const std::string& path) {
    return model_from_json_string(read_text_file(path), path);
}

std::string report_to_json_string(const CrossValResult& result, const TrainConfig& config,
                                  const std::string& command,
                                  const std::string& dataset_name) {
    json folds = json::array();
    for (const FoldReport& f : result.folds) folds.push_back(fold_to_json(f, false));
    const json j{{"format", "relnet-report"},
                 {"version", 1},
                 {"command", command},
                 {"dataset", dataset_name},
                 {"n_instances", result.n_instances},
                 {"n_attributes", result.n_attributes},
                 {"seed", config.master_seed},
                 {"config", json{{"runs", config.n_run},
                                 {"gens", config.n_gen},
                                 {"sols", config.n_sol},
                                 {"folds", config.folds},
                                 {"sim", sim_to_json(config.sim)},
                                 {"sso", json{{"c_g", config.sso.c_g},
                                              {"c_p", config.sso.c_p},
                                              {"c_w", config.sso.c_w}}},
                                 {"digest", config_digest(config)}}},
                 {"folds", std::move(folds)},
                 {"aggregate", fold_to_json(result.aggregate, true)}};
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << text;
    out.flush();
    if (!out) throw DataError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError(path + ": read failed");
    return buffer.str();
}

} // namespace relnet
