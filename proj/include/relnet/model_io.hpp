#pragma once

#include <string>

#include "relnet/trainer.hpp"

namespace relnet {

// Stable fingerprint of the training configuration (counts, sim and SSO
// parameters). Seed and worker count are deliberately excluded: neither is
// part of what the digest identifies.
std::string config_digest(const TrainConfig& config);

// Model document, pretty-printed with a trailing newline. Serialization is
// canonical (sorted keys, shortest round-trip number form), so equal models
// produce byte-identical text.
std::string model_to_json_string(const Model& model);

// Parse and validate a model document; `context` prefixes error messages
// (normally the file path). Bounds are rebuilt from the stored simulation
// parameters and theta.
Model model_from_json_string(const std::string& text, const std::string& context);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

// Cross-validation report document. Raw fractions only — percent formatting
// is the human table's job — and no wall-clock or worker-count fields, so
// reports for a given seed are byte-identical across machines and thread
// counts. `command` tags the producing subcommand; dual-eval fields are
// emitted only when present.
std::string report_to_json_string(const CrossValResult& result, const TrainConfig& config,
                                  const std::string& command, const std::string& dataset_name);

void write_text_file(const std::string& text, const std::string& path);
std::string read_text_file(const std::string& path);

} // namespace relnet
