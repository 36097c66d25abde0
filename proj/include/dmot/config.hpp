#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "dmot/errors.hpp"

namespace dmot {

// Flat configuration shared by the CLI commands. Line-oriented text format:
// `key = value`, `#` starts a comment, keys are dotted. Unknown keys are
// rejected. Defaults below are the documented defaults.
struct RunConfig {
    // tracker.*
    double tau_high = 0.6;
    double tau_low = 0.1;
    int max_age = 30;
    int min_hits = 3;
    double iou_gate = 0.82;
    double lambda = 0.8;
    double gamma = 0.2;
    double eta = 1.0;
    double depth_ema = 1.0;
    bool depth_enabled = true;

    // scene.*
    int scene_width = 640;
    int scene_height = 360;
    int scene_frames = 0;  // 0 = scenario default
    double depth_noise = 0.02;
    std::string scenario;  // set in per-sequence scene files
    uint64_t scene_seed = 1;

    // detector.*
    double jitter_sigma = 1.5;
    double miss_rate_base = 0.05;
    double miss_rate_occluded = 0.35;
    double score_noise = 0.3;
    double merge_iou = 0.7;
    bool merge_occluded = false;
    double clutter_rate = 0.08;

    // sim.*
    int sim_seeds = 5;
    uint64_t sim_base_seed = 1;

    // label.*
    int label_window = 2;
    int label_stride = 1;

    // Keys explicitly assigned by the parsed file (dotted names).
    std::set<std::string> assigned;

    bool is_set(const std::string& key) const { return assigned.count(key) != 0; }
};

// Apply one `key = value` pair; throws ConfigError naming the key on
// unknown keys or unparseable values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Cross-field invariants (threshold ordering, positive counts, ...).
void validate(const RunConfig& cfg);

RunConfig parse_config_text(const std::string& text);
RunConfig read_config(const std::string& path);
void write_config(const RunConfig& cfg, const std::string& path);  // scene/detector keys only

}  // namespace dmot
