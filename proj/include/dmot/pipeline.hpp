#pragma once

#include <map>
#include <string>
#include <vector>

#include "dmot/config.hpp"
#include "dmot/depth_labels.hpp"
#include "dmot/metrics.hpp"
#include "dmot/scene.hpp"
#include "dmot/tracker.hpp"

namespace dmot {

// Scene reconstruction from a scene config (scene.scenario + scene.seed
// plus any explicit overrides).
SceneSpec scene_from_config(const RunConfig& cfg);

// Config fields applied onto a scenario-built spec. merge_occluded stays
// scenario-defined unless the config set it explicitly.
void apply_scene_overrides(SceneSpec& spec, const RunConfig& cfg);

TrackerConfig tracker_config(const RunConfig& cfg);

// One fully generated benchmark sequence (kept in memory).
struct SuiteSequence {
    std::string name;
    SceneSpec spec;
    std::vector<MotRecord> gt;
    std::vector<std::vector<SimDetection>> dets;  // per frame, 0-based
};

std::vector<SuiteSequence> build_suite(const RunConfig& cfg);

std::vector<MotRecord> gt_records(const SceneSpec& spec);
std::vector<std::vector<SimDetection>> det_frames(const SceneSpec& spec);

std::vector<MotRecord> det_records(const std::vector<std::vector<SimDetection>>& frames);
std::vector<std::vector<Detection>> strip_sources(const std::vector<std::vector<SimDetection>>& frames);

// Detections regrouped per frame from a MOT file (id -1 rows); absent depth
// becomes the neutral 0.5.
std::vector<std::vector<Detection>> detections_from_records(const std::vector<MotRecord>& records);

// Track + evaluate one sequence in memory.
MetricReport evaluate_tracker_run(const std::string& name, TrackerKind kind, const TrackerConfig& tcfg,
                                  const std::vector<MotRecord>& gt,
                                  const std::vector<std::vector<Detection>>& dets);

// (frame, instance id) -> soft label, computed over window-covered frames.
std::map<std::pair<int, int>, SoftDepthLabel> label_map(const SceneSpec& spec, WindowSpec windows);

// Detections with depths replaced by the instance's soft label wherever one
// exists (the uncovered frames keep their detector depth).
std::vector<std::vector<Detection>> apply_label_depths(
    const std::vector<std::vector<SimDetection>>& frames,
    const std::map<std::pair<int, int>, SoftDepthLabel>& labels);

}  // namespace dmot
