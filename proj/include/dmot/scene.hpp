#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmot/geometry.hpp"
#include "dmot/kernels.hpp"
#include "dmot/mot_io.hpp"

namespace dmot {

// Scripted 3D target: straight-line motion plus an optional lateral
// sinusoid, with perspective modeled purely by the 1/z box-size law
// (box size = base size * 0.5/z, so base size is the size at z = 0.5).
struct TargetSpec {
    int id = 0;
    int spawn = 1;
    int despawn = 1;
    double x0 = 0.0, y0 = 0.0;  // center position at spawn
    double z0 = 0.5;            // normalized depth in [0.05, 1]
    double vx = 0.0, vy = 0.0, vz = 0.0;
    double base_w = 50.0, base_h = 100.0;
    double osc_amp = 0.0;     // lateral x oscillation, pixels
    double osc_period = 0.0;  // frames; 0 disables
    double osc_phase = 0.0;
};

// Detector imperfection model applied on top of ground truth.
struct DetectorModel {
    double jitter_sigma = 1.5;       // px, gaussian on box coords
    double miss_rate_base = 0.05;    // P(miss) when visibility >= 0.5
    double miss_rate_occluded = 0.35;  // P(miss) when visibility < 0.5
    double score_noise = 0.3;        // score = visibility * (1 - U[0, score_noise])
    bool merge_occluded = false;     // merge heavily overlapping boxes into one
    double merge_iou = 0.7;
    // Expected low-confidence false positives per frame, uniform over the
    // image with random depth. Clutter never scores above the usual
    // high-confidence band.
    double clutter_rate = 0.08;
};

struct SceneSpec {
    std::string name = "scene";
    uint64_t seed = 1;
    int frames = 100;
    int width = 640;
    int height = 360;
    double depth_noise = 0.02;  // sigma_d for depth oracle and detections
    std::vector<TargetSpec> targets;
    DetectorModel detector;
};

// Per-frame resolved target: box, true depth, visible fraction.
struct TargetState {
    int id;
    BBox box;
    double depth;
    double visibility;  // visible pixels / on-screen silhouette pixels
};

// Clipped integer raster of a state's box (empty when off-screen).
kernels::RasterTarget rasterize(const SceneSpec& spec, const TargetState& s);

// Targets alive at `frame` with at least one on-screen pixel, id order.
// Throws ContractError when frame is outside [1, frames].
std::vector<TargetState> frame_states(const SceneSpec& spec, int frame);

// Ground truth rows for one frame (conf 1, depth = true depth).
std::vector<MotRecord> render_frame(const SceneSpec& spec, int frame);

// A detection plus the id of the target that produced it (kept in memory
// only; files never carry provenance).
struct SimDetection {
    Detection det;
    int source_id;
};

// Noisy detections for one frame; deterministic per (spec.seed, frame).
std::vector<SimDetection> detect(const SceneSpec& spec, int frame, const std::vector<TargetState>& states);

struct Scenario {
    std::string name;
    SceneSpec spec;
};

// The fixed benchmark: CROSSING, OVERTAKE, CROWD, PARALLEL, each
// instantiated for seeds base_seed .. base_seed + seeds_per_scenario - 1.
std::vector<Scenario> benchmark_suite(uint64_t base_seed, int seeds_per_scenario);

// Individual scenario builders (exposed for tests and the label pipeline).
SceneSpec make_crossing(uint64_t seed);
SceneSpec make_overtake(uint64_t seed);
SceneSpec make_crowd(uint64_t seed);
SceneSpec make_parallel(uint64_t seed);
SceneSpec make_scenario(const std::string& kind, uint64_t seed);

}  // namespace dmot
