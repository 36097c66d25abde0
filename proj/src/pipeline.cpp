#include "dmot/pipeline.hpp"

#include <algorithm>

namespace dmot {

SceneSpec scene_from_config(const RunConfig& cfg) {
    if (cfg.scenario.empty()) throw ConfigError("scene config must set scene.scenario");
    SceneSpec spec = make_scenario(cfg.scenario, cfg.scene_seed);
    apply_scene_overrides(spec, cfg);
    return spec;
}

void apply_scene_overrides(SceneSpec& spec, const RunConfig& cfg) {
    spec.width = cfg.scene_width;
    spec.height = cfg.scene_height;
    spec.depth_noise = cfg.depth_noise;
    if (cfg.scene_frames > 0) spec.frames = cfg.scene_frames;
    spec.detector.jitter_sigma = cfg.jitter_sigma;
    spec.detector.miss_rate_base = cfg.miss_rate_base;
    spec.detector.miss_rate_occluded = cfg.miss_rate_occluded;
    spec.detector.score_noise = cfg.score_noise;
    spec.detector.merge_iou = cfg.merge_iou;
    spec.detector.clutter_rate = cfg.clutter_rate;
    if (cfg.is_set("detector.merge_occluded")) spec.detector.merge_occluded = cfg.merge_occluded;
}

TrackerConfig tracker_config(const RunConfig& cfg) {
    TrackerConfig t;
    t.tau_high = cfg.tau_high;
    t.tau_low = cfg.tau_low;
    t.max_age = cfg.max_age;
    t.min_hits = cfg.min_hits;
    t.iou_gate = cfg.iou_gate;
    t.lambda = cfg.lambda;
    t.gamma = cfg.gamma;
    t.eta = cfg.eta;
    t.depth_ema = cfg.depth_ema;
    t.depth_enabled = cfg.depth_enabled;
    return t;
}

std::vector<MotRecord> gt_records(const SceneSpec& spec) {
    std::vector<MotRecord> out;
    for (int frame = 1; frame <= spec.frames; ++frame) {
        auto rows = render_frame(spec, frame);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

std::vector<std::vector<SimDetection>> det_frames(const SceneSpec& spec) {
    std::vector<std::vector<SimDetection>> out(static_cast<size_t>(spec.frames));
    for (int frame = 1; frame <= spec.frames; ++frame)
        out[static_cast<size_t>(frame) - 1] = detect(spec, frame, frame_states(spec, frame));
    return out;
}

std::vector<SuiteSequence> build_suite(const RunConfig& cfg) {
    auto scenarios = benchmark_suite(cfg.sim_base_seed, cfg.sim_seeds);
    std::vector<SuiteSequence> out(scenarios.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < scenarios.size(); ++i) {
        SuiteSequence seq;
        seq.name = scenarios[i].name;
        seq.spec = scenarios[i].spec;
        apply_scene_overrides(seq.spec, cfg);
        seq.gt = gt_records(seq.spec);
        seq.dets = det_frames(seq.spec);
        out[i] = std::move(seq);
    }
    return out;
}

std::vector<MotRecord> det_records(const std::vector<std::vector<SimDetection>>& frames) {
    std::vector<MotRecord> out;
    for (size_t f = 0; f < frames.size(); ++f) {
        for (const auto& sd : frames[f]) {
            MotRecord rec;
            rec.frame = static_cast<int>(f) + 1;
            rec.id = -1;
            rec.x = sd.det.box.x;
            rec.y = sd.det.box.y;
            rec.w = sd.det.box.w;
            rec.h = sd.det.box.h;
            rec.conf = sd.det.score;
            rec.depth = sd.det.depth;
            out.push_back(rec);
        }
    }
    return out;
}

std::vector<std::vector<Detection>> strip_sources(const std::vector<std::vector<SimDetection>>& frames) {
    std::vector<std::vector<Detection>> out(frames.size());
    for (size_t f = 0; f < frames.size(); ++f)
        for (const auto& sd : frames[f]) out[f].push_back(sd.det);
    return out;
}

std::vector<std::vector<Detection>> detections_from_records(const std::vector<MotRecord>& records) {
    int max_frame = 0;
    for (const auto& r : records) max_frame = std::max(max_frame, r.frame);
    std::vector<std::vector<Detection>> out(static_cast<size_t>(max_frame));
    for (const auto& r : records) {
        double depth = r.has_depth() ? r.depth : 0.5;
        double conf = std::clamp(r.conf, 0.0, 1.0);
        out[static_cast<size_t>(r.frame) - 1].emplace_back(BBox(r.x, r.y, r.w, r.h), conf, depth);
    }
    return out;
}

MetricReport evaluate_tracker_run(const std::string& name, TrackerKind kind, const TrackerConfig& tcfg,
                                  const std::vector<MotRecord>& gt,
                                  const std::vector<std::vector<Detection>>& dets) {
    auto pred = run_tracker(kind, tcfg, dets);
    return evaluate_sequence(name, gt, pred);
}

std::map<std::pair<int, int>, SoftDepthLabel> label_map(const SceneSpec& spec, WindowSpec windows) {
    std::map<std::pair<int, int>, SoftDepthLabel> out;
    for (const auto& l : label_sequence(spec, windows)) out[{l.frame, l.instance_id}] = l;
    return out;
}

std::vector<std::vector<Detection>> apply_label_depths(
    const std::vector<std::vector<SimDetection>>& frames,
    const std::map<std::pair<int, int>, SoftDepthLabel>& labels) {
    std::vector<std::vector<Detection>> out(frames.size());
    for (size_t f = 0; f < frames.size(); ++f) {
        for (const auto& sd : frames[f]) {
            Detection d = sd.det;
            auto it = labels.find({static_cast<int>(f) + 1, sd.source_id});
            if (it != labels.end()) d = Detection(d.box, d.score, std::clamp(it->second.value, 0.0, 1.0));
            out[f].push_back(d);
        }
    }
    return out;
}

}  // namespace dmot
