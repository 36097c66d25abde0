#pragma once

#include <vector>

#include "dmot/assignment.hpp"
#include "dmot/geometry.hpp"
#include "dmot/kalman.hpp"
#include "dmot/mot_io.hpp"

namespace dmot {

struct TrackerConfig {
    double tau_high = 0.6;   // high-score split
    double tau_low = 0.1;    // detections below this are discarded
    int max_age = 30;        // frames a track may coast before removal
    int min_hits = 3;        // consecutive matches before a track is emitted
    double iou_gate = 0.82;  // max accepted matching cost (fused when depth on)
    double lambda = 0.8;     // spatial weight in the fused cost
    double gamma = 0.2;      // depth weight in the fused cost
    double eta = 1.0;        // depth distance scale
    double depth_ema = 1.0;  // blend factor for track depth updates (1 = latest)
    bool depth_enabled = true;
};

enum class TrackState { kTentative, kConfirmed, kRemoved };

struct Track {
    int id;
    KalmanState kf;
    double depth;
    int hits = 1;       // consecutive-match count
    int age = 0;        // frames since last match
    TrackState state = TrackState::kTentative;
};

// depth <- (1 - ema) * track_depth + ema * det_depth
double update_track_depth(double track_depth, double det_depth, double ema);

enum class TrackerKind { kSort, kByte };

// One stateful tracker per sequence. kSort matches all detections at or
// above tau_high in a single stage (depth fused into that stage when
// enabled); kByte matches high detections on IoU alone, then the leftover
// tracks against low detections with the depth-fused cost.
class Tracker {
public:
    Tracker(TrackerKind kind, TrackerConfig cfg) : kind_(kind), cfg_(cfg) {}

    // Advances one frame and returns the rows to emit (confirmed, matched
    // tracks; box from the filter posterior, depth from the track).
    std::vector<MotRecord> step(int frame, const std::vector<Detection>& dets);

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return cfg_; }

private:
    TrackerKind kind_;
    TrackerConfig cfg_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    int frame_count_ = 0;
};

// Convenience wrappers naming the two engines.
std::vector<MotRecord> run_tracker(TrackerKind kind, const TrackerConfig& cfg,
                                   const std::vector<std::vector<Detection>>& frames);

}  // namespace dmot
