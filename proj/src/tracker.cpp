#include "dmot/tracker.hpp"

#include <algorithm>

namespace dmot {
namespace {

std::vector<BBox> track_boxes(const std::vector<Track>& tracks, const std::vector<int>& idx) {
    std::vector<BBox> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(state_box(tracks[static_cast<size_t>(i)].kf));
    return out;
}

std::vector<double> track_depths(const std::vector<Track>& tracks, const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(tracks[static_cast<size_t>(i)].depth);
    return out;
}

}  // namespace

double update_track_depth(double track_depth, double det_depth, double ema) {
    return (1.0 - ema) * track_depth + ema * det_depth;
}

std::vector<MotRecord> Tracker::step(int frame, const std::vector<Detection>& dets) {
    ++frame_count_;

    // gamma = 0 removes the depth term from every cost, so the run must be
    // indistinguishable from a depth-disabled one (ablation control).
    const bool depth_active = cfg_.depth_enabled && cfg_.gamma > 0.0;

    for (auto& t : tracks_) t.kf = kf_predict(t.kf);

    // Split detections. kSort keeps only the high band; kByte keeps the low
    // band for its rescue stage.
    std::vector<int> high, low;
    for (size_t j = 0; j < dets.size(); ++j) {
        if (dets[j].score >= cfg_.tau_high)
            high.push_back(static_cast<int>(j));
        else if (dets[j].score >= cfg_.tau_low && kind_ == TrackerKind::kByte)
            low.push_back(static_cast<int>(j));
    }

    std::vector<int> alive;
    for (size_t i = 0; i < tracks_.size(); ++i)
        if (tracks_[i].state != TrackState::kRemoved) alive.push_back(static_cast<int>(i));

    std::vector<char> track_matched(tracks_.size(), 0);
    std::vector<char> det_used(dets.size(), 0);

    auto match_stage = [&](const std::vector<int>& trk_idx, const std::vector<int>& det_idx,
                           bool with_depth) {
        if (trk_idx.empty() || det_idx.empty()) return;
        std::vector<BBox> tb = track_boxes(tracks_, trk_idx);
        std::vector<BBox> db;
        db.reserve(det_idx.size());
        for (int j : det_idx) db.push_back(dets[static_cast<size_t>(j)].box);

        CostMatrix cost = iou_cost(tb, db);
        if (with_depth && depth_active) {
            std::vector<double> dd;
            dd.reserve(det_idx.size());
            for (int j : det_idx) dd.push_back(dets[static_cast<size_t>(j)].depth);
            CostMatrix depth = depth_distance(track_depths(tracks_, trk_idx), dd, cfg_.eta);
            cost = fuse_cost(cost, depth, cfg_.lambda, cfg_.gamma);
        }

        Assignment matches = gate(hungarian(cost), cost, cfg_.iou_gate);
        for (auto [r, c] : matches.pairs) {
            Track& t = tracks_[static_cast<size_t>(trk_idx[static_cast<size_t>(r)])];
            const Detection& d = dets[static_cast<size_t>(det_idx[static_cast<size_t>(c)])];
            t.kf = kf_update(t.kf, d.box);
            t.depth = update_track_depth(t.depth, d.depth, cfg_.depth_ema);
            t.hits += 1;
            t.age = 0;
            if (t.hits >= cfg_.min_hits) t.state = TrackState::kConfirmed;
            track_matched[static_cast<size_t>(trk_idx[static_cast<size_t>(r)])] = 1;
            det_used[static_cast<size_t>(det_idx[static_cast<size_t>(c)])] = 1;
        }
    };

    if (kind_ == TrackerKind::kSort) {
        // Single stage over high detections; depth fuses into it directly.
        match_stage(alive, high, /*with_depth=*/true);
    } else {
        // Stage 1: IoU only, high detections.
        match_stage(alive, high, /*with_depth=*/false);
        // Stage 2: leftover tracks vs low detections, depth-fused cost.
        std::vector<int> remaining;
        for (int i : alive)
            if (!track_matched[static_cast<size_t>(i)]) remaining.push_back(i);
        match_stage(remaining, low, /*with_depth=*/true);
    }

    // Lifecycle: unmatched tracks age; stale ones retire.
    for (int i : alive) {
        Track& t = tracks_[static_cast<size_t>(i)];
        if (track_matched[static_cast<size_t>(i)]) continue;
        t.age += 1;
        t.hits = 0;
        if (t.age > cfg_.max_age) t.state = TrackState::kRemoved;
    }

    // New tracks spawn only from unmatched high detections.
    for (int j : high) {
        if (det_used[static_cast<size_t>(j)]) continue;
        const Detection& d = dets[static_cast<size_t>(j)];
        Track t{next_id_++, kf_init(d.box), d.depth};
        if (cfg_.min_hits <= 1) t.state = TrackState::kConfirmed;
        tracks_.push_back(t);
        track_matched.push_back(1);
    }

    std::vector<MotRecord> out;
    for (size_t i = 0; i < tracks_.size(); ++i) {
        Track& t = tracks_[i];
        if (t.state == TrackState::kRemoved || !track_matched[i]) continue;
        // Grace period: a fresh track may be emitted while the sequence is
        // younger than min_hits, as in the reference SORT lifecycle.
        bool confirmed = t.state == TrackState::kConfirmed || frame_count_ <= cfg_.min_hits;
        if (!confirmed) continue;
        BBox b = state_box(t.kf);
        MotRecord rec;
        rec.frame = frame;
        rec.id = t.id;
        rec.x = b.x;
        rec.y = b.y;
        rec.w = b.w;
        rec.h = b.h;
        rec.conf = 1.0;
        rec.depth = depth_active ? t.depth : -1.0;
        out.push_back(rec);
    }

    // Drop removed tracks from storage; ids are never reused.
    tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                                 [](const Track& t) { return t.state == TrackState::kRemoved; }),
                  tracks_.end());
    return out;
}

std::vector<MotRecord> run_tracker(TrackerKind kind, const TrackerConfig& cfg,
                                   const std::vector<std::vector<Detection>>& frames) {
    Tracker tracker(kind, cfg);
    std::vector<MotRecord> out;
    for (size_t f = 0; f < frames.size(); ++f) {
        auto rows = tracker.step(static_cast<int>(f) + 1, frames[f]);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

}  // namespace dmot
