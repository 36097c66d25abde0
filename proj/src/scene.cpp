#include "dmot/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "dmot/rng.hpp"

namespace dmot {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

struct Placement {
    double cx, cy, z, w, h;
};

Placement place(const TargetSpec& t, int frame) {
    const double age = static_cast<double>(frame - t.spawn);
    double cx = t.x0 + t.vx * age;
    if (t.osc_period > 0.0 && t.osc_amp != 0.0)
        cx += t.osc_amp * std::sin(kTwoPi * age / t.osc_period + t.osc_phase);
    const double cy = t.y0 + t.vy * age;
    const double z = clamp(t.z0 + t.vz * age, 0.05, 1.0);
    const double scale = 0.5 / z;
    return {cx, cy, z, t.base_w * scale, t.base_h * scale};
}

// Pixel p is inside [a, b) when its center p + 0.5 is.
inline int first_pixel(double a) { return static_cast<int>(std::ceil(a - 0.5)); }
inline int last_pixel_excl(double b) { return static_cast<int>(std::ceil(b - 0.5)); }

}  // namespace

kernels::RasterTarget rasterize(const SceneSpec& spec, const TargetState& s) {
    kernels::RasterTarget r;
    r.id = s.id;
    r.depth = s.depth;
    r.x0 = std::max(0, first_pixel(s.box.x));
    r.x1 = std::min(spec.width, last_pixel_excl(s.box.right()));
    r.y0 = std::max(0, first_pixel(s.box.y));
    r.y1 = std::min(spec.height, last_pixel_excl(s.box.bottom()));
    if (r.x1 < r.x0) r.x1 = r.x0;
    if (r.y1 < r.y0) r.y1 = r.y0;
    return r;
}

std::vector<TargetState> frame_states(const SceneSpec& spec, int frame) {
    if (frame < 1 || frame > spec.frames)
        throw ContractError("frame " + std::to_string(frame) + " outside scene range [1," +
                            std::to_string(spec.frames) + "]");

    std::vector<TargetState> states;
    for (const auto& t : spec.targets) {
        if (frame < t.spawn || frame > t.despawn) continue;
        Placement p = place(t, frame);
        TargetState s{t.id, BBox(p.cx - p.w / 2.0, p.cy - p.h / 2.0, p.w, p.h), p.z, 1.0};
        auto r = rasterize(spec, s);
        if (r.x1 <= r.x0 || r.y1 <= r.y0) continue;  // fully off-screen
        states.push_back(s);
    }
    std::sort(states.begin(), states.end(), [](const TargetState& a, const TargetState& b) { return a.id < b.id; });

    // Visibility: fraction of a target's on-screen raster it still owns once
    // nearer targets are painted over it.
    std::vector<kernels::RasterTarget> rasters;
    rasters.reserve(states.size());
    for (const auto& s : states) rasters.push_back(rasterize(spec, s));
    for (size_t i = 0; i < states.size(); ++i) {
        const auto& r = rasters[i];
        int64_t total = static_cast<int64_t>(r.x1 - r.x0) * (r.y1 - r.y0);
        int64_t own = 0;
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x)
                if (kernels::pixel_owner(rasters, x, y) == r.id) ++own;
        states[i].visibility = total > 0 ? static_cast<double>(own) / static_cast<double>(total) : 0.0;
    }
    return states;
}

std::vector<MotRecord> render_frame(const SceneSpec& spec, int frame) {
    std::vector<MotRecord> rows;
    for (const auto& s : frame_states(spec, frame)) {
        MotRecord rec;
        rec.frame = frame;
        rec.id = s.id;
        rec.x = s.box.x;
        rec.y = s.box.y;
        rec.w = s.box.w;
        rec.h = s.box.h;
        rec.conf = 1.0;
        rec.depth = s.depth;
        rows.push_back(rec);
    }
    return rows;
}

std::vector<SimDetection> detect(const SceneSpec& spec, int frame, const std::vector<TargetState>& states) {
    Rng rng(mix_seed(spec.seed, static_cast<uint64_t>(frame), 0xDE7EC7ULL));
    const auto& dm = spec.detector;

    struct Cand {
        double x, y, w, h, score, depth;
        int source;
    };
    std::vector<Cand> cands;
    for (const auto& s : states) {
        // Fixed draw order per target keeps the stream aligned across
        // branch outcomes.
        const double miss_u = rng.next_double();
        const double jx = rng.gaussian();
        const double jy = rng.gaussian();
        const double jw = rng.gaussian();
        const double jh = rng.gaussian();
        const double score_u = rng.next_double();
        const double depth_g = rng.gaussian();

        if (s.visibility <= 0.0) continue;
        const double miss_rate = s.visibility < 0.5 ? dm.miss_rate_occluded : dm.miss_rate_base;
        if (miss_u < miss_rate) continue;

        Cand c;
        c.x = s.box.x + dm.jitter_sigma * jx;
        c.y = s.box.y + dm.jitter_sigma * jy;
        c.w = std::max(2.0, s.box.w + dm.jitter_sigma * jw);
        c.h = std::max(2.0, s.box.h + dm.jitter_sigma * jh);
        c.score = clamp(s.visibility * (1.0 - dm.score_noise * score_u), 0.0, 1.0);
        c.depth = clamp(s.depth + spec.depth_noise * depth_g, 0.0, 1.0);
        c.source = s.id;
        cands.push_back(c);
    }

    // Low-confidence clutter: expected clutter_rate false boxes per frame.
    double remaining = dm.clutter_rate;
    while (remaining > 0.0) {
        double draw = rng.next_double();
        if (draw >= std::min(remaining, 1.0)) break;
        remaining -= 1.0;
        Cand c;
        c.w = rng.uniform(40.0, 70.0);
        c.h = 2.0 * c.w;
        c.x = rng.uniform(0.0, std::max(1.0, spec.width - c.w));
        c.y = rng.uniform(0.0, std::max(1.0, spec.height - c.h));
        c.score = rng.uniform(0.1, 0.55);
        c.depth = rng.uniform(0.05, 0.95);
        c.source = -1;
        cands.push_back(c);
    }

    if (dm.merge_occluded && cands.size() > 1) {
        // Heavily overlapping candidates collapse into one box; the nearer
        // target keeps ownership (its depth and score survive).
        std::vector<size_t> order(cands.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return std::tie(cands[a].depth, cands[a].source) < std::tie(cands[b].depth, cands[b].source);
        });
        std::vector<bool> gone(cands.size(), false);
        for (size_t oi = 0; oi < order.size(); ++oi) {
            size_t i = order[oi];
            if (gone[i]) continue;
            for (size_t oj = oi + 1; oj < order.size(); ++oj) {
                size_t j = order[oj];
                if (gone[j]) continue;
                BBox bi(cands[i].x, cands[i].y, cands[i].w, cands[i].h);
                BBox bj(cands[j].x, cands[j].y, cands[j].w, cands[j].h);
                if (iou(bi, bj) > dm.merge_iou) {
                    double x1 = std::min(bi.x, bj.x), y1 = std::min(bi.y, bj.y);
                    double x2 = std::max(bi.right(), bj.right()), y2 = std::max(bi.bottom(), bj.bottom());
                    cands[i].x = x1;
                    cands[i].y = y1;
                    cands[i].w = x2 - x1;
                    cands[i].h = y2 - y1;
                    cands[i].score = std::max(cands[i].score, cands[j].score);
                    gone[j] = true;
                }
            }
        }
        std::vector<Cand> kept;
        for (size_t i = 0; i < cands.size(); ++i)
            if (!gone[i]) kept.push_back(cands[i]);
        cands = std::move(kept);
    }

    std::vector<SimDetection> out;
    for (const auto& c : cands)
        out.push_back({Detection(BBox(c.x, c.y, c.w, c.h), c.score, c.depth), c.source});
    return out;
}

// ---------------------------------------------------------------------------
// Benchmark scenarios. Depths sit on a dyadic grid (multiples of 1/1024) so
// that noiseless masked averages reproduce them without rounding.

SceneSpec make_crossing(uint64_t seed) {
    SceneSpec s;
    s.name = "CROSSING";
    s.seed = seed;
    s.frames = 100;
    s.detector.merge_occluded = false;
    Rng r(mix_seed(seed, 0xC205511CULL));

    const double y1 = 180 + r.uniform_int(-15, 15);
    const double y2 = y1 + r.uniform_int(-10, 10);
    const double z1 = 0.4375 + r.uniform_int(-8, 8) / 256.0;
    const double z2 = 0.625 + r.uniform_int(-8, 8) / 256.0;

    TargetSpec a;
    a.id = 1;
    a.spawn = 1;
    a.despawn = s.frames;
    a.x0 = 110 + r.uniform_int(-10, 10);
    a.y0 = y1;
    a.z0 = z1;
    a.vx = 4.0 + r.uniform_int(-4, 4) / 8.0;
    a.base_w = 112.0 * z1;  // rendered 56 px wide at its own depth
    a.base_h = 224.0 * z1;
    s.targets.push_back(a);

    TargetSpec b;
    b.id = 2;
    b.spawn = 1;
    b.despawn = s.frames;
    b.x0 = 530 + r.uniform_int(-10, 10);
    b.y0 = y2;
    b.z0 = z2;
    b.vx = -(4.0 + r.uniform_int(-4, 4) / 8.0);
    b.base_w = 112.0 * z2;
    b.base_h = 224.0 * z2;
    s.targets.push_back(b);
    return s;
}

SceneSpec make_overtake(uint64_t seed) {
    SceneSpec s;
    s.name = "OVERTAKE";
    s.seed = seed;
    s.frames = 120;
    s.detector.merge_occluded = true;
    Rng r(mix_seed(seed, 0x07E27A4EULL));

    TargetSpec far;  // slow, drifts sideways while hidden behind the passer
    far.id = 1;
    far.spawn = 1;
    far.despawn = s.frames;
    far.z0 = 0.75 + r.uniform_int(-6, 6) / 256.0;
    far.y0 = 176 + r.uniform_int(-12, 12);
    far.x0 = 330 + r.uniform_int(-15, 15);
    far.vx = 0.5;
    far.osc_amp = 50.0;
    far.osc_period = 40.0;
    far.osc_phase = r.uniform(0.0, kTwoPi);
    far.base_w = 112.0 * far.z0;  // rendered 56x112
    far.base_h = 224.0 * far.z0;
    s.targets.push_back(far);

    // Wide, slow passer: hides the far target completely for ~20 frames,
    // long enough for the drift above to carry it away from a coasted
    // constant-velocity prediction.
    TargetSpec near;
    near.id = 2;
    near.spawn = 1;
    near.despawn = s.frames;
    near.z0 = 0.3125 + r.uniform_int(-5, 5) / 256.0;
    near.y0 = far.y0 + r.uniform_int(-8, 8);
    near.x0 = 120 + r.uniform_int(-10, 10);
    near.vx = 3.5 + r.uniform_int(-4, 4) / 8.0;
    near.base_w = 240.0 * near.z0;  // rendered 120x176
    near.base_h = 352.0 * near.z0;
    s.targets.push_back(near);
    return s;
}

SceneSpec make_crowd(uint64_t seed) {
    SceneSpec s;
    s.name = "CROWD";
    s.seed = seed;
    s.frames = 140;
    s.detector.merge_occluded = true;
    Rng r(mix_seed(seed, 0xC20D5EEDULL));

    // Three lanes, two opposed targets per lane. Within a lane the pair is
    // far apart in depth, so depth is the reliable cue through the lane's
    // own crossing. Across lanes 0 and 1 the two occluded (far) members
    // are depth twins and their crossings coincide in time: noisy depth
    // alone cannot tell them apart, only their positions can.
    const double near_band[3] = {0.46875, 0.5, 0.59375};
    const double far_band[3] = {0.75, 0.765625, 0.8125};
    const double lanes[3] = {110.0, 180.0, 250.0};
    const double meet_base[3] = {34.0, 36.0, 92.0};
    for (int i = 0; i < 6; ++i) {
        TargetSpec t;
        t.id = i + 1;
        t.spawn = 1;
        t.despawn = s.frames;
        int lane = i / 2;
        bool is_far = (i % 2 == 1);
        t.z0 = (is_far ? far_band[lane] : near_band[lane]) + r.uniform_int(-4, 4) / 1024.0;
        t.y0 = lanes[lane] + r.uniform_int(-6, 6);
        const double speed = 2.5 + r.uniform_int(0, 8) / 8.0;
        const double meet_frame = meet_base[lane] + r.uniform_int(-4, 4);
        const double gap = speed * meet_frame;
        if (is_far) {
            t.x0 = 320.0 + gap + r.uniform_int(-6, 6);
            t.vx = -speed;
        } else {
            t.x0 = 320.0 - gap + r.uniform_int(-6, 6);
            t.vx = speed;
        }
        // occluded members drift laterally so coasted predictions go stale
        if (is_far) {
            t.osc_amp = 28.0;
            t.osc_period = 38.0 + 4.0 * lane + r.uniform_int(-4, 4);
            t.osc_phase = r.uniform(0.0, kTwoPi);
        } else {
            t.osc_amp = 10.0;
            t.osc_period = 50.0 + r.uniform_int(-6, 6);
            t.osc_phase = r.uniform(0.0, kTwoPi);
        }
        if (i == 0) t.vz = -1.0 / 1024.0;
        t.base_w = 96.0 * t.z0;  // rendered 48x96 for every target
        t.base_h = 192.0 * t.z0;
        s.targets.push_back(t);
    }
    return s;
}

SceneSpec make_parallel(uint64_t seed) {
    SceneSpec s;
    s.name = "PARALLEL";
    s.seed = seed;
    s.frames = 100;
    s.detector.merge_occluded = false;
    Rng r(mix_seed(seed, 0x9A2A77E1ULL));

    // Base sizes compensate depth so all three render at the same box size:
    // 2D geometry alone cannot tell them apart.
    const double zs[3] = {0.25 + r.uniform_int(-4, 4) / 1024.0, 0.5625 + r.uniform_int(-4, 4) / 1024.0,
                          0.875 + r.uniform_int(-4, 4) / 1024.0};
    const double ys[3] = {188.0 + r.uniform_int(-6, 6), 174.0 + r.uniform_int(-6, 6),
                          160.0 + r.uniform_int(-6, 6)};
    const double x_near = 120 + r.uniform_int(-8, 8);
    for (int i = 0; i < 3; ++i) {
        TargetSpec t;
        t.id = i + 1;
        t.spawn = 1;
        t.despawn = s.frames;
        t.z0 = zs[i];
        t.y0 = ys[i];
        t.x0 = x_near + 26.0 * i;
        t.vx = 3.0;
        t.base_w = 104.0 * t.z0;  // all render 52x104
        t.base_h = 208.0 * t.z0;
        // mid and far weave across the near target's lane and reverse
        // while hidden behind it
        if (i == 1) {
            t.osc_amp = 40.0;
            t.osc_period = 48.0 + r.uniform_int(-6, 6);
            t.osc_phase = r.uniform(0.0, kTwoPi);
        } else if (i == 2) {
            t.osc_amp = 48.0;
            t.osc_period = 36.0 + r.uniform_int(-4, 4);
            t.osc_phase = r.uniform(0.0, kTwoPi);
        }
        s.targets.push_back(t);
    }
    return s;
}

SceneSpec make_scenario(const std::string& kind, uint64_t seed) {
    if (kind == "CROSSING") return make_crossing(seed);
    if (kind == "OVERTAKE") return make_overtake(seed);
    if (kind == "CROWD") return make_crowd(seed);
    if (kind == "PARALLEL") return make_parallel(seed);
    throw ContractError("unknown scenario '" + kind + "'");
}

std::vector<Scenario> benchmark_suite(uint64_t base_seed, int seeds_per_scenario) {
    static const char* kinds[4] = {"CROSSING", "OVERTAKE", "CROWD", "PARALLEL"};
    std::vector<Scenario> out;
    for (const char* kind : kinds) {
        for (int i = 0; i < seeds_per_scenario; ++i) {
            uint64_t seed = base_seed + static_cast<uint64_t>(i);
            Scenario sc;
            sc.name = std::string(kind) + "_" + std::to_string(seed);
            sc.spec = make_scenario(kind, seed);
            sc.spec.name = sc.name;
            out.push_back(std::move(sc));
        }
    }
    return out;
}

}  // namespace dmot
