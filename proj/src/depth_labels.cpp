#include "dmot/depth_labels.hpp"

#include <algorithm>
#include <cmath>

#include "dmot/kernels.hpp"
#include "dmot/rng.hpp"

namespace dmot {

std::vector<FrameWindow> sliding_windows(int n_frames, WindowSpec spec) {
    if (n_frames < 1) throw ContractError("sliding_windows: n_frames must be >= 1");
    if (spec.window < 1 || spec.stride < 1)
        throw ContractError("sliding_windows: window and stride must be >= 1");
    std::vector<FrameWindow> out;
    for (int k = 0;; ++k) {
        int first = k * spec.stride + 1;
        int last = first + spec.window - 1;
        if (last > n_frames) break;
        out.push_back({first, last});
    }
    return out;
}

DepthMap instance_depth(const DepthMap& d, const InstanceMask& m) {
    DepthMap out;
    kernels::mask_multiply(d, m, out);
    return out;
}

std::optional<double> soft_label(const DepthMap& d, const InstanceMask& m) {
    require_same_shape(d, m);
    int64_t n = kernels::masked_count(m.bits);
    if (n == 0) return std::nullopt;
    return kernels::masked_sum(d.values, m.bits) / static_cast<double>(n);
}

double box_average(const DepthMap& d, const SceneSpec& spec, const BBox& box) {
    TargetState s{0, box, 0.5, 1.0};
    auto r = rasterize(spec, s);
    if (r.x1 <= r.x0 || r.y1 <= r.y0) throw ContractError("box_average: box does not overlap the frame");
    double sum = 0.0;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) sum += d.at(x, y);
    return sum / (static_cast<double>(r.x1 - r.x0) * (r.y1 - r.y0));
}

DepthMap synth_depth_oracle(const SceneSpec& spec, int frame) {
    auto states = frame_states(spec, frame);  // validates the frame index
    std::vector<kernels::RasterTarget> rasters;
    rasters.reserve(states.size());
    for (const auto& s : states) rasters.push_back(rasterize(spec, s));

    DepthMap out(spec.width, spec.height);
    uint64_t noise_seed = mix_seed(spec.seed, static_cast<uint64_t>(frame), 0xD4A9ULL);
    kernels::render_depth(rasters, spec.depth_noise, noise_seed, out);
    return out;
}

InstanceMask synth_mask_oracle(const SceneSpec& spec, int frame, const BBox& prompt) {
    auto states = frame_states(spec, frame);

    int best_id = -1;
    double best_iou = 0.0;
    for (const auto& s : states) {
        double v = iou(s.box, prompt);
        if (v > best_iou) {
            best_iou = v;
            best_id = s.id;
        }
    }

    InstanceMask out(spec.width, spec.height);
    if (best_id < 0) return out;  // prompt overlaps no target: empty mask

    std::vector<kernels::RasterTarget> rasters;
    rasters.reserve(states.size());
    for (const auto& s : states) rasters.push_back(rasterize(spec, s));
    kernels::render_mask(rasters, best_id, out);
    return out;
}

std::vector<SoftDepthLabel> label_sequence(const SceneSpec& spec, WindowSpec windows) {
    std::vector<char> covered(static_cast<size_t>(spec.frames) + 1, 0);
    for (const auto& w : sliding_windows(spec.frames, windows))
        for (int f = w.first; f <= w.last; ++f) covered[static_cast<size_t>(f)] = 1;

    std::vector<SoftDepthLabel> labels;
    for (int frame = 1; frame <= spec.frames; ++frame) {
        if (!covered[static_cast<size_t>(frame)]) continue;
        auto states = frame_states(spec, frame);
        if (states.empty()) continue;

        // Equivalent to soft_label(synth_depth_oracle(...), synth_mask_oracle(...))
        // but confined to each instance's own box raster: a target can only
        // own pixels there, and the per-pixel noise is indexed by absolute
        // pixel position, so the values match the full renders exactly.
        std::vector<kernels::RasterTarget> rasters;
        rasters.reserve(states.size());
        for (const auto& s : states) rasters.push_back(rasterize(spec, s));
        const uint64_t noise_seed = mix_seed(spec.seed, static_cast<uint64_t>(frame), 0xD4A9ULL);

        auto pixel_value = [&](int owner, size_t idx) {
            double d = 1.0;  // background
            if (owner >= 0) {
                for (const auto& s : states)
                    if (s.id == owner) {
                        d = s.depth;
                        break;
                    }
                if (spec.depth_noise > 0.0) d += spec.depth_noise * gaussian_at(mix_seed(noise_seed, idx));
            }
            return std::clamp(d, 0.0, 1.0);
        };

        for (size_t i = 0; i < states.size(); ++i) {
            const auto& r = rasters[i];
            double own_sum = 0.0, box_sum = 0.0;
            int64_t own_n = 0, box_n = 0;
            for (int y = r.y0; y < r.y1; ++y)
                for (int x = r.x0; x < r.x1; ++x) {
                    int owner = kernels::pixel_owner(rasters, x, y);
                    size_t idx = static_cast<size_t>(y) * spec.width + x;
                    double v = pixel_value(owner, idx);
                    box_sum += v;
                    ++box_n;
                    if (owner == r.id) {
                        own_sum += v;
                        ++own_n;
                    }
                }
            if (own_n > 0) {
                labels.push_back({states[i].id, frame, own_sum / static_cast<double>(own_n), false});
            } else {
                // Fully occluded instance: fall back to the box average so
                // label generation never aborts mid-sequence.
                labels.push_back({states[i].id, frame, box_sum / static_cast<double>(box_n), true});
            }
        }
    }
    return labels;
}

}  // namespace dmot
