#pragma once

#include <optional>
#include <vector>

#include "dmot/depth_map.hpp"
#include "dmot/geometry.hpp"
#include "dmot/scene.hpp"

namespace dmot {

// Frame sampling window: `window` consecutive frames per sample, adjacent
// samples start `stride` frames apart.
struct WindowSpec {
    int window = 2;
    int stride = 1;
};

// Inclusive 1-based frame range.
struct FrameWindow {
    int first;
    int last;

    bool operator==(const FrameWindow&) const = default;
};

// Windows [k*stride+1, k*stride+window] that fit entirely in [1, n_frames];
// an incomplete trailing window is dropped. Empty when n_frames < window.
std::vector<FrameWindow> sliding_windows(int n_frames, WindowSpec spec);

// Pixel-wise product: depth values survive inside the mask, zero outside.
DepthMap instance_depth(const DepthMap& d, const InstanceMask& m);

// Masked average. nullopt when the mask is empty (degenerate instance;
// callers fall back to box_average).
std::optional<double> soft_label(const DepthMap& d, const InstanceMask& m);

// Plain average over the box raster, mask ignored. This is the baseline
// that bleeds background and neighbor depth into the label.
double box_average(const DepthMap& d, const SceneSpec& spec, const BBox& box);

// Stand-ins for the frozen depth / segmentation models: deterministic
// renders of the scripted scene.
//
// Depth oracle: background 1.0, target pixels carry the target's true depth
// plus N(0, depth_noise) clamped to [0,1]; nearer targets win overlaps.
DepthMap synth_depth_oracle(const SceneSpec& spec, int frame);

// Mask oracle: visible-pixel mask of the scene target whose ground-truth box
// best overlaps the prompt box (empty mask when nothing overlaps).
InstanceMask synth_mask_oracle(const SceneSpec& spec, int frame, const BBox& prompt);

struct SoftDepthLabel {
    int instance_id;
    int frame;
    double value;
    bool box_fallback;  // true when the mask was empty and box_average was used
};

// Full labeling pass: every frame covered by some window, every instance
// present in that frame. Sorted by (frame, instance).
std::vector<SoftDepthLabel> label_sequence(const SceneSpec& spec, WindowSpec windows);

}  // namespace dmot
