#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmot/depth_map.hpp"

namespace dmot::kernels {

// Rasterized view of one scene target, used by the pixel kernels. x0/x1 and
// y0/y1 are half-open pixel ranges already clipped to the image.
struct RasterTarget {
    int id;
    int x0, x1;
    int y0, y1;
    double depth;
};

// Pixel owner rule shared by depth and mask rendering: the covering target
// with the smallest depth wins, ties broken by lower id. Returns -1 for
// background.
int pixel_owner(std::span<const RasterTarget> targets, int x, int y);

// The hot loops below are OpenMP-parallel; each output element depends only
// on its own index (noise is counter-based), so results are bit-identical
// for any thread count. kernels::serial holds the plain-loop references the
// tests and the benchmark compare against.

// out[i] = depth[i] * mask[i]
void mask_multiply(const DepthMap& d, const InstanceMask& m, DepthMap& out);

// Sum of values[i] where mask[i] != 0, and the masked pixel count.
// Parallel version reduces over fixed 4096-element chunks combined in chunk
// order, so it is deterministic but may differ from the serial left-to-right
// sum in the last bits.
double masked_sum(std::span<const double> values, std::span<const uint8_t> mask);
int64_t masked_count(std::span<const uint8_t> mask);

// Depth rendering: background 1.0; owned pixels carry the owner's depth
// plus N(0, sigma) counter-based noise, clamped to [0,1].
void render_depth(std::span<const RasterTarget> targets, double sigma, uint64_t noise_seed, DepthMap& out);

// Mask of pixels owned by `target_id`.
void render_mask(std::span<const RasterTarget> targets, int target_id, InstanceMask& out);

namespace serial {
void mask_multiply(const DepthMap& d, const InstanceMask& m, DepthMap& out);
double masked_sum(std::span<const double> values, std::span<const uint8_t> mask);
int64_t masked_count(std::span<const uint8_t> mask);
void render_depth(std::span<const RasterTarget> targets, double sigma, uint64_t noise_seed, DepthMap& out);
void render_mask(std::span<const RasterTarget> targets, int target_id, InstanceMask& out);
}  // namespace serial

}  // namespace dmot::kernels
