#include "dmot/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "dmot/rng.hpp"

namespace dmot::kernels {

namespace {
constexpr int64_t kChunk = 4096;

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline double depth_pixel(std::span<const RasterTarget> targets, double sigma, uint64_t noise_seed,
                          int x, int y, int width) {
    int owner = pixel_owner(targets, x, y);
    if (owner < 0) return 1.0;  // background is farthest
    double d = 0.0;
    for (const auto& t : targets)
        if (t.id == owner) { d = t.depth; break; }
    if (sigma > 0.0) {
        size_t idx = static_cast<size_t>(y) * width + x;
        d += sigma * gaussian_at(mix_seed(noise_seed, idx));
    }
    return clamp01(d);
}
}  // namespace

int pixel_owner(std::span<const RasterTarget> targets, int x, int y) {
    int owner = -1;
    double best = 2.0;
    for (const auto& t : targets) {
        if (x < t.x0 || x >= t.x1 || y < t.y0 || y >= t.y1) continue;
        if (t.depth < best || (t.depth == best && (owner < 0 || t.id < owner))) {
            best = t.depth;
            owner = t.id;
        }
    }
    return owner;
}

void mask_multiply(const DepthMap& d, const InstanceMask& m, DepthMap& out) {
    require_same_shape(d, m);
    out = DepthMap(d.width, d.height);
    const int64_t n = static_cast<int64_t>(d.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) out.values[i] = d.values[i] * (m.bits[i] ? 1.0 : 0.0);
}

double masked_sum(std::span<const double> values, std::span<const uint8_t> mask) {
    const int64_t n = static_cast<int64_t>(values.size());
    const int64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < chunks; ++c) {
        double s = 0.0;
        const int64_t end = std::min(n, (c + 1) * kChunk);
        for (int64_t i = c * kChunk; i < end; ++i)
            if (mask[i]) s += values[i];
        partial[c] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

int64_t masked_count(std::span<const uint8_t> mask) {
    const int64_t n = static_cast<int64_t>(mask.size());
    int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (int64_t i = 0; i < n; ++i) count += mask[i] ? 1 : 0;
    return count;
}

void render_depth(std::span<const RasterTarget> targets, double sigma, uint64_t noise_seed, DepthMap& out) {
    const int64_t n = static_cast<int64_t>(out.size());
    const int width = out.width;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        int x = static_cast<int>(i % width);
        int y = static_cast<int>(i / width);
        out.values[i] = depth_pixel(targets, sigma, noise_seed, x, y, width);
    }
}

void render_mask(std::span<const RasterTarget> targets, int target_id, InstanceMask& out) {
    const int64_t n = static_cast<int64_t>(out.size());
    const int width = out.width;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        int x = static_cast<int>(i % width);
        int y = static_cast<int>(i / width);
        out.bits[i] = pixel_owner(targets, x, y) == target_id ? 1 : 0;
    }
}

namespace serial {

void mask_multiply(const DepthMap& d, const InstanceMask& m, DepthMap& out) {
    require_same_shape(d, m);
    out = DepthMap(d.width, d.height);
    for (size_t i = 0; i < d.size(); ++i) out.values[i] = d.values[i] * (m.bits[i] ? 1.0 : 0.0);
}

double masked_sum(std::span<const double> values, std::span<const uint8_t> mask) {
    double s = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        if (mask[i]) s += values[i];
    return s;
}

int64_t masked_count(std::span<const uint8_t> mask) {
    int64_t count = 0;
    for (uint8_t b : mask)
        if (b) ++count;
    return count;
}

void render_depth(std::span<const RasterTarget> targets, double sigma, uint64_t noise_seed, DepthMap& out) {
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = depth_pixel(targets, sigma, noise_seed, x, y, out.width);
}

void render_mask(std::span<const RasterTarget> targets, int target_id, InstanceMask& out) {
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = pixel_owner(targets, x, y) == target_id ? 1 : 0;
}

}  // namespace serial
}  // namespace dmot::kernels
