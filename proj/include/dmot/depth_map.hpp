#pragma once

#include <cstdint>
#include <vector>

#include "dmot/errors.hpp"

namespace dmot {

// Dense per-pixel depth in [0,1], row-major.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    DepthMap() = default;
    DepthMap(int w, int h, double fill = 0.0) : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw ContractError("DepthMap: dimensions must be positive");
    }

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }
};

// Dense zero/one instance mask with the same layout as DepthMap.
struct InstanceMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    InstanceMask() = default;
    InstanceMask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {
        if (w < 1 || h < 1) throw ContractError("InstanceMask: dimensions must be positive");
    }

    uint8_t& at(int x, int y) { return bits[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return bits.size(); }
};

inline void require_same_shape(const DepthMap& d, const InstanceMask& m) {
    if (d.width != m.width || d.height != m.height)
        throw ContractError("depth map and mask dimensions differ");
}

}  // namespace dmot
