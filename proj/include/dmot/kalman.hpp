#pragma once

#include <array>

#include "dmot/errors.hpp"
#include "dmot/geometry.hpp"

namespace dmot {

// Constant-velocity filter over (cx, cy, aspect, h) and their velocities.
// Noise magnitudes scale with box height (DeepSORT convention).
struct KalmanParams {
    double std_weight_pos = 1.0 / 20.0;
    double std_weight_vel = 1.0 / 160.0;
    double meas_scale = 1.0;  // multiplies measurement noise; 0 = exact measurements
};

struct KalmanState {
    std::array<double, 8> mean{};    // cx, cy, a, h, vcx, vcy, va, vh
    std::array<double, 64> cov{};    // row-major 8x8

    double& c(int r, int col) { return cov[static_cast<size_t>(r) * 8 + col]; }
    double c(int r, int col) const { return cov[static_cast<size_t>(r) * 8 + col]; }
};

KalmanState kf_init(const BBox& box, const KalmanParams& p = {});
KalmanState kf_predict(const KalmanState& s, const KalmanParams& p = {});

// Standard gain-weighted correction of the 4 observed components.
// Throws ContractError when the innovation covariance is numerically
// singular.
KalmanState kf_update(const KalmanState& s, const BBox& measurement, const KalmanParams& p = {});

BBox state_box(const KalmanState& s);

}  // namespace dmot
