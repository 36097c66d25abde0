#include "dmot/kalman.hpp"

#include <algorithm>
#include <cmath>

namespace dmot {
namespace {

// Cholesky solve of the 4x4 SPD system S * X = B (B is 4xk, row-major).
// Returns false when a pivot collapses.
bool solve_spd4(const std::array<double, 16>& s_in, double* b, int k) {
    std::array<double, 16> L{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = s_in[static_cast<size_t>(i) * 4 + j];
            for (int m = 0; m < j; ++m) sum -= L[static_cast<size_t>(i) * 4 + m] * L[static_cast<size_t>(j) * 4 + m];
            if (i == j) {
                if (sum <= 1e-18) return false;
                L[static_cast<size_t>(i) * 4 + j] = std::sqrt(sum);
            } else {
                L[static_cast<size_t>(i) * 4 + j] = sum / L[static_cast<size_t>(j) * 4 + j];
            }
        }
    }
    // forward then backward substitution per column of B
    for (int col = 0; col < k; ++col) {
        double y[4];
        for (int i = 0; i < 4; ++i) {
            double sum = b[static_cast<size_t>(i) * k + col];
            for (int m = 0; m < i; ++m) sum -= L[static_cast<size_t>(i) * 4 + m] * y[m];
            y[i] = sum / L[static_cast<size_t>(i) * 4 + i];
        }
        for (int i = 3; i >= 0; --i) {
            double sum = y[i];
            for (int m = i + 1; m < 4; ++m) sum -= L[static_cast<size_t>(m) * 4 + i] * b[static_cast<size_t>(m) * k + col];
            b[static_cast<size_t>(i) * k + col] = sum / L[static_cast<size_t>(i) * 4 + i];
        }
    }
    return true;
}

std::array<double, 4> measure(const BBox& box) {
    auto [cx, cy] = center(box);
    return {cx, cy, box.w / box.h, box.h};
}

void symmetrize(KalmanState& s) {
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            double m = 0.5 * (s.c(i, j) + s.c(j, i));
            s.c(i, j) = m;
            s.c(j, i) = m;
        }
}

}  // namespace

KalmanState kf_init(const BBox& box, const KalmanParams& p) {
    KalmanState s;
    auto z = measure(box);
    for (int i = 0; i < 4; ++i) s.mean[static_cast<size_t>(i)] = z[static_cast<size_t>(i)];

    const double h = box.h;
    const double std[8] = {2 * p.std_weight_pos * h, 2 * p.std_weight_pos * h, 1e-2, 2 * p.std_weight_pos * h,
                           10 * p.std_weight_vel * h, 10 * p.std_weight_vel * h, 1e-5, 10 * p.std_weight_vel * h};
    for (int i = 0; i < 8; ++i) s.c(i, i) = std[i] * std[i];
    return s;
}

KalmanState kf_predict(const KalmanState& s, const KalmanParams& p) {
    KalmanState out;
    // mean: x += v (dt = 1)
    for (int i = 0; i < 4; ++i) out.mean[static_cast<size_t>(i)] = s.mean[static_cast<size_t>(i)] + s.mean[static_cast<size_t>(i) + 4];
    for (int i = 4; i < 8; ++i) out.mean[static_cast<size_t>(i)] = s.mean[static_cast<size_t>(i)];
    out.mean[3] = std::max(out.mean[3], 1.0);    // box height stays positive
    out.mean[2] = std::max(out.mean[2], 1e-4);   // aspect stays positive

    // cov: F P F^T + Q, with F = [I I; 0 I]
    const auto& P = s.cov;
    auto blk = [&](int r, int c) { return P[static_cast<size_t>(r) * 8 + c]; };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double a = blk(i, j), b = blk(i, j + 4), c2 = blk(i + 4, j), d = blk(i + 4, j + 4);
            out.c(i, j) = a + b + c2 + d;
            out.c(i, j + 4) = b + d;
            out.c(i + 4, j) = c2 + d;
            out.c(i + 4, j + 4) = d;
        }

    const double h = out.mean[3];
    const double qstd[8] = {p.std_weight_pos * h, p.std_weight_pos * h, 1e-2, p.std_weight_pos * h,
                            p.std_weight_vel * h, p.std_weight_vel * h, 1e-5, p.std_weight_vel * h};
    for (int i = 0; i < 8; ++i) out.c(i, i) += qstd[i] * qstd[i];
    symmetrize(out);
    return out;
}

KalmanState kf_update(const KalmanState& s, const BBox& measurement, const KalmanParams& p) {
    auto z = measure(measurement);

    // S = P[0:4,0:4] + R
    std::array<double, 16> S{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) S[static_cast<size_t>(i) * 4 + j] = s.c(i, j);
    const double h = s.mean[3];
    const double rstd[4] = {p.std_weight_pos * h, p.std_weight_pos * h, 1e-1, p.std_weight_pos * h};
    for (int i = 0; i < 4; ++i) S[static_cast<size_t>(i) * 4 + i] += p.meas_scale * rstd[i] * rstd[i];

    // K^T = S^{-1} (H P)  -> solve S X = H P, X is 4x8, K = X^T
    std::array<double, 32> HP{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j) HP[static_cast<size_t>(i) * 8 + j] = s.c(i, j);
    if (!solve_spd4(S, HP.data(), 8))
        throw ContractError("kf_update: singular innovation covariance");

    double innov[4];
    for (int i = 0; i < 4; ++i) innov[i] = z[static_cast<size_t>(i)] - s.mean[static_cast<size_t>(i)];

    KalmanState out = s;
    for (int i = 0; i < 8; ++i) {
        double acc = 0.0;
        for (int m = 0; m < 4; ++m) acc += HP[static_cast<size_t>(m) * 8 + i] * innov[m];  // K[i][m] = X[m][i]
        out.mean[static_cast<size_t>(i)] += acc;
    }
    // P' = P - K (H P): K[i][m] = HP[m][i]
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double acc = 0.0;
            for (int m = 0; m < 4; ++m) acc += HP[static_cast<size_t>(m) * 8 + i] * s.c(m, j);
            out.c(i, j) -= acc;
        }
    out.mean[3] = std::max(out.mean[3], 1.0);
    out.mean[2] = std::max(out.mean[2], 1e-4);
    symmetrize(out);
    return out;
}

BBox state_box(const KalmanState& s) {
    double a = s.mean[2], h = s.mean[3];
    double w = std::max(a * h, 1e-3);
    return BBox(s.mean[0] - w / 2.0, s.mean[1] - h / 2.0, w, h);
}

}  // namespace dmot
