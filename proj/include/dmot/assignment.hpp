#pragma once

#include <vector>

#include "dmot/errors.hpp"
#include "dmot/geometry.hpp"

namespace dmot {

// Rectangular cost matrix, row-major. Rows are tracks, columns detections.
struct CostMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    CostMatrix() = default;
    CostMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    bool empty() const { return rows == 0 || cols == 0; }
};

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), each used at most once
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
};

// Minimum-cost matching of size min(rows, cols). Potentials + augmenting
// rows (O(n^2 m)); scan order makes the result deterministic, biased toward
// low row then low column indices on ties. Throws ContractError on
// non-finite entries.
Assignment hungarian(const CostMatrix& c);

double assignment_cost(const CostMatrix& c, const Assignment& a);

// C[i][j] = 1 - iou(tracks[i], dets[j])
CostMatrix iou_cost(const std::vector<BBox>& tracks, const std::vector<BBox>& dets);

// D[i][j] = eta * |track_depth[i] - det_depth[j]|, clamped to [0,1].
CostMatrix depth_distance(const std::vector<double>& track_depths, const std::vector<double>& det_depths,
                          double eta);

// lambda * C + gamma * D, elementwise.
CostMatrix fuse_cost(const CostMatrix& c, const CostMatrix& d, double lambda, double gamma);

// Pairs costing more than `threshold` become unmatched on both sides;
// a pair exactly at the threshold is kept.
Assignment gate(const Assignment& a, const CostMatrix& c, double threshold);

}  // namespace dmot
