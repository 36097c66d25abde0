#include "dmot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dmot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Classic potential-based solver over a matrix with rows <= cols.
// Returns col index per row.
std::vector<int> solve_rows_le_cols(const CostMatrix& a) {
    const int n = a.rows, m = a.cols;
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(m) + 1, 0.0);
    std::vector<int> p(static_cast<size_t>(m) + 1, 0), way(static_cast<size_t>(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(m) + 1, kInf);
        std::vector<char> used(static_cast<size_t>(m) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            int i0 = p[static_cast<size_t>(j0)];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                double cur = a.at(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= m; ++j)
        if (p[static_cast<size_t>(j)] != 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return row_to_col;
}

}  // namespace

Assignment hungarian(const CostMatrix& c) {
    for (double v : c.data)
        if (!std::isfinite(v)) throw ContractError("hungarian: non-finite cost entry");

    Assignment out;
    if (c.empty()) {
        for (int i = 0; i < c.rows; ++i) out.unmatched_rows.push_back(i);
        for (int j = 0; j < c.cols; ++j) out.unmatched_cols.push_back(j);
        return out;
    }

    std::vector<int> row_to_col;
    if (c.rows <= c.cols) {
        row_to_col = solve_rows_le_cols(c);
    } else {
        CostMatrix t(c.cols, c.rows);
        for (int i = 0; i < c.rows; ++i)
            for (int j = 0; j < c.cols; ++j) t.at(j, i) = c.at(i, j);
        auto col_to_row = solve_rows_le_cols(t);
        row_to_col.assign(static_cast<size_t>(c.rows), -1);
        for (int j = 0; j < c.cols; ++j)
            if (col_to_row[static_cast<size_t>(j)] >= 0) row_to_col[static_cast<size_t>(col_to_row[static_cast<size_t>(j)])] = j;
    }

    std::vector<char> col_used(static_cast<size_t>(c.cols), 0);
    for (int i = 0; i < c.rows; ++i) {
        int j = row_to_col[static_cast<size_t>(i)];
        if (j >= 0) {
            out.pairs.emplace_back(i, j);
            col_used[static_cast<size_t>(j)] = 1;
        } else {
            out.unmatched_rows.push_back(i);
        }
    }
    for (int j = 0; j < c.cols; ++j)
        if (!col_used[static_cast<size_t>(j)]) out.unmatched_cols.push_back(j);
    return out;
}

double assignment_cost(const CostMatrix& c, const Assignment& a) {
    double total = 0.0;
    for (auto [i, j] : a.pairs) total += c.at(i, j);
    return total;
}

CostMatrix iou_cost(const std::vector<BBox>& tracks, const std::vector<BBox>& dets) {
    CostMatrix c(static_cast<int>(tracks.size()), static_cast<int>(dets.size()));
    for (size_t i = 0; i < tracks.size(); ++i)
        for (size_t j = 0; j < dets.size(); ++j)
            c.at(static_cast<int>(i), static_cast<int>(j)) = 1.0 - iou(tracks[i], dets[j]);
    return c;
}

CostMatrix depth_distance(const std::vector<double>& track_depths, const std::vector<double>& det_depths,
                          double eta) {
    if (eta <= 0.0) throw ContractError("depth_distance: eta must be > 0");
    CostMatrix d(static_cast<int>(track_depths.size()), static_cast<int>(det_depths.size()));
    for (size_t i = 0; i < track_depths.size(); ++i)
        for (size_t j = 0; j < det_depths.size(); ++j)
            d.at(static_cast<int>(i), static_cast<int>(j)) =
                clamp01(eta * std::abs(track_depths[i] - det_depths[j]));
    return d;
}

CostMatrix fuse_cost(const CostMatrix& c, const CostMatrix& d, double lambda, double gamma) {
    if (c.rows != d.rows || c.cols != d.cols) throw ContractError("fuse_cost: shape mismatch");
    CostMatrix out(c.rows, c.cols);
    for (size_t i = 0; i < c.data.size(); ++i) out.data[i] = lambda * c.data[i] + gamma * d.data[i];
    return out;
}

Assignment gate(const Assignment& a, const CostMatrix& c, double threshold) {
    Assignment out;
    out.unmatched_rows = a.unmatched_rows;
    out.unmatched_cols = a.unmatched_cols;
    for (auto [i, j] : a.pairs) {
        if (c.at(i, j) <= threshold) {
            out.pairs.emplace_back(i, j);
        } else {
            out.unmatched_rows.push_back(i);
            out.unmatched_cols.push_back(j);
        }
    }
    std::sort(out.unmatched_rows.begin(), out.unmatched_rows.end());
    std::sort(out.unmatched_cols.begin(), out.unmatched_cols.end());
    return out;
}

}  // namespace dmot
