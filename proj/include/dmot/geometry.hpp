#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dmot {

// Axis-aligned box, top-left origin, continuous pixel coordinates.
// Degenerate boxes are rejected here so downstream code never sees them.
struct BBox {
    double x;
    double y;
    double w;
    double h;

    BBox(double x_, double y_, double w_, double h_) : x(x_), y(y_), w(w_), h(h_) {
        if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h)))
            throw std::invalid_argument("BBox: non-finite field");
        if (!(w > 0.0 && h > 0.0))
            throw std::invalid_argument("BBox: width and height must be positive");
    }

    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double area() const { return w * h; }
};

inline double iou(const BBox& a, const BBox& b) {
    double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

inline std::pair<double, double> center(const BBox& b) {
    return {b.x + b.w / 2.0, b.y + b.h / 2.0};
}

// One frame observation: box, confidence, instance depth (both normalized).
struct Detection {
    BBox box;
    double score;
    double depth;

    Detection(BBox box_, double score_, double depth_) : box(box_), score(score_), depth(depth_) {
        if (!(score >= 0.0 && score <= 1.0))
            throw std::invalid_argument("Detection: score outside [0,1]");
        if (!(depth >= 0.0 && depth <= 1.0))
            throw std::invalid_argument("Detection: depth outside [0,1]");
    }
};

}  // namespace dmot
