#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmot/errors.hpp"

namespace dmot {

// Dimensions of the depth decoding head. channels must be divisible by
// heads; the per-head feature width is channels / heads.
struct DepthHeadConfig {
    int heads = 8;
    int points = 4;
    int scales = 3;
    int layers = 6;
    double beta = 1.0;  // global depth scaling factor
    int channels = 256;
    int queries = 300;
    int base_resolution = 12;  // finest memory grid edge; halves per scale

    int part_width() const {
        if (heads < 1 || points < 1 || scales < 1 || layers < 1 || channels < 1 || queries < 1)
            throw ContractError("DepthHeadConfig: all counts must be >= 1");
        if (!(beta > 0.0)) throw ContractError("DepthHeadConfig: beta must be > 0");
        if (channels % heads != 0) throw ContractError("DepthHeadConfig: channels must divide by heads");
        return channels / heads;
    }

    int resolution(int scale) const { return std::max(2, base_resolution >> scale); }
};

// Multi-scale memory: per (scale, head) a square grid of feature vectors of
// width part_width, flattened as [(y*res + x)*pw + c].
struct MemoryPyramid {
    std::vector<std::vector<std::vector<double>>> grids;  // [scale][head][...]
};

// Seeded query state: one vector per (query, head, point) plus a normalized
// reference point per query.
struct QuerySet {
    std::vector<double> vectors;  // [((q*H + h)*P + p)*pw + c]
    std::vector<double> ref_x, ref_y;  // per query, in [0,1]
};

// All learnable pieces, generated from a seed (no training happens here).
struct HeadWeights {
    std::vector<double> alpha_w;  // [(h*P + p)*pw + c]
    std::vector<double> alpha_b;  // [h*P + p]
    std::vector<double> phi_w;    // [pw]
    double phi_b = 0.0;
    // transformer block
    std::vector<double> wq, wk, wv, wo;  // [C*C]
    std::vector<double> ln1_g, ln1_b, ln2_g, ln2_b;  // [C]
    std::vector<double> ffn_w1, ffn_w2;  // [C*C]
    std::vector<double> ffn_b1, ffn_b2;  // [C]
    std::vector<double> query_embed;     // [Q*C]
    // depth prediction map f over concat(O_i, O_{i-1})
    std::vector<double> f_w;  // [2*C]
    double f_b = 0.0;
};

MemoryPyramid make_seeded_memory(const DepthHeadConfig& cfg, uint64_t seed);
QuerySet make_seeded_queries(const DepthHeadConfig& cfg, uint64_t seed);
HeadWeights make_seeded_weights(const DepthHeadConfig& cfg, uint64_t seed);
HeadWeights make_zero_weights(const DepthHeadConfig& cfg);

// delta = phi(q) : affine map of one query vector to a scalar offset.
double depth_offset(std::span<const double> query, std::span<const double> w, double b);

// W_d = sum_p alpha_p * beta * (o_p + delta_p). alpha must be nonnegative
// and sum to 1 within 1e-6.
double depth_weight(std::span<const double> alpha, double beta, std::span<const double> o,
                    std::span<const double> delta);

// Bilinear sample of a single-scale grid at normalized point (cx, cy);
// coordinates clamp to the border cells. Cell centers sit at
// ((i + 0.5) / res) so a point on a center returns that cell exactly.
std::vector<double> sample_memory(const std::vector<double>& grid, int res, int part_width, double cx,
                                  double cy);

// y^(h) = W_d * sample
std::vector<double> head_output(const std::vector<double>& grid, int res, int part_width, double cx,
                                double cy, double w_d);

// Concatenation in head order; all parts must share one width.
std::vector<double> concat_heads(const std::vector<std::vector<double>>& parts);

// One pre-normalization transformer block over the query axis. The input
// enters through the leading layer norm, which keeps the whole O-stream
// invariant to a rescaling of Y (the property the W_d checks rely on).
std::vector<double> layer_update(const std::vector<double>& y, const std::vector<double>& q_embed,
                                 const HeadWeights& w, int queries, int channels);

// P_i = f(concat(O_i, O_prev)) + P_prev, one scalar per query.
std::vector<double> refine_depth(const std::vector<double>& o_now, const std::vector<double>& o_prev,
                                 const std::vector<double>& p_prev, const HeadWeights& w, int queries,
                                 int channels);

// Row-wise layer norm used by the block; exposed so tests can reproduce the
// residual algebra. Zero-variance rows map to the bias alone.
std::vector<double> layer_norm(const std::vector<double>& x, std::span<const double> gain,
                               std::span<const double> bias, int rows, int cols);

struct ForwardTrace {
    std::vector<std::vector<double>> p;           // [0..layers][q]; p[0] is the init
    std::vector<std::vector<double>> w_d;         // [layer][q*H]
    std::vector<std::vector<double>> alpha;       // [layer][(q*H + h)*P + p]
    std::vector<std::vector<double>> increments;  // [layer][q], the f terms
};

// Full deterministic pass over `layers` refinement steps.
ForwardTrace forward(const DepthHeadConfig& cfg, const MemoryPyramid& memory, const QuerySet& queries,
                     const HeadWeights& weights);

// Convenience: seeds memory, queries and weights from one seed and runs.
ForwardTrace forward_seeded(const DepthHeadConfig& cfg, uint64_t seed);

// --- distillation losses -------------------------------------------------

// Paired feature maps; each term is one (scale, frame) slot with matching
// shapes and nonzero Frobenius norms.
struct FeaturePair {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> terms;  // (src, teacher)
};

// Mean over terms of 1 - <src,t>_F / (|src|_F |t|_F); range [0, 2].
double align_loss(const FeaturePair& pair);

// Mean squared error between predicted depths and soft labels.
double reg_loss(std::span<const double> predicted, std::span<const double> labels);

// lambda_box * l_box + lambda_reg * l_reg + lambda_align * l_align.
double total_loss(double l_box, double l_reg, double l_align, double lambda_box, double lambda_reg,
                  double lambda_align);

}  // namespace dmot
