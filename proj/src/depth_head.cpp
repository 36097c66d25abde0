#include "dmot/depth_head.hpp"

#include <algorithm>
#include <cmath>

#include "dmot/rng.hpp"

namespace dmot {
namespace {

void fill_uniform(std::vector<double>& v, size_t n, Rng& rng, double scale = 0.1) {
    v.resize(n);
    for (auto& x : v) x = rng.uniform(-scale, scale);
}

// out = x * W (rows x cols times cols x cols)
void matmul_square(const std::vector<double>& x, const std::vector<double>& w, std::vector<double>& out,
                   int rows, int cols) {
    out.assign(static_cast<size_t>(rows) * cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int k = 0; k < cols; ++k) {
            double xv = x[static_cast<size_t>(r) * cols + k];
            if (xv == 0.0) continue;
            const double* wrow = &w[static_cast<size_t>(k) * cols];
            double* orow = &out[static_cast<size_t>(r) * cols];
            for (int c = 0; c < cols; ++c) orow[c] += xv * wrow[c];
        }
}

}  // namespace

MemoryPyramid make_seeded_memory(const DepthHeadConfig& cfg, uint64_t seed) {
    const int pw = cfg.part_width();
    MemoryPyramid mem;
    mem.grids.resize(static_cast<size_t>(cfg.scales));
    for (int s = 0; s < cfg.scales; ++s) {
        mem.grids[static_cast<size_t>(s)].resize(static_cast<size_t>(cfg.heads));
        for (int h = 0; h < cfg.heads; ++h) {
            Rng rng(mix_seed(seed, 0x3E30ULL, static_cast<uint64_t>(s), static_cast<uint64_t>(h)));
            int res = cfg.resolution(s);
            fill_uniform(mem.grids[static_cast<size_t>(s)][static_cast<size_t>(h)],
                         static_cast<size_t>(res) * res * pw, rng);
        }
    }
    return mem;
}

QuerySet make_seeded_queries(const DepthHeadConfig& cfg, uint64_t seed) {
    const int pw = cfg.part_width();
    QuerySet qs;
    Rng rng(mix_seed(seed, 0x9E44ULL));
    fill_uniform(qs.vectors, static_cast<size_t>(cfg.queries) * cfg.heads * cfg.points * pw, rng);
    qs.ref_x.resize(static_cast<size_t>(cfg.queries));
    qs.ref_y.resize(static_cast<size_t>(cfg.queries));
    for (int q = 0; q < cfg.queries; ++q) {
        qs.ref_x[static_cast<size_t>(q)] = rng.uniform(0.05, 0.95);
        qs.ref_y[static_cast<size_t>(q)] = rng.uniform(0.05, 0.95);
    }
    return qs;
}

HeadWeights make_seeded_weights(const DepthHeadConfig& cfg, uint64_t seed) {
    const int pw = cfg.part_width();
    const int C = cfg.channels;
    HeadWeights w;
    Rng rng(mix_seed(seed, 0x3317ULL));
    fill_uniform(w.alpha_w, static_cast<size_t>(cfg.heads) * cfg.points * pw, rng, 0.5);
    fill_uniform(w.alpha_b, static_cast<size_t>(cfg.heads) * cfg.points, rng, 0.5);
    fill_uniform(w.phi_w, static_cast<size_t>(pw), rng);
    w.phi_b = rng.uniform(-0.1, 0.1);
    fill_uniform(w.wq, static_cast<size_t>(C) * C, rng);
    fill_uniform(w.wk, static_cast<size_t>(C) * C, rng);
    fill_uniform(w.wv, static_cast<size_t>(C) * C, rng);
    fill_uniform(w.wo, static_cast<size_t>(C) * C, rng);
    w.ln1_g.assign(static_cast<size_t>(C), 1.0);
    w.ln1_b.assign(static_cast<size_t>(C), 0.0);
    w.ln2_g.assign(static_cast<size_t>(C), 1.0);
    w.ln2_b.assign(static_cast<size_t>(C), 0.0);
    fill_uniform(w.ffn_w1, static_cast<size_t>(C) * C, rng);
    fill_uniform(w.ffn_b1, static_cast<size_t>(C), rng);
    fill_uniform(w.ffn_w2, static_cast<size_t>(C) * C, rng);
    fill_uniform(w.ffn_b2, static_cast<size_t>(C), rng);
    fill_uniform(w.query_embed, static_cast<size_t>(cfg.queries) * C, rng);
    fill_uniform(w.f_w, static_cast<size_t>(2) * C, rng);
    w.f_b = rng.uniform(-0.1, 0.1);
    return w;
}

HeadWeights make_zero_weights(const DepthHeadConfig& cfg) {
    const int pw = cfg.part_width();
    const int C = cfg.channels;
    HeadWeights w;
    w.alpha_w.assign(static_cast<size_t>(cfg.heads) * cfg.points * pw, 0.0);
    w.alpha_b.assign(static_cast<size_t>(cfg.heads) * cfg.points, 0.0);
    w.phi_w.assign(static_cast<size_t>(pw), 0.0);
    w.wq.assign(static_cast<size_t>(C) * C, 0.0);
    w.wk.assign(static_cast<size_t>(C) * C, 0.0);
    w.wv.assign(static_cast<size_t>(C) * C, 0.0);
    w.wo.assign(static_cast<size_t>(C) * C, 0.0);
    w.ln1_g.assign(static_cast<size_t>(C), 0.0);
    w.ln1_b.assign(static_cast<size_t>(C), 0.0);
    w.ln2_g.assign(static_cast<size_t>(C), 0.0);
    w.ln2_b.assign(static_cast<size_t>(C), 0.0);
    w.ffn_w1.assign(static_cast<size_t>(C) * C, 0.0);
    w.ffn_w2.assign(static_cast<size_t>(C) * C, 0.0);
    w.ffn_b1.assign(static_cast<size_t>(C), 0.0);
    w.ffn_b2.assign(static_cast<size_t>(C), 0.0);
    w.query_embed.assign(static_cast<size_t>(cfg.queries) * C, 0.0);
    w.f_w.assign(static_cast<size_t>(2) * C, 0.0);
    return w;
}

double depth_offset(std::span<const double> query, std::span<const double> w, double b) {
    if (query.size() != w.size()) throw ContractError("depth_offset: dimension mismatch");
    double acc = b;
    for (size_t i = 0; i < query.size(); ++i) acc += query[i] * w[i];
    return acc;
}

double depth_weight(std::span<const double> alpha, double beta, std::span<const double> o,
                    std::span<const double> delta) {
    if (alpha.size() != o.size() || alpha.size() != delta.size())
        throw ContractError("depth_weight: dimension mismatch");
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0.0) throw ContractError("depth_weight: negative attention weight");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ContractError("depth_weight: attention weights not normalized");
    double wd = 0.0;
    for (size_t p = 0; p < alpha.size(); ++p) wd += alpha[p] * beta * (o[p] + delta[p]);
    return wd;
}

std::vector<double> sample_memory(const std::vector<double>& grid, int res, int part_width, double cx,
                                  double cy) {
    if (!(cx >= 0.0 && cx <= 1.0 && cy >= 0.0 && cy <= 1.0))
        throw ContractError("sample_memory: reference point outside [0,1]^2");

    // Continuous grid coordinates with cell centers at i + 0.5.
    auto locate = [res](double c) {
        double g = c * res - 0.5;
        double lo = std::floor(g);
        int i0 = static_cast<int>(lo);
        double t = g - lo;
        int i1 = i0 + 1;
        i0 = std::clamp(i0, 0, res - 1);
        i1 = std::clamp(i1, 0, res - 1);
        return std::pair<std::pair<int, int>, double>{{i0, i1}, t};
    };
    auto [xi, tx] = locate(cx);
    auto [yi, ty] = locate(cy);

    std::vector<double> out(static_cast<size_t>(part_width), 0.0);
    auto cell = [&](int x, int y) { return &grid[(static_cast<size_t>(y) * res + x) * part_width]; };
    const double* c00 = cell(xi.first, yi.first);
    const double* c10 = cell(xi.second, yi.first);
    const double* c01 = cell(xi.first, yi.second);
    const double* c11 = cell(xi.second, yi.second);
    for (int c = 0; c < part_width; ++c) {
        double top = (1.0 - tx) * c00[c] + tx * c10[c];
        double bot = (1.0 - tx) * c01[c] + tx * c11[c];
        out[static_cast<size_t>(c)] = (1.0 - ty) * top + ty * bot;
    }
    return out;
}

std::vector<double> head_output(const std::vector<double>& grid, int res, int part_width, double cx,
                                double cy, double w_d) {
    auto v = sample_memory(grid, res, part_width, cx, cy);
    for (auto& x : v) x *= w_d;
    return v;
}

std::vector<double> concat_heads(const std::vector<std::vector<double>>& parts) {
    if (parts.empty()) throw ContractError("concat_heads: no parts");
    size_t width = parts.front().size();
    std::vector<double> out;
    out.reserve(parts.size() * width);
    for (const auto& p : parts) {
        if (p.size() != width) throw ContractError("concat_heads: parts differ in width");
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<double> layer_norm(const std::vector<double>& x, std::span<const double> gain,
                               std::span<const double> bias, int rows, int cols) {
    std::vector<double> out(x.size());
    for (int r = 0; r < rows; ++r) {
        const double* row = &x[static_cast<size_t>(r) * cols];
        double mean = 0.0;
        for (int c = 0; c < cols; ++c) mean += row[c];
        mean /= cols;
        double var = 0.0;
        for (int c = 0; c < cols; ++c) var += (row[c] - mean) * (row[c] - mean);
        var /= cols;
        double* orow = &out[static_cast<size_t>(r) * cols];
        if (var <= 0.0) {
            // Constant row: the normalized value is defined as 0.
            for (int c = 0; c < cols; ++c) orow[c] = bias[static_cast<size_t>(c)];
        } else {
            double inv = 1.0 / std::sqrt(var);
            for (int c = 0; c < cols; ++c)
                orow[c] = (row[c] - mean) * inv * gain[static_cast<size_t>(c)] + bias[static_cast<size_t>(c)];
        }
    }
    return out;
}

std::vector<double> layer_update(const std::vector<double>& y, const std::vector<double>& q_embed,
                                 const HeadWeights& w, int queries, int channels) {
    const size_t n = static_cast<size_t>(queries) * channels;
    if (y.size() != n || q_embed.size() != n) throw ContractError("layer_update: dimension mismatch");

    // Input enters through the leading norm.
    std::vector<double> z = layer_norm(y, w.ln1_g, w.ln1_b, queries, channels);

    std::vector<double> zq(n);
    for (size_t i = 0; i < n; ++i) zq[i] = z[i] + q_embed[i];

    std::vector<double> q, k, v, attn, proj;
    matmul_square(zq, w.wq, q, queries, channels);
    matmul_square(zq, w.wk, k, queries, channels);
    matmul_square(z, w.wv, v, queries, channels);

    // Self-attention over the query axis.
    const double scale = 1.0 / std::sqrt(static_cast<double>(channels));
    std::vector<double> ctx(n, 0.0);
    std::vector<double> scores(static_cast<size_t>(queries));
    for (int r = 0; r < queries; ++r) {
        double maxv = -1e300;
        for (int c = 0; c < queries; ++c) {
            double dot = 0.0;
            const double* qr = &q[static_cast<size_t>(r) * channels];
            const double* kc = &k[static_cast<size_t>(c) * channels];
            for (int i = 0; i < channels; ++i) dot += qr[i] * kc[i];
            scores[static_cast<size_t>(c)] = dot * scale;
            maxv = std::max(maxv, scores[static_cast<size_t>(c)]);
        }
        double denom = 0.0;
        for (int c = 0; c < queries; ++c) {
            scores[static_cast<size_t>(c)] = std::exp(scores[static_cast<size_t>(c)] - maxv);
            denom += scores[static_cast<size_t>(c)];
        }
        double* crow = &ctx[static_cast<size_t>(r) * channels];
        for (int c = 0; c < queries; ++c) {
            double a = scores[static_cast<size_t>(c)] / denom;
            if (a == 0.0) continue;
            const double* vc = &v[static_cast<size_t>(c) * channels];
            for (int i = 0; i < channels; ++i) crow[i] += a * vc[i];
        }
    }
    matmul_square(ctx, w.wo, proj, queries, channels);

    std::vector<double> x1(n);
    for (size_t i = 0; i < n; ++i) x1[i] = z[i] + proj[i];

    // Feed-forward with its own pre-norm.
    std::vector<double> zn = layer_norm(x1, w.ln2_g, w.ln2_b, queries, channels);
    std::vector<double> h1;
    matmul_square(zn, w.ffn_w1, h1, queries, channels);
    for (int r = 0; r < queries; ++r)
        for (int c = 0; c < channels; ++c) {
            double& t = h1[static_cast<size_t>(r) * channels + c];
            t += w.ffn_b1[static_cast<size_t>(c)];
            t = t > 0.0 ? t : 0.0;  // relu
        }
    std::vector<double> h2;
    matmul_square(h1, w.ffn_w2, h2, queries, channels);

    std::vector<double> out(n);
    for (int r = 0; r < queries; ++r)
        for (int c = 0; c < channels; ++c) {
            size_t i = static_cast<size_t>(r) * channels + c;
            out[i] = x1[i] + h2[i] + w.ffn_b2[static_cast<size_t>(c)];
        }
    return out;
}

std::vector<double> refine_depth(const std::vector<double>& o_now, const std::vector<double>& o_prev,
                                 const std::vector<double>& p_prev, const HeadWeights& w, int queries,
                                 int channels) {
    const size_t n = static_cast<size_t>(queries) * channels;
    if (o_now.size() != n || o_prev.size() != n || p_prev.size() != static_cast<size_t>(queries) ||
        w.f_w.size() != static_cast<size_t>(2) * channels)
        throw ContractError("refine_depth: dimension mismatch");

    std::vector<double> out(static_cast<size_t>(queries));
    for (int q = 0; q < queries; ++q) {
        double f = w.f_b;
        const double* a = &o_now[static_cast<size_t>(q) * channels];
        const double* b = &o_prev[static_cast<size_t>(q) * channels];
        for (int c = 0; c < channels; ++c) f += w.f_w[static_cast<size_t>(c)] * a[c];
        for (int c = 0; c < channels; ++c) f += w.f_w[static_cast<size_t>(channels + c)] * b[c];
        out[static_cast<size_t>(q)] = f + p_prev[static_cast<size_t>(q)];
    }
    return out;
}

ForwardTrace forward(const DepthHeadConfig& cfg, const MemoryPyramid& memory, const QuerySet& queries,
                     const HeadWeights& weights) {
    const int pw = cfg.part_width();
    const int H = cfg.heads, P = cfg.points, Q = cfg.queries, C = cfg.channels, S = cfg.scales;
    if (static_cast<int>(memory.grids.size()) != S) throw ContractError("forward: scale count mismatch");
    if (queries.vectors.size() != static_cast<size_t>(Q) * H * P * pw)
        throw ContractError("forward: query tensor size mismatch");

    ForwardTrace trace;

    // P^0 = f(O^0, O^{-1}) with zero inputs -> the bias of f.
    std::vector<double> o_prev(static_cast<size_t>(Q) * C, 0.0);
    std::vector<double> p(static_cast<size_t>(Q), weights.f_b);
    trace.p.push_back(p);

    // Layer-1 queries come from the seeded set; later layers re-derive them
    // from head slices of O, which the leading layer norm keeps invariant
    // to rescalings of Y.
    std::vector<double> qvec = queries.vectors;

    for (int layer = 1; layer <= cfg.layers; ++layer) {
        std::vector<double> alphas(static_cast<size_t>(Q) * H * P);
        std::vector<double> wds(static_cast<size_t>(Q) * H);
        std::vector<double> y(static_cast<size_t>(Q) * C);

        for (int q = 0; q < Q; ++q) {
            std::vector<std::vector<double>> parts;
            parts.reserve(static_cast<size_t>(H));
            for (int h = 0; h < H; ++h) {
                // alpha: softmax over points of a per-point affine score.
                std::vector<double> score(static_cast<size_t>(P));
                std::vector<double> delta(static_cast<size_t>(P));
                std::vector<double> o(static_cast<size_t>(P), p[static_cast<size_t>(q)]);
                double maxs = -1e300;
                for (int pt = 0; pt < P; ++pt) {
                    const double* qv = &qvec[((static_cast<size_t>(q) * H + h) * P + pt) * pw];
                    const double* aw = &weights.alpha_w[(static_cast<size_t>(h) * P + pt) * pw];
                    double s = weights.alpha_b[static_cast<size_t>(h) * P + pt];
                    for (int c = 0; c < pw; ++c) s += qv[c] * aw[c];
                    score[static_cast<size_t>(pt)] = s;
                    maxs = std::max(maxs, s);
                    delta[static_cast<size_t>(pt)] =
                        depth_offset(std::span<const double>(qv, static_cast<size_t>(pw)), weights.phi_w,
                                     weights.phi_b);
                }
                double denom = 0.0;
                for (int pt = 0; pt < P; ++pt) {
                    score[static_cast<size_t>(pt)] = std::exp(score[static_cast<size_t>(pt)] - maxs);
                    denom += score[static_cast<size_t>(pt)];
                }
                std::vector<double> alpha(static_cast<size_t>(P));
                for (int pt = 0; pt < P; ++pt) alpha[static_cast<size_t>(pt)] = score[static_cast<size_t>(pt)] / denom;

                double wd = depth_weight(alpha, cfg.beta, o, delta);
                wds[static_cast<size_t>(q) * H + h] = wd;
                for (int pt = 0; pt < P; ++pt)
                    alphas[(static_cast<size_t>(q) * H + h) * P + pt] = alpha[static_cast<size_t>(pt)];

                // Multi-scale sample averaged across scales, then scaled.
                std::vector<double> part(static_cast<size_t>(pw), 0.0);
                for (int s = 0; s < S; ++s) {
                    auto v = sample_memory(memory.grids[static_cast<size_t>(s)][static_cast<size_t>(h)],
                                           cfg.resolution(s), pw, queries.ref_x[static_cast<size_t>(q)],
                                           queries.ref_y[static_cast<size_t>(q)]);
                    for (int c = 0; c < pw; ++c) part[static_cast<size_t>(c)] += v[static_cast<size_t>(c)];
                }
                for (int c = 0; c < pw; ++c) part[static_cast<size_t>(c)] = wd * part[static_cast<size_t>(c)] / S;
                parts.push_back(std::move(part));
            }
            auto yq = concat_heads(parts);
            std::copy(yq.begin(), yq.end(), y.begin() + static_cast<size_t>(q) * C);
        }

        std::vector<double> o_now = layer_update(y, weights.query_embed, weights, Q, C);

        std::vector<double> p_next = refine_depth(o_now, o_prev, p, weights, Q, C);
        std::vector<double> inc(static_cast<size_t>(Q));
        for (int q = 0; q < Q; ++q)
            inc[static_cast<size_t>(q)] = p_next[static_cast<size_t>(q)] - p[static_cast<size_t>(q)];

        trace.alpha.push_back(std::move(alphas));
        trace.w_d.push_back(std::move(wds));
        trace.increments.push_back(std::move(inc));
        p = std::move(p_next);
        trace.p.push_back(p);

        // Next-layer queries: the head slice of O, broadcast over points.
        for (int q = 0; q < Q; ++q)
            for (int h = 0; h < H; ++h)
                for (int pt = 0; pt < P; ++pt)
                    std::copy(o_now.begin() + static_cast<size_t>(q) * C + static_cast<size_t>(h) * pw,
                              o_now.begin() + static_cast<size_t>(q) * C + static_cast<size_t>(h + 1) * pw,
                              qvec.begin() + ((static_cast<size_t>(q) * H + h) * P + pt) * pw);
        o_prev = std::move(o_now);
    }
    return trace;
}

ForwardTrace forward_seeded(const DepthHeadConfig& cfg, uint64_t seed) {
    return forward(cfg, make_seeded_memory(cfg, seed), make_seeded_queries(cfg, seed),
                   make_seeded_weights(cfg, seed));
}

double align_loss(const FeaturePair& pair) {
    if (pair.terms.empty()) throw ContractError("align_loss: no feature terms");
    double acc = 0.0;
    for (const auto& [src, t] : pair.terms) {
        if (src.size() != t.size() || src.empty()) throw ContractError("align_loss: shape mismatch");
        double dot = 0.0, ns = 0.0, nt = 0.0;
        for (size_t i = 0; i < src.size(); ++i) {
            dot += src[i] * t[i];
            ns += src[i] * src[i];
            nt += t[i] * t[i];
        }
        if (ns <= 0.0 || nt <= 0.0) throw ContractError("align_loss: zero-norm feature map");
        acc += 1.0 - dot / (std::sqrt(ns) * std::sqrt(nt));
    }
    return acc / static_cast<double>(pair.terms.size());
}

double reg_loss(std::span<const double> predicted, std::span<const double> labels) {
    if (predicted.size() != labels.size()) throw ContractError("reg_loss: length mismatch");
    if (predicted.empty()) throw ContractError("reg_loss: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - labels[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

double total_loss(double l_box, double l_reg, double l_align, double lambda_box, double lambda_reg,
                  double lambda_align) {
    if (!(std::isfinite(l_box) && std::isfinite(l_reg) && std::isfinite(l_align)))
        throw ContractError("total_loss: non-finite loss term");
    if (lambda_box < 0.0 || lambda_reg < 0.0 || lambda_align < 0.0)
        throw ContractError("total_loss: negative weight");
    return lambda_box * l_box + lambda_reg * l_reg + lambda_align * l_align;
}

}  // namespace dmot
