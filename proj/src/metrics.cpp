#include "dmot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dmot/assignment.hpp"

namespace dmot {
namespace {

constexpr double kSimEps = 1e-12;

// Sequence re-indexed to dense ids and grouped per frame.
struct SeqView {
    std::vector<int> frames;                                  // sorted union of frame indices
    std::vector<std::vector<std::pair<int, BBox>>> gt;        // per frame: (dense gt id, box)
    std::vector<std::vector<std::pair<int, BBox>>> pred;      // per frame: (dense pred id, box)
    int n_gt_ids = 0;
    int n_pred_ids = 0;
    long gt_total = 0;
    long pred_total = 0;
};

SeqView build_view(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred) {
    SeqView v;
    std::set<int> frame_set;
    for (const auto& b : gt) frame_set.insert(b.frame);
    for (const auto& b : pred) frame_set.insert(b.frame);
    v.frames.assign(frame_set.begin(), frame_set.end());

    std::map<int, int> frame_slot;
    for (size_t i = 0; i < v.frames.size(); ++i) frame_slot[v.frames[i]] = static_cast<int>(i);
    v.gt.resize(v.frames.size());
    v.pred.resize(v.frames.size());

    std::map<int, int> gt_ids, pred_ids;
    for (const auto& b : gt) {
        auto [it, fresh] = gt_ids.try_emplace(b.id, v.n_gt_ids);
        if (fresh) ++v.n_gt_ids;
        v.gt[static_cast<size_t>(frame_slot[b.frame])].emplace_back(it->second, b.box);
        ++v.gt_total;
    }
    for (const auto& b : pred) {
        auto [it, fresh] = pred_ids.try_emplace(b.id, v.n_pred_ids);
        if (fresh) ++v.n_pred_ids;
        v.pred[static_cast<size_t>(frame_slot[b.frame])].emplace_back(it->second, b.box);
        ++v.pred_total;
    }
    // Deterministic in-frame order regardless of input order.
    for (auto& f : v.gt) std::sort(f.begin(), f.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto& f : v.pred) std::sort(f.begin(), f.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
}

}  // namespace

std::vector<LabeledBox> to_labeled(const std::vector<MotRecord>& records) {
    std::vector<LabeledBox> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.frame, r.id, BBox(r.x, r.y, r.w, r.h)});
    return out;
}

ClearCounts clear_events(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred,
                         double iou_threshold) {
    SeqView v = build_view(gt, pred);
    ClearCounts out;
    out.gt_count = v.gt_total;

    std::map<int, int> last_match;  // dense gt id -> dense pred id, over all history
    std::map<int, int> prev_match;  // matches of the previous frame only

    for (size_t f = 0; f < v.frames.size(); ++f) {
        const auto& gts = v.gt[f];
        const auto& prs = v.pred[f];

        std::vector<std::pair<int, int>> matches;  // indices into gts/prs
        std::vector<char> gt_done(gts.size(), 0), pr_done(prs.size(), 0);

        // Carry over previous-frame matches that still overlap enough.
        for (size_t gi = 0; gi < gts.size(); ++gi) {
            auto it = prev_match.find(gts[gi].first);
            if (it == prev_match.end()) continue;
            for (size_t pi = 0; pi < prs.size(); ++pi) {
                if (pr_done[pi] || prs[pi].first != it->second) continue;
                if (iou(gts[gi].second, prs[pi].second) >= iou_threshold) {
                    matches.emplace_back(static_cast<int>(gi), static_cast<int>(pi));
                    gt_done[gi] = 1;
                    pr_done[pi] = 1;
                }
                break;
            }
        }

        // Hungarian over the remainder; pairs under the threshold are dropped.
        std::vector<int> gleft, pleft;
        for (size_t gi = 0; gi < gts.size(); ++gi)
            if (!gt_done[gi]) gleft.push_back(static_cast<int>(gi));
        for (size_t pi = 0; pi < prs.size(); ++pi)
            if (!pr_done[pi]) pleft.push_back(static_cast<int>(pi));
        if (!gleft.empty() && !pleft.empty()) {
            CostMatrix cost(static_cast<int>(gleft.size()), static_cast<int>(pleft.size()));
            for (size_t a = 0; a < gleft.size(); ++a)
                for (size_t b = 0; b < pleft.size(); ++b)
                    cost.at(static_cast<int>(a), static_cast<int>(b)) =
                        1.0 - iou(gts[static_cast<size_t>(gleft[a])].second, prs[static_cast<size_t>(pleft[b])].second);
            for (auto [a, b] : hungarian(cost).pairs) {
                if (cost.at(a, b) <= 1.0 - iou_threshold)
                    matches.emplace_back(gleft[static_cast<size_t>(a)], pleft[static_cast<size_t>(b)]);
            }
        }

        out.fn += static_cast<long>(gts.size()) - static_cast<long>(matches.size());
        out.fp += static_cast<long>(prs.size()) - static_cast<long>(matches.size());

        prev_match.clear();
        for (auto [gi, pi] : matches) {
            int g = gts[static_cast<size_t>(gi)].first;
            int p = prs[static_cast<size_t>(pi)].first;
            auto it = last_match.find(g);
            if (it != last_match.end() && it->second != p) ++out.idsw;
            last_match[g] = p;
            prev_match[g] = p;
        }
    }
    return out;
}

double mota_score(const ClearCounts& c) {
    if (c.gt_count == 0) throw ContractError("mota: no ground-truth boxes");
    return 100.0 * (1.0 - static_cast<double>(c.fn + c.fp + c.idsw) / static_cast<double>(c.gt_count));
}

IdCounts idf1_counts(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred) {
    SeqView v = build_view(gt, pred);

    // overlap[g][p] = frames where the pair could be a true positive
    std::vector<std::vector<long>> overlap(static_cast<size_t>(v.n_gt_ids),
                                           std::vector<long>(static_cast<size_t>(v.n_pred_ids), 0));
    for (size_t f = 0; f < v.frames.size(); ++f)
        for (const auto& [g, gb] : v.gt[f])
            for (const auto& [p, pb] : v.pred[f])
                if (iou(gb, pb) >= 0.5) ++overlap[static_cast<size_t>(g)][static_cast<size_t>(p)];

    long idtp = 0;
    if (v.n_gt_ids > 0 && v.n_pred_ids > 0) {
        CostMatrix cost(v.n_gt_ids, v.n_pred_ids);
        for (int g = 0; g < v.n_gt_ids; ++g)
            for (int p = 0; p < v.n_pred_ids; ++p)
                cost.at(g, p) = -static_cast<double>(overlap[static_cast<size_t>(g)][static_cast<size_t>(p)]);
        for (auto [g, p] : hungarian(cost).pairs) idtp += overlap[static_cast<size_t>(g)][static_cast<size_t>(p)];
    }

    IdCounts out;
    out.idtp = idtp;
    out.idfn = v.gt_total - idtp;
    out.idfp = v.pred_total - idtp;
    return out;
}

double idf1_score(const IdCounts& c) {
    double denom = static_cast<double>(2 * c.idtp + c.idfp + c.idfn);
    if (denom <= 0.0) return 0.0;
    return 100.0 * 2.0 * static_cast<double>(c.idtp) / denom;
}

HotaCounts hota_counts(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred) {
    SeqView v = build_view(gt, pred);
    HotaCounts out;

    // Per-frame similarity matrices, computed once.
    std::vector<std::vector<double>> sims(v.frames.size());
    for (size_t f = 0; f < v.frames.size(); ++f) {
        const auto& gts = v.gt[f];
        const auto& prs = v.pred[f];
        sims[f].resize(gts.size() * prs.size());
        for (size_t gi = 0; gi < gts.size(); ++gi)
            for (size_t pi = 0; pi < prs.size(); ++pi)
                sims[f][gi * prs.size() + pi] = iou(gts[gi].second, prs[pi].second);
    }

    // Pass 1: global alignment score between id pairs (Jaccard over soft
    // per-frame potentials).
    std::vector<double> potential(static_cast<size_t>(v.n_gt_ids) * v.n_pred_ids, 0.0);
    std::vector<double> gt_cnt(static_cast<size_t>(v.n_gt_ids), 0.0), pr_cnt(static_cast<size_t>(v.n_pred_ids), 0.0);
    for (size_t f = 0; f < v.frames.size(); ++f) {
        const auto& gts = v.gt[f];
        const auto& prs = v.pred[f];
        std::vector<double> row_sum(gts.size(), 0.0), col_sum(prs.size(), 0.0);
        for (size_t gi = 0; gi < gts.size(); ++gi)
            for (size_t pi = 0; pi < prs.size(); ++pi) {
                double s = sims[f][gi * prs.size() + pi];
                row_sum[gi] += s;
                col_sum[pi] += s;
            }
        for (size_t gi = 0; gi < gts.size(); ++gi)
            for (size_t pi = 0; pi < prs.size(); ++pi) {
                double s = sims[f][gi * prs.size() + pi];
                double denom = row_sum[gi] + col_sum[pi] - s;
                if (denom > kSimEps)
                    potential[static_cast<size_t>(gts[gi].first) * v.n_pred_ids + prs[pi].first] += s / denom;
            }
        for (const auto& [g, gb] : gts) gt_cnt[static_cast<size_t>(g)] += 1.0;
        for (const auto& [p, pb] : prs) pr_cnt[static_cast<size_t>(p)] += 1.0;
    }
    std::vector<double> alignment(potential.size(), 0.0);
    for (int g = 0; g < v.n_gt_ids; ++g)
        for (int p = 0; p < v.n_pred_ids; ++p) {
            size_t k = static_cast<size_t>(g) * v.n_pred_ids + p;
            double denom = gt_cnt[static_cast<size_t>(g)] + pr_cnt[static_cast<size_t>(p)] - potential[k];
            alignment[k] = denom > kSimEps ? potential[k] / denom : 0.0;
        }

    // Pass 2: per alpha, alignment-biased per-frame matching. Alphas are
    // independent; each iteration only writes its own slots.
    std::array<std::vector<double>, kNumAlphas> tpa;
    for (auto& m : tpa) m.assign(static_cast<size_t>(v.n_gt_ids) * v.n_pred_ids, 0.0);

#pragma omp parallel for schedule(static)
    for (int a = 0; a < kNumAlphas; ++a) {
        const double alpha = hota_alpha(a);
        for (size_t f = 0; f < v.frames.size(); ++f) {
            const auto& gts = v.gt[f];
            const auto& prs = v.pred[f];
            long tp_frame = 0;
            if (!gts.empty() && !prs.empty()) {
                CostMatrix cost(static_cast<int>(gts.size()), static_cast<int>(prs.size()));
                for (size_t gi = 0; gi < gts.size(); ++gi)
                    for (size_t pi = 0; pi < prs.size(); ++pi) {
                        double s = sims[f][gi * prs.size() + pi];
                        double score =
                            alignment[static_cast<size_t>(gts[gi].first) * v.n_pred_ids + prs[pi].first] * s;
                        cost.at(static_cast<int>(gi), static_cast<int>(pi)) = -score;
                    }
                for (auto [gi, pi] : hungarian(cost).pairs) {
                    double s = sims[f][static_cast<size_t>(gi) * prs.size() + static_cast<size_t>(pi)];
                    if (s >= alpha - kSimEps) {
                        ++tp_frame;
                        tpa[a][static_cast<size_t>(gts[static_cast<size_t>(gi)].first) * v.n_pred_ids +
                               prs[static_cast<size_t>(pi)].first] += 1.0;
                    }
                }
            }
            out.tp[static_cast<size_t>(a)] += static_cast<double>(tp_frame);
            out.fn[static_cast<size_t>(a)] += static_cast<double>(gts.size()) - static_cast<double>(tp_frame);
            out.fp[static_cast<size_t>(a)] += static_cast<double>(prs.size()) - static_cast<double>(tp_frame);
        }
        // TP-weighted association accumulator: sum over TPs of
        // TPA / (TPA + FNA + FPA).
        double w = 0.0;
        for (int g = 0; g < v.n_gt_ids; ++g)
            for (int p = 0; p < v.n_pred_ids; ++p) {
                size_t k = static_cast<size_t>(g) * v.n_pred_ids + p;
                double m = tpa[a][k];
                if (m <= 0.0) continue;
                double denom = gt_cnt[static_cast<size_t>(g)] + pr_cnt[static_cast<size_t>(p)] - m;
                w += (m / denom) * m;
            }
        out.ass_weight[static_cast<size_t>(a)] = w;
    }
    return out;
}

HotaScores hota_scores(const HotaCounts& c) {
    double prod_sum = 0.0, det_sum = 0.0, ass_sum = 0.0;
    for (int a = 0; a < kNumAlphas; ++a) {
        double tp = c.tp[static_cast<size_t>(a)];
        double det_den = tp + c.fn[static_cast<size_t>(a)] + c.fp[static_cast<size_t>(a)];
        double det = det_den > 0.0 ? tp / det_den : 0.0;
        double ass = tp > 0.0 ? c.ass_weight[static_cast<size_t>(a)] / tp : 0.0;
        det_sum += det;
        ass_sum += ass;
        prod_sum += det * ass;
    }
    HotaScores s;
    s.deta = 100.0 * det_sum / kNumAlphas;
    s.assa = 100.0 * ass_sum / kNumAlphas;
    s.hota = 100.0 * std::sqrt(prod_sum / kNumAlphas);
    return s;
}

MetricReport evaluate_sequence(const std::string& name, const std::vector<MotRecord>& gt,
                               const std::vector<MotRecord>& pred) {
    MetricReport r;
    r.sequence = name;
    auto gtl = to_labeled(gt);
    auto prl = to_labeled(pred);
    r.clear = clear_events(gtl, prl);
    r.mota = mota_score(r.clear);
    r.ids = idf1_counts(gtl, prl);
    r.idf1 = idf1_score(r.ids);
    r.hotac = hota_counts(gtl, prl);
    auto hs = hota_scores(r.hotac);
    r.hota = hs.hota;
    r.deta = hs.deta;
    r.assa = hs.assa;
    return r;
}

MetricReport pool_reports(const std::vector<MetricReport>& reports) {
    MetricReport r;
    r.sequence = "ALL";
    for (const auto& x : reports) {
        r.clear.fp += x.clear.fp;
        r.clear.fn += x.clear.fn;
        r.clear.idsw += x.clear.idsw;
        r.clear.gt_count += x.clear.gt_count;
        r.ids.idtp += x.ids.idtp;
        r.ids.idfp += x.ids.idfp;
        r.ids.idfn += x.ids.idfn;
        for (int a = 0; a < kNumAlphas; ++a) {
            r.hotac.tp[static_cast<size_t>(a)] += x.hotac.tp[static_cast<size_t>(a)];
            r.hotac.fn[static_cast<size_t>(a)] += x.hotac.fn[static_cast<size_t>(a)];
            r.hotac.fp[static_cast<size_t>(a)] += x.hotac.fp[static_cast<size_t>(a)];
            r.hotac.ass_weight[static_cast<size_t>(a)] += x.hotac.ass_weight[static_cast<size_t>(a)];
        }
    }
    r.mota = mota_score(r.clear);
    r.idf1 = idf1_score(r.ids);
    auto hs = hota_scores(r.hotac);
    r.hota = hs.hota;
    r.deta = hs.deta;
    r.assa = hs.assa;
    return r;
}

std::string report_csv_header() { return "sequence,HOTA,DetA,AssA,IDF1,MOTA,FP,FN,IDSW"; }

std::string metrics_csv(const MetricReport& r) {
    char buf[224];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%ld,%ld,%ld", r.hota, r.deta, r.assa, r.idf1,
                  r.mota, r.clear.fp, r.clear.fn, r.clear.idsw);
    return buf;
}

std::string report_csv_row(const MetricReport& r) { return r.sequence + "," + metrics_csv(r); }

}  // namespace dmot
