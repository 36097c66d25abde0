#pragma once

#include <array>
#include <string>
#include <vector>

#include "dmot/geometry.hpp"
#include "dmot/mot_io.hpp"

namespace dmot {

inline constexpr int kNumAlphas = 19;  // 0.05, 0.10, ..., 0.95

inline double hota_alpha(int k) { return 0.05 * (k + 1); }

// One labeled box of a sequence (ground truth or prediction).
struct LabeledBox {
    int frame;
    int id;
    BBox box;
};

std::vector<LabeledBox> to_labeled(const std::vector<MotRecord>& records);

// CLEAR event counts at IoU >= iou_threshold with match carry-over.
struct ClearCounts {
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long gt_count = 0;
};

ClearCounts clear_events(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred,
                         double iou_threshold = 0.5);

// 100 * (1 - (FN + FP + IDSW) / gt_count); unbounded below.
double mota_score(const ClearCounts& c);

struct IdCounts {
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
};

// Global bijective id mapping maximizing per-frame IoU>=0.5 co-occurrences.
IdCounts idf1_counts(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred);
double idf1_score(const IdCounts& c);

// Per-alpha HOTA accumulators, poolable across sequences by summation.
struct HotaCounts {
    std::array<double, kNumAlphas> tp{};
    std::array<double, kNumAlphas> fn{};
    std::array<double, kNumAlphas> fp{};
    std::array<double, kNumAlphas> ass_weight{};  // sum of A(c) over TPs
};

HotaCounts hota_counts(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred);

struct HotaScores {
    double hota;  // 100 * sqrt(mean_alpha(DetA * AssA))
    double deta;  // 100 * mean_alpha DetA
    double assa;  // 100 * mean_alpha AssA
};

HotaScores hota_scores(const HotaCounts& c);

// Everything above for one sequence, plus the raw counts needed to pool.
struct MetricReport {
    std::string sequence;
    double hota = 0.0, deta = 0.0, assa = 0.0, idf1 = 0.0, mota = 0.0;
    ClearCounts clear;
    IdCounts ids;
    HotaCounts hotac;
};

MetricReport evaluate_sequence(const std::string& name, const std::vector<MotRecord>& gt,
                               const std::vector<MotRecord>& pred);

// Pools raw counts (never ratios) across sequences; named "ALL".
MetricReport pool_reports(const std::vector<MetricReport>& reports);

// Report CSV row: sequence,HOTA,DetA,AssA,IDF1,MOTA,FP,FN,IDSW
std::string report_csv_header();
std::string report_csv_row(const MetricReport& r);

// The row without its sequence column (sweep tables prepend their own keys).
std::string metrics_csv(const MetricReport& r);

}  // namespace dmot
