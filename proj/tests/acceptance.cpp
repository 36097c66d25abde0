// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its headline numbers. Runtime budgets are asserted where the
// criterion carries one.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "dmot/cli_commands.hpp"
#include "dmot/depth_head.hpp"
#include "dmot/depth_labels.hpp"
#include "dmot/kalman.hpp"
#include "dmot/pipeline.hpp"
#include "dmot/rng.hpp"

using namespace dmot;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Criterion {
    bool ok = true;
    void require(bool cond) {
        ok = ok && cond;
        CHECK(cond);
    }
    void report(int n, const char* what, const std::string& detail = "") {
        std::printf("criterion %2d %s  %s%s%s\n", n, ok ? "PASS" : "FAIL", what,
                    detail.empty() ? "" : "  -- ", detail.c_str());
        std::fflush(stdout);
    }
};

double brute_force_min_cost(const CostMatrix& c) {
    bool transpose = c.rows > c.cols;
    int n = transpose ? c.cols : c.rows;
    int m = transpose ? c.rows : c.cols;
    auto cost_at = [&](int i, int j) { return transpose ? c.at(j, i) : c.at(i, j); };
    std::vector<int> cols(static_cast<size_t>(m));
    std::iota(cols.begin(), cols.end(), 0);
    double best = 1e300;
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += cost_at(i, cols[static_cast<size_t>(i)]);
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

MotRecord rec(int frame, int id, double x, double y) {
    MotRecord r;
    r.frame = frame;
    r.id = id;
    r.x = x;
    r.y = y;
    r.w = 10;
    r.h = 10;
    r.conf = 1.0;
    r.depth = 0.5;
    return r;
}

long idtp_oracle(const std::vector<LabeledBox>& gt, const std::vector<LabeledBox>& pred) {
    std::set<int> gset, pset;
    for (const auto& b : gt) gset.insert(b.id);
    for (const auto& b : pred) pset.insert(b.id);
    std::vector<int> gids(gset.begin(), gset.end()), pids(pset.begin(), pset.end());
    std::map<std::pair<int, int>, long> overlap;
    for (const auto& g : gt)
        for (const auto& p : pred)
            if (g.frame == p.frame && iou(g.box, p.box) >= 0.5) ++overlap[{g.id, p.id}];
    long best = 0;
    std::vector<int> taken;
    std::function<void(size_t, long)> rec_fn = [&](size_t gi, long acc) {
        best = std::max(best, acc);
        if (gi >= gids.size()) return;
        rec_fn(gi + 1, acc);
        for (int pid : pids) {
            if (std::find(taken.begin(), taken.end(), pid) != taken.end()) continue;
            auto it = overlap.find({gids[gi], pid});
            taken.push_back(pid);
            rec_fn(gi + 1, acc + (it == overlap.end() ? 0 : it->second));
            taken.pop_back();
        }
    };
    rec_fn(0, 0);
    return best;
}

std::vector<MotRecord> random_tiny(Rng& rng, bool jitter) {
    std::vector<MotRecord> rows;
    int n_ids = rng.uniform_int(1, 3);
    int n_frames = rng.uniform_int(1, 5);
    for (int id = 1; id <= n_ids; ++id) {
        double x = rng.uniform(0, 60), y = rng.uniform(0, 60);
        for (int f = 1; f <= n_frames; ++f) {
            if (rng.next_double() < 0.25) continue;
            double dx = jitter ? rng.uniform(-8, 8) : 0.0;
            rows.push_back(rec(f, id, x + 3.0 * f + dx, y + dx));
        }
    }
    return rows;
}

std::filesystem::path temp_dir(const char* name) {
    auto p = std::filesystem::temp_directory_path() / "dmot_acceptance" / name;
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("criterion 1: hungarian equals exhaustive enumeration") {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    const std::pair<int, int> shapes[] = {{2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {3, 5}, {5, 3}};
    Rng rng(90210);
    int cases = 0;
    for (auto [r, m] : shapes) {
        for (int trial = 0; trial < 100; ++trial) {
            CostMatrix cost(r, m);
            for (auto& v : cost.data) v = rng.uniform(0, 10);
            double solver = assignment_cost(cost, hungarian(cost));
            double brute = brute_force_min_cost(cost);
            c.require(std::abs(solver - brute) <= 1e-9);
            ++cases;
        }
    }
    double dt = seconds_since(t0);
    c.require(dt < 5.0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d matrices, %.2fs", cases, dt);
    c.report(1, "hungarian oracle", buf);
}

TEST_CASE("criterion 2: metrics oracles and hand-traced fixtures") {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    Rng rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        auto gt = random_tiny(rng, false);
        auto pred = random_tiny(rng, true);
        auto gl = to_labeled(gt), pl = to_labeled(pred);
        c.require(idf1_counts(gl, pl).idtp == idtp_oracle(gl, pl));
    }

    // MOTA = 50 fixture: 6 gt boxes, 1 FP + 1 FN + 1 IDSW
    {
        std::vector<MotRecord> gt, pred;
        for (int f = 1; f <= 3; ++f) {
            gt.push_back(rec(f, 1, 0, 0));
            gt.push_back(rec(f, 2, 100, 0));
        }
        pred.push_back(rec(1, 11, 0, 0));
        pred.push_back(rec(1, 12, 100, 0));
        pred.push_back(rec(1, 13, 300, 300));
        pred.push_back(rec(2, 11, 0, 0));
        pred.push_back(rec(3, 11, 0, 0));
        pred.push_back(rec(3, 14, 100, 0));
        auto r = evaluate_sequence("toy", gt, pred);
        c.require(std::abs(r.mota - 50.0) <= 1e-9);
    }

    // HOTA split-track fixture: DetA 100, AssA 50, HOTA 100*sqrt(0.5)
    {
        std::vector<MotRecord> gt, pred;
        for (int f = 1; f <= 4; ++f) {
            gt.push_back(rec(f, 1, 2.0 * f, 0));
            pred.push_back(rec(f, f <= 2 ? 31 : 32, 2.0 * f, 0));
        }
        auto scores = hota_scores(hota_counts(to_labeled(gt), to_labeled(pred)));
        c.require(std::abs(scores.hota - 100.0 * std::sqrt(0.5)) <= 1e-9);
        c.require(std::abs(scores.deta - 100.0) <= 1e-9);
        c.require(std::abs(scores.assa - 50.0) <= 1e-9);
    }

    // IDSW = 2 swap fixture
    {
        std::vector<MotRecord> gt, pred;
        for (int f = 1; f <= 3; ++f) {
            gt.push_back(rec(f, 1, 0, 0));
            gt.push_back(rec(f, 2, 100, 0));
            pred.push_back(rec(f, f < 3 ? 11 : 12, 0, 0));
            pred.push_back(rec(f, f < 3 ? 12 : 11, 100, 0));
        }
        c.require(clear_events(to_labeled(gt), to_labeled(pred)).idsw == 2);
    }

    double dt = seconds_since(t0);
    c.require(dt < 10.0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "50 idf1 oracles + 3 fixtures, %.2fs", dt);
    c.report(2, "metrics oracle", buf);
}

TEST_CASE("criterion 3: soft labels exact on noiseless scenes, box average contaminated") {
    Criterion c;

    int checked = 0;
    for (const auto& sc : benchmark_suite(1, 2)) {
        SceneSpec spec = sc.spec;
        spec.depth_noise = 0.0;
        std::map<std::pair<int, int>, double> gt_depth;
        for (int f = 1; f <= spec.frames; ++f)
            for (const auto& st : frame_states(spec, f)) gt_depth[{f, st.id}] = st.depth;
        for (const auto& l : label_sequence(spec, {2, 1})) {
            if (l.box_fallback) continue;  // fully occluded: no visible pixels
            c.require(l.value == gt_depth.at({l.frame, l.instance_id}));  // bitwise
            ++checked;
        }
    }

    // OVERTAKE: the naive box average deviates on an occluded instance
    double worst = 0.0;
    {
        SceneSpec spec = make_overtake(1);
        spec.depth_noise = 0.0;
        for (int f = 1; f <= spec.frames; ++f) {
            auto states = frame_states(spec, f);
            DepthMap depth;
            bool rendered = false;
            for (const auto& st : states) {
                if (st.visibility >= 1.0) continue;  // want occluded/adjacent cases
                if (!rendered) {
                    depth = synth_depth_oracle(spec, f);
                    rendered = true;
                }
                worst = std::max(worst, std::abs(box_average(depth, spec, st.box) - st.depth));
            }
        }
        c.require(worst > 0.05);
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d exact labels, box-average deviation %.3f", checked, worst);
    c.report(3, "soft-label fidelity", buf);
}

TEST_CASE("criterion 4: depth cues improve the byte tracker") {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    RunConfig cfg;
    auto suite = build_suite(cfg);

    auto run_pooled = [&](double gamma) {
        TrackerConfig t = tracker_config(cfg);
        t.gamma = gamma;
        t.lambda = 1.0 - gamma;
        std::vector<MetricReport> reports(suite.size());
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < suite.size(); ++i)
            reports[i] = evaluate_tracker_run(suite[i].name, TrackerKind::kByte, t, suite[i].gt,
                                              strip_sources(suite[i].dets));
        return pool_reports(reports);
    };

    auto with_depth = run_pooled(0.2);
    auto baseline = run_pooled(0.0);

    c.require(with_depth.idf1 > baseline.idf1);
    c.require(with_depth.assa > baseline.assa);
    c.require(baseline.clear.idsw > 0);
    double reduction = 1.0 - static_cast<double>(with_depth.clear.idsw) /
                                 static_cast<double>(baseline.clear.idsw);
    c.require(reduction >= 0.30);

    double dt = seconds_since(t0);
    c.require(dt < 120.0);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "idf1 %.2f>%.2f assa %.2f>%.2f idsw %ld->%ld (-%.0f%%), %.1fs", with_depth.idf1,
                  baseline.idf1, with_depth.assa, baseline.assa, baseline.clear.idsw,
                  with_depth.clear.idsw, 100.0 * reduction, dt);
    c.report(4, "depth-cue benefit", buf);
}

TEST_CASE("criterion 5: gamma sweep peaks at 0.2 and collapses past 0.4") {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    RunConfig cfg;
    auto suite = build_suite(cfg);
    std::map<int, double> hota_at;  // key = gamma * 10
    for (int step = 0; step <= 9; ++step) {
        TrackerConfig t = tracker_config(cfg);
        t.gamma = 0.1 * step;
        t.lambda = 1.0 - t.gamma;
        std::vector<MetricReport> reports(suite.size());
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < suite.size(); ++i)
            reports[i] = evaluate_tracker_run(suite[i].name, TrackerKind::kByte, t, suite[i].gt,
                                              strip_sources(suite[i].dets));
        hota_at[step] = pool_reports(reports).hota;
    }

    for (int heavy : {7, 8, 9}) c.require(hota_at[2] > hota_at[heavy]);

    double dt = seconds_since(t0);
    c.require(dt < 300.0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "hota(0.2)=%.2f vs 0.7/0.8/0.9 = %.2f/%.2f/%.2f, %.1fs", hota_at[2],
                  hota_at[7], hota_at[8], hota_at[9], dt);
    c.report(5, "gamma-sweep shape", buf);
}

TEST_CASE("criterion 6: window/stride settings leave pooled HOTA nearly unchanged") {
    Criterion c;
    RunConfig cfg;
    auto suite = build_suite(cfg);

    static const WindowSpec settings[5] = {{1, 1}, {2, 1}, {4, 2}, {6, 3}, {8, 4}};
    std::vector<double> hotas;
    for (const auto& ws : settings) {
        std::vector<MetricReport> reports(suite.size());
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < suite.size(); ++i) {
            auto labels = label_map(suite[i].spec, ws);
            auto dets = apply_label_depths(suite[i].dets, labels);
            reports[i] = evaluate_tracker_run(suite[i].name, TrackerKind::kByte, tracker_config(cfg),
                                              suite[i].gt, dets);
        }
        hotas.push_back(pool_reports(reports).hota);
    }

    double lo = *std::min_element(hotas.begin(), hotas.end());
    double hi = *std::max_element(hotas.begin(), hotas.end());
    double mean = std::accumulate(hotas.begin(), hotas.end(), 0.0) / hotas.size();
    double spread = (hi - lo) / mean;
    c.require(spread < 0.15);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "hota range [%.3f, %.3f], relative spread %.4f", lo, hi, spread);
    c.report(6, "window/stride robustness", buf);
}

TEST_CASE("criterion 7: depth-head invariants over 100 seeded passes") {
    Criterion c;
    DepthHeadConfig cfg;
    cfg.heads = 4;
    cfg.points = 4;
    cfg.scales = 3;
    cfg.layers = 6;
    cfg.channels = 32;
    cfg.queries = 8;
    cfg.base_resolution = 8;

    double worst_alpha = 0.0, worst_tel = 0.0, worst_beta = 0.0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto trace = forward_seeded(cfg, seed);
        for (const auto& layer_alpha : trace.alpha) {
            for (double a : layer_alpha) c.require(a >= 0.0);
            for (size_t base = 0; base + cfg.points <= layer_alpha.size(); base += cfg.points) {
                double sum = 0.0;
                for (int p = 0; p < cfg.points; ++p) sum += layer_alpha[base + p];
                worst_alpha = std::max(worst_alpha, std::abs(sum - 1.0));
            }
        }
        for (int q = 0; q < cfg.queries; ++q) {
            double acc = 0.0;
            for (const auto& inc : trace.increments) acc += inc[static_cast<size_t>(q)];
            worst_tel = std::max(worst_tel,
                                 std::abs(trace.p.back()[static_cast<size_t>(q)] -
                                          trace.p.front()[static_cast<size_t>(q)] - acc));
        }

        auto cfg2 = cfg;
        cfg2.beta = 2.0 * cfg.beta;
        auto doubled = forward(cfg2, make_seeded_memory(cfg2, seed), make_seeded_queries(cfg2, seed),
                               make_seeded_weights(cfg2, seed));
        for (size_t layer = 0; layer < trace.w_d.size(); ++layer)
            for (size_t i = 0; i < trace.w_d[layer].size(); ++i)
                worst_beta = std::max(worst_beta,
                                      std::abs(doubled.w_d[layer][i] - 2.0 * trace.w_d[layer][i]));
    }
    c.require(worst_alpha <= 1e-6);
    c.require(worst_tel <= 1e-9);
    c.require(worst_beta <= 1e-12);

    auto zero = forward(cfg, make_seeded_memory(cfg, 3), make_seeded_queries(cfg, 3),
                        make_zero_weights(cfg));
    for (const auto& layer_p : zero.p)
        for (double v : layer_p) c.require(v == 0.0);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "alpha dev %.2e, telescope %.2e, beta dev %.2e", worst_alpha,
                  worst_tel, worst_beta);
    c.report(7, "depth-head invariants", buf);
}

TEST_CASE("criterion 8: loss fixed points") {
    Criterion c;
    Rng rng(135);

    FeaturePair same;
    same.terms.push_back({{0.3, -1.2, 2.5}, {0.3, -1.2, 2.5}});
    c.require(std::abs(align_loss(same)) <= 1e-12);

    for (int trial = 0; trial < 1000; ++trial) {
        FeaturePair pair;
        int n = rng.uniform_int(2, 16);
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            a[static_cast<size_t>(i)] = rng.uniform(-3, 3);
            b[static_cast<size_t>(i)] = rng.uniform(-3, 3);
        }
        a[0] += 1e-3;
        b[0] += 1e-3;
        pair.terms.push_back({a, b});
        double loss = align_loss(pair);
        c.require(loss >= 0.0 && loss <= 2.0);
    }

    std::vector<double> p = {0.1, 0.5, 0.9};
    c.require(reg_loss(p, p) == 0.0);
    std::vector<double> pr = {0.2, 0.8}, y = {0.4, 0.5};
    c.require(std::abs(reg_loss(pr, y) - 0.065) <= 1e-12);

    double worst_lin = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        double lb = rng.next_double(), lr = rng.next_double(), la = rng.next_double();
        double wb = rng.next_double(), wr = rng.next_double(), wa = rng.next_double();
        double t = rng.uniform(0, 4);
        worst_lin = std::max(worst_lin, std::abs(total_loss(lb, lr, la, t * wb, wr, wa) -
                                                 (total_loss(lb, lr, la, wb, wr, wa) + (t - 1) * wb * lb)));
        worst_lin = std::max(worst_lin, std::abs(total_loss(lb, lr, la, wb, t * wr, wa) -
                                                 (total_loss(lb, lr, la, wb, wr, wa) + (t - 1) * wr * lr)));
        worst_lin = std::max(worst_lin, std::abs(total_loss(lb, lr, la, wb, wr, t * wa) -
                                                 (total_loss(lb, lr, la, wb, wr, wa) + (t - 1) * wa * la)));
    }
    c.require(worst_lin <= 1e-12);

    char buf[96];
    std::snprintf(buf, sizeof(buf), "linearity dev %.2e", worst_lin);
    c.report(8, "loss fixed points", buf);
}

TEST_CASE("criterion 9: kalman consistency") {
    Criterion c;

    KalmanParams noiseless;
    noiseless.std_weight_pos = 0.0;
    noiseless.std_weight_vel = 0.0;
    auto s = kf_init(BBox(100, 50, 20, 40), noiseless);
    s.mean[4] = 2.0;
    s.mean[5] = -1.0;
    double x0 = s.mean[0], y0 = s.mean[1];
    double worst_traj = 0.0;
    for (int k = 1; k <= 100; ++k) {
        s = kf_predict(s, noiseless);
        worst_traj = std::max(worst_traj, std::abs(s.mean[0] - (x0 + 2.0 * k)));
        worst_traj = std::max(worst_traj, std::abs(s.mean[1] - (y0 - 1.0 * k)));
    }
    c.require(worst_traj <= 1e-9);

    Rng rng(404);
    auto t = kf_init(BBox(100, 100, 40, 80));
    double worst_sym = 0.0;
    for (int i = 0; i < 10000; ++i) {
        t = kf_predict(t);
        if (i % 3 != 2) {
            BBox b = state_box(t);
            t = kf_update(t, BBox(b.x + rng.uniform(-2, 2), b.y + rng.uniform(-2, 2),
                                  std::max(0.5, b.w + rng.uniform(-1, 1)),
                                  std::max(0.5, b.h + rng.uniform(-1, 1))));
        }
        for (int r = 0; r < 8; ++r)
            for (int col = 0; col < 8; ++col)
                worst_sym = std::max(worst_sym, std::abs(t.c(r, col) - t.c(col, r)));
    }
    c.require(worst_sym <= 1e-9);

    char buf[96];
    std::snprintf(buf, sizeof(buf), "trajectory dev %.2e, asymmetry %.2e", worst_traj, worst_sym);
    c.report(9, "kalman consistency", buf);
}

TEST_CASE("criterion 10: CLI determinism and tracker throughput") {
    Criterion c;

    // Every command rerun must be byte-identical.
    auto dir_a = temp_dir("run_a");
    auto dir_b = temp_dir("run_b");
    std::string cfg_path = (temp_dir("cfg") / "small.cfg").string();
    {
        std::ofstream cfg(cfg_path);
        cfg << "sim.seeds = 2\n";
    }

    for (auto dir : {dir_a, dir_b}) {
        SimulateArgs sim;
        sim.config_path = cfg_path;
        sim.out_dir = dir.string();
        c.require(cmd_simulate(sim) == 0);

        LabelArgs lab;
        lab.gt_path = (dir / "CROSSING_1" / "gt.txt").string();
        lab.scene_config = (dir / "CROSSING_1" / "scene.txt").string();
        lab.out_path = (dir / "labels.txt").string();
        c.require(cmd_label(lab) == 0);

        TrackArgs trk;
        trk.tracker = "byte";
        trk.det_path = (dir / "OVERTAKE_1" / "det.txt").string();
        trk.config_path = cfg_path;
        trk.out_path = (dir / "pred.txt").string();
        c.require(cmd_track(trk) == 0);

        EvalArgs ev;
        ev.gt_paths = {(dir / "OVERTAKE_1" / "gt.txt").string()};
        ev.pred_paths = {(dir / "pred.txt").string()};
        ev.out_path = (dir / "report.csv").string();
        c.require(cmd_eval(ev) == 0);

        SweepArgs sw;
        sw.kind = "gamma";
        sw.config_path = cfg_path;
        sw.out_path = (dir / "sweep.csv").string();
        c.require(cmd_sweep(sw) == 0);

        InspectHeadArgs ih;
        ih.seed = 5;
        ih.queries = 32;
        ih.layers = 4;
        ih.out_path = (dir / "trace.txt").string();
        c.require(cmd_inspect_head(ih) == 0);
    }

    for (const char* f : {"CROSSING_1/gt.txt", "CROSSING_1/det.txt", "labels.txt", "pred.txt",
                          "report.csv", "sweep.csv", "trace.txt"}) {
        std::string a = slurp(dir_a / f), b = slurp(dir_b / f);
        c.require(!a.empty());
        c.require(a == b);
    }

    // Throughput on a 10-target stream.
    SceneSpec spec = make_crowd(11);
    spec.frames = 1000;
    {
        auto extra = spec.targets;
        for (auto& t : extra) {
            t.id += 6;
            t.y0 = std::min(320.0, t.y0 + 34.0);
            t.x0 += 17.0;
        }
        spec.targets.insert(spec.targets.end(), extra.begin(), extra.end());
        spec.targets.resize(10);
        for (auto& t : spec.targets) t.despawn = spec.frames;
    }
    auto dets = strip_sources(det_frames(spec));

    TrackerConfig tcfg;
    auto t0 = std::chrono::steady_clock::now();
    auto rows = run_tracker(TrackerKind::kByte, tcfg, dets);
    double dt = seconds_since(t0);
    double fps = spec.frames / dt;
    c.require(fps >= 1000.0);
    c.require(!rows.empty());

    char buf[96];
    std::snprintf(buf, sizeof(buf), "outputs byte-identical, %.0f frames/s", fps);
    c.report(10, "determinism and throughput", buf);
}

TEST_CASE("criterion 11: file format round trip") {
    Criterion c;
    Rng rng(808);
    auto dir = temp_dir("roundtrip");

    for (int set = 0; set < 100; ++set) {
        std::vector<MotRecord> recs;
        int n = rng.uniform_int(0, 40);
        for (int i = 0; i < n; ++i) {
            MotRecord r;
            r.frame = rng.uniform_int(1, 60);
            r.id = rng.uniform_int(-1, 25);
            r.x = rng.uniform(-50, 600);
            r.y = rng.uniform(-50, 350);
            r.w = rng.uniform(1, 150);
            r.h = rng.uniform(1, 250);
            r.conf = rng.next_double();
            r.depth = rng.uniform_int(0, 3) == 0 ? -1.0 : rng.next_double();
            recs.push_back(r);
        }
        auto p1 = dir / "a.txt";
        auto p2 = dir / "b.txt";
        write_mot(recs, p1.string());
        write_mot(read_mot(p1.string()), p2.string());
        c.require(slurp(p1) == slurp(p2));
    }

    auto legacy = parse_mot_line("7,4,10,20,30,40,0.8,-1,-1,-1", 1);
    c.require(legacy.frame == 7 && legacy.id == 4 && !legacy.has_depth());

    c.report(11, "file-format round trip", "100 record sets + legacy line");
}
