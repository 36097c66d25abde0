#include "dmot/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "dmot/depth_head.hpp"
#include "dmot/pipeline.hpp"

namespace dmot {
namespace {

namespace fs = std::filesystem;

template <typename F>
int guarded(F&& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const ContractError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 4;
    }
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return read_config(path);
}

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError("cannot create directory '" + p.string() + "': " + ec.message());
}

std::string scenario_kind(const std::string& name) {
    auto pos = name.rfind('_');
    return pos == std::string::npos ? name : name.substr(0, pos);
}

std::string sequence_name(const std::string& path) {
    fs::path p(path);
    auto parent = p.parent_path().filename().string();
    return parent.empty() ? p.stem().string() : parent;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
    return guarded([&] {
        RunConfig cfg = load_config(args.config_path);
        if (args.seed != 0) cfg.sim_base_seed = args.seed;

        auto suite = build_suite(cfg);
        ensure_dir(args.out_dir);
        for (const auto& seq : suite) {
            fs::path dir = fs::path(args.out_dir) / seq.name;
            ensure_dir(dir);
            write_mot(seq.gt, (dir / "gt.txt").string());
            write_mot(det_records(seq.dets), (dir / "det.txt").string());

            RunConfig scene_cfg = cfg;
            scene_cfg.scenario = scenario_kind(seq.name);
            scene_cfg.scene_seed = seq.spec.seed;
            scene_cfg.scene_frames = seq.spec.frames;
            scene_cfg.merge_occluded = seq.spec.detector.merge_occluded;
            write_config(scene_cfg, (dir / "scene.txt").string());

            size_t n_det = 0;
            for (const auto& f : seq.dets) n_det += f.size();
            std::cout << seq.name << " frames=" << seq.spec.frames << " targets=" << seq.spec.targets.size()
                      << " gt_rows=" << seq.gt.size() << " det_rows=" << n_det << '\n';
        }
    });
}

int cmd_label(const LabelArgs& args) {
    return guarded([&] {
        if (args.depth_source != "synthetic")
            throw ConfigError("unsupported depth source '" + args.depth_source + "' (only: synthetic)");
        RunConfig scene_cfg = read_config(args.scene_config);
        SceneSpec spec = scene_from_config(scene_cfg);

        WindowSpec windows;
        windows.window = args.window > 0 ? args.window : scene_cfg.label_window;
        windows.stride = args.stride > 0 ? args.stride : scene_cfg.label_stride;
        if (windows.window < 1 || windows.stride < 1)
            throw ConfigError("label window and stride must be >= 1");

        auto gt = read_mot(args.gt_path);
        auto labels = label_map(spec, windows);

        std::vector<MotRecord> out_rows;
        std::vector<std::pair<int, int>> fallbacks;
        for (const auto& rec : gt) {
            auto it = labels.find({rec.frame, rec.id});
            if (it == labels.end()) continue;  // frame not covered by any window
            MotRecord row = rec;
            row.conf = 1.0;
            row.depth = std::clamp(it->second.value, 0.0, 1.0);
            out_rows.push_back(row);
            if (it->second.box_fallback) fallbacks.emplace_back(rec.frame, rec.id);
        }
        write_mot(out_rows, args.out_path);

        // Fallback rows are flagged in a sidecar so the label file itself
        // stays in the 8-field format.
        auto warn = open_out(args.out_path + ".warnings");
        warn << "frame,id,warning\n";
        for (auto [frame, id] : fallbacks) warn << frame << ',' << id << ",box_average_fallback\n";

        std::cout << "labels=" << out_rows.size() << " fallbacks=" << fallbacks.size() << " window="
                  << windows.window << " stride=" << windows.stride << '\n';
    });
}

int cmd_track(const TrackArgs& args) {
    return guarded([&] {
        TrackerKind kind;
        if (args.tracker == "sort")
            kind = TrackerKind::kSort;
        else if (args.tracker == "byte")
            kind = TrackerKind::kByte;
        else
            throw ConfigError("unknown tracker '" + args.tracker + "' (sort | byte)");

        RunConfig cfg = load_config(args.config_path);
        auto dets = detections_from_records(read_mot(args.det_path));
        auto pred = run_tracker(kind, tracker_config(cfg), dets);
        write_mot(pred, args.out_path);
        std::cout << "frames=" << dets.size() << " rows=" << pred.size() << '\n';
    });
}

int cmd_eval(const EvalArgs& args) {
    return guarded([&] {
        if (args.gt_paths.empty()) throw ConfigError("eval: no --gt files given");
        if (args.gt_paths.size() != args.pred_paths.size())
            throw ConfigError("eval: --gt and --pred counts differ");

        std::vector<MetricReport> reports;
        for (size_t i = 0; i < args.gt_paths.size(); ++i) {
            auto gt = read_mot(args.gt_paths[i]);
            auto pred = read_mot(args.pred_paths[i]);
            int max_gt = 0, max_pred = 0;
            for (const auto& r : gt) max_gt = std::max(max_gt, r.frame);
            for (const auto& r : pred) max_pred = std::max(max_pred, r.frame);
            if (max_pred > max_gt)
                std::cerr << "warning: predictions extend past ground truth (" << max_pred << " > " << max_gt
                          << ") in " << args.pred_paths[i] << '\n';
            reports.push_back(evaluate_sequence(sequence_name(args.gt_paths[i]), gt, pred));
        }

        auto out = open_out(args.out_path);
        out << report_csv_header() << '\n';
        for (const auto& r : reports) out << report_csv_row(r) << '\n';
        out << report_csv_row(pool_reports(reports)) << '\n';
    });
}

int cmd_sweep(const SweepArgs& args) {
    return guarded([&] {
        RunConfig cfg = load_config(args.config_path);
        auto suite = build_suite(cfg);

        auto out = open_out(args.out_path);
        const std::string metric_cols = "HOTA,DetA,AssA,IDF1,MOTA,FP,FN,IDSW";
        if (args.kind == "gamma") {
            out << "gamma,lambda," << metric_cols << '\n';
            for (int step = 0; step <= 9; ++step) {
                double gamma = 0.1 * step;
                TrackerConfig tcfg = tracker_config(cfg);
                tcfg.gamma = gamma;
                tcfg.lambda = 1.0 - gamma;
                std::vector<MetricReport> reports(suite.size());
#pragma omp parallel for schedule(dynamic)
                for (size_t i = 0; i < suite.size(); ++i) {
                    reports[i] = evaluate_tracker_run(suite[i].name, TrackerKind::kByte, tcfg, suite[i].gt,
                                                      strip_sources(suite[i].dets));
                }
                char prefix[64];
                std::snprintf(prefix, sizeof(prefix), "%.1f,%.1f,", gamma, 1.0 - gamma);
                out << prefix << metrics_csv(pool_reports(reports)) << '\n';
            }
        } else if (args.kind == "window") {
            out << "window,stride," << metric_cols << '\n';
            static const WindowSpec settings[5] = {{1, 1}, {2, 1}, {4, 2}, {6, 3}, {8, 4}};
            for (const auto& ws : settings) {
                std::vector<MetricReport> reports(suite.size());
#pragma omp parallel for schedule(dynamic)
                for (size_t i = 0; i < suite.size(); ++i) {
                    auto labels = label_map(suite[i].spec, ws);
                    auto dets = apply_label_depths(suite[i].dets, labels);
                    reports[i] = evaluate_tracker_run(suite[i].name, TrackerKind::kByte, tracker_config(cfg),
                                                      suite[i].gt, dets);
                }
                char prefix[64];
                std::snprintf(prefix, sizeof(prefix), "%d,%d,", ws.window, ws.stride);
                out << prefix << metrics_csv(pool_reports(reports)) << '\n';
            }
        } else {
            throw ConfigError("unknown sweep kind '" + args.kind + "' (gamma | window)");
        }
    });
}

int cmd_inspect_head(const InspectHeadArgs& args) {
    return guarded([&] {
        DepthHeadConfig cfg;
        cfg.queries = args.queries;
        cfg.layers = args.layers;
        cfg.part_width();  // validates

        // Seed 0 is the zero-weight reference pass (every P must be 0).
        auto trace = args.seed == 0
                         ? forward(cfg, make_seeded_memory(cfg, 0), make_seeded_queries(cfg, 0),
                                   make_zero_weights(cfg))
                         : forward_seeded(cfg, args.seed);

        auto out = open_out(args.out_path);
        char buf[256];
        std::snprintf(buf, sizeof(buf), "# depth-head trace seed=%llu queries=%d layers=%d heads=%d points=%d scales=%d channels=%d beta=%.6f",
                      static_cast<unsigned long long>(args.seed), cfg.queries, cfg.layers, cfg.heads,
                      cfg.points, cfg.scales, cfg.channels, cfg.beta);
        out << buf << '\n';

        double alpha_dev = 0.0;
        for (int layer = 1; layer <= cfg.layers; ++layer) {
            const auto& p = trace.p[static_cast<size_t>(layer)];
            const auto& wd = trace.w_d[static_cast<size_t>(layer) - 1];
            const auto& al = trace.alpha[static_cast<size_t>(layer) - 1];
            const auto& inc = trace.increments[static_cast<size_t>(layer) - 1];
            for (int q = 0; q < cfg.queries; ++q) {
                std::snprintf(buf, sizeof(buf), "layer=%d query=%d P=%.6f dP=%.6f", layer, q,
                              p[static_cast<size_t>(q)], inc[static_cast<size_t>(q)]);
                out << buf;
                for (int h = 0; h < cfg.heads; ++h) {
                    double sum = 0.0;
                    for (int pt = 0; pt < cfg.points; ++pt)
                        sum += al[(static_cast<size_t>(q) * cfg.heads + h) * cfg.points + pt];
                    alpha_dev = std::max(alpha_dev, std::abs(sum - 1.0));
                    std::snprintf(buf, sizeof(buf), " Wd[%d]=%.6f alpha_sum[%d]=%.6f", h,
                                  wd[static_cast<size_t>(q) * cfg.heads + h], h, sum);
                    out << buf;
                }
                out << '\n';
            }
        }

        // Telescoping residual: P^L - P^0 vs the summed increments.
        double residual = 0.0;
        for (int q = 0; q < cfg.queries; ++q) {
            double acc = 0.0;
            for (int layer = 0; layer < cfg.layers; ++layer)
                acc += trace.increments[static_cast<size_t>(layer)][static_cast<size_t>(q)];
            double lhs = trace.p.back()[static_cast<size_t>(q)] - trace.p.front()[static_cast<size_t>(q)];
            residual = std::max(residual, std::abs(lhs - acc));
        }
        std::snprintf(buf, sizeof(buf), "summary alpha_max_dev=%.3e telescope_residual=%.3e", alpha_dev,
                      residual);
        out << buf << '\n';
        std::cout << "trace written to " << args.out_path << '\n';
    });
}

}  // namespace dmot
