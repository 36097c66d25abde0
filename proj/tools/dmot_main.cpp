#include <CLI11.hpp>
#include <filesystem>
#include <string>

#include "dmot/cli_commands.hpp"

// Subcommands: simulate | label | track | eval | sweep | inspect-head.
// Exit codes: 0 ok, 2 config/usage, 3 I/O, 4 data-contract violation.
int main(int argc, char** argv) {
    CLI::App app{"depth-aware multi-object tracking sandbox"};
    app.require_subcommand(1);

    std::string workdir = ".";
    app.add_option("--workdir", workdir, "root for relative paths");

    dmot::SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "generate benchmark scenario gt/det files");
    c_sim->add_option("--config", sim.config_path, "run config file");
    c_sim->add_option("--out-dir", sim.out_dir, "output directory")->required();
    c_sim->add_option("--seed", sim.seed, "base seed (overrides sim.base_seed)");

    dmot::LabelArgs lab;
    auto* c_lab = app.add_subcommand("label", "write instance soft depth labels for a sequence");
    c_lab->add_option("--depth-source", lab.depth_source, "depth source (synthetic)");
    c_lab->add_option("--in", lab.gt_path, "ground truth file")->required();
    c_lab->add_option("--scene", lab.scene_config, "scene config file")->required();
    c_lab->add_option("--window", lab.window, "window size B");
    c_lab->add_option("--stride", lab.stride, "stride S");
    c_lab->add_option("--out", lab.out_path, "output label file")->required();

    dmot::TrackArgs trk;
    auto* c_trk = app.add_subcommand("track", "run a tracker over a detection file");
    c_trk->add_option("--tracker", trk.tracker, "sort | byte");
    c_trk->add_option("--det", trk.det_path, "detection file")->required();
    c_trk->add_option("--config", trk.config_path, "run config file");
    c_trk->add_option("--out", trk.out_path, "prediction output file")->required();

    dmot::EvalArgs ev;
    auto* c_ev = app.add_subcommand("eval", "evaluate predictions against ground truth");
    c_ev->add_option("--gt", ev.gt_paths, "ground truth file(s)")->required();
    c_ev->add_option("--pred", ev.pred_paths, "prediction file(s)")->required();
    c_ev->add_option("--out", ev.out_path, "report CSV path")->required();

    dmot::SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "run the gamma or window/stride grid");
    c_sw->add_option("--kind", sw.kind, "gamma | window")->required();
    c_sw->add_option("--config", sw.config_path, "run config file");
    c_sw->add_option("--out", sw.out_path, "sweep CSV path")->required();

    dmot::InspectHeadArgs ih;
    auto* c_ih = app.add_subcommand("inspect-head", "dump a depth-head forward trace");
    c_ih->add_option("--seed", ih.seed, "weight seed");
    c_ih->add_option("--queries", ih.queries, "query count");
    c_ih->add_option("--layers", ih.layers, "refinement layers");
    c_ih->add_option("--out", ih.out_path, "trace output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::error_code ec;
    std::filesystem::current_path(workdir, ec);
    if (ec) {
        fprintf(stderr, "io error: cannot enter workdir '%s'\n", workdir.c_str());
        return 3;
    }

    if (c_sim->parsed()) return dmot::cmd_simulate(sim);
    if (c_lab->parsed()) return dmot::cmd_label(lab);
    if (c_trk->parsed()) return dmot::cmd_track(trk);
    if (c_ev->parsed()) return dmot::cmd_eval(ev);
    if (c_sw->parsed()) return dmot::cmd_sweep(sw);
    if (c_ih->parsed()) return dmot::cmd_inspect_head(ih);
    return 2;
}
