#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dmot {

// Command implementations shared by the CLI binary and the test suites.
// Each returns a process exit code: 0 ok, 2 config/usage, 3 I/O,
// 4 data-contract violation.

struct SimulateArgs {
    std::string config_path;  // optional
    std::string out_dir = ".";
    uint64_t seed = 0;  // 0 = take sim.base_seed from config
};
int cmd_simulate(const SimulateArgs& args);

struct LabelArgs {
    std::string depth_source = "synthetic";
    std::string gt_path;
    std::string scene_config;
    int window = 0;  // 0 = from config / default
    int stride = 0;
    std::string out_path;
};
int cmd_label(const LabelArgs& args);

struct TrackArgs {
    std::string tracker = "byte";  // sort | byte
    std::string det_path;
    std::string config_path;  // optional
    std::string out_path;
};
int cmd_track(const TrackArgs& args);

struct EvalArgs {
    std::vector<std::string> gt_paths;
    std::vector<std::string> pred_paths;
    std::string out_path;
};
int cmd_eval(const EvalArgs& args);

struct SweepArgs {
    std::string kind;  // gamma | window
    std::string config_path;  // optional
    std::string out_path;
};
int cmd_sweep(const SweepArgs& args);

struct InspectHeadArgs {
    uint64_t seed = 1;
    int queries = 300;
    int layers = 6;
    std::string out_path;
};
int cmd_inspect_head(const InspectHeadArgs& args);

}  // namespace dmot
