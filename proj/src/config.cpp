#include "dmot/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dmot {
namespace {

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"tracker.tau_high", [](RunConfig& c, const std::string& k, const std::string& v) { c.tau_high = to_double(k, v); }},
        {"tracker.tau_low", [](RunConfig& c, const std::string& k, const std::string& v) { c.tau_low = to_double(k, v); }},
        {"tracker.max_age", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_age = to_int(k, v); }},
        {"tracker.min_hits", [](RunConfig& c, const std::string& k, const std::string& v) { c.min_hits = to_int(k, v); }},
        {"tracker.iou_gate", [](RunConfig& c, const std::string& k, const std::string& v) { c.iou_gate = to_double(k, v); }},
        {"tracker.lambda", [](RunConfig& c, const std::string& k, const std::string& v) { c.lambda = to_double(k, v); }},
        {"tracker.gamma", [](RunConfig& c, const std::string& k, const std::string& v) { c.gamma = to_double(k, v); }},
        {"tracker.eta", [](RunConfig& c, const std::string& k, const std::string& v) { c.eta = to_double(k, v); }},
        {"tracker.depth_ema", [](RunConfig& c, const std::string& k, const std::string& v) { c.depth_ema = to_double(k, v); }},
        {"tracker.depth_enabled", [](RunConfig& c, const std::string& k, const std::string& v) { c.depth_enabled = to_bool(k, v); }},
        {"scene.width", [](RunConfig& c, const std::string& k, const std::string& v) { c.scene_width = to_int(k, v); }},
        {"scene.height", [](RunConfig& c, const std::string& k, const std::string& v) { c.scene_height = to_int(k, v); }},
        {"scene.frames", [](RunConfig& c, const std::string& k, const std::string& v) { c.scene_frames = to_int(k, v); }},
        {"scene.depth_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.depth_noise = to_double(k, v); }},
        {"scene.scenario", [](RunConfig& c, const std::string&, const std::string& v) { c.scenario = v; }},
        {"scene.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.scene_seed = to_u64(k, v); }},
        {"detector.jitter_sigma", [](RunConfig& c, const std::string& k, const std::string& v) { c.jitter_sigma = to_double(k, v); }},
        {"detector.miss_rate_base", [](RunConfig& c, const std::string& k, const std::string& v) { c.miss_rate_base = to_double(k, v); }},
        {"detector.miss_rate_occluded", [](RunConfig& c, const std::string& k, const std::string& v) { c.miss_rate_occluded = to_double(k, v); }},
        {"detector.score_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.score_noise = to_double(k, v); }},
        {"detector.merge_iou", [](RunConfig& c, const std::string& k, const std::string& v) { c.merge_iou = to_double(k, v); }},
        {"detector.clutter_rate", [](RunConfig& c, const std::string& k, const std::string& v) { c.clutter_rate = to_double(k, v); }},
        {"detector.merge_occluded", [](RunConfig& c, const std::string& k, const std::string& v) { c.merge_occluded = to_bool(k, v); }},
        {"sim.seeds", [](RunConfig& c, const std::string& k, const std::string& v) { c.sim_seeds = to_int(k, v); }},
        {"sim.base_seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.sim_base_seed = to_u64(k, v); }},
        {"label.window", [](RunConfig& c, const std::string& k, const std::string& v) { c.label_window = to_int(k, v); }},
        {"label.stride", [](RunConfig& c, const std::string& k, const std::string& v) { c.label_stride = to_int(k, v); }},
    };

    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, value);
    cfg.assigned.insert(key);
}

void validate(const RunConfig& cfg) {
    if (!(cfg.tau_low >= 0.0 && cfg.tau_low <= cfg.tau_high && cfg.tau_high <= 1.0))
        throw ConfigError("tracker thresholds must satisfy 0 <= tau_low <= tau_high <= 1");
    if (cfg.max_age < 1) throw ConfigError("tracker.max_age must be >= 1");
    if (cfg.min_hits < 1) throw ConfigError("tracker.min_hits must be >= 1");
    if (!(cfg.depth_ema >= 0.0 && cfg.depth_ema <= 1.0))
        throw ConfigError("tracker.depth_ema must be in [0,1]");
    if (!(cfg.eta > 0.0)) throw ConfigError("tracker.eta must be > 0");
    if (cfg.lambda < 0.0 || cfg.gamma < 0.0)
        throw ConfigError("tracker.lambda and tracker.gamma must be >= 0");
    if (cfg.scene_width < 8 || cfg.scene_height < 8)
        throw ConfigError("scene dimensions too small");
    if (cfg.label_window < 1 || cfg.label_stride < 1)
        throw ConfigError("label.window and label.stride must be >= 1");
    if (cfg.sim_seeds < 1) throw ConfigError("sim.seeds must be >= 1");
    if (cfg.depth_noise < 0.0) throw ConfigError("scene.depth_noise must be >= 0");
    if (cfg.clutter_rate < 0.0) throw ConfigError("detector.clutter_rate must be >= 0");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        apply_config_entry(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

RunConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void write_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    char buf[128];
    out << "scene.scenario = " << cfg.scenario << '\n';
    out << "scene.seed = " << cfg.scene_seed << '\n';
    out << "scene.width = " << cfg.scene_width << '\n';
    out << "scene.height = " << cfg.scene_height << '\n';
    out << "scene.frames = " << cfg.scene_frames << '\n';
    std::snprintf(buf, sizeof(buf), "scene.depth_noise = %.6f", cfg.depth_noise);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.jitter_sigma = %.6f", cfg.jitter_sigma);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.miss_rate_base = %.6f", cfg.miss_rate_base);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.miss_rate_occluded = %.6f", cfg.miss_rate_occluded);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.score_noise = %.6f", cfg.score_noise);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.merge_iou = %.6f", cfg.merge_iou);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "detector.clutter_rate = %.6f", cfg.clutter_rate);
    out << buf << '\n';
    out << "detector.merge_occluded = " << (cfg.merge_occluded ? "true" : "false") << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace dmot
