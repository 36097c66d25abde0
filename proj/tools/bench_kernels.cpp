// Compares the OpenMP pixel kernels against their serial references:
// timing plus a max-difference column (elementwise kernels must agree
// bitwise, the chunked reduction within floating-point tolerance).
// Also reports tracker throughput on a synthetic 10-target stream.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "dmot/kernels.hpp"
#include "dmot/pipeline.hpp"
#include "dmot/rng.hpp"
#include "dmot/scene.hpp"
#include "dmot/tracker.hpp"

using namespace dmot;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_ms(F&& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

std::vector<kernels::RasterTarget> demo_targets(int w, int h) {
    std::vector<kernels::RasterTarget> t;
    for (int i = 0; i < 8; ++i) {
        int x0 = (i * w) / 10;
        int y0 = (i * h) / 12;
        t.push_back({i + 1, x0, std::min(w, x0 + w / 4), y0, std::min(h, y0 + h / 3),
                     0.1 + 0.1 * static_cast<double>(i)});
    }
    return t;
}

void bench_size(int w, int h) {
    DepthMap depth(w, h);
    InstanceMask mask(w, h);
    Rng rng(42);
    for (auto& v : depth.values) v = rng.next_double();
    for (auto& b : mask.bits) b = rng.next_double() < 0.4 ? 1 : 0;
    auto targets = demo_targets(w, h);

    DepthMap out_p, out_s;
    DepthMap render_p(w, h), render_s(w, h);
    InstanceMask mask_p(w, h), mask_s(w, h);
    double sum_p = 0, sum_s = 0;

    const int reps = 5;
    double t_mul_p = time_ms([&] { kernels::mask_multiply(depth, mask, out_p); }, reps);
    double t_mul_s = time_ms([&] { kernels::serial::mask_multiply(depth, mask, out_s); }, reps);
    double t_sum_p = time_ms([&] { sum_p = kernels::masked_sum(depth.values, mask.bits); }, reps);
    double t_sum_s = time_ms([&] { sum_s = kernels::serial::masked_sum(depth.values, mask.bits); }, reps);
    double t_ren_p = time_ms([&] { kernels::render_depth(targets, 0.01, 7, render_p); }, reps);
    double t_ren_s = time_ms([&] { kernels::serial::render_depth(targets, 0.01, 7, render_s); }, reps);
    double t_msk_p = time_ms([&] { kernels::render_mask(targets, 3, mask_p); }, reps);
    double t_msk_s = time_ms([&] { kernels::serial::render_mask(targets, 3, mask_s); }, reps);

    double d_mul = 0, d_ren = 0, d_msk = 0;
    for (size_t i = 0; i < out_p.size(); ++i) d_mul = std::max(d_mul, std::abs(out_p.values[i] - out_s.values[i]));
    for (size_t i = 0; i < render_p.size(); ++i)
        d_ren = std::max(d_ren, std::abs(render_p.values[i] - render_s.values[i]));
    for (size_t i = 0; i < mask_p.size(); ++i)
        d_msk = std::max(d_msk, std::abs(static_cast<double>(mask_p.bits[i]) - mask_s.bits[i]));
    double d_sum = std::abs(sum_p - sum_s);

    auto row = [&](const char* name, double tp, double ts, double diff) {
        std::printf("%-14s %5dx%-5d  omp %8.3f ms  serial %8.3f ms  speedup %5.2fx  maxdiff %.3e\n", name, w,
                    h, tp, ts, ts / tp, diff);
    };
    row("mask_multiply", t_mul_p, t_mul_s, d_mul);
    row("masked_sum", t_sum_p, t_sum_s, d_sum);
    row("render_depth", t_ren_p, t_ren_s, d_ren);
    row("render_mask", t_msk_p, t_msk_s, d_msk);
}

void bench_tracker() {
    SceneSpec spec = make_crowd(11);
    spec.frames = 500;
    for (auto& t : spec.targets) t.despawn = spec.frames;
    // double up the population to ten targets
    auto extra = spec.targets;
    for (auto& t : extra) {
        t.id += 6;
        t.y0 += 40;
        if (spec.targets.size() + 1 > 10) break;
        spec.targets.push_back(t);
    }
    spec.targets.resize(10);
    auto dets = strip_sources(det_frames(spec));

    TrackerConfig cfg;
    double t0 = now_ms();
    auto rows = run_tracker(TrackerKind::kByte, cfg, dets);
    double dt = now_ms() - t0;
    std::printf("byte tracker    %4d frames, 10 targets: %8.3f ms  (%.0f fps, %zu rows)\n", spec.frames, dt,
                1000.0 * spec.frames / dt, rows.size());
}

}  // namespace

int main() {
    bench_size(640, 360);
    bench_size(1280, 720);
    bench_size(1920, 1080);
    bench_tracker();
    return 0;
}
