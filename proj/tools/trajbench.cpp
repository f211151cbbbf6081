#include "traj/pipeline.hpp"
#include "traj/query.hpp"
#include "traj/reference.hpp"
#include "traj/text.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Compares the serial reference implementations against the production
// kernels (grid index + OpenMP) on a synthetic store, verifying along the way
// that both sides produce identical answers.

namespace {

using namespace traj;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

TrajectoryStore make_store(std::size_t objects, std::size_t points_per_object) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> coord(0.0, 5000.0);
    std::uniform_real_distribution<double> step(-40.0, 40.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);

    TrajectoryStore store;

    std::vector<RegionDef> regions;
    for (int i = 0; i < 24; ++i) {
        const double x = coord(rng);
        const double y = coord(rng);
        const double w = 120.0 + 400.0 * frac(rng);
        RegionDef d;
        d.id = "r" + std::to_string(i);
        d.name = "region-" + std::to_string(i);
        d.category = i % 3 == 0 ? "commercial" : i % 3 == 1 ? "residential" : "transport";
        if (i >= 16) d.parent = "r" + std::to_string(i - 16);
        d.geometry = Polygon({GeoPoint(x, y), GeoPoint(x + w, y), GeoPoint(x + w, y + w),
                              GeoPoint(x, y + w)});
        regions.push_back(std::move(d));
    }
    store.upsert_regions(regions);

    for (std::size_t o = 0; o < objects; ++o) {
        const std::string object = "mo-" + std::to_string(o);
        double x = coord(rng);
        double y = coord(rng);
        std::int64_t t = 0;
        for (std::size_t i = 0; i < points_per_object; ++i) {
            if (frac(rng) < 0.15) {
                // dwell: barely move for a few samples
                x += step(rng) * 0.02;
                y += step(rng) * 0.02;
            } else {
                x += step(rng);
                y += step(rng);
            }
            t += 30 + static_cast<std::int64_t>(frac(rng) * 60.0);
            SpaceTimeEvent e;
            e.id = object + "#" + std::to_string(t);
            e.object_id = object;
            e.spatial = SpatialObject::point(GeoPoint(x, y));
            e.time = TimeInterval(TimeInstant(t), TimeInstant(t));
            store.upsert_event(std::move(e));
        }
    }
    return store;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
    std::cout << name << ": serial " << format_double(serial_ms) << " ms, parallel "
              << format_double(parallel_ms) << " ms, speedup x"
              << format_double(serial_ms / parallel_ms) << (equal ? "" : "  [MISMATCH]") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    std::size_t objects = 32;
    std::size_t points = 3000;
    if (argc > 1) objects = static_cast<std::size_t>(std::stoul(argv[1]));
    if (argc > 2) points = static_cast<std::size_t>(std::stoul(argv[2]));

    std::cout << "store: " << objects << " objects x " << points << " points, "
              << max_threads() << " threads\n";
    TrajectoryStore store = make_store(objects, points);
    const SegmentationParams params(25.0, 240);

    // Segmentation: O(n^2) definitional reference vs parallel per-object batch.
    std::vector<RawTrajectory> raws;
    for (const std::string& object : store.raw_object_ids()) {
        raws.push_back(store.raw_trajectory(object));
    }
    auto t0 = Clock::now();
    std::vector<StructuredTrajectory> expected;
    for (const RawTrajectory& raw : raws) expected.push_back(ref::detect_stops(raw, params));
    const double seg_serial = ms_since(t0);

    t0 = Clock::now();
    run_segmentation(store, params);
    const double seg_parallel = ms_since(t0);

    bool seg_equal = true;
    for (const StructuredTrajectory& st : expected) {
        if (store.structured().at(st.object_id) != st) seg_equal = false;
    }
    report("segmentation", seg_serial, seg_parallel, seg_equal);

    // Window queries: linear scan vs grid index with parallel exact filter.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(0.0, 5000.0);
    std::uniform_int_distribution<std::int64_t> tpick(0, 3000 * 90);
    std::vector<STWindow> windows;
    for (int i = 0; i < 200; ++i) {
        double x0 = coord(rng), x1 = coord(rng);
        double y0 = coord(rng), y1 = coord(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        std::int64_t a = tpick(rng), b = tpick(rng);
        if (a > b) std::swap(a, b);
        windows.emplace_back(x0, x1, y0, y1, TimeInterval(TimeInstant(a), TimeInstant(b)));
    }

    t0 = Clock::now();
    std::size_t scan_total = 0;
    for (const STWindow& w : windows) scan_total += ref::window_scan(store, w).size();
    const double win_serial = ms_since(t0);

    store.build_index(250.0, 7200);
    t0 = Clock::now();
    std::size_t grid_total = 0;
    for (const STWindow& w : windows) grid_total += store.window_query(w).size();
    const double win_parallel = ms_since(t0);
    report("window-query", win_serial, win_parallel, scan_total == grid_total);

    // Query evaluation: naive nested loops vs parallel row filtering.
    const QueryAst ast = parse("raw where intersects(layer \"commercial\") and t < "
                               + std::to_string(3000 * 60));
    t0 = Clock::now();
    const ResultTable naive = ref::evaluate(ast, store);
    const double eval_serial = ms_since(t0);

    t0 = Clock::now();
    const ResultTable fast = evaluate(ast, store);
    const double eval_parallel = ms_since(t0);
    report("layer-join-eval", eval_serial, eval_parallel, naive == fast);

    // The same parallel kernels pinned to one thread, for scaling context.
    set_threads(1);
    t0 = Clock::now();
    run_segmentation(store, params);
    const double seg_one = ms_since(t0);
    store.build_index(250.0, 7200);
    t0 = Clock::now();
    for (const STWindow& w : windows) (void)store.window_query(w);
    const double win_one = ms_since(t0);
    std::cout << "single-thread kernels: segmentation " << format_double(seg_one)
              << " ms, window-query " << format_double(win_one) << " ms\n";
    return 0;
}
