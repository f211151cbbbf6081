#include "fixtures.hpp"
#include "query_gen.hpp"
#include "traj/ingest.hpp"
#include "traj/pipeline.hpp"
#include "traj/query.hpp"
#include "traj/reference.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

// Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
// criterion fails. Criterion 10 drives the actual CLI binary against the
// committed golden transcripts.

namespace {

using namespace traj;
using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int number, const std::string& name, const std::function<void()>& body) {
    const auto start = Clock::now();
    try {
        body();
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        std::printf("[PASS] %2d. %s (%.0f ms)\n", number, name.c_str(), ms);
    } catch (const std::exception& e) {
        ++failures;
        std::printf("[FAIL] %2d. %s: %s\n", number, name.c_str(), e.what());
    }
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

void require_under(double ms, double limit_ms, const std::string& what) {
    if (ms >= limit_ms) {
        throw std::runtime_error(what + " took " + std::to_string(ms) + " ms (limit "
                                 + std::to_string(limit_ms) + " ms)");
    }
}

TrajectoryStore annotated_generated_store() {
    TrajectoryStore store = fixtures::generated_store();
    run_segmentation(store, fixtures::generated_params());
    run_annotation(store);
    return store;
}

// --- criterion bodies -------------------------------------------------------

void six_query_coverage() {
    TrajectoryStore store = annotated_generated_store();
    store.build_index(100, 3600);
    const std::vector<std::string> queries = {
        // one query per class of the unified model
        R"(raw where object = "mo-3" and intersects(layer "commercial"))",
        R"(stops where duration > 300s)",
        R"(semantic where category = "commercial" and duration > 120s)",
        R"(roi-visits where category = "commercial" group by region select count)",
        R"(stpath where object = "mo-1")",
        R"(devices where region like "%airport%")",
    };
    const auto start = Clock::now();
    for (const std::string& q : queries) {
        const QueryAst ast = parse(q);
        const ResultTable fast = evaluate(ast, store);
        const ResultTable naive = ref::evaluate(ast, store);
        require(fast == naive, "engine/naive mismatch for: " + q);
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    require_under(ms, 1000.0, "six-query evaluation");
}

void tour_scenario() {
    TrajectoryStore store;
    store.upsert_regions(fixtures::tour_regions());
    fixtures::add_tour_trace(store);
    run_segmentation(store, SegmentationParams(15, 600));
    run_annotation(store);

    const SemanticTrajectory& sem = store.semantic().at("person-1");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < sem.base.episodes.size(); ++k) {
        if (sem.base.episodes[k].kind != EpisodeKind::Stop) continue;
        require(sem.annotations[k].has_value(), "tour stop lacks an annotation");
        labels.push_back(sem.annotations[k]->place_name);
    }
    const std::vector<std::string> expected = {"house", "school", "bus station", "stadium"};
    require(labels == expected, "tour labels out of order");

    // The same order through the query surface, chronologically.
    const ResultTable t =
        evaluate(parse(R"(semantic where object = "person-1" select t_begin, place, role)"), store);
    require(t.rows.size() == 4, "expected 4 semantic rows");
    for (std::size_t i = 0; i < 4; ++i) {
        require(std::get<std::string>(t.rows[i][1]) == expected[i],
                "query row order mismatch at " + std::to_string(i));
    }
}

void composite_rollup() {
    TrajectoryStore store;
    store.upsert_regions(fixtures::hypermarket_regions());
    fixtures::add_point(store, "mo", 435, 35, 0);
    fixtures::add_point(store, "mo", 436, 35, 400);
    fixtures::add_point(store, "mo", 435, 36, 800);
    run_segmentation(store, SegmentationParams(15, 600));
    run_annotation(store);

    const std::vector<Visit> vs = visits(store.semantic().at("mo"), store.forest());
    require(vs.size() == 2, "expected exactly bank + hypermarket visits");
    require(vs[0].region_id == "bank" && !vs[0].via_descendant, "direct bank visit missing");
    require(vs[1].region_id == "hypermarket" && vs[1].via_descendant,
            "hypermarket roll-up missing");

    // Ancestor-chain oracle for the grouped counts.
    const ResultTable t = evaluate(parse(R"(roi-visits group by region select count)"), store);
    std::map<std::string, std::int64_t> expected;
    for (const auto& [object, sem] : store.semantic()) {
        for (std::size_t k = 0; k < sem.base.episodes.size(); ++k) {
            if (sem.base.episodes[k].kind != EpisodeKind::Stop || !sem.annotations[k]) continue;
            std::optional<std::string> cur = sem.annotations[k]->region_id;
            while (cur) {
                ++expected[store.forest().region(*cur).name];
                cur = store.forest().region(*cur).parent;
            }
        }
    }
    require(t.rows.size() == expected.size(), "grouped row count mismatch");
    for (const auto& row : t.rows) {
        require(expected.at(std::get<std::string>(row[0])) == std::get<std::int64_t>(row[1]),
                "count mismatch for " + std::get<std::string>(row[0]));
    }
}

void segmentation_oracle() {
    const auto start = Clock::now();
    std::mt19937 rng(987654);
    std::uniform_real_distribution<double> eps_pick(0.5, 80.0);
    std::uniform_int_distribution<std::int64_t> tau_pick(1, 500);
    for (int round = 0; round < 100; ++round) {
        const RawTrajectory raw = fixtures::random_trace(rng, "mo-" + std::to_string(round), 100);
        const SegmentationParams params(eps_pick(rng), tau_pick(rng));
        const StructuredTrajectory got = detect_stops(raw, params);
        const StructuredTrajectory want = ref::detect_stops(raw, params);
        require(got == want, "segmentation mismatch in round " + std::to_string(round));
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    require_under(ms, 5000.0, "segmentation oracle battery");
}

void index_scan_equivalence() {
    TrajectoryStore store = annotated_generated_store();
    store.build_index(100, 1800);
    std::mt19937 rng(13579);
    std::uniform_real_distribution<double> coord(-100.0, 1100.0);
    std::uniform_int_distribution<std::int64_t> t(0, 40000);

    const auto start = Clock::now();
    for (int i = 0; i < 200; ++i) {
        double x0 = coord(rng), x1 = coord(rng);
        double y0 = coord(rng), y1 = coord(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        std::int64_t t0 = t(rng), t1 = t(rng);
        if (t0 > t1) std::swap(t0, t1);
        const STWindow w(x0, x1, y0, y1, TimeInterval(TimeInstant(t0), TimeInstant(t1)));
        require(store.window_query(w) == ref::window_scan(store, w),
                "window/scan mismatch in round " + std::to_string(i));
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    require_under(ms, 2000.0, "window query battery");
}

void voronoi_membership() {
    std::mt19937 rng(24680);
    std::uniform_real_distribution<double> span(-1000.0, 1000.0);
    std::vector<std::pair<std::string, GeoPoint>> sites;
    for (int i = 0; i < 20; ++i) {
        sites.emplace_back("site-" + std::to_string(i), GeoPoint(span(rng), span(rng)));
    }
    for (int i = 0; i < 1000; ++i) {
        const GeoPoint p(span(rng), span(rng));
        require(voronoi_member(p, sites) == ref::nearest_site(p, sites),
                "voronoi mismatch at query " + std::to_string(i));
    }
    // Constructed equidistant ties break by smallest id.
    const std::vector<std::pair<std::string, GeoPoint>> cross = {
        {"north", GeoPoint(0, 5)}, {"east", GeoPoint(5, 0)},
        {"south", GeoPoint(0, -5)}, {"west", GeoPoint(-5, 0)},
    };
    require(voronoi_member(GeoPoint(0, 0), cross) == "east", "4-way tie must pick 'east'");
    require(ref::nearest_site(GeoPoint(0, 0), cross) == "east", "oracle tie disagrees");
    const std::vector<std::pair<std::string, GeoPoint>> pair = {{"b", GeoPoint(0, 0)},
                                                                {"a", GeoPoint(10, 0)}};
    require(voronoi_member(GeoPoint(5, 0), pair) == "a", "midpoint tie must pick 'a'");
}

void parser_round_trip() {
    std::mt19937 rng(112358);
    for (int i = 0; i < 100; ++i) {
        const QueryAst ast = fixtures::random_ast(rng);
        require(parse(pretty_print(ast)) == ast,
                "parse(pretty_print(ast)) != ast for: " + pretty_print(ast));
    }
    for (int i = 0; i < 100; ++i) {
        const std::string canonical = pretty_print(fixtures::random_ast(rng));
        require(pretty_print(parse(canonical)) == canonical,
                "pretty_print(parse(s)) != s for: " + canonical);
    }
}

void duration_query_shape() {
    TrajectoryStore store;
    fixtures::add_point(store, "mo", 0, 0, 0);
    fixtures::add_point(store, "mo", 1, 0, 200);
    fixtures::add_point(store, "mo", 0, 1, 400);
    fixtures::add_point(store, "mo", 500, 0, 500);
    fixtures::add_point(store, "mo", 600, 0, 600);
    fixtures::add_point(store, "mo", 601, 0, 900);
    fixtures::add_point(store, "mo", 600, 1, 1500);
    run_segmentation(store, SegmentationParams(10, 300));

    const ResultTable all = evaluate(parse("stops"), store);
    require(all.rows.size() == 2, "fixture must have exactly two stops");
    std::vector<std::int64_t> durations;
    for (const auto& row : all.rows) durations.push_back(std::get<std::int64_t>(row[3]));
    require((durations == std::vector<std::int64_t>{400, 900})
                || (durations == std::vector<std::int64_t>{900, 400}),
            "fixture stops must last 400 s and 900 s");

    const ResultTable t = evaluate(parse("stops where duration > 600s"), store);
    require(t.rows.size() == 1, "exactly one stop must survive the filter");
    require(std::get<std::int64_t>(t.rows[0][3]) == 900, "the 900 s stop must survive");
}

void persistence_round_trip() {
    TrajectoryStore store = annotated_generated_store();
    store.record_observation(
        Observation{"o1", store.events().begin()->first, "fuel_level", 42.0, "L", TimeInstant(5)});
    const auto path = std::filesystem::temp_directory_path() / "traj_acceptance.snap";
    store.save_snapshot(path.string());
    const TrajectoryStore back = TrajectoryStore::load_snapshot(path.string());
    require(back.canonical_export() == store.canonical_export(),
            "canonical export differs after reload");

    std::vector<std::uint8_t> bytes = store.to_snapshot_bytes();
    bytes.resize(bytes.size() * 2 / 3);
    bool checksum_failed = false;
    try {
        TrajectoryStore::from_snapshot_bytes(bytes);
    } catch (const SnapshotChecksumError&) {
        checksum_failed = true;
    }
    require(checksum_failed, "truncated snapshot must fail with a checksum error");
    std::filesystem::remove(path);
}

// --- criterion 10: CLI golden transcripts -----------------------------------

std::string run_command(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    const int rc = pclose(pipe);
    if (rc != 0) {
        throw std::runtime_error("command exited with " + std::to_string(rc) + ": " + cmd
                                 + "\noutput:\n" + out);
    }
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cli_golden() {
    const std::filesystem::path golden_dir = GOLDEN_DIR;
    const std::filesystem::path work =
        std::filesystem::temp_directory_path() / "traj_golden_work";
    std::filesystem::remove_all(work);
    std::filesystem::create_directories(work);
    for (const auto& entry : std::filesystem::directory_iterator(golden_dir / "input")) {
        std::filesystem::copy_file(entry.path(), work / entry.path().filename());
    }

    const std::string pipeline = read_file(golden_dir / "pipeline_args.txt");
    const std::string reload = read_file(golden_dir / "reload_args.txt");
    const std::string base = "cd " + work.string() + " && " + TRAJQ_BINARY + " ";

    const std::string out1 = run_command(base + pipeline);
    require(out1 == read_file(golden_dir / "expected_pipeline.txt"),
            "pipeline output differs from the committed golden transcript");

    const std::string out2 = run_command(base + reload);
    require(out2 == read_file(golden_dir / "expected_reload.txt"),
            "reload output differs from the committed golden transcript");

    // Usage errors exit with status 1.
    const std::string bad = "cd " + work.string() + " && " + TRAJQ_BINARY
        + " segment --tau 60 >/dev/null 2>&1; echo -n $?";
    require(run_command(bad) == "1", "segment without --eps must exit 1");
    std::filesystem::remove_all(work);
}

} // namespace

int main() {
    criterion(1, "six-query coverage equals the naive evaluator", six_query_coverage);
    criterion(2, "house/school/bus-station/stadium scenario", tour_scenario);
    criterion(3, "composite region roll-up (bank -> hypermarket)", composite_rollup);
    criterion(4, "segmentation equals the quadratic anchor oracle", segmentation_oracle);
    criterion(5, "window query equals the linear scan", index_scan_equivalence);
    criterion(6, "voronoi membership equals argmin with id ties", voronoi_membership);
    criterion(7, "parser round-trips", parser_round_trip);
    criterion(8, "duration filter keeps exactly the 900 s stop", duration_query_shape);
    criterion(9, "snapshot round-trip and checksum failure", persistence_round_trip);
    criterion(10, "CLI pipeline reproduces the golden transcripts", cli_golden);

    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
