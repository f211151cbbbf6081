#include "traj/query.hpp"

#include "fixtures.hpp"
#include "traj/pipeline.hpp"
#include "traj/reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace traj;

namespace {

TrajectoryStore scenario_store() {
    TrajectoryStore store;
    store.upsert_device(DeviceProxy{"gps-a", DeviceKind::GPS, 0.95, "handheld gps"});
    store.upsert_device(DeviceProxy{"cam-b", DeviceKind::Camera, 0.8, "street camera"});
    store.upsert_device(DeviceProxy{"rfid-c", DeviceKind::RFID, 0.7, "tag reader"});
    store.upsert_device(DeviceProxy{"pay-d", DeviceKind::EPayment, 0.99, "card terminal"});
    std::vector<RegionDef> regions = fixtures::tour_regions();
    for (RegionDef d : fixtures::hypermarket_regions()) regions.push_back(d);
    store.upsert_regions(regions);
    fixtures::add_tour_trace(store, "person-1");
    fixtures::add_hypermarket_trace(store, "person-2");
    run_segmentation(store, SegmentationParams(15, 600));
    run_annotation(store);
    return store;
}

ResultTable both(const std::string& text, const TrajectoryStore& store) {
    const QueryAst ast = parse(text);
    const ResultTable fast = evaluate(ast, store);
    const ResultTable naive = ref::evaluate(ast, store);
    CHECK(fast == naive);
    return fast;
}

} // namespace

TEST_CASE("duration filter keeps only the long stop") {
    TrajectoryStore store;
    // One 400 s stop, one 900 s stop, joined by a fast move.
    fixtures::add_point(store, "mo", 0, 0, 0);
    fixtures::add_point(store, "mo", 1, 0, 200);
    fixtures::add_point(store, "mo", 0, 1, 400);
    fixtures::add_point(store, "mo", 500, 0, 500);
    fixtures::add_point(store, "mo", 600, 0, 600);
    fixtures::add_point(store, "mo", 601, 0, 900);
    fixtures::add_point(store, "mo", 600, 1, 1500);
    run_segmentation(store, SegmentationParams(10, 300));

    const ResultTable all = both("stops", store);
    REQUIRE(all.rows.size() == 2);

    const ResultTable t = both("stops where duration > 600s", store);
    REQUIRE(t.rows.size() == 1);
    CHECK(std::get<std::int64_t>(t.rows[0][3]) == 900);
    CHECK(std::get<std::int64_t>(t.rows[0][1]) == 600);  // t_begin
    CHECK(std::get<std::int64_t>(t.rows[0][2]) == 1500); // t_end
}

TEST_CASE("roi-visits group by region counts with roll-up") {
    TrajectoryStore store = scenario_store();
    const ResultTable t =
        both(R"(roi-visits where category = "commercial" group by region select count)", store);
    REQUIRE(t.columns == std::vector<std::string>{"region", "count"});
    // person-2 stops: bank, restaurant, cosmetics. Commercial regions touched:
    // bank (direct), restaurant (direct), supermarket (via cosmetics chain),
    // hypermarket (via all three stops).
    REQUIRE(t.rows.size() == 4);
    auto row = [&](const std::string& region) -> std::int64_t {
        for (const auto& r : t.rows) {
            if (std::get<std::string>(r[0]) == region) return std::get<std::int64_t>(r[1]);
        }
        return -1;
    };
    CHECK(row("bank") == 1);
    CHECK(row("restaurant") == 1);
    CHECK(row("supermarket") == 1);
    CHECK(row("hypermarket") == 3);
}

TEST_CASE("three trajectories visiting R1 twice and R2 once") {
    TrajectoryStore store;
    RegionDef r1;
    r1.id = "R1";
    r1.name = "R1";
    r1.category = "commercial";
    r1.geometry = Polygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
    RegionDef r2 = r1;
    r2.id = "R2";
    r2.name = "R2";
    r2.geometry = Polygon({{100, 0}, {110, 0}, {110, 10}, {100, 10}});
    store.upsert_regions({r1, r2});

    auto dwell = [&](const std::string& object, double x, double y) {
        fixtures::add_point(store, object, x, y, 0);
        fixtures::add_point(store, object, x + 1, y, 400);
        fixtures::add_point(store, object, x, y + 1, 800);
    };
    dwell("a", 5, 5);   // R1
    dwell("b", 5, 5);   // R1
    dwell("c", 105, 5); // R2
    run_segmentation(store, SegmentationParams(15, 600));
    run_annotation(store);

    const ResultTable t =
        both(R"(roi-visits where category = "commercial" group by region select count)", store);
    REQUIRE(t.rows.size() == 2);
    CHECK(std::get<std::string>(t.rows[0][0]) == "R1");
    CHECK(std::get<std::int64_t>(t.rows[0][1]) == 2);
    CHECK(std::get<std::string>(t.rows[1][0]) == "R2");
    CHECK(std::get<std::int64_t>(t.rows[1][1]) == 1);
}

TEST_CASE("empty store yields empty tables with the right columns") {
    TrajectoryStore store;
    CHECK(both("raw", store).columns == std::vector<std::string>{"object", "t", "x", "y"});
    CHECK(both("stops", store).columns
          == std::vector<std::string>{"object", "t_begin", "t_end", "duration", "x", "y"});
    CHECK(both("moves", store).rows.empty());
    CHECK(both("semantic", store).columns
          == std::vector<std::string>{"object", "t_begin", "t_end", "duration", "x", "y", "place",
                                      "category", "role"});
    CHECK(both("roi-visits", store).columns
          == std::vector<std::string>{"object", "region", "category", "t_begin", "t_end",
                                      "via_descendant"});
    CHECK(both("stpath", store).columns
          == std::vector<std::string>{"object", "t_begin", "t_end", "activity_kind", "label", "x",
                                      "y"});
    CHECK(both("devices", store).columns
          == std::vector<std::string>{"device", "kind", "reliability", "t", "region"});
    CHECK(both(R"(raw where intersects(layer "road"))", store).columns
          == std::vector<std::string>{"object", "t", "x", "y", "place"});
}

TEST_CASE("devices query resolves regions and reliability") {
    TrajectoryStore store = scenario_store();
    const ResultTable t = both(R"(devices where region like "%bank%")", store);
    REQUIRE(t.rows.size() == 3); // three fixes inside the bank
    for (const auto& row : t.rows) {
        CHECK(std::get<std::string>(row[0]) == "rfid-c");
        CHECK(std::get<std::string>(row[1]) == "RFID");
        CHECK(std::get<double>(row[2]) == 0.7);
        CHECK(std::get<std::string>(row[4]) == "bank");
    }

    const ResultTable gps = both(R"(devices where kind = "GPS" and region = "stadium")", store);
    REQUIRE(gps.rows.size() == 3);
    for (const auto& row : gps.rows) CHECK(std::get<double>(row[2]) == 0.95);
}

TEST_CASE("raw layer join filters by composite membership and adds place") {
    TrajectoryStore store = scenario_store();
    const ResultTable t =
        both(R"(raw where object = "person-2" and intersects(layer "commercial"))", store);
    // 3 fixes in the bank, 3 in the restaurant, 3 in cosmetics (member of the
    // commercial supermarket via composition); the single move fix is outside.
    REQUIRE(t.rows.size() == 9);
    CHECK(t.columns.back() == "place");
    int bank = 0, restaurant = 0, supermarket = 0;
    for (const auto& row : t.rows) {
        const std::string place = std::get<std::string>(row.back());
        if (place == "bank") ++bank;
        if (place == "restaurant") ++restaurant;
        if (place == "supermarket") ++supermarket;
    }
    CHECK(bank == 3);
    CHECK(restaurant == 3);
    CHECK(supermarket == 3); // deepest commercial region containing cosmetics fixes
}

TEST_CASE("semantic place and role rows") {
    TrajectoryStore store = scenario_store();
    const ResultTable t =
        both(R"(semantic where object = "person-1" select t_begin, place, role)", store);
    REQUIRE(t.rows.size() == 4);
    CHECK(std::get<std::string>(t.rows[0][1]) == "house");
    CHECK(std::get<std::string>(t.rows[0][2]) == "begin");
    CHECK(std::get<std::string>(t.rows[1][1]) == "school");
    CHECK(std::get<std::string>(t.rows[1][2]) == "stop");
    CHECK(std::get<std::string>(t.rows[2][1]) == "bus station");
    CHECK(std::get<std::string>(t.rows[3][1]) == "stadium");
    CHECK(std::get<std::string>(t.rows[3][2]) == "end");
}

TEST_CASE("stpath pairs events with activities") {
    TrajectoryStore store = scenario_store();
    Activity walk;
    walk.id = "walk-1";
    walk.object_id = "person-1";
    walk.kind = ActivityKind::Physical;
    walk.label = "walk to school";
    walk.time = TimeInterval(TimeInstant(650), TimeInstant(780));
    walk.location = GeoPoint(30, 5);
    store.upsert_activity(walk);
    store.attach_activity("person-1#600", "walk-1", AttachRole::BeginsAt);
    store.attach_activity("person-1#700", "walk-1", AttachRole::EndsAt);

    Activity mail;
    mail.id = "mail-1";
    mail.object_id = "person-1";
    mail.kind = ActivityKind::Virtual;
    mail.label = "send email";
    mail.time = TimeInterval(TimeInstant(1650), TimeInstant(1660));
    store.upsert_activity(mail);
    store.attach_activity("person-1#1600", "mail-1", AttachRole::BeginsAt);
    store.attach_activity("person-1#1600", "mail-1", AttachRole::EndsAt);

    const ResultTable t = both(R"(stpath where object = "person-1")", store);
    REQUIRE(t.rows.size() == 3); // walk pairs with two events, mail with one
    int physical = 0, virt = 0;
    for (const auto& row : t.rows) {
        const std::string kind = std::get<std::string>(row[3]);
        if (kind == "Physical") {
            ++physical;
            CHECK(std::get<double>(row[5]) == 30.0); // activity location
        }
        if (kind == "Virtual") {
            ++virt;
            CHECK(std::get<double>(row[5]) == 205.0); // event location fallback
        }
    }
    CHECK(physical == 2);
    CHECK(virt == 1);
}

TEST_CASE("predicate order never changes results") {
    TrajectoryStore store = scenario_store();
    const std::vector<std::string> preds = {
        R"(duration >= 600s)",
        R"(object != "person-9")",
        R"(intersects(layer "commercial"))",
        R"(t_begin < 2500)",
    };
    std::vector<int> idx = {0, 1, 2, 3};
    ResultTable first;
    bool have_first = false;
    std::sort(idx.begin(), idx.end());
    do {
        std::string q = "stops where " + preds[idx[0]];
        for (std::size_t i = 1; i < idx.size(); ++i) q += " and " + preds[idx[i]];
        const ResultTable t = evaluate(parse(q), store);
        if (!have_first) {
            first = t;
            have_first = true;
            CHECK(!t.rows.empty());
        } else {
            CHECK(t == first);
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
}

TEST_CASE("adding an always-true predicate changes nothing") {
    TrajectoryStore store = scenario_store();
    const ResultTable base = evaluate(parse(R"(semantic where role != "move")"), store);
    const ResultTable more = evaluate(
        parse(R"(semantic where role != "move" and duration >= 0s and object like "%")"), store);
    CHECK(base == more);
}

TEST_CASE("within and window predicates") {
    TrajectoryStore store = scenario_store();
    const ResultTable inside = both(R"(raw where within(region "hypermarket"))", store);
    REQUIRE(inside.rows.size() == 9); // all person-2 fixes except the move point

    const ResultTable windowed =
        both(R"(raw where window(0, 20, 0, 20, 0, 700) and object = "person-1")", store);
    REQUIRE(windowed.rows.size() == 3); // the house dwell
}

TEST_CASE("missing presentations produce actionable errors") {
    TrajectoryStore store;
    fixtures::add_point(store, "mo", 0, 0, 0);
    fixtures::add_point(store, "mo", 1, 0, 10);

    try {
        evaluate(parse("stops"), store);
        FAIL("expected a missing-presentation error");
    } catch (const QueryError& e) {
        CHECK(std::string(e.what()).find("segment") != std::string::npos);
    }
    try {
        evaluate(parse("semantic"), store);
        FAIL("expected a missing-presentation error");
    } catch (const QueryError& e) {
        CHECK(std::string(e.what()).find("annotate") != std::string::npos);
    }

    run_segmentation(store, SegmentationParams(10, 5));
    try {
        evaluate(parse("roi-visits"), store);
        FAIL("expected a missing-presentation error");
    } catch (const QueryError& e) {
        CHECK(std::string(e.what()).find("annotate") != std::string::npos);
    }
}

TEST_CASE("evaluate equals the naive evaluator on the generated fixture") {
    TrajectoryStore store = fixtures::generated_store();
    run_segmentation(store, fixtures::generated_params());
    run_annotation(store);
    store.build_index(100, 3600);

    const std::vector<std::string> queries = {
        R"(raw where object = "mo-3" and intersects(layer "commercial"))",
        R"(stops where duration > 300s)",
        R"(moves where t_begin >= 2000 and t_end <= 14000)",
        R"(semantic where category = "commercial" and duration > 120s)",
        R"(roi-visits group by region select count)",
        R"(roi-visits where via_descendant = "false" group by category select count)",
        R"(stpath where object = "mo-1")",
        R"(stpath where activity_kind = "Virtual")",
        R"(devices where region like "%airport%")",
        R"(devices where kind = "GPS" and reliability >= 0.9)",
        R"(raw where window(100, 400, 100, 400, 0, 9000))",
        R"(semantic select place, category, role)",
        R"(stops where intersects(layer "leisure") select object, place)",
        R"(raw select count)",
        R"(moves group by object select count)",
    };
    for (const std::string& q : queries) {
        CAPTURE(q);
        both(q, store);
    }
}

TEST_CASE("results are deterministic across repeated evaluation") {
    TrajectoryStore store = scenario_store();
    const QueryAst ast = parse(R"(roi-visits group by region select count)");
    const ResultTable a = evaluate(ast, store);
    const ResultTable b = evaluate(ast, store);
    CHECK(a == b);
    CHECK(a.to_tsv() == b.to_tsv());
}

TEST_CASE("tsv output shape") {
    TrajectoryStore store = scenario_store();
    const std::string tsv = evaluate(parse(R"(stops where duration > 300s)"), store).to_tsv();
    CHECK(tsv.rfind("object\tt_begin\tt_end\tduration\tx\ty\n", 0) == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') >= 2);
}
