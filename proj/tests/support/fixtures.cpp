#include "fixtures.hpp"

#include "traj/activity.hpp"

namespace traj::fixtures {

namespace {

Polygon box(double x0, double y0, double x1, double y1) {
    return Polygon({GeoPoint(x0, y0), GeoPoint(x1, y0), GeoPoint(x1, y1), GeoPoint(x0, y1)});
}

RegionDef area(const std::string& id, const std::string& name, const std::string& category,
               std::optional<std::string> parent, Polygon poly) {
    RegionDef d;
    d.id = id;
    d.name = name;
    d.category = category;
    d.parent = std::move(parent);
    d.geometry = std::move(poly);
    return d;
}

RegionDef site(const std::string& id, const std::string& name, const std::string& category,
               GeoPoint p) {
    RegionDef d;
    d.id = id;
    d.name = name;
    d.category = category;
    d.geometry = p;
    return d;
}

} // namespace

void add_point(TrajectoryStore& store, const std::string& object, double x, double y,
               std::int64_t t, const std::string& device) {
    SpaceTimeEvent e;
    e.id = object + "#" + std::to_string(t);
    e.object_id = object;
    e.spatial = SpatialObject::point(GeoPoint(x, y));
    e.time = TimeInterval(TimeInstant(t), TimeInstant(t));
    if (!device.empty()) e.device_id = device;
    store.upsert_event(std::move(e));
}

std::vector<RegionDef> hypermarket_regions() {
    return {
        area("hypermarket", "hypermarket", "commercial", std::nullopt, box(400, 0, 500, 100)),
        area("parking", "prepaid parking", "parking", "hypermarket", box(400, 0, 420, 20)),
        area("bank", "bank", "commercial", "hypermarket", box(430, 30, 440, 40)),
        area("supermarket", "supermarket", "commercial", "hypermarket", box(450, 0, 480, 30)),
        area("nonfood", "non food", "department", "supermarket", box(450, 0, 465, 30)),
        area("cosmetics", "cosmetics", "department", "nonfood", box(450, 0, 455, 10)),
        area("department-store", "department store", "commercial", "hypermarket",
             box(400, 60, 430, 90)),
        area("restaurant", "restaurant", "commercial", "hypermarket", box(480, 60, 495, 80)),
    };
}

std::vector<RegionDef> tour_regions() {
    return {
        area("house", "house", "residential", std::nullopt, box(0, 0, 10, 10)),
        area("school", "school", "education", std::nullopt, box(100, 0, 110, 10)),
        area("bus-station", "bus station", "transport", std::nullopt, box(200, 0, 210, 10)),
        area("stadium", "stadium", "sport", std::nullopt, box(300, 0, 310, 10)),
    };
}

void add_tour_trace(TrajectoryStore& store, const std::string& object) {
    // Stops of 600 s in each box, single-point moves between them.
    add_point(store, object, 5, 5, 0, "gps-a");
    add_point(store, object, 6, 5, 300, "gps-a");
    add_point(store, object, 5, 6, 600, "gps-a");
    add_point(store, object, 50, 5, 700);
    add_point(store, object, 105, 5, 800, "gps-a");
    add_point(store, object, 106, 5, 1100, "gps-a");
    add_point(store, object, 105, 6, 1400, "gps-a");
    add_point(store, object, 150, 5, 1500);
    add_point(store, object, 205, 5, 1600, "gps-a");
    add_point(store, object, 206, 5, 1900, "gps-a");
    add_point(store, object, 205, 6, 2200, "gps-a");
    add_point(store, object, 250, 5, 2300);
    add_point(store, object, 305, 5, 2400, "gps-a");
    add_point(store, object, 306, 5, 2700, "gps-a");
    add_point(store, object, 305, 6, 3000, "gps-a");
}

void add_hypermarket_trace(TrajectoryStore& store, const std::string& object) {
    add_point(store, object, 435, 35, 0, "rfid-c");
    add_point(store, object, 436, 35, 400, "rfid-c");
    add_point(store, object, 435, 36, 800, "rfid-c");
    add_point(store, object, 600, 35, 900);
    add_point(store, object, 485, 70, 1000, "pay-d");
    add_point(store, object, 486, 70, 1400, "pay-d");
    add_point(store, object, 485, 71, 1800, "pay-d");
    add_point(store, object, 452, 5, 1900, "cam-b");
    add_point(store, object, 453, 5, 2300, "cam-b");
    add_point(store, object, 452, 6, 2700, "cam-b");
}

TrajectoryStore generated_store() {
    TrajectoryStore store;

    store.upsert_regions({
        area("hypermarket", "hypermarket", "commercial", std::nullopt, box(600, 600, 900, 900)),
        area("parking", "prepaid parking", "parking", "hypermarket", box(600, 600, 660, 660)),
        area("bank", "bank", "commercial", "hypermarket", box(700, 700, 740, 740)),
        area("supermarket", "supermarket", "commercial", "hypermarket", box(760, 600, 860, 700)),
        area("nonfood", "non food", "department", "supermarket", box(760, 600, 810, 700)),
        area("cosmetics", "cosmetics", "department", "nonfood", box(760, 600, 785, 650)),
        area("restaurant", "restaurant", "commercial", "hypermarket", box(800, 800, 880, 880)),
        area("airport", "city airport", "transport", std::nullopt, box(0, 800, 200, 1000)),
        area("downtown", "downtown", "residential", std::nullopt, box(0, 0, 300, 300)),
        area("park", "central park", "leisure", std::nullopt, box(350, 350, 550, 550)),
        site("poi-east", "east kiosk", "poi", GeoPoint(900, 100)),
        site("poi-west", "west kiosk", "poi", GeoPoint(100, 100)),
    });

    store.upsert_device(DeviceProxy{"gps-1", DeviceKind::GPS, 0.95, "handheld gps"});
    store.upsert_device(DeviceProxy{"cam-1", DeviceKind::Camera, 0.8, "street camera"});
    store.upsert_device(DeviceProxy{"cell-1", DeviceKind::CellLocation, 0.6, "cell tower"});
    store.upsert_device(DeviceProxy{"pay-1", DeviceKind::EPayment, 0.99, "card terminal"});

    const char* devices[] = {"gps-1", "cam-1", "cell-1", "pay-1"};
    std::mt19937 rng(421377);
    std::uniform_real_distribution<double> start(50.0, 950.0);
    std::uniform_real_distribution<double> step(-35.0, 35.0);
    std::uniform_real_distribution<double> jitter(-2.0, 2.0);
    std::uniform_int_distribution<std::int64_t> dt(30, 90);
    std::uniform_real_distribution<double> frac(0.0, 1.0);

    for (int o = 0; o < 10; ++o) {
        const std::string object = "mo-" + std::to_string(o);
        double x = start(rng);
        double y = start(rng);
        std::int64_t t = 1000 * o;
        int dwell_left = 0;
        for (int i = 0; i < 200; ++i) {
            if (dwell_left > 0) {
                x += jitter(rng);
                y += jitter(rng);
                --dwell_left;
            } else {
                x = std::clamp(x + step(rng), 0.0, 1000.0);
                y = std::clamp(y + step(rng), 0.0, 1000.0);
                if (frac(rng) < 0.08) dwell_left = 4 + static_cast<int>(frac(rng) * 6.0);
            }
            t += dt(rng);
            const bool with_device = i % 3 == 0;
            add_point(store, object, x, y, t, with_device ? devices[(o + i) % 4] : "");
        }
    }

    // 8 activities over the first four objects, one physical and one virtual
    // each, attached to real events of the object.
    int act = 0;
    for (int o = 0; o < 4; ++o) {
        const std::string object = "mo-" + std::to_string(o);
        const RawTrajectory raw = store.raw_trajectory(object);
        const RawPoint& p0 = raw.points[20];
        const RawPoint& p1 = raw.points[60];
        const RawPoint& p2 = raw.points[120];

        Activity physical;
        physical.id = "act-" + std::to_string(act++);
        physical.object_id = object;
        physical.kind = ActivityKind::Physical;
        physical.label = "drive to work";
        physical.time = TimeInterval(p0.t, p1.t);
        physical.location = p0.p;
        store.upsert_activity(physical);
        store.attach_activity(object + "#" + std::to_string(p0.t.t), physical.id,
                              AttachRole::BeginsAt);
        store.attach_activity(object + "#" + std::to_string(p1.t.t), physical.id,
                              AttachRole::EndsAt);

        Activity virt;
        virt.id = "act-" + std::to_string(act++);
        virt.object_id = object;
        virt.kind = ActivityKind::Virtual;
        virt.label = "send email";
        virt.time = TimeInterval(p2.t, TimeInstant(p2.t.t + 40));
        store.upsert_activity(virt);
        store.attach_activity(object + "#" + std::to_string(p2.t.t), virt.id,
                              AttachRole::BeginsAt);
        store.attach_activity(object + "#" + std::to_string(p2.t.t), virt.id,
                              AttachRole::EndsAt);
    }

    return store;
}

SegmentationParams generated_params() {
    return SegmentationParams(30.0, 150);
}

RawTrajectory random_trace(std::mt19937& rng, const std::string& object, std::size_t max_points) {
    std::uniform_int_distribution<std::size_t> num(1, max_points);
    std::uniform_real_distribution<double> start(0.0, 500.0);
    std::uniform_real_distribution<double> step(-20.0, 20.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> dt(1, 120);

    const std::size_t n = num(rng);
    std::vector<RawPoint> points;
    double x = start(rng);
    double y = start(rng);
    std::int64_t t = 0;
    int dwell_left = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dwell_left > 0) {
            x += frac(rng) - 0.5;
            y += frac(rng) - 0.5;
            --dwell_left;
        } else {
            x += step(rng);
            y += step(rng);
            if (frac(rng) < 0.2) dwell_left = static_cast<int>(frac(rng) * 8.0);
        }
        t += dt(rng);
        points.push_back(RawPoint{GeoPoint(x, y), TimeInstant(t), std::nullopt});
    }
    return validate_raw(object, std::move(points));
}

} // namespace traj::fixtures
