#include "traj/ingest.hpp"
#include "traj/text.hpp"

#include <charconv>
#include <fstream>
#include <map>

#include <json.hpp>

namespace traj {

const char* to_string(IngestKind kind) {
    switch (kind) {
    case IngestKind::Points: return "points";
    case IngestKind::Regions: return "regions";
    case IngestKind::Devices: return "devices";
    case IngestKind::Activities: return "activities";
    case IngestKind::Observations: return "observations";
    }
    return "?";
}

std::string IngestReport::summary() const {
    std::string out = "loaded " + file + ": accepted=" + std::to_string(records_accepted)
        + " rejected=" + std::to_string(records_rejected);
    for (const auto& [line, msg] : first_errors) {
        out += "\n  line " + std::to_string(line) + ": " + msg;
    }
    return out;
}

namespace {

std::int64_t parse_i64(const std::string& s, const char* what) {
    const std::string t = trim(s);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(std::string(what) + " is not an integer: '" + s + "'");
    }
    return v;
}

double parse_f64(const std::string& s, const char* what) {
    const std::string t = trim(s);
    if (t.empty()) throw ValidationError(std::string(what) + " is empty");
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &consumed);
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + " is not a number: '" + s + "'");
    }
    if (consumed != t.size()) {
        throw ValidationError(std::string(what) + " is not a number: '" + s + "'");
    }
    return v;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
    if (trim(got) != want) {
        throw ValidationError("malformed header in " + path + ": expected '" + want + "', got '"
                              + trim(got) + "'");
    }
}

void note_error(IngestReport& report, std::size_t line, const std::string& msg) {
    ++report.records_rejected;
    if (report.first_errors.size() < 10) report.first_errors.emplace_back(line, msg);
}

std::vector<std::string> fields_or_throw(const std::string& line, std::size_t n,
                                         const char* format) {
    std::vector<std::string> fs = split(line, ',');
    if (fs.size() != n) {
        throw ValidationError("expected " + std::to_string(n) + " comma-separated fields ("
                              + format + "), got " + std::to_string(fs.size()));
    }
    for (std::string& f : fs) f = trim(f);
    return fs;
}

void load_points(std::ifstream& in, const std::string& path, TrajectoryStore& store,
                 IngestReport& report) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty points file: " + path);
    expect_header(line, "object_id,t,x,y,device_id", path);

    std::map<std::string, std::int64_t> last_t; // per object, within this file
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const auto fs = fields_or_throw(line, 5, "object_id,t,x,y,device_id");
            const std::string& object = fs[0];
            if (object.empty()) throw ValidationError("object_id is empty");
            if (object.find('#') != std::string::npos) {
                throw ValidationError("object_id must not contain '#': '" + object + "'");
            }
            const std::int64_t t = parse_i64(fs[1], "t");
            const double x = parse_f64(fs[2], "x");
            const double y = parse_f64(fs[3], "y");

            auto it = last_t.find(object);
            if (it != last_t.end() && t <= it->second) {
                throw ValidationError("timestamp " + std::to_string(t) + " for object " + object
                                      + " does not increase (previous " + std::to_string(it->second)
                                      + ")");
            }

            SpaceTimeEvent e;
            e.id = object + "#" + std::to_string(t);
            e.object_id = object;
            e.spatial = SpatialObject::point(GeoPoint(x, y));
            e.time = TimeInterval(TimeInstant(t), TimeInstant(t));
            if (!fs[4].empty()) e.device_id = fs[4];
            store.upsert_event(std::move(e));
            last_t[object] = t;
            ++report.records_accepted;
        } catch (const Error& err) {
            note_error(report, lineno, err.what());
        }
    }
}

RegionDef region_from_json(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line);
    if (!j.is_object()) throw ValidationError("region record is not a JSON object");
    RegionDef d;
    const auto& jid = j.at("id");
    d.id = jid.is_string() ? jid.get<std::string>() : jid.dump();
    d.name = j.at("name").get<std::string>();
    d.category = j.value("category", std::string());
    if (j.contains("parent") && !j.at("parent").is_null()) {
        const auto& jp = j.at("parent");
        d.parent = jp.is_string() ? jp.get<std::string>() : jp.dump();
    }
    const auto& g = j.at("geometry");
    const std::string type = g.at("type").get<std::string>();
    if (type == "polygon") {
        std::vector<GeoPoint> ring;
        for (const auto& v : g.at("ring")) {
            ring.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        }
        d.geometry = Polygon(std::move(ring));
    } else if (type == "site") {
        const auto& p = g.at("point");
        d.geometry = GeoPoint(p.at(0).get<double>(), p.at(1).get<double>());
    } else {
        throw ValidationError("region geometry type must be polygon or site, got '" + type + "'");
    }
    return d;
}

void load_regions(std::ifstream& in, const std::string& path, TrajectoryStore& store,
                  IngestReport& report) {
    (void)path;
    std::vector<RegionDef> defs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            defs.push_back(region_from_json(line));
            ++report.records_accepted;
        } catch (const nlohmann::json::exception& err) {
            note_error(report, lineno, std::string("bad JSON: ") + err.what());
        } catch (const Error& err) {
            note_error(report, lineno, err.what());
        }
    }
    // Structural problems (cycles, dangling parents, duplicate ids) abort the
    // whole load; the store keeps its previous forest.
    store.upsert_regions(defs);
}

void load_devices(std::ifstream& in, const std::string& path, TrajectoryStore& store,
                  IngestReport& report) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty devices file: " + path);
    expect_header(line, "device_id,kind,reliability,description", path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const auto fs = fields_or_throw(line, 4, "device_id,kind,reliability,description");
            DeviceProxy d;
            d.device_id = fs[0];
            d.kind = device_kind_from_string(fs[1]);
            d.reliability = parse_f64(fs[2], "reliability");
            d.description = fs[3];
            store.upsert_device(d);
            ++report.records_accepted;
        } catch (const Error& err) {
            note_error(report, lineno, err.what());
        }
    }
}

void auto_attach(TrajectoryStore& store, const Activity& a) {
    std::vector<const SpaceTimeEvent*> evs;
    for (const auto& [id, e] : store.events()) {
        if (e.object_id == a.object_id) evs.push_back(&e);
    }
    if (evs.empty()) return;
    std::sort(evs.begin(), evs.end(), [](const SpaceTimeEvent* x, const SpaceTimeEvent* y) {
        return compare_events(*x, *y) < 0;
    });
    auto event_at = [&](const TimeInstant& t) -> const SpaceTimeEvent* {
        const SpaceTimeEvent* best = evs.front();
        for (const SpaceTimeEvent* e : evs) {
            if (e->time.begin <= t) best = e;
        }
        return best;
    };
    store.attach_activity(event_at(a.time.begin)->id, a.id, AttachRole::BeginsAt);
    store.attach_activity(event_at(a.time.end)->id, a.id, AttachRole::EndsAt);
}

void load_activities(std::ifstream& in, const std::string& path, TrajectoryStore& store,
                     IngestReport& report) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty activities file: " + path);
    expect_header(line, "id,object_id,kind,label,t_begin,t_end,x,y", path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const auto fs = fields_or_throw(line, 8, "id,object_id,kind,label,t_begin,t_end,x,y");
            Activity a;
            a.id = fs[0];
            a.object_id = fs[1];
            a.kind = activity_kind_from_string(fs[2]);
            a.label = fs[3];
            a.time = TimeInterval(TimeInstant(parse_i64(fs[4], "t_begin")),
                                  TimeInstant(parse_i64(fs[5], "t_end")));
            const bool has_x = !fs[6].empty();
            const bool has_y = !fs[7].empty();
            if (has_x != has_y) throw ValidationError("x and y must both be set or both empty");
            if (has_x) a.location = GeoPoint(parse_f64(fs[6], "x"), parse_f64(fs[7], "y"));
            store.upsert_activity(a);
            auto_attach(store, a);
            ++report.records_accepted;
        } catch (const Error& err) {
            note_error(report, lineno, err.what());
        }
    }
}

void load_observations(std::ifstream& in, const std::string& path, TrajectoryStore& store,
                       IngestReport& report) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty observations file: " + path);
    expect_header(line, "id,event_id,feature,value,unit,t", path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const auto fs = fields_or_throw(line, 6, "id,event_id,feature,value,unit,t");
            Observation o;
            o.id = fs[0];
            o.event_id = fs[1];
            o.feature = fs[2];
            o.value = parse_f64(fs[3], "value");
            o.unit = fs[4];
            o.time = TimeInstant(parse_i64(fs[5], "t"));
            store.record_observation(o);
            ++report.records_accepted;
        } catch (const Error& err) {
            note_error(report, lineno, err.what());
        }
    }
}

} // namespace

IngestReport load_file(IngestKind kind, const std::string& path, TrajectoryStore& store) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + std::string(to_string(kind)) + " file: " + path);
    IngestReport report;
    report.file = path;
    switch (kind) {
    case IngestKind::Points: load_points(in, path, store, report); break;
    case IngestKind::Regions: load_regions(in, path, store, report); break;
    case IngestKind::Devices: load_devices(in, path, store, report); break;
    case IngestKind::Activities: load_activities(in, path, store, report); break;
    case IngestKind::Observations: load_observations(in, path, store, report); break;
    }
    return report;
}

} // namespace traj
