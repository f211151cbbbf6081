#include "traj/store.hpp"
#include "traj/text.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

// Snapshot layout: 8-byte magic, u32 format version, then one
// length-prefixed section per entity collection, then a CRC32 trailer over
// everything before it. All integers little-endian.

namespace traj {

namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {'T', 'R', 'A', 'J', 'S', 'N', 'P', '\n'};
constexpr std::uint32_t kVersion = 1;

enum class Section : std::uint8_t {
    Meta = 1,
    Events = 2,
    Regions = 3,
    Devices = 4,
    Activities = 5,
    Processes = 6,
    Observations = 7,
    Links = 8,
    Structured = 9,
    Semantic = 10,
};

std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) {
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void boolean(bool v) { u8(v ? 1 : 0); }
    void str(const std::string& s) {
        u64(s.size());
        out_.insert(out_.end(), s.begin(), s.end());
    }
    void opt_str(const std::optional<std::string>& s) {
        boolean(s.has_value());
        if (s) str(*s);
    }
    void raw(const std::vector<std::uint8_t>& bytes) {
        out_.insert(out_.end(), bytes.begin(), bytes.end());
    }

    std::vector<std::uint8_t> take() { return std::move(out_); }
    const std::vector<std::uint8_t>& bytes() const { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

    bool done() const { return pos_ == len_; }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    bool boolean() { return u8() != 0; }
    std::string str() {
        const std::uint64_t n = u64();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    std::optional<std::string> opt_str() {
        if (!boolean()) return std::nullopt;
        return str();
    }

private:
    void need(std::uint64_t n) const {
        if (pos_ + n > len_) {
            throw SnapshotChecksumError("snapshot payload ends unexpectedly");
        }
    }

    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

void write_spatial(Writer& w, const SpatialObject& s) {
    w.u8(static_cast<std::uint8_t>(s.kind()));
    w.str(s.crs().name);
    switch (s.kind()) {
    case SpatialObject::Kind::Point:
        w.f64(s.as_point().x);
        w.f64(s.as_point().y);
        break;
    case SpatialObject::Kind::Line:
        w.u64(s.as_line().vertices.size());
        for (const GeoPoint& p : s.as_line().vertices) {
            w.f64(p.x);
            w.f64(p.y);
        }
        break;
    case SpatialObject::Kind::Area:
        w.u64(s.as_area().ring.size());
        for (const GeoPoint& p : s.as_area().ring) {
            w.f64(p.x);
            w.f64(p.y);
        }
        break;
    }
}

SpatialObject read_spatial(Reader& r) {
    const auto kind = static_cast<SpatialObject::Kind>(r.u8());
    SpatialReference crs{r.str()};
    switch (kind) {
    case SpatialObject::Kind::Point: {
        const double x = r.f64();
        const double y = r.f64();
        return SpatialObject::point(GeoPoint(x, y), crs);
    }
    case SpatialObject::Kind::Line: {
        const std::uint64_t n = r.u64();
        std::vector<GeoPoint> vs;
        vs.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const double x = r.f64();
            const double y = r.f64();
            vs.emplace_back(x, y);
        }
        return SpatialObject::line(Polyline(std::move(vs)), crs);
    }
    case SpatialObject::Kind::Area: {
        const std::uint64_t n = r.u64();
        std::vector<GeoPoint> vs;
        vs.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const double x = r.f64();
            const double y = r.f64();
            vs.emplace_back(x, y);
        }
        return SpatialObject::area(Polygon(std::move(vs)), crs);
    }
    }
    throw SnapshotChecksumError("snapshot has unknown spatial kind");
}

void write_interval(Writer& w, const TimeInterval& t) {
    w.i64(t.begin.t);
    w.i64(t.end.t);
    w.str(t.tref.name);
}

TimeInterval read_interval(Reader& r) {
    const std::int64_t b = r.i64();
    const std::int64_t e = r.i64();
    return TimeInterval(TimeInstant(b), TimeInstant(e), TimeReference{r.str()});
}

void write_tag(Writer& w, const std::optional<SemanticTag>& tag) {
    w.boolean(tag.has_value());
    if (!tag) return;
    w.str(tag->place_name);
    w.str(tag->category);
    w.u8(static_cast<std::uint8_t>(tag->role));
}

std::optional<SemanticTag> read_tag(Reader& r) {
    if (!r.boolean()) return std::nullopt;
    SemanticTag t;
    t.place_name = r.str();
    t.category = r.str();
    t.role = static_cast<SemanticRole>(r.u8());
    return t;
}

void write_event(Writer& w, const SpaceTimeEvent& e) {
    w.str(e.id);
    w.str(e.object_id);
    write_spatial(w, e.spatial);
    write_interval(w, e.time);
    w.opt_str(e.device_id);
    write_tag(w, e.semantic);
    w.u64(e.children.size());
    for (const std::string& c : e.children) w.str(c);
}

SpaceTimeEvent read_event(Reader& r) {
    SpaceTimeEvent e;
    e.id = r.str();
    e.object_id = r.str();
    e.spatial = read_spatial(r);
    e.time = read_interval(r);
    e.device_id = r.opt_str();
    e.semantic = read_tag(r);
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) e.children.push_back(r.str());
    return e;
}

void write_raw(Writer& w, const RawTrajectory& raw) {
    w.str(raw.object_id);
    w.u64(raw.points.size());
    for (const RawPoint& p : raw.points) {
        w.f64(p.p.x);
        w.f64(p.p.y);
        w.i64(p.t.t);
        w.opt_str(p.device_id);
    }
}

RawTrajectory read_raw(Reader& r) {
    RawTrajectory raw;
    raw.object_id = r.str();
    const std::uint64_t n = r.u64();
    raw.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = r.f64();
        const double y = r.f64();
        const std::int64_t t = r.i64();
        raw.points.push_back(RawPoint{GeoPoint(x, y), TimeInstant(t), r.opt_str()});
    }
    return raw;
}

void write_episode(Writer& w, const Episode& ep) {
    w.u8(static_cast<std::uint8_t>(ep.kind));
    w.u64(ep.start_index);
    w.u64(ep.end_index);
    write_interval(w, ep.time);
    write_spatial(w, ep.geometry);
}

Episode read_episode(Reader& r) {
    Episode ep;
    ep.kind = static_cast<EpisodeKind>(r.u8());
    ep.start_index = r.u64();
    ep.end_index = r.u64();
    ep.time = read_interval(r);
    ep.geometry = read_spatial(r);
    return ep;
}

void write_structured(Writer& w, const StructuredTrajectory& st) {
    w.str(st.object_id);
    write_raw(w, st.source);
    write_event(w, st.begin);
    write_event(w, st.end);
    w.u64(st.episodes.size());
    for (const Episode& ep : st.episodes) write_episode(w, ep);
}

StructuredTrajectory read_structured(Reader& r) {
    StructuredTrajectory st;
    st.object_id = r.str();
    st.source = read_raw(r);
    st.begin = read_event(r);
    st.end = read_event(r);
    const std::uint64_t n = r.u64();
    st.episodes.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) st.episodes.push_back(read_episode(r));
    return st;
}

void write_semantic(Writer& w, const SemanticTrajectory& st) {
    write_structured(w, st.base);
    w.u64(st.annotations.size());
    for (const auto& ann : st.annotations) {
        w.boolean(ann.has_value());
        if (!ann) continue;
        w.str(ann->place_name);
        w.str(ann->category);
        w.str(ann->region_id);
        w.u64(ann->crossed.size());
        for (const std::string& c : ann->crossed) w.str(c);
    }
}

SemanticTrajectory read_semantic(Reader& r) {
    SemanticTrajectory st;
    st.base = read_structured(r);
    const std::uint64_t n = r.u64();
    st.annotations.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (!r.boolean()) {
            st.annotations.push_back(std::nullopt);
            continue;
        }
        EpisodeAnnotation ann;
        ann.place_name = r.str();
        ann.category = r.str();
        ann.region_id = r.str();
        const std::uint64_t m = r.u64();
        for (std::uint64_t k = 0; k < m; ++k) ann.crossed.push_back(r.str());
        st.annotations.push_back(std::move(ann));
    }
    return st;
}

void write_region_def(Writer& w, const RegionDef& d) {
    w.str(d.id);
    w.str(d.name);
    w.str(d.category);
    w.opt_str(d.parent);
    w.boolean(d.is_site());
    if (d.is_site()) {
        const GeoPoint& p = std::get<GeoPoint>(d.geometry);
        w.f64(p.x);
        w.f64(p.y);
    } else {
        const Polygon& poly = std::get<Polygon>(d.geometry);
        w.u64(poly.ring.size());
        for (const GeoPoint& p : poly.ring) {
            w.f64(p.x);
            w.f64(p.y);
        }
    }
}

RegionDef read_region_def(Reader& r) {
    RegionDef d;
    d.id = r.str();
    d.name = r.str();
    d.category = r.str();
    d.parent = r.opt_str();
    if (r.boolean()) {
        const double x = r.f64();
        const double y = r.f64();
        d.geometry = GeoPoint(x, y);
    } else {
        const std::uint64_t n = r.u64();
        std::vector<GeoPoint> ring;
        ring.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const double x = r.f64();
            const double y = r.f64();
            ring.emplace_back(x, y);
        }
        d.geometry = Polygon(std::move(ring));
    }
    return d;
}

void append_section(Writer& out, Section tag, Writer&& payload) {
    out.u8(static_cast<std::uint8_t>(tag));
    const std::vector<std::uint8_t> bytes = payload.take();
    out.u64(bytes.size());
    out.raw(bytes);
}

} // namespace

std::vector<std::uint8_t> TrajectoryStore::to_snapshot_bytes() const {
    Writer out;
    for (std::uint8_t b : kMagic) out.u8(b);
    out.u32(kVersion);

    {
        Writer w;
        w.u64(revision_);
        append_section(out, Section::Meta, std::move(w));
    }
    {
        Writer w;
        w.u64(events_.size());
        for (const auto& [id, e] : events_) write_event(w, e);
        append_section(out, Section::Events, std::move(w));
    }
    {
        Writer w;
        w.u64(region_defs_.size());
        for (const auto& [id, d] : region_defs_) write_region_def(w, d);
        append_section(out, Section::Regions, std::move(w));
    }
    {
        Writer w;
        w.u64(devices_.size());
        for (const auto& [id, d] : devices_) {
            w.str(d.device_id);
            w.u8(static_cast<std::uint8_t>(d.kind));
            w.f64(d.reliability);
            w.str(d.description);
        }
        append_section(out, Section::Devices, std::move(w));
    }
    {
        Writer w;
        w.u64(activities_.size());
        for (const auto& [id, a] : activities_) {
            w.str(a.id);
            w.str(a.object_id);
            w.u8(static_cast<std::uint8_t>(a.kind));
            w.str(a.label);
            write_interval(w, a.time);
            w.boolean(a.location.has_value());
            if (a.location) {
                w.f64(a.location->x);
                w.f64(a.location->y);
            }
        }
        append_section(out, Section::Activities, std::move(w));
    }
    {
        Writer w;
        w.u64(processes_.size());
        for (const auto& [id, p] : processes_) {
            w.str(p.id);
            w.str(p.name);
            w.str(p.object_id);
            w.u64(p.activity_ids.size());
            for (const std::string& a : p.activity_ids) w.str(a);
        }
        append_section(out, Section::Processes, std::move(w));
    }
    {
        Writer w;
        w.u64(observations_.size());
        for (const auto& [id, o] : observations_) {
            w.str(o.id);
            w.str(o.event_id);
            w.str(o.feature);
            w.f64(o.value);
            w.str(o.unit);
            w.i64(o.time.t);
        }
        append_section(out, Section::Observations, std::move(w));
    }
    {
        Writer w;
        w.u64(links_.size());
        for (const ActivityLink& l : links_) {
            w.str(l.activity_id);
            w.str(l.event_id);
            w.u8(static_cast<std::uint8_t>(l.role));
        }
        append_section(out, Section::Links, std::move(w));
    }
    {
        Writer w;
        w.u64(structured_.size());
        for (const auto& [id, st] : structured_) write_structured(w, st);
        append_section(out, Section::Structured, std::move(w));
    }
    {
        Writer w;
        w.u64(semantic_.size());
        for (const auto& [id, st] : semantic_) write_semantic(w, st);
        append_section(out, Section::Semantic, std::move(w));
    }

    const std::uint32_t crc = crc32(out.bytes().data(), out.bytes().size());
    out.u32(crc);
    return out.take();
}

TrajectoryStore TrajectoryStore::from_snapshot_bytes(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kMagic.size() + 4 + 4) {
        throw SnapshotChecksumError("snapshot shorter than its fixed framing");
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        throw SnapshotVersionError("not a trajectory snapshot (bad magic)");
    }
    {
        Reader header(bytes.data() + kMagic.size(), 4);
        const std::uint32_t version = header.u32();
        if (version != kVersion) {
            throw SnapshotVersionError("unsupported snapshot version "
                                       + std::to_string(version));
        }
    }
    const std::size_t body_len = bytes.size() - 4;
    std::uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) {
        stored_crc |= static_cast<std::uint32_t>(bytes[body_len + i]) << (8 * i);
    }
    if (crc32(bytes.data(), body_len) != stored_crc) {
        throw SnapshotChecksumError("snapshot checksum mismatch (truncated or corrupted)");
    }

    TrajectoryStore store;
    Reader r(bytes.data() + kMagic.size() + 4, body_len - kMagic.size() - 4);
    while (!r.done()) {
        const auto tag = static_cast<Section>(r.u8());
        const std::uint64_t len = r.u64();
        (void)len;
        switch (tag) {
        case Section::Meta:
            store.revision_ = r.u64();
            break;
        case Section::Events: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                SpaceTimeEvent e = read_event(r);
                store.events_[e.id] = std::move(e);
            }
            for (const auto& [id, e] : store.events_) store.link_children(e);
            break;
        }
        case Section::Regions: {
            const std::uint64_t n = r.u64();
            std::vector<RegionDef> defs;
            defs.reserve(n);
            for (std::uint64_t i = 0; i < n; ++i) defs.push_back(read_region_def(r));
            for (const RegionDef& d : defs) store.region_defs_[d.id] = d;
            store.forest_ = build_forest(defs);
            break;
        }
        case Section::Devices: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                DeviceProxy d;
                d.device_id = r.str();
                d.kind = static_cast<DeviceKind>(r.u8());
                d.reliability = r.f64();
                d.description = r.str();
                store.devices_[d.device_id] = std::move(d);
            }
            break;
        }
        case Section::Activities: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                Activity a;
                a.id = r.str();
                a.object_id = r.str();
                a.kind = static_cast<ActivityKind>(r.u8());
                a.label = r.str();
                a.time = read_interval(r);
                if (r.boolean()) {
                    const double x = r.f64();
                    const double y = r.f64();
                    a.location = GeoPoint(x, y);
                }
                store.activities_[a.id] = std::move(a);
            }
            break;
        }
        case Section::Processes: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                Process p;
                p.id = r.str();
                p.name = r.str();
                p.object_id = r.str();
                const std::uint64_t m = r.u64();
                for (std::uint64_t k = 0; k < m; ++k) p.activity_ids.push_back(r.str());
                store.processes_[p.id] = std::move(p);
            }
            break;
        }
        case Section::Observations: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                Observation o;
                o.id = r.str();
                o.event_id = r.str();
                o.feature = r.str();
                o.value = r.f64();
                o.unit = r.str();
                o.time = TimeInstant(r.i64());
                store.observations_[o.id] = std::move(o);
            }
            break;
        }
        case Section::Links: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                ActivityLink l;
                l.activity_id = r.str();
                l.event_id = r.str();
                l.role = static_cast<AttachRole>(r.u8());
                store.links_.insert(std::move(l));
            }
            break;
        }
        case Section::Structured: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                StructuredTrajectory st = read_structured(r);
                store.structured_[st.object_id] = std::move(st);
            }
            break;
        }
        case Section::Semantic: {
            const std::uint64_t n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                SemanticTrajectory st = read_semantic(r);
                store.semantic_[st.base.object_id] = std::move(st);
            }
            break;
        }
        default:
            throw SnapshotChecksumError("snapshot has unknown section tag");
        }
    }
    return store;
}

void TrajectoryStore::save_snapshot(const std::string& path) const {
    const std::vector<std::uint8_t> bytes = to_snapshot_bytes();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open snapshot for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed to write snapshot: " + path);
}

TrajectoryStore TrajectoryStore::load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot for reading: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed to read snapshot: " + path);
    return from_snapshot_bytes(bytes);
}

// --- canonical export --------------------------------------------------------

namespace {

std::string geom_text(const SpatialObject& s) {
    auto pt = [](const GeoPoint& p) { return format_double(p.x) + "," + format_double(p.y); };
    std::string out;
    switch (s.kind()) {
    case SpatialObject::Kind::Point: out = "point:" + pt(s.as_point()); break;
    case SpatialObject::Kind::Line: {
        out = "line:";
        const auto& vs = s.as_line().vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ";" : "") + pt(vs[i]);
        break;
    }
    case SpatialObject::Kind::Area: {
        out = "area:";
        const auto& vs = s.as_area().ring;
        for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ";" : "") + pt(vs[i]);
        break;
    }
    }
    return out + "@" + s.crs().name;
}

std::string tag_text(const std::optional<SemanticTag>& t) {
    if (!t) return "-";
    return t->place_name + "|" + t->category + "|" + to_string(t->role);
}

std::string interval_text(const TimeInterval& t) {
    return std::to_string(t.begin.t) + ".." + std::to_string(t.end.t) + "@" + t.tref.name;
}

std::string episode_text(const Episode& ep) {
    return std::string(to_string(ep.kind)) + "[" + std::to_string(ep.start_index) + ".."
        + std::to_string(ep.end_index) + "]" + interval_text(ep.time) + " " + geom_text(ep.geometry);
}

} // namespace

std::string TrajectoryStore::canonical_export() const {
    std::ostringstream out;
    for (const auto& [id, a] : activities_) {
        out << "activity\t" << id << '\t' << a.object_id << '\t' << to_string(a.kind) << '\t'
            << a.label << '\t' << interval_text(a.time) << '\t'
            << (a.location ? format_double(a.location->x) + "," + format_double(a.location->y)
                           : std::string("-"))
            << '\n';
    }
    for (const ActivityLink& l : links_) {
        out << "association\t" << l.activity_id << '\t' << l.event_id << '\t' << to_string(l.role)
            << '\n';
    }
    for (const auto& [id, d] : devices_) {
        out << "device\t" << id << '\t' << to_string(d.kind) << '\t'
            << format_double(d.reliability) << '\t' << d.description << '\n';
    }
    for (const auto& [id, e] : events_) {
        out << "event\t" << id << '\t' << e.object_id << '\t' << geom_text(e.spatial) << '\t'
            << interval_text(e.time) << '\t' << (e.device_id ? *e.device_id : "-") << '\t'
            << tag_text(e.semantic) << '\t' << (e.children.empty() ? "-" : join(e.children, ","))
            << '\n';
    }
    for (const auto& [id, o] : observations_) {
        out << "observation\t" << id << '\t' << o.event_id << '\t' << o.feature << '\t'
            << format_double(o.value) << '\t' << o.unit << '\t' << o.time.t << '\n';
    }
    for (const auto& [id, p] : processes_) {
        out << "process\t" << id << '\t' << p.name << '\t' << p.object_id << '\t'
            << join(p.activity_ids, ",") << '\n';
    }
    for (const auto& [id, d] : region_defs_) {
        std::string geom;
        if (d.is_site()) {
            const GeoPoint& p = std::get<GeoPoint>(d.geometry);
            geom = "site:" + format_double(p.x) + "," + format_double(p.y);
        } else {
            geom = geom_text(SpatialObject::area(std::get<Polygon>(d.geometry)));
        }
        out << "region\t" << id << '\t' << d.name << '\t' << d.category << '\t'
            << (d.parent ? *d.parent : "-") << '\t' << geom << '\n';
    }
    for (const auto& [id, st] : structured_) {
        out << "structured\t" << id << '\t' << st.source.points.size() << "pts";
        for (const RawPoint& p : st.source.points) {
            out << ' ' << format_double(p.p.x) << ',' << format_double(p.p.y) << ',' << p.t.t
                << ',' << (p.device_id ? *p.device_id : "-");
        }
        out << '\t' << tag_text(st.begin.semantic) << '\t' << tag_text(st.end.semantic);
        for (const Episode& ep : st.episodes) out << '\t' << episode_text(ep);
        out << '\n';
    }
    for (const auto& [id, st] : semantic_) {
        out << "semantic\t" << id << '\t' << st.base.source.points.size() << "pts";
        out << '\t' << tag_text(st.base.begin.semantic) << '\t' << tag_text(st.base.end.semantic);
        for (std::size_t k = 0; k < st.base.episodes.size(); ++k) {
            out << '\t' << episode_text(st.base.episodes[k]) << '=';
            const auto& ann = st.annotations[k];
            if (!ann) {
                out << '-';
            } else {
                out << ann->place_name << '|' << ann->category << '|' << ann->region_id << '|'
                    << join(ann->crossed, ",");
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace traj
