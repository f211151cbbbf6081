#include "traj/reference.hpp"
#include "traj/text.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace traj::ref {

namespace {

bool window_all_within(const RawTrajectory& raw, std::size_t i, std::size_t j, double eps) {
    for (std::size_t k = i; k <= j; ++k) {
        if (distance(raw.points[k].p, raw.points[i].p) > eps) return false;
    }
    return true;
}

Episode stop_episode(const RawTrajectory& raw, std::size_t i, std::size_t j) {
    std::vector<GeoPoint> pts;
    for (std::size_t k = i; k <= j; ++k) pts.push_back(raw.points[k].p);
    Episode ep;
    ep.kind = EpisodeKind::Stop;
    ep.start_index = i;
    ep.end_index = j;
    ep.time = TimeInterval(raw.points[i].t, raw.points[j].t);
    ep.geometry = SpatialObject::point(centroid(pts));
    return ep;
}

Episode move_episode(const RawTrajectory& raw, std::size_t i, std::size_t j) {
    std::vector<GeoPoint> pts;
    for (std::size_t k = i; k <= j; ++k) pts.push_back(raw.points[k].p);
    if (pts.size() == 1) pts.push_back(pts.front());
    Episode ep;
    ep.kind = EpisodeKind::Move;
    ep.start_index = i;
    ep.end_index = j;
    ep.time = TimeInterval(raw.points[i].t, raw.points[j].t);
    ep.geometry = SpatialObject::line(Polyline(std::move(pts)));
    return ep;
}

SpaceTimeEvent boundary(const RawTrajectory& raw, bool begin) {
    const RawPoint& rp = begin ? raw.points.front() : raw.points.back();
    SpaceTimeEvent e;
    e.id = raw.object_id + (begin ? "#begin" : "#end");
    e.object_id = raw.object_id;
    e.spatial = SpatialObject::point(rp.p);
    e.time = TimeInterval(rp.t, rp.t);
    e.device_id = rp.device_id;
    return e;
}

} // namespace

StructuredTrajectory detect_stops(const RawTrajectory& raw, const SegmentationParams& params) {
    const std::size_t n = raw.points.size();
    std::vector<std::pair<std::size_t, std::size_t>> stop_ranges;
    std::size_t i = 0;
    while (i < n) {
        // Largest j with every point of [i..j] within eps of point i,
        // rechecked from scratch at every extension.
        std::size_t j = i;
        while (j + 1 < n && window_all_within(raw, i, j + 1, params.eps)) ++j;
        if (raw.points[j].t.t - raw.points[i].t.t >= params.tau) {
            stop_ranges.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }

    StructuredTrajectory st;
    st.object_id = raw.object_id;
    st.source = raw;
    st.begin = boundary(raw, true);
    st.end = boundary(raw, false);
    std::size_t cursor = 0;
    for (const auto& [si, sj] : stop_ranges) {
        if (cursor < si) st.episodes.push_back(move_episode(raw, cursor, si - 1));
        st.episodes.push_back(stop_episode(raw, si, sj));
        cursor = sj + 1;
    }
    if (cursor < n) st.episodes.push_back(move_episode(raw, cursor, n - 1));
    return st;
}

std::vector<std::string> window_scan(const TrajectoryStore& store, const STWindow& w) {
    std::vector<std::string> out;
    for (const auto& [id, e] : store.events()) {
        const GeoPoint p = e.spatial.representative_point();
        if (p.x >= w.x_min && p.x <= w.x_max && p.y >= w.y_min && p.y <= w.y_max
            && interval_overlaps(e.time, w.time)) {
            out.push_back(id);
        }
    }
    return out;
}

std::string nearest_site(const GeoPoint& p,
                         const std::vector<std::pair<std::string, GeoPoint>>& sites) {
    if (sites.empty()) throw ArgumentError("nearest_site over empty site set");
    // Scan back to front so equal distances surface ties explicitly.
    std::string best_id = sites.back().first;
    double best_d = distance(p, sites.back().second);
    for (std::size_t k = sites.size(); k-- > 0;) {
        const double d = distance(p, sites[k].second);
        if (d < best_d) {
            best_d = d;
            best_id = sites[k].first;
        } else if (d == best_d && sites[k].first < best_id) {
            best_id = sites[k].first;
        }
    }
    return best_id;
}

namespace {

using query_detail::FieldSpec;
using query_detail::FieldType;

// Region membership by explicit subtree enumeration.

void collect_subtree(const RegionForest& forest, const std::string& id,
                     std::vector<std::string>& out) {
    out.push_back(id);
    for (const std::string& c : forest.region(id).children) collect_subtree(forest, c, out);
}

bool own_hit(const GeoPoint& p, const ObjectOfInterest& r, const RegionForest& forest) {
    if (r.is_site()) {
        std::vector<std::pair<std::string, GeoPoint>> sites;
        for (const std::string& sid : forest.site_ids()) {
            sites.emplace_back(sid, std::get<GeoPoint>(forest.region(sid).geometry));
        }
        return nearest_site(p, sites) == r.id;
    }
    return point_in_polygon(p, std::get<Polygon>(r.geometry));
}

bool member(const GeoPoint& p, const std::string& region_id, const RegionForest& forest) {
    std::vector<std::string> subtree;
    collect_subtree(forest, region_id, subtree);
    for (const std::string& id : subtree) {
        if (own_hit(p, forest.region(id), forest)) return true;
    }
    return false;
}

std::optional<std::string> deepest(const GeoPoint& p, const RegionForest& forest) {
    std::optional<std::string> best;
    std::size_t best_depth = 0;
    for (const auto& [id, r] : forest.regions()) {
        if (!member(p, id, forest)) continue;
        if (!best || r.depth > best_depth || (r.depth == best_depth && id < *best)) {
            best = id;
            best_depth = r.depth;
        }
    }
    return best;
}

struct NaiveRow {
    std::vector<Value> fields;
    GeoPoint point;
    TimeInterval time;
    bool has_point = false;
};

std::string naive_place(const GeoPoint& p, const std::vector<std::string>& categories,
                        const RegionForest& forest) {
    std::string best_name;
    std::size_t best_depth = 0;
    std::string best_id;
    for (const auto& [id, r] : forest.regions()) {
        bool wanted = false;
        for (const std::string& c : categories) {
            if (r.category == c) wanted = true;
        }
        if (!wanted || !member(p, id, forest)) continue;
        if (best_id.empty() || r.depth > best_depth || (r.depth == best_depth && id < best_id)) {
            best_name = r.name;
            best_depth = r.depth;
            best_id = id;
        }
    }
    return best_name;
}

void check_presentations(QuerySource source, const TrajectoryStore& store) {
    const bool have_raw = !store.raw_object_ids().empty();
    if ((source == QuerySource::Stops || source == QuerySource::Moves)
        && store.structured().empty() && have_raw) {
        throw QueryError("no structured trajectories materialized; "
                         "run `segment --eps <meters> --tau <seconds>` first");
    }
    if ((source == QuerySource::Semantic || source == QuerySource::RoiVisits)
        && store.semantic().empty()) {
        if (!store.structured().empty()) {
            throw QueryError("no semantic trajectories materialized; run `annotate` first");
        }
        if (have_raw) {
            throw QueryError("no semantic trajectories materialized; "
                             "run `segment --eps <meters> --tau <seconds>` and `annotate` first");
        }
    }
}

} // namespace

ResultTable evaluate(const QueryAst& ast, const TrajectoryStore& store) {
    check_presentations(ast.source, store);
    const RegionForest& forest = store.forest();

    std::vector<std::string> categories;
    for (const Predicate& p : ast.predicates) {
        if (p.kind == Predicate::Kind::IntersectsLayer) categories.push_back(p.text);
    }
    const bool with_place =
        !categories.empty() && query_detail::place_is_conditional(ast.source);
    const std::vector<FieldSpec> specs = query_detail::source_fields(ast.source, with_place);

    std::vector<NaiveRow> rows;
    auto push_episode = [&](const std::string& object, const Episode& ep,
                            std::vector<Value> extra) {
        const GeoPoint rep = ep.geometry.representative_point();
        NaiveRow row;
        row.fields = {object, ep.time.begin.t, ep.time.end.t, ep.time.duration(), rep.x, rep.y};
        for (Value& v : extra) row.fields.push_back(std::move(v));
        if (with_place) row.fields.emplace_back(naive_place(rep, categories, forest));
        row.point = rep;
        row.time = ep.time;
        row.has_point = true;
        rows.push_back(std::move(row));
    };

    switch (ast.source) {
    case QuerySource::Raw:
        for (const std::string& object : store.raw_object_ids()) {
            for (const RawPoint& pt : store.raw_trajectory(object).points) {
                NaiveRow row;
                row.fields = {object, pt.t.t, pt.p.x, pt.p.y};
                if (with_place) row.fields.emplace_back(naive_place(pt.p, categories, forest));
                row.point = pt.p;
                row.time = TimeInterval(pt.t, pt.t);
                row.has_point = true;
                rows.push_back(std::move(row));
            }
        }
        break;
    case QuerySource::Stops:
    case QuerySource::Moves: {
        const EpisodeKind want =
            ast.source == QuerySource::Stops ? EpisodeKind::Stop : EpisodeKind::Move;
        for (const auto& [object, st] : store.structured()) {
            for (const Episode& ep : st.episodes) {
                if (ep.kind == want) push_episode(object, ep, {});
            }
        }
        break;
    }
    case QuerySource::Semantic:
        for (const auto& [object, sem] : store.semantic()) {
            for (std::size_t k = 0; k < sem.base.episodes.size(); ++k) {
                if (!sem.annotations[k]) continue;
                const auto& ann = *sem.annotations[k];
                push_episode(object, sem.base.episodes[k],
                             {ann.place_name, ann.category,
                              std::string(to_string(episode_role(sem.base, k)))});
            }
        }
        break;
    case QuerySource::RoiVisits:
        // Visits re-derived from annotations plus explicit ancestor chains.
        for (const auto& [object, sem] : store.semantic()) {
            for (std::size_t k = 0; k < sem.base.episodes.size(); ++k) {
                const Episode& ep = sem.base.episodes[k];
                if (ep.kind != EpisodeKind::Stop || !sem.annotations[k]) continue;
                const std::string& rid = sem.annotations[k]->region_id;
                if (rid.empty()) continue;
                bool via = false;
                for (std::optional<std::string> cur = rid; cur;) {
                    const ObjectOfInterest& r = forest.region(*cur);
                    NaiveRow row;
                    row.fields = {object, r.name, r.category, ep.time.begin.t, ep.time.end.t, via};
                    row.time = ep.time;
                    rows.push_back(std::move(row));
                    cur = r.parent;
                    via = true;
                }
            }
        }
        break;
    case QuerySource::StPath: {
        std::set<std::string> objects;
        for (const auto& [id, e] : store.events()) objects.insert(e.object_id);
        for (const std::string& object : objects) {
            for (const auto& [eid, e] : store.events()) {
                if (e.object_id != object) continue;
                std::map<std::string, const Activity*> acts;
                for (const ActivityLink& l : store.activity_links()) {
                    if (l.event_id == eid) acts.emplace(l.activity_id, &store.activity(l.activity_id));
                }
                const GeoPoint event_rep = e.spatial.representative_point();
                for (const auto& [aid, a] : acts) {
                    const GeoPoint at = a->location ? *a->location : event_rep;
                    NaiveRow row;
                    row.fields = {object, a->time.begin.t, a->time.end.t,
                                  std::string(to_string(a->kind)), a->label, at.x, at.y};
                    if (with_place) {
                        row.fields.emplace_back(naive_place(at, categories, forest));
                    }
                    row.point = at;
                    row.time = a->time;
                    row.has_point = true;
                    rows.push_back(std::move(row));
                }
            }
        }
        break;
    }
    case QuerySource::Devices:
        for (const auto& [eid, e] : store.events()) {
            if (!e.device_id) continue;
            const std::optional<DeviceProxy> d = store.device_of(eid);
            const GeoPoint rep = e.spatial.representative_point();
            std::string region_name;
            if (auto rid = deepest(rep, forest)) region_name = forest.region(*rid).name;
            NaiveRow row;
            row.fields = {d->device_id, std::string(to_string(d->kind)), d->reliability,
                          e.time.begin.t, region_name};
            row.point = rep;
            row.time = e.time;
            row.has_point = true;
            rows.push_back(std::move(row));
        }
        break;
    }

    auto column_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (name == specs[i].name) return i;
        }
        throw QueryError("internal: unknown column " + name);
    };

    auto matches = [&](const NaiveRow& row, const Predicate& p) -> bool {
        switch (p.kind) {
        case Predicate::Kind::Compare: {
            const std::size_t col = column_of(p.field);
            const Value& v = row.fields[col];
            int cmp = 0;
            if (specs[col].type == FieldType::Str) {
                const std::string s = format_value(v);
                cmp = s < p.literal.text ? -1 : s > p.literal.text ? 1 : 0;
            } else if (specs[col].type == FieldType::Num) {
                const double d = v.index() == 0
                    ? static_cast<double>(std::get<std::int64_t>(v))
                    : std::get<double>(v);
                cmp = d < p.literal.dvalue ? -1 : d > p.literal.dvalue ? 1 : 0;
            } else {
                const std::int64_t i = std::get<std::int64_t>(v);
                cmp = i < p.literal.ivalue ? -1 : i > p.literal.ivalue ? 1 : 0;
            }
            switch (p.op) {
            case CompareOp::Eq: return cmp == 0;
            case CompareOp::Ne: return cmp != 0;
            case CompareOp::Lt: return cmp < 0;
            case CompareOp::Le: return cmp <= 0;
            case CompareOp::Gt: return cmp > 0;
            case CompareOp::Ge: return cmp >= 0;
            }
            return false;
        }
        case Predicate::Kind::Like:
            return like_match(format_value(row.fields[column_of(p.field)]), p.text);
        case Predicate::Kind::IntersectsLayer: {
            if (!row.has_point) return false;
            for (const auto& [id, r] : forest.regions()) {
                if (r.category == p.text && member(row.point, id, forest)) return true;
            }
            return false;
        }
        case Predicate::Kind::WithinRegion: {
            if (!row.has_point) return false;
            for (const auto& [id, r] : forest.regions()) {
                if (r.name == p.text && member(row.point, id, forest)) return true;
            }
            return false;
        }
        case Predicate::Kind::InWindow:
            return row.has_point && row.point.x >= p.window.x_min
                && row.point.x <= p.window.x_max && row.point.y >= p.window.y_min
                && row.point.y <= p.window.y_max && interval_overlaps(row.time, p.window.time);
        }
        return false;
    };

    std::vector<const NaiveRow*> kept;
    for (const NaiveRow& row : rows) {
        bool ok = true;
        for (const Predicate& p : ast.predicates) {
            if (!matches(row, p)) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(&row);
    }

    ResultTable table;
    if (ast.select_count) {
        if (ast.group_by) {
            const std::size_t col = column_of(*ast.group_by);
            std::map<Value, std::int64_t, bool (*)(const Value&, const Value&)> counts(value_less);
            for (const NaiveRow* row : kept) ++counts[row->fields[col]];
            table.columns = {*ast.group_by, "count"};
            for (const auto& [k, n] : counts) table.rows.push_back({k, n});
        } else {
            table.columns = {"count"};
            table.rows.push_back({static_cast<std::int64_t>(kept.size())});
        }
    } else {
        std::vector<std::size_t> cols;
        if (ast.projection) {
            for (const std::string& f : *ast.projection) cols.push_back(column_of(f));
            table.columns = *ast.projection;
        } else {
            for (std::size_t i = 0; i < specs.size(); ++i) cols.push_back(i);
            for (const FieldSpec& f : specs) table.columns.push_back(f.name);
        }
        for (const NaiveRow* row : kept) {
            std::vector<Value> out;
            for (std::size_t c : cols) out.push_back(row->fields[c]);
            table.rows.push_back(std::move(out));
        }
    }
    std::sort(table.rows.begin(), table.rows.end(), query_detail::rows_less);
    return table;
}

} // namespace traj::ref
