#include "traj/query.hpp"
#include "traj/text.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace traj {

std::string format_value(const Value& v) {
    switch (v.index()) {
    case 0: return std::to_string(std::get<std::int64_t>(v));
    case 1: return format_double(std::get<double>(v));
    case 2: return std::get<std::string>(v);
    default: return std::get<bool>(v) ? "true" : "false";
    }
}

bool value_less(const Value& a, const Value& b) {
    const bool a_num = a.index() <= 1;
    const bool b_num = b.index() <= 1;
    if (a_num && b_num) {
        const double da = a.index() == 0 ? static_cast<double>(std::get<std::int64_t>(a))
                                         : std::get<double>(a);
        const double db = b.index() == 0 ? static_cast<double>(std::get<std::int64_t>(b))
                                         : std::get<double>(b);
        if (da != db) return da < db;
        return a.index() < b.index();
    }
    if (a.index() != b.index()) return a.index() < b.index();
    if (a.index() == 2) return std::get<std::string>(a) < std::get<std::string>(b);
    return std::get<bool>(a) < std::get<bool>(b);
}

std::string ResultTable::to_tsv() const {
    std::string out = join(columns, "\t") + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += '\t';
            out += format_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace query_detail {

bool rows_less(const std::vector<Value>& a, const std::vector<Value>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (value_less(a[i], b[i])) return true;
        if (value_less(b[i], a[i])) return false;
    }
    return a.size() < b.size();
}

} // namespace query_detail

namespace {

using query_detail::FieldSpec;
using query_detail::FieldType;

struct WorkRow {
    std::vector<Value> fields;
    GeoPoint point;
    TimeInterval time;
    bool has_point = false;
};

struct RowModel {
    std::vector<FieldSpec> specs;
    std::vector<WorkRow> rows;

    std::size_t column_of(const std::string& name) const {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (name == specs[i].name) return i;
        }
        throw QueryError("internal: unknown column " + name);
    }
};

std::vector<std::string> intersect_categories(const QueryAst& ast) {
    std::vector<std::string> cats;
    for (const Predicate& p : ast.predicates) {
        if (p.kind == Predicate::Kind::IntersectsLayer) cats.push_back(p.text);
    }
    return cats;
}

/// Best (deepest, then smallest-id) region of any of the given categories
/// containing p; empty string when none does.
std::string place_of(const GeoPoint& p, const std::vector<std::string>& categories,
                     const RegionForest& forest) {
    const ObjectOfInterest* best = nullptr;
    for (const auto& [id, r] : forest.regions()) {
        if (std::find(categories.begin(), categories.end(), r.category) == categories.end()) {
            continue;
        }
        if (!is_member(p, id, forest)) continue;
        if (!best || r.depth > best->depth || (r.depth == best->depth && id < best->id)) {
            best = &r;
        }
    }
    return best ? best->name : std::string();
}

bool member_of_category(const GeoPoint& p, const std::string& category,
                        const RegionForest& forest) {
    for (const auto& [id, r] : forest.regions()) {
        if (r.category == category && is_member(p, id, forest)) return true;
    }
    return false;
}

bool member_of_named(const GeoPoint& p, const std::string& name, const RegionForest& forest) {
    for (const std::string& id : forest.find_by_name(name)) {
        if (is_member(p, id, forest)) return true;
    }
    return false;
}

void require_presentations(QuerySource source, const TrajectoryStore& store) {
    const bool have_raw = !store.raw_object_ids().empty();
    switch (source) {
    case QuerySource::Stops:
    case QuerySource::Moves:
        if (store.structured().empty() && have_raw) {
            throw QueryError("no structured trajectories materialized; "
                             "run `segment --eps <meters> --tau <seconds>` first");
        }
        break;
    case QuerySource::Semantic:
    case QuerySource::RoiVisits:
        if (store.semantic().empty()) {
            if (!store.structured().empty()) {
                throw QueryError("no semantic trajectories materialized; run `annotate` first");
            }
            if (have_raw) {
                throw QueryError("no semantic trajectories materialized; "
                                 "run `segment --eps <meters> --tau <seconds>` and `annotate` first");
            }
        }
        break;
    default:
        break;
    }
}

RowModel build_rows(const QueryAst& ast, const TrajectoryStore& store) {
    const bool with_place = !intersect_categories(ast).empty()
        && query_detail::place_is_conditional(ast.source);
    RowModel model;
    model.specs = query_detail::source_fields(ast.source, with_place);
    require_presentations(ast.source, store);

    auto episode_row = [&](const std::string& object, const Episode& ep) {
        const GeoPoint rep = ep.geometry.representative_point();
        WorkRow row;
        row.fields = {object, ep.time.begin.t, ep.time.end.t, ep.time.duration(), rep.x, rep.y};
        if (with_place) row.fields.emplace_back(std::string());
        row.point = rep;
        row.time = ep.time;
        row.has_point = true;
        return row;
    };

    switch (ast.source) {
    case QuerySource::Raw: {
        for (const std::string& object : store.raw_object_ids()) {
            const RawTrajectory raw = store.raw_trajectory(object);
            for (const RawPoint& pt : raw.points) {
                WorkRow row;
                row.fields = {object, pt.t.t, pt.p.x, pt.p.y};
                if (with_place) row.fields.emplace_back(std::string());
                row.point = pt.p;
                row.time = TimeInterval(pt.t, pt.t);
                row.has_point = true;
                model.rows.push_back(std::move(row));
            }
        }
        break;
    }
    case QuerySource::Stops:
    case QuerySource::Moves: {
        const EpisodeKind want =
            ast.source == QuerySource::Stops ? EpisodeKind::Stop : EpisodeKind::Move;
        for (const auto& [object, st] : store.structured()) {
            for (const Episode& ep : st.episodes) {
                if (ep.kind == want) model.rows.push_back(episode_row(object, ep));
            }
        }
        break;
    }
    case QuerySource::Semantic: {
        for (const auto& [object, sem] : store.semantic()) {
            for (std::size_t k = 0; k < sem.base.episodes.size(); ++k) {
                const auto& ann = sem.annotations[k];
                if (!ann) continue;
                const Episode& ep = sem.base.episodes[k];
                const GeoPoint rep = ep.geometry.representative_point();
                WorkRow row;
                row.fields = {object,
                              ep.time.begin.t,
                              ep.time.end.t,
                              ep.time.duration(),
                              rep.x,
                              rep.y,
                              ann->place_name,
                              ann->category,
                              std::string(to_string(episode_role(sem.base, k)))};
                row.point = rep;
                row.time = ep.time;
                row.has_point = true;
                model.rows.push_back(std::move(row));
            }
        }
        break;
    }
    case QuerySource::RoiVisits: {
        for (const auto& [object, sem] : store.semantic()) {
            for (const Visit& v : visits(sem, store.forest())) {
                const ObjectOfInterest& r = store.forest().region(v.region_id);
                WorkRow row;
                row.fields = {object, r.name, r.category, v.time.begin.t, v.time.end.t,
                              v.via_descendant};
                row.time = v.time;
                row.has_point = false;
                model.rows.push_back(std::move(row));
            }
        }
        break;
    }
    case QuerySource::StPath: {
        std::set<std::string> objects;
        for (const auto& [id, e] : store.events()) objects.insert(e.object_id);
        for (const std::string& object : objects) {
            const SpaceTimePath path = store.build_path(object);
            for (const PathEntry& entry : path.entries) {
                std::map<std::string, const Activity*> acts;
                for (const Activity& a : entry.begin_activities) acts.emplace(a.id, &a);
                for (const Activity& a : entry.end_activities) acts.emplace(a.id, &a);
                const GeoPoint event_rep = entry.event.spatial.representative_point();
                for (const auto& [aid, a] : acts) {
                    const GeoPoint at = a->location ? *a->location : event_rep;
                    WorkRow row;
                    row.fields = {object,
                                  a->time.begin.t,
                                  a->time.end.t,
                                  std::string(to_string(a->kind)),
                                  a->label,
                                  at.x,
                                  at.y};
                    if (with_place) row.fields.emplace_back(std::string());
                    row.point = at;
                    row.time = a->time;
                    row.has_point = true;
                    model.rows.push_back(std::move(row));
                }
            }
        }
        break;
    }
    case QuerySource::Devices: {
        // A fresh grid index prunes candidates when the query carries a
        // window; the predicate still re-filters exactly.
        std::vector<const SpaceTimeEvent*> events;
        const GridIndex* idx = store.index().get();
        const Predicate* window_pred = nullptr;
        for (const Predicate& p : ast.predicates) {
            if (p.kind == Predicate::Kind::InWindow) {
                window_pred = &p;
                break;
            }
        }
        if (window_pred && idx && idx->built_at_revision == store.revision()) {
            for (const std::string& id : store.window_query(window_pred->window)) {
                events.push_back(&store.event(id));
            }
        } else {
            for (const auto& [id, e] : store.events()) events.push_back(&e);
        }
        for (const SpaceTimeEvent* e : events) {
            if (!e->device_id) continue;
            const std::optional<DeviceProxy> d = store.device_of(e->id);
            const GeoPoint rep = e->spatial.representative_point();
            std::string region_name;
            if (auto rid = deepest_region(rep, store.forest())) {
                region_name = store.forest().region(*rid).name;
            }
            WorkRow row;
            row.fields = {d->device_id, std::string(to_string(d->kind)), d->reliability,
                          e->time.begin.t, region_name};
            row.point = rep;
            row.time = e->time;
            row.has_point = true;
            model.rows.push_back(std::move(row));
        }
        break;
    }
    }

    // The conditional place column is a pure function of the intersects
    // category set, so predicate order cannot influence it.
    if (with_place) {
        const std::vector<std::string> cats = intersect_categories(ast);
        const std::size_t place_col = model.specs.size() - 1;
        const std::int64_t n = static_cast<std::int64_t>(model.rows.size());
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) {
            WorkRow& row = model.rows[static_cast<std::size_t>(i)];
            if (row.has_point) {
                row.fields[place_col] = place_of(row.point, cats, store.forest());
            }
        }
    }
    return model;
}

bool compare_matches(CompareOp op, int cmp) {
    switch (op) {
    case CompareOp::Eq: return cmp == 0;
    case CompareOp::Ne: return cmp != 0;
    case CompareOp::Lt: return cmp < 0;
    case CompareOp::Le: return cmp <= 0;
    case CompareOp::Gt: return cmp > 0;
    case CompareOp::Ge: return cmp >= 0;
    }
    return false;
}

bool predicate_matches(const Predicate& p, const WorkRow& row, const RowModel& model,
                       const RegionForest& forest) {
    switch (p.kind) {
    case Predicate::Kind::Compare: {
        const std::size_t col = model.column_of(p.field);
        const Value& v = row.fields[col];
        const FieldType type = model.specs[col].type;
        int cmp = 0;
        if (type == FieldType::Str) {
            const std::string s = format_value(v);
            cmp = s.compare(p.literal.text);
            cmp = cmp < 0 ? -1 : cmp > 0 ? 1 : 0;
        } else if (type == FieldType::Num) {
            const double d = v.index() == 0
                ? static_cast<double>(std::get<std::int64_t>(v))
                : std::get<double>(v);
            cmp = d < p.literal.dvalue ? -1 : d > p.literal.dvalue ? 1 : 0;
        } else {
            const std::int64_t i = std::get<std::int64_t>(v);
            cmp = i < p.literal.ivalue ? -1 : i > p.literal.ivalue ? 1 : 0;
        }
        return compare_matches(p.op, cmp);
    }
    case Predicate::Kind::Like:
        return like_match(format_value(row.fields[model.column_of(p.field)]), p.text);
    case Predicate::Kind::IntersectsLayer:
        return row.has_point && member_of_category(row.point, p.text, forest);
    case Predicate::Kind::WithinRegion:
        return row.has_point && member_of_named(row.point, p.text, forest);
    case Predicate::Kind::InWindow:
        return row.has_point && row.point.x >= p.window.x_min && row.point.x <= p.window.x_max
            && row.point.y >= p.window.y_min && row.point.y <= p.window.y_max
            && interval_overlaps(row.time, p.window.time);
    }
    return false;
}

ResultTable finish(const QueryAst& ast, const RowModel& model, const std::vector<char>& keep) {
    ResultTable table;
    if (ast.select_count) {
        if (ast.group_by) {
            const std::size_t col = model.column_of(*ast.group_by);
            std::map<Value, std::int64_t, bool (*)(const Value&, const Value&)> counts(value_less);
            for (std::size_t i = 0; i < model.rows.size(); ++i) {
                if (keep[i]) ++counts[model.rows[i].fields[col]];
            }
            table.columns = {*ast.group_by, "count"};
            for (const auto& [k, n] : counts) table.rows.push_back({k, n});
        } else {
            std::int64_t n = 0;
            for (std::size_t i = 0; i < model.rows.size(); ++i) {
                if (keep[i]) ++n;
            }
            table.columns = {"count"};
            table.rows.push_back({n});
        }
    } else {
        std::vector<std::size_t> cols;
        if (ast.projection) {
            for (const std::string& f : *ast.projection) cols.push_back(model.column_of(f));
            table.columns = *ast.projection;
        } else {
            for (std::size_t i = 0; i < model.specs.size(); ++i) cols.push_back(i);
            for (const FieldSpec& f : model.specs) table.columns.push_back(f.name);
        }
        for (std::size_t i = 0; i < model.rows.size(); ++i) {
            if (!keep[i]) continue;
            std::vector<Value> out;
            out.reserve(cols.size());
            for (std::size_t c : cols) out.push_back(model.rows[i].fields[c]);
            table.rows.push_back(std::move(out));
        }
    }
    std::sort(table.rows.begin(), table.rows.end(), query_detail::rows_less);
    return table;
}

} // namespace

ResultTable evaluate(const QueryAst& ast, const TrajectoryStore& store) {
    RowModel model = build_rows(ast, store);

    std::vector<char> keep(model.rows.size(), 1);
    const std::int64_t n = static_cast<std::int64_t>(model.rows.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const WorkRow& row = model.rows[static_cast<std::size_t>(i)];
        for (const Predicate& p : ast.predicates) {
            if (!predicate_matches(p, row, model, store.forest())) {
                keep[static_cast<std::size_t>(i)] = 0;
                break;
            }
        }
    }
    return finish(ast, model, keep);
}

} // namespace traj
