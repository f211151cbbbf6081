#include "traj/segmentation.hpp"

#include <algorithm>

namespace traj {

SegmentationParams::SegmentationParams(double eps_, std::int64_t tau_) : eps(eps_), tau(tau_) {
    if (!(eps > 0.0)) throw ValidationError("segmentation eps must be > 0");
    if (tau <= 0) throw ValidationError("segmentation tau must be > 0");
}

namespace {

SpaceTimeEvent boundary_event(const RawTrajectory& raw, bool is_begin) {
    const RawPoint& rp = is_begin ? raw.points.front() : raw.points.back();
    SpaceTimeEvent e;
    e.id = raw.object_id + (is_begin ? "#begin" : "#end");
    e.object_id = raw.object_id;
    e.spatial = SpatialObject::point(rp.p);
    e.time = TimeInterval(rp.t, rp.t);
    e.device_id = rp.device_id;
    return e;
}

Episode make_stop(const RawTrajectory& raw, std::size_t i, std::size_t j) {
    std::vector<GeoPoint> pts;
    pts.reserve(j - i + 1);
    for (std::size_t k = i; k <= j; ++k) pts.push_back(raw.points[k].p);
    Episode ep;
    ep.kind = EpisodeKind::Stop;
    ep.start_index = i;
    ep.end_index = j;
    ep.time = TimeInterval(raw.points[i].t, raw.points[j].t);
    ep.geometry = SpatialObject::point(centroid(pts));
    return ep;
}

Episode make_move(const RawTrajectory& raw, std::size_t i, std::size_t j) {
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

} // namespace

StructuredTrajectory detect_stops(const RawTrajectory& raw, const SegmentationParams& params) {
    SegmentationParams checked(params.eps, params.tau);
    const std::size_t n = raw.points.size();
    if (n == 0) throw ArgumentError("cannot segment an empty trajectory");

    std::vector<std::pair<std::size_t, std::size_t>> stops;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && distance(raw.points[j + 1].p, raw.points[i].p) <= checked.eps) {
            ++j;
        }
        if (raw.points[j].t.t - raw.points[i].t.t >= checked.tau) {
            stops.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }

    StructuredTrajectory st;
    st.object_id = raw.object_id;
    st.source = raw;
    st.begin = boundary_event(raw, true);
    st.end = boundary_event(raw, false);

    std::size_t cursor = 0;
    for (const auto& [si, sj] : stops) {
        if (cursor < si) st.episodes.push_back(make_move(raw, cursor, si - 1));
        st.episodes.push_back(make_stop(raw, si, sj));
        cursor = sj + 1;
    }
    if (cursor < n) st.episodes.push_back(make_move(raw, cursor, n - 1));

    validate(st);
    return st;
}

SemanticTrajectory annotate(const StructuredTrajectory& st, const RegionForest& forest) {
    validate(st);
    SemanticTrajectory out;
    out.base = st;
    out.annotations.resize(st.episodes.size());

    for (std::size_t k = 0; k < st.episodes.size(); ++k) {
        const Episode& ep = st.episodes[k];
        if (forest.empty()) continue;
        if (ep.kind == EpisodeKind::Stop) {
            auto rid = deepest_region(ep.geometry.as_point(), forest);
            if (!rid) continue;
            const ObjectOfInterest& r = forest.region(*rid);
            out.annotations[k] = EpisodeAnnotation{r.name, r.category, *rid, {*rid}};
        } else {
            std::vector<std::string> crossed;
            for (std::size_t idx = ep.start_index; idx <= ep.end_index; ++idx) {
                auto rid = deepest_region(st.source.points[idx].p, forest);
                if (!rid) continue;
                if (std::find(crossed.begin(), crossed.end(), *rid) == crossed.end()) {
                    crossed.push_back(*rid);
                }
            }
            if (crossed.empty()) continue;
            const ObjectOfInterest& first = forest.region(crossed.front());
            out.annotations[k] = EpisodeAnnotation{first.name, first.category, crossed.front(),
                                                   std::move(crossed)};
        }
    }

    // Begin/End tags come from the first/last episode's place, when known.
    auto tag_for = [&](std::size_t k, SemanticRole role) -> std::optional<SemanticTag> {
        const auto& ann = out.annotations[k];
        if (!ann) return std::nullopt;
        return SemanticTag{ann->place_name, ann->category, role};
    };
    out.base.begin.semantic = tag_for(0, SemanticRole::Begin);
    out.base.end.semantic = tag_for(st.episodes.size() - 1, SemanticRole::End);

    validate(out);
    return out;
}

} // namespace traj
