#include "traj/model.hpp"

namespace traj {

const char* to_string(SemanticRole role) {
    switch (role) {
    case SemanticRole::Begin: return "begin";
    case SemanticRole::End: return "end";
    case SemanticRole::Stop: return "stop";
    case SemanticRole::Move: return "move";
    }
    return "?";
}

const char* to_string(EpisodeKind kind) {
    return kind == EpisodeKind::Stop ? "stop" : "move";
}

void validate(const SemanticTag& tag) {
    if (tag.role != SemanticRole::Move && tag.place_name.empty()) {
        throw ValidationError(std::string("semantic tag with role ") + to_string(tag.role)
                              + " must name a place");
    }
}

void validate(const SpaceTimeEvent& e) {
    if (e.id.empty()) throw ValidationError("event id must be non-empty");
    if (e.object_id.empty()) throw ValidationError("event " + e.id + " has empty object id");
    if (e.semantic) validate(*e.semantic);
    if (e.device_id && e.device_id->empty()) {
        throw ValidationError("event " + e.id + " has empty device id");
    }
}

RawTrajectory validate_raw(const std::string& object_id, std::vector<RawPoint> points) {
    if (object_id.empty()) throw ArgumentError("raw trajectory needs a non-empty object id");
    if (points.empty()) throw ArgumentError("raw trajectory for " + object_id + " has no points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].t <= points[i - 1].t) {
            throw ValidationError("raw trajectory " + object_id
                                  + ": timestamps not strictly increasing at index "
                                  + std::to_string(i));
        }
    }
    return RawTrajectory{object_id, std::move(points)};
}

void validate(const StructuredTrajectory& st) {
    const std::size_t n = st.source.points.size();
    if (st.episodes.empty()) throw ValidationError("structured trajectory has no episodes");
    std::size_t expected = 0;
    for (std::size_t k = 0; k < st.episodes.size(); ++k) {
        const Episode& ep = st.episodes[k];
        if (ep.start_index != expected) {
            throw ValidationError("episodes do not partition the point sequence at episode "
                                  + std::to_string(k));
        }
        if (ep.end_index < ep.start_index || ep.end_index >= n) {
            throw ValidationError("episode " + std::to_string(k) + " has invalid index range");
        }
        if (ep.kind == EpisodeKind::Stop && !ep.geometry.is_point()) {
            throw ValidationError("stop episode " + std::to_string(k) + " must have point geometry");
        }
        if (ep.kind == EpisodeKind::Move && !ep.geometry.is_line()) {
            throw ValidationError("move episode " + std::to_string(k) + " must have line geometry");
        }
        if (k > 0 && ep.kind == EpisodeKind::Move && st.episodes[k - 1].kind == EpisodeKind::Move) {
            throw ValidationError("adjacent move episodes at " + std::to_string(k));
        }
        expected = ep.end_index + 1;
    }
    if (expected != n) {
        throw ValidationError("episodes cover only " + std::to_string(expected) + " of "
                              + std::to_string(n) + " points");
    }
    if (st.begin.time.begin > st.episodes.front().time.begin) {
        throw ValidationError("begin event starts after the first episode");
    }
    if (st.end.time.end < st.episodes.back().time.end) {
        throw ValidationError("end event ends before the last episode");
    }
}

void validate(const SemanticTrajectory& st) {
    validate(st.base);
    if (st.annotations.size() != st.base.episodes.size()) {
        throw ValidationError("annotation list length " + std::to_string(st.annotations.size())
                              + " does not match episode count "
                              + std::to_string(st.base.episodes.size()));
    }
}

SemanticRole episode_role(const StructuredTrajectory& st, std::size_t episode_index) {
    if (episode_index == 0) return SemanticRole::Begin;
    if (episode_index + 1 == st.episodes.size()) return SemanticRole::End;
    return st.episodes[episode_index].kind == EpisodeKind::Stop ? SemanticRole::Stop
                                                                : SemanticRole::Move;
}

std::strong_ordering compare_events(const SpaceTimeEvent& a, const SpaceTimeEvent& b) {
    if (auto c = a.time.begin.t <=> b.time.begin.t; c != 0) return c;
    if (auto c = a.time.end.t <=> b.time.end.t; c != 0) return c;
    return a.id <=> b.id;
}

} // namespace traj
