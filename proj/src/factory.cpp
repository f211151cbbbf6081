#include "traj/factory.hpp"

namespace traj {

const char* to_string(PresentationKind kind) {
    switch (kind) {
    case PresentationKind::Raw: return "raw";
    case PresentationKind::Structured: return "structured";
    case PresentationKind::Semantic: return "semantic";
    case PresentationKind::Roi: return "roi";
    case PresentationKind::SpaceTimePath: return "stpath";
    }
    return "?";
}

PresentationKind presentation_kind_from_string(const std::string& s) {
    if (s == "raw") return PresentationKind::Raw;
    if (s == "structured") return PresentationKind::Structured;
    if (s == "semantic") return PresentationKind::Semantic;
    if (s == "roi") return PresentationKind::Roi;
    if (s == "stpath") return PresentationKind::SpaceTimePath;
    throw ArgumentError("unknown presentation kind: " + s
                        + " (expected raw, structured, semantic, roi or stpath)");
}

namespace {

const StructuredTrajectory& materialized_structured(const TrajectoryStore& store,
                                                    const std::string& object_id) {
    auto it = store.structured().find(object_id);
    if (it == store.structured().end()) {
        throw ArgumentError("no structured trajectory for " + object_id
                            + "; segment it first or pass segmentation parameters");
    }
    return it->second;
}

const SemanticTrajectory& materialized_semantic(const TrajectoryStore& store,
                                                const std::string& object_id) {
    auto it = store.semantic().find(object_id);
    if (it == store.semantic().end()) {
        throw ArgumentError("no semantic trajectory for " + object_id + "; annotate it first");
    }
    return it->second;
}

} // namespace

PresentationFactory::PresentationFactory() {
    register_builder(to_string(PresentationKind::Raw),
                     [](const TrajectoryStore& store, const std::string& object_id,
                        const PresentationContext&) -> Presentation {
                         return store.raw_trajectory(object_id);
                     });
    register_builder(to_string(PresentationKind::Structured),
                     [](const TrajectoryStore& store, const std::string& object_id,
                        const PresentationContext& ctx) -> Presentation {
                         if (!ctx.segmentation) {
                             throw ArgumentError(
                                 "structured presentation needs segmentation parameters "
                                 "(eps, tau)");
                         }
                         return detect_stops(store.raw_trajectory(object_id), *ctx.segmentation);
                     });
    register_builder(to_string(PresentationKind::Semantic),
                     [](const TrajectoryStore& store, const std::string& object_id,
                        const PresentationContext& ctx) -> Presentation {
                         if (store.forest().empty()) {
                             throw ArgumentError(
                                 "semantic presentation needs regions; none are loaded");
                         }
                         if (ctx.segmentation) {
                             return annotate(detect_stops(store.raw_trajectory(object_id),
                                                          *ctx.segmentation),
                                             store.forest());
                         }
                         return annotate(materialized_structured(store, object_id),
                                         store.forest());
                     });
    register_builder(to_string(PresentationKind::Roi),
                     [](const TrajectoryStore& store, const std::string& object_id,
                        const PresentationContext&) -> Presentation {
                         if (store.forest().empty()) {
                             throw ArgumentError(
                                 "roi presentation needs regions; none are loaded");
                         }
                         const SemanticTrajectory& sem = materialized_semantic(store, object_id);
                         return RoiTrajectory{object_id, visits(sem, store.forest())};
                     });
    register_builder(to_string(PresentationKind::SpaceTimePath),
                     [](const TrajectoryStore& store, const std::string& object_id,
                        const PresentationContext&) -> Presentation {
                         return store.build_path(object_id);
                     });
}

void PresentationFactory::register_builder(const std::string& kind_name, Builder builder) {
    builders_[kind_name] = std::move(builder);
}

Presentation PresentationFactory::create(const std::string& kind_name,
                                         const std::string& object_id,
                                         const TrajectoryStore& store,
                                         const PresentationContext& ctx) const {
    auto it = builders_.find(kind_name);
    if (it == builders_.end()) {
        throw ArgumentError("unknown presentation kind: " + kind_name);
    }
    return it->second(store, object_id, ctx);
}

Presentation PresentationFactory::create(PresentationKind kind, const std::string& object_id,
                                         const TrajectoryStore& store,
                                         const PresentationContext& ctx) const {
    return create(to_string(kind), object_id, store, ctx);
}

PresentationFactory& presentation_factory() {
    static PresentationFactory factory;
    return factory;
}

Presentation create_presentation(PresentationKind kind, const std::string& object_id,
                                 const TrajectoryStore& store, const PresentationContext& ctx) {
    return presentation_factory().create(kind, object_id, store, ctx);
}

} // namespace traj
