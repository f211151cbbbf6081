#ifndef TRAJ_FACTORY_HPP
#define TRAJ_FACTORY_HPP

#include "traj/activity.hpp"
#include "traj/segmentation.hpp"
#include "traj/store.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace traj {

/// The five built-in presentation kinds.
enum class PresentationKind { Raw, Structured, Semantic, Roi, SpaceTimePath };

const char* to_string(PresentationKind kind);
PresentationKind presentation_kind_from_string(const std::string& s);

/// Region-of-interest presentation: a trajectory reduced to its visits.
struct RoiTrajectory {
    std::string object_id;
    std::vector<Visit> visit_list;

    friend bool operator==(const RoiTrajectory&, const RoiTrajectory&) = default;
};

using Presentation =
    std::variant<RawTrajectory, StructuredTrajectory, SemanticTrajectory, RoiTrajectory,
                 SpaceTimePath>;

/// Inputs a builder may need beyond the store.
struct PresentationContext {
    std::optional<SegmentationParams> segmentation;
};

/// Registry of presentation builders, keyed by kind name so new presentations
/// can be registered without touching calling code. The five built-in kinds
/// are pre-registered.
class PresentationFactory {
public:
    using Builder = std::function<Presentation(const TrajectoryStore&, const std::string&,
                                               const PresentationContext&)>;

    PresentationFactory();

    void register_builder(const std::string& kind_name, Builder builder);

    Presentation create(const std::string& kind_name, const std::string& object_id,
                        const TrajectoryStore& store, const PresentationContext& ctx = {}) const;
    Presentation create(PresentationKind kind, const std::string& object_id,
                        const TrajectoryStore& store, const PresentationContext& ctx = {}) const;

private:
    std::map<std::string, Builder> builders_;
};

/// Process-wide factory with the built-in builders.
PresentationFactory& presentation_factory();

/// Convenience wrapper over the shared factory.
Presentation create_presentation(PresentationKind kind, const std::string& object_id,
                                 const TrajectoryStore& store,
                                 const PresentationContext& ctx = {});

} // namespace traj

#endif // TRAJ_FACTORY_HPP
