#include "traj/pipeline.hpp"

#include <exception>

namespace traj {

std::size_t run_segmentation(TrajectoryStore& store, const SegmentationParams& params,
                             const std::optional<std::string>& object) {
    std::vector<std::string> objects;
    if (object) {
        objects.push_back(*object);
    } else {
        objects = store.raw_object_ids();
        if (objects.empty()) {
            throw ArgumentError("no raw points loaded; run `load-points <file>` first");
        }
    }

    std::vector<RawTrajectory> inputs;
    inputs.reserve(objects.size());
    for (const std::string& obj : objects) inputs.push_back(store.raw_trajectory(obj));

    std::vector<StructuredTrajectory> results(inputs.size());
    std::vector<std::exception_ptr> failures(inputs.size());
    const std::int64_t n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] =
                detect_stops(inputs[static_cast<std::size_t>(i)], params);
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : failures) {
        if (e) std::rethrow_exception(e);
    }
    for (StructuredTrajectory& st : results) store.put_structured(std::move(st));
    return results.size();
}

std::size_t run_annotation(TrajectoryStore& store) {
    if (store.forest().empty()) {
        throw ArgumentError("no regions loaded; run `load-regions <file>` first");
    }
    if (store.structured().empty()) {
        throw ArgumentError("no structured trajectories; "
                            "run `segment --eps <meters> --tau <seconds>` first");
    }

    std::vector<const StructuredTrajectory*> inputs;
    for (const auto& [object, st] : store.structured()) inputs.push_back(&st);

    std::vector<SemanticTrajectory> results(inputs.size());
    std::vector<std::exception_ptr> failures(inputs.size());
    const std::int64_t n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] =
                annotate(*inputs[static_cast<std::size_t>(i)], store.forest());
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : failures) {
        if (e) std::rethrow_exception(e);
    }
    for (SemanticTrajectory& st : results) store.put_semantic(std::move(st));
    return results.size();
}

} // namespace traj
