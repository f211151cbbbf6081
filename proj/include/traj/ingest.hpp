#ifndef TRAJ_INGEST_HPP
#define TRAJ_INGEST_HPP

#include "traj/store.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace traj {

enum class IngestKind { Points, Regions, Devices, Activities, Observations };

const char* to_string(IngestKind kind);

/// Outcome of one file load. Row-level failures never abort a load; they are
/// counted and the first few are reported with their line numbers.
struct IngestReport {
    std::string file;
    std::size_t records_accepted = 0;
    std::size_t records_rejected = 0;
    std::vector<std::pair<std::size_t, std::string>> first_errors; // (line, message), <= 10

    std::string summary() const;
};

/// Loads one file of the given kind into the store.
///
/// Unreadable files and malformed headers raise; malformed rows are counted
/// as rejected. Point events get deterministic ids `<object_id>#<t>`, so
/// re-ingesting a file is idempotent. Activities are auto-attached to their
/// object's events by time (begins at the latest event starting at or before
/// t_begin, ends likewise for t_end).
IngestReport load_file(IngestKind kind, const std::string& path, TrajectoryStore& store);

} // namespace traj

#endif // TRAJ_INGEST_HPP
