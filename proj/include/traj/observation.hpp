#ifndef TRAJ_OBSERVATION_HPP
#define TRAJ_OBSERVATION_HPP

#include "traj/geometry.hpp"

#include <string>

namespace traj {

/// Capture mechanism behind an event's position fix.
enum class DeviceKind { GPS, Camera, CellLocation, EPayment, RFID };

const char* to_string(DeviceKind kind);
DeviceKind device_kind_from_string(const std::string& s);

/// Static description of a measuring device, with a reliability degree in [0,1].
struct DeviceProxy {
    std::string device_id;
    DeviceKind kind = DeviceKind::GPS;
    double reliability = 1.0;
    std::string description;

    friend bool operator==(const DeviceProxy&, const DeviceProxy&) = default;
};

void validate(const DeviceProxy& d);

/// A measured property attached to an event.
struct Observation {
    std::string id;
    std::string event_id;
    std::string feature;
    double value = 0.0;
    std::string unit;
    TimeInstant time;

    friend bool operator==(const Observation&, const Observation&) = default;
};

void validate(const Observation& o);

} // namespace traj

#endif // TRAJ_OBSERVATION_HPP
