#include "traj/observation.hpp"

#include "traj/error.hpp"

namespace traj {

const char* to_string(DeviceKind kind) {
    switch (kind) {
    case DeviceKind::GPS: return "GPS";
    case DeviceKind::Camera: return "Camera";
    case DeviceKind::CellLocation: return "CellLocation";
    case DeviceKind::EPayment: return "EPayment";
    case DeviceKind::RFID: return "RFID";
    }
    return "?";
}

DeviceKind device_kind_from_string(const std::string& s) {
    if (s == "GPS") return DeviceKind::GPS;
    if (s == "Camera") return DeviceKind::Camera;
    if (s == "CellLocation") return DeviceKind::CellLocation;
    if (s == "EPayment") return DeviceKind::EPayment;
    if (s == "RFID") return DeviceKind::RFID;
    throw ValidationError("unknown device kind: " + s);
}

void validate(const DeviceProxy& d) {
    if (d.device_id.empty()) throw ValidationError("device id must be non-empty");
    if (!(d.reliability >= 0.0 && d.reliability <= 1.0)) {
        throw ValidationError("device " + d.device_id + " reliability must be in [0,1]");
    }
}

void validate(const Observation& o) {
    if (o.id.empty()) throw ValidationError("observation id must be non-empty");
    if (o.event_id.empty()) throw ValidationError("observation " + o.id + " has empty event id");
    if (o.unit.empty()) throw ValidationError("observation " + o.id + " has empty unit");
}

} // namespace traj
