#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rigidgas/params.hpp"
#include "rigidgas/scattering.hpp"

namespace rigidgas {

struct BodySample {
    double t;
    BodyState Y;
};

struct CollisionEntry {
    double t = 0.0;
    double phi = 0.0;
    BodyState pre, post;
    Vec2 v_pre, v_post;  // atom velocity before/after
    PathologyFlags flags;
    bool gated = false;  // jump proposal discarded by the recollision gate
};

struct KillInfo {
    double t;
    std::string reason;
};

struct EventCounts {
    long atom_atom = 0;
    long atom_body = 0;
    long cell_crossing = 0;
    long samples = 0;
    long stale = 0;
    long grazing = 0;
    long proposals = 0;
    long rejected = 0;
};

struct TrajectoryRecord {
    std::string level;        // "md", "jump", "ou", "brute_force"
    std::vector<BodySample> samples;
    std::vector<CollisionEntry> collisions;
    std::optional<KillInfo> killed;
    EventCounts counts;
    double energy_drift = 0.0;    // relative
    double momentum_drift = 0.0;  // relative to the momentum scale alpha*sum|v| + |V|
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

// CSV with columns t,X1,X2,V1,V2,Theta,Omega,event_kind,phi,flags
void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out);

}  // namespace rigidgas
