#include "rigidgas/trajectory.hpp"

#include <cstdio>
#include <ostream>

namespace rigidgas {

namespace {

void row(std::ostream& out, double t, const BodyState& Y, const char* kind, const std::string& phi,
         const std::string& flags) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", t, Y.X.x, Y.X.y, Y.V.x, Y.V.y,
                  Y.Theta, Y.Omega);
    out << buf << kind << ',' << phi << ',' << flags << '\n';
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out) {
    out << "# level=" << rec.level << " seed=" << rec.seed << " replica=" << rec.replica << '\n';
    out << "t,X1,X2,V1,V2,Theta,Omega,event_kind,phi,flags\n";
    const char* sample_kind = rec.level == "ou" ? "ou_sample" : "sample";
    const char* event_kind = rec.level == "jump" ? "jump" : "atom_body";
    auto event_row = [&](const CollisionEntry& e) {
        std::string flags = e.flags.to_string();
        if (e.gated) flags = flags.empty() ? "gated" : flags + "|gated";
        row(out, e.t, e.gated ? e.pre : e.post, event_kind, fmt(e.phi), flags);
    };
    std::size_t c = 0;
    for (const BodySample& s : rec.samples) {
        while (c < rec.collisions.size() && rec.collisions[c].t <= s.t) event_row(rec.collisions[c++]);
        row(out, s.t, s.Y, sample_kind, "", "");
    }
    for (; c < rec.collisions.size(); ++c) event_row(rec.collisions[c]);
    if (rec.killed) {
        const BodyState Y = rec.collisions.empty() ? (rec.samples.empty() ? BodyState{} : rec.samples.back().Y)
                                                   : rec.collisions.back().pre;
        row(out, rec.killed->t, Y, "killed", "", rec.killed->reason);
    }
}

}  // namespace rigidgas
