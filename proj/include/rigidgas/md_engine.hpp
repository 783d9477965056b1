#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "rigidgas/gibbs.hpp"
#include "rigidgas/params.hpp"
#include "rigidgas/scattering.hpp"
#include "rigidgas/trajectory.hpp"

namespace rigidgas {

enum class RunMode { plain, killed };

struct MdOptions {
    RunMode mode = RunMode::plain;
    double sample_dt = 0.1;
    double contact_tol = 1e-12;     // world units
    double overlap_tol = 1e-9;      // relative to the relevant length scale
    double atoms_per_cell = 4.0;
    bool log_collisions = true;
};

enum class EventKind : std::uint8_t { atom_atom = 0, atom_body = 1, cell_crossing = 2, sample = 3, none = 4 };

struct ProcessedEvent {
    EventKind kind = EventKind::none;
    double t = 0.0;
    int i = -1, j = -1;
};

class MdEngine {
public:
    MdEngine(const SimParams& p, const Configuration& init, const MdOptions& opts = {});

    double time() const { return t_; }
    BodyState body_at(double t) const;
    AtomState atom_at(int i, double t) const;
    Configuration configuration() const;  // everything advanced to time()
    Conserved totals() const;
    double momentum_scale() const;
    bool killed() const { return killed_.has_value(); }
    const std::optional<KillInfo>& kill_info() const { return killed_; }
    const EventCounts& counts() const { return counts_; }
    const std::vector<CollisionEntry>& collision_log() const { return log_; }
    int cells_per_side() const { return M_; }

    // Absolute times of the next contacts, or nothing.
    std::optional<double> predict_atom_atom(int i, int j) const;
    std::optional<double> predict_atom_body(int i, double window_end, double skip = 0.0) const;

    // Process the next valid event with time <= t_stop. Returns kind none (and
    // moves the clock to t_stop) if there is no such event.
    ProcessedEvent step(double t_stop);

    TrajectoryRecord run(double T);

private:
    struct Atom {
        Vec2 x;
        Vec2 v;
        double t = 0.0;  // time at which x is valid
        int cell = 0;
        int slot = 0;         // index inside the cell list
        int exit_dir = -1;    // 0:+x 1:-x 2:+y 3:-y, -1: horizon only
        double t_next = 0.0;  // end of the current prediction window
        std::uint32_t epoch = 0;
    };
    struct Event {
        double t;
        EventKind kind;
        int i, j;
        std::uint32_t ei, ej;
        double phi;
        bool operator>(const Event& o) const {
            if (t != o.t) return t > o.t;
            if (kind != o.kind) return kind > o.kind;
            if (i != o.i) return i > o.i;
            return j > o.j;
        }
    };

    void advance_atom(Atom& a, double t) const;
    Vec2 position(const Atom& a, double t) const;
    void insert_cell(int i, int cell);
    void remove_cell(int i);
    void repredict(int i, double body_skip = 0.0);
    void repredict_body_all(int except);
    void push_body_event(int i, double skip);
    void process_atom_atom(const Event& e);
    bool process_atom_body(const Event& e);
    void process_crossing(const Event& e);
    double horizon_speed(const Atom& a) const;

    SimParams p_;
    MdOptions opts_;
    double t_ = 0.0;
    BodyState body_;  // valid at tb_
    double tb_ = 0.0;
    std::uint32_t body_epoch_ = 0;
    std::vector<Atom> atoms_;
    int M_ = 1;
    double cell_w_ = 1.0;
    std::vector<std::vector<int>> cells_;
    std::vector<std::vector<int>> neighbours_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    double horizon_dist_ = 0.1;
    double v_cap_ = 1.0;      // bound on |V| assumed by the current prediction windows
    double pair_speed_ = 0.0; // extra speed bound when cells do not separate pairs
    std::optional<KillInfo> killed_;
    EventCounts counts_;
    std::vector<CollisionEntry> log_;
    std::vector<BodySample> samples_;
    double next_sample_ = 0.0;
    double sample_end_ = 0.0;
    Conserved initial_;
};

TrajectoryRecord run_md(const SimParams& p, const Configuration& init, double T, const MdOptions& opts = {});

// Fixed-step oracle: within-step exact pair tests, end-of-step body gap test,
// contacts located by bisection. dt <= 0 picks eps*alpha/(200 v_max).
TrajectoryRecord brute_force_run(const SimParams& p, const Configuration& init, double T, double dt,
                                 double sample_dt, Configuration* final_state = nullptr);

}  // namespace rigidgas
