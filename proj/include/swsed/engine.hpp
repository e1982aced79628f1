#pragma once

// Staged time-stepping pipeline over row-band partitions.
//
// Each worker thread owns one partition. A step is ten barrier-separated
// phases; the barrier completion step runs the serial glue (dt reduction,
// diagnostics, snapshots, stop decision) and stamps the per-stage clock:
//
//   phase  work (per worker)                         stage
//   0      K1 block counts                           K1
//   1      K2 forces                                 K2
//   2      K3 partial reduction   -> dt              K3
//   3      K4 predictor + ghost columns              K4
//   4      half-state halo pull + ghost rows         K4
//   5      K5 forces                                 K5
//   6      K6 corrector                              K6
//   7      K7 face fluxes                            K7
//   8      K8 update + ghost columns                 K8
//   9      state halo pull + ghost rows  -> t += dt  K8

#include <algorithm>
#include <array>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "swsed/activeblocks.hpp"
#include "swsed/errors.hpp"
#include "swsed/grid.hpp"
#include "swsed/kernels.hpp"
#include "swsed/params.hpp"
#include "swsed/partition.hpp"
#include "swsed/physics.hpp"
#include "swsed/state.hpp"
#include "swsed/timestep.hpp"

namespace swsed {

inline constexpr int stage_count = 8;

inline std::string stage_name(int s) { return "K" + std::to_string(s + 1); }

/// Accumulated wall time per pipeline stage.
struct StageTimings {
  std::array<double, stage_count> seconds{};
  std::int64_t steps = 0;

  double total() const {
    double t = 0.0;
    for (double s : seconds) t += s;
    return t;
  }
  /// Percent share of each stage; all zero when nothing was timed.
  std::array<double, stage_count> shares() const {
    std::array<double, stage_count> out{};
    const double t = total();
    if (t > 0.0)
      for (int s = 0; s < stage_count; ++s) out[static_cast<std::size_t>(s)] = 100.0 * seconds[static_cast<std::size_t>(s)] / t;
    return out;
  }
  StageTimings& operator+=(const StageTimings& o) {
    for (int s = 0; s < stage_count; ++s) seconds[static_cast<std::size_t>(s)] += o.seconds[static_cast<std::size_t>(s)];
    steps += o.steps;
    return *this;
  }
};

struct TimingReport {
  std::array<double, stage_count> shares{};
  int dominant = 0;  ///< stage index, 0 = K1
  bool tie = false;  ///< another stage has exactly the dominant share
  std::string text;
};

/// Per-stage shares with the dominant stage flagged. Ties go to the lowest
/// stage index and are reported as such.
inline TimingReport timing_report(const StageTimings& t) {
  if (t.steps <= 0 || !(t.total() > 0.0)) throw Error("no timed steps");
  TimingReport r;
  r.shares = t.shares();
  for (int s = 1; s < stage_count; ++s)
    if (t.seconds[static_cast<std::size_t>(s)] > t.seconds[static_cast<std::size_t>(r.dominant)]) r.dominant = s;
  for (int s = 0; s < stage_count; ++s)
    if (s != r.dominant && t.seconds[static_cast<std::size_t>(s)] == t.seconds[static_cast<std::size_t>(r.dominant)])
      r.tie = true;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  for (int s = 0; s < stage_count; ++s) {
    os << stage_name(s) << "  " << r.shares[static_cast<std::size_t>(s)] << "%";
    if (s == r.dominant) os << (r.tie ? "  <- dominant (tie)" : "  <- dominant");
    os << '\n';
  }
  r.text = os.str();
  return r;
}

/// Outcome of a run() call.
struct RunReport {
  std::int64_t steps = 0;
  double sim_time = 0.0;
  double wall_seconds = 0.0;
  double throughput = 0.0;  ///< cell updates per wall-clock second
  int workers = 1;
  StageTimings timings;
  std::vector<double> occupancy;  ///< fraction of Euler-active blocks per step
  std::map<std::string, double> metrics;

  std::string to_text() const {
    std::ostringstream os;
    os << "steps        " << steps << '\n'
       << "sim_time     " << sim_time << " s\n"
       << "wall_time    " << wall_seconds << " s\n"
       << "throughput   " << throughput << " cells/s\n"
       << "workers      " << workers << '\n';
    if (!occupancy.empty()) {
      double mean = 0.0;
      for (double o : occupancy) mean += o;
      os << "occupancy    " << mean / static_cast<double>(occupancy.size()) << " (mean active block fraction)\n";
    }
    for (const auto& [k, v] : metrics) os << k << "  " << v << '\n';
    if (timings.steps > 0 && timings.total() > 0.0) os << "stage shares\n" << timing_report(timings).text;
    return os.str();
  }

  std::string to_key_values() const {
    std::ostringstream os;
    os.precision(17);
    os << "steps=" << steps << '\n'
       << "sim_time=" << sim_time << '\n'
       << "wall_seconds=" << wall_seconds << '\n'
       << "throughput_cells_per_s=" << throughput << '\n'
       << "workers=" << workers << '\n';
    const auto shares = timings.shares();
    for (int s = 0; s < stage_count; ++s) {
      os << "stage." << stage_name(s) << ".seconds=" << timings.seconds[static_cast<std::size_t>(s)] << '\n';
      os << "stage." << stage_name(s) << ".share=" << shares[static_cast<std::size_t>(s)] << '\n';
    }
    if (timings.steps > 0 && timings.total() > 0.0)
      os << "stage.dominant=" << stage_name(timing_report(timings).dominant) << '\n';
    for (std::size_t n = 0; n < occupancy.size(); ++n) os << "occupancy." << n << '=' << occupancy[n] << '\n';
    for (const auto& [k, v] : metrics) os << "metric." << k << '=' << v << '\n';
    return os.str();
  }
};

/// Thrown when a step produces a negative depth beyond round-off or a
/// non-finite value. Carries the last state known to be good.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, FlowState last_good, double time, std::int64_t step, std::int64_t cell)
      : Error(what), last_good_(std::move(last_good)), time_(time), step_(step), cell_(cell) {}
  const FlowState& last_good() const { return last_good_; }
  double time() const { return time_; }  ///< time of last_good()
  std::int64_t step() const { return step_; }
  std::int64_t cell() const { return cell_; }

 private:
  FlowState last_good_;
  double time_;
  std::int64_t step_;
  std::int64_t cell_;
};

struct EngineOptions {
  int workers = 1;
  bool dense_sweep = false;  ///< process every block, for oracle comparisons
  double dt_max = 1.0e6;
  std::optional<double> fixed_dt;  ///< bypass the stability controller
  /// Courant number used instead of PhysParams::k_cfl when > 0. Not range
  /// checked, so the controller can be driven past its stability bound.
  double courant_override = 0.0;
  BedExchangeClosure closure;  ///< q+/q- closure; empty means none
};

struct Schedule {
  double t_end = 0.0;
  double snapshot_every = std::numeric_limits<double>::infinity();  ///< simulated seconds
  std::int64_t snapshot_every_steps = 0;                              ///< 0 disables
  std::int64_t max_steps = std::numeric_limits<std::int64_t>::max();
};

using SnapshotSink = std::function<void(double time, std::int64_t step, const FlowState& state)>;

/// Largest particle displacement seen in the last step.
struct ParticleExtent {
  double predictor = 0.0;
  double corrector = 0.0;
};

class Engine {
 public:
  Engine(SimGrid grid, PhysParams params, SourceInputs sources, EngineOptions options = {})
      : grid_(grid), params_(std::move(params)), sources_(std::move(sources)), options_(std::move(options)) {
    grid_.validate();
    params_.validate(!(options_.courant_override > 0.0));
    params_.validate_fields(grid_);
    sources_.validate(grid_);
    if (options_.workers < 1) throw ConfigError("workers must be >= 1");
    if (!(options_.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (options_.fixed_dt && !(*options_.fixed_dt > 0.0)) throw ConfigError("fixed_dt must be positive");
    parts_ = make_partitions(grid_, options_.workers);
    map_ = ActiveBlockMap(grid_);
    load_static();
  }

  Engine(SimGrid grid, PhysParams params, SourceInputs sources, const FlowState& initial, EngineOptions options = {})
      : Engine(grid, std::move(params), std::move(sources), std::move(options)) {
    load(initial);
  }

  /// Replaces the flow state. Momentum in dry cells is discarded.
  void load(const FlowState& s, double time = 0.0, std::int64_t steps = 0) {
    if (!s.H.same_shape(grid_.nx, grid_.ny) || !s.hu.same_shape(grid_.nx, grid_.ny) ||
        !s.hv.same_shape(grid_.nx, grid_.ny) || !s.b.same_shape(grid_.nx, grid_.ny))
      throw ConfigError("state dimensions do not match the grid");
    if (!all_finite(s)) throw DomainError("initial state contains non-finite values");
    for (auto& part : parts_) {
      for (int jl = 0; jl < part.rows(); ++jl) {
        for (int i = 0; i < grid_.nx; ++i) {
          const int j = jl + part.row_begin;
          const std::size_t k = part.at(i, jl);
          const double H = s.H(i, j);
          if (H < 0.0) throw DomainError("initial depth is negative");
          const bool wet = H > params_.eps_dry;
          part.H[k] = H;
          part.hu[k] = wet ? s.hu(i, j) : 0.0;
          part.hv[k] = wet ? s.hv(i, j) : 0.0;
          part.b[k] = s.b(i, j);
        }
      }
      fill_ghost_columns(part, grid_, sources_, FieldSet::state);
    }
    for (auto& part : parts_) pull_neighbors(part, FieldSet::state);
    for (auto& part : parts_) fill_ghost_rows(part, grid_, sources_, FieldSet::state);
    time_ = time;
    steps_ = steps;
    last_good_ = gather();
    last_good_time_ = time_;
    last_good_step_ = steps_;
    map_ = update_counts(last_good_, sources_, grid_, params_.eps_dry);
  }

  FlowState state() const { return gather(); }
  double time() const { return time_; }
  std::int64_t steps() const { return steps_; }
  const SimGrid& grid() const { return grid_; }
  const PhysParams& params() const { return params_; }
  const SourceInputs& sources() const { return sources_; }
  const EngineOptions& options() const { return options_; }
  int workers() const { return static_cast<int>(parts_.size()); }
  const std::vector<Partition>& partitions() const { return parts_; }
  /// Block counts used by the most recent step (or computed at load).
  const ActiveBlockMap& active_map() const { return map_; }
  const DtResult& last_dt() const { return last_dt_; }
  const StageTimings& timings() const { return timings_; }
  ParticleExtent particle_extent() const { return extent_; }

  /// Advances one step of the controller's dt (clipped to dt_max).
  DtResult step() {
    Schedule s;
    s.t_end = std::numeric_limits<double>::infinity();
    s.max_steps = 1;
    run(s);
    return last_dt_;
  }

  /// Advances until t_end (or max_steps more steps). Snapshots go to `sink`;
  /// the final state is always emitted when a sink is given.
  RunReport run(const Schedule& sched, const SnapshotSink& sink = {}) {
    if (sched.t_end < time_ && std::isfinite(sched.t_end)) throw ConfigError("t_end lies before the current time");
    if (!(sched.snapshot_every > 0.0)) throw ConfigError("snapshot_every must be positive");
    RunReport report;
    report.workers = workers();
    const std::int64_t first_step = steps_;
    StageTimings before = timings_;
    const auto wall0 = std::chrono::steady_clock::now();

    RunControl ctl;
    ctl.sched = &sched;
    ctl.sink = &sink;
    ctl.report = &report;
    ctl.step_limit = sched.max_steps == std::numeric_limits<std::int64_t>::max()
                         ? sched.max_steps
                         : steps_ + sched.max_steps;
    ctl.next_snapshot = std::isfinite(sched.snapshot_every) ? time_ + sched.snapshot_every
                                                            : std::numeric_limits<double>::infinity();
    ctl.stop = finished(ctl);
    ctl.phase_start = std::chrono::steady_clock::now();

    if (!ctl.stop) execute(ctl);

    const auto wall1 = std::chrono::steady_clock::now();
    report.steps = steps_ - first_step;
    report.sim_time = time_;
    report.wall_seconds = std::chrono::duration<double>(wall1 - wall0).count();
    report.timings = timings_;
    for (int s = 0; s < stage_count; ++s)
      report.timings.seconds[static_cast<std::size_t>(s)] -= before.seconds[static_cast<std::size_t>(s)];
    report.timings.steps -= before.steps;
    if (report.wall_seconds > 0.0)
      report.throughput = static_cast<double>(report.steps) * static_cast<double>(grid_.cells()) / report.wall_seconds;

    if (ctl.error) std::rethrow_exception(ctl.error);
    const FlowState final_state = gather();
    report.metrics["max_speed"] = max_speed(final_state, params_.eps_dry);
    report.metrics["water_volume"] = water_volume(final_state, grid_.h);
    report.metrics["bed_volume"] = bed_volume(final_state, grid_.h);
    if (sink && !ctl.emitted_final) sink(time_, steps_, final_state);
    return report;
  }

 private:
  struct RunControl {
    const Schedule* sched = nullptr;
    const SnapshotSink* sink = nullptr;
    RunReport* report = nullptr;
    std::int64_t step_limit = 0;
    double next_snapshot = 0.0;
    double dt = 0.0;
    bool dt_hits_end = false;
    bool dt_hits_snapshot = false;
    bool stop = false;
    bool emitted_final = false;
    int phase = 0;
    std::chrono::steady_clock::time_point phase_start;
    std::vector<DtAccumulator> acc;
    std::vector<kernels::StageDiagnostics> diag;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
  };

  static constexpr int phase_count = 10;
  static constexpr std::array<int, phase_count> phase_stage{0, 1, 2, 3, 3, 4, 5, 6, 7, 7};

  bool finished(const RunControl& ctl) const {
    return !(time_ < ctl.sched->t_end) || steps_ >= ctl.step_limit;
  }

  void load_static() {
    const auto mask = source_mask(grid_, sources_);
    Field rate(grid_.nx, grid_.ny, 0.0);
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) rate(i, j) = sources_.rain(i, j);
    for (const auto& p : sources_.points) rate(p.i, p.j) += p.rate / (grid_.h * grid_.h);
    const int h = Partition::halo;
    for (auto& part : parts_) {
      for (int jl = -h; jl < part.rows() + h; ++jl) {
        for (int i = -h; i < grid_.nx + h; ++i) {
          const int gi = std::clamp(i, 0, grid_.nx - 1);
          const int gj = std::clamp(jl + part.row_begin, 0, grid_.ny - 1);
          const bool inside = i == gi && jl + part.row_begin == gj;
          const std::size_t k = part.at(i, jl);
          part.manning[k] = params_.manning(gi, gj);
          part.beta[k] = params_.beta(gi, gj);
          part.source_rate[k] = inside ? rate(gi, gj) : 0.0;
          part.source[k] = inside ? mask(gi, gj) : 0;
        }
      }
    }
  }

  void pull_neighbors(Partition& part, FieldSet set) {
    const int n = static_cast<int>(parts_.size());
    const auto [bottom, top] = ring_neighbors(part.id, n);
    const Partition* below = part.id > 0 ? &parts_[static_cast<std::size_t>(bottom)] : nullptr;
    const Partition* above = part.id < n - 1 ? &parts_[static_cast<std::size_t>(top)] : nullptr;
    pull_halos(part, below, above, set);
  }

  FlowState gather() const {
    FlowState s{Field(grid_.nx, grid_.ny), Field(grid_.nx, grid_.ny), Field(grid_.nx, grid_.ny),
                Field(grid_.nx, grid_.ny)};
    for (const auto& part : parts_) {
      for (int jl = 0; jl < part.rows(); ++jl) {
        for (int i = 0; i < grid_.nx; ++i) {
          const int j = jl + part.row_begin;
          const std::size_t k = part.at(i, jl);
          s.H(i, j) = part.H[k];
          s.hu(i, j) = part.hu[k];
          s.hv(i, j) = part.hv[k];
          s.b(i, j) = part.b[k];
        }
      }
    }
    return s;
  }

  kernels::StageContext context(double dt) const {
    kernels::StageContext c;
    c.grid = &grid_;
    c.params = &params_;
    c.sources = &sources_;
    c.map = &map_;
    c.closure = &options_.closure;
    c.dense = options_.dense_sweep;
    c.dt = dt;
    return c;
  }

  void work(RunControl& ctl, int p) {
    Partition& part = parts_[static_cast<std::size_t>(p)];
    const kernels::StageContext c = context(ctl.dt);
    auto& diag = ctl.diag[static_cast<std::size_t>(p)];
    switch (ctl.phase) {
      case 0: kernels::k1_activity(part, grid_, params_.eps_dry, map_); break;
      case 1: kernels::k2_forces(part, c); break;
      case 2: ctl.acc[static_cast<std::size_t>(p)] = kernels::k3_stability(part, c); break;
      case 3:
        kernels::k4_predictor(part, c, diag);
        fill_ghost_columns(part, grid_, sources_, FieldSet::half);
        break;
      case 4:
        pull_neighbors(part, FieldSet::half);
        fill_ghost_rows(part, grid_, sources_, FieldSet::half);
        break;
      case 5: kernels::k5_forces(part, c); break;
      case 6: kernels::k6_corrector(part, c, diag); break;
      case 7: kernels::k7_fluxes(part, c); break;
      case 8:
        kernels::k8_update(part, c, diag);
        fill_ghost_columns(part, grid_, sources_, FieldSet::state);
        break;
      case 9:
        pull_neighbors(part, FieldSet::state);
        fill_ghost_rows(part, grid_, sources_, FieldSet::state);
        break;
      default: break;
    }
  }

  void fail(RunControl& ctl, std::exception_ptr e) {
    std::lock_guard lock(ctl.error_mutex);
    if (!ctl.error) ctl.error = std::move(e);
    ctl.failed = true;
  }

  /// Serial part of each phase, run by the barrier once all workers arrived.
  void complete(RunControl& ctl) noexcept {
    const auto now = std::chrono::steady_clock::now();
    timings_.seconds[static_cast<std::size_t>(phase_stage[static_cast<std::size_t>(ctl.phase)])] +=
        std::chrono::duration<double>(now - ctl.phase_start).count();
    try {
      if (ctl.error) {
        ctl.stop = true;
      } else if (ctl.phase == 2) {
        choose_dt(ctl);
      } else if (ctl.phase == phase_count - 1) {
        end_step(ctl);
      }
    } catch (...) {
      fail(ctl, std::current_exception());
      ctl.stop = true;
    }
    ctl.phase = (ctl.phase + 1) % phase_count;
    ctl.phase_start = std::chrono::steady_clock::now();
  }

  void choose_dt(RunControl& ctl) {
    DtAccumulator acc;
    for (const auto& a : ctl.acc) acc.merge(a);
    const double k = options_.courant_override > 0.0 ? options_.courant_override : params_.k_cfl;
    DtResult r = acc.finish(k, grid_.h, options_.dt_max);
    if (options_.fixed_dt) r.tau = *options_.fixed_dt;
    double dt = r.tau;
    ctl.dt_hits_end = ctl.dt_hits_snapshot = false;
    if (time_ + dt >= ctl.sched->t_end) {
      dt = ctl.sched->t_end - time_;
      ctl.dt_hits_end = true;
    }
    if (time_ + dt >= ctl.next_snapshot) {
      dt = ctl.next_snapshot - time_;
      ctl.dt_hits_snapshot = true;
    }
    if (!(dt > 0.0)) throw Error("time step collapsed to zero");
    r.tau = dt;
    last_dt_ = r;
    ctl.dt = dt;
  }

  void end_step(RunControl& ctl) {
    const double t_new = ctl.dt_hits_snapshot ? ctl.next_snapshot : (ctl.dt_hits_end ? ctl.sched->t_end : time_ + ctl.dt);
    kernels::StageDiagnostics all;
    ParticleExtent ext;
    for (const auto& d : ctl.diag) {
      ext.predictor = std::max(ext.predictor, d.max_disp_predictor);
      ext.corrector = std::max(ext.corrector, d.max_disp_corrector);
      if (d.unstable) all.flag(d.bad_cell, d.bad_depth);
    }
    extent_ = ext;
    if (all.unstable) {
      std::ostringstream os;
      os << "numerical instability at step " << steps_ + 1 << " (t=" << t_new << "): cell " << all.bad_cell
         << " has depth " << all.bad_depth << " or a non-finite value";
      throw InstabilityError(os.str(), last_good_, last_good_time_, last_good_step_, all.bad_cell);
    }
    time_ = t_new;
    ++steps_;
    ++timings_.steps;
    ctl.report->occupancy.push_back(static_cast<double>(options_.dense_sweep ? map_.size() : map_.euler_active_blocks()) /
                                    static_cast<double>(map_.size()));
    for (auto& d : ctl.diag) d = kernels::StageDiagnostics{};

    const bool by_time = ctl.dt_hits_snapshot;
    const bool by_steps = ctl.sched->snapshot_every_steps > 0 && steps_ % ctl.sched->snapshot_every_steps == 0;
    if (by_time) ctl.next_snapshot += ctl.sched->snapshot_every;
    ctl.stop = finished(ctl);
    if (by_time || by_steps || ctl.stop) {
      FlowState s = gather();
      if (*ctl.sink && (by_time || by_steps)) {
        (*ctl.sink)(time_, steps_, s);
        ctl.emitted_final = ctl.stop;
      }
      last_good_ = std::move(s);
      last_good_time_ = time_;
      last_good_step_ = steps_;
    }
  }

  void execute(RunControl& ctl) {
    const int n = workers();
    ctl.acc.assign(static_cast<std::size_t>(n), DtAccumulator{});
    ctl.diag.assign(static_cast<std::size_t>(n), kernels::StageDiagnostics{});
    ctl.phase = 0;
    auto on_complete = [this, &ctl]() noexcept { complete(ctl); };
    std::barrier sync(n, on_complete);
    auto worker = [&](int p) {
      while (!ctl.stop) {
        if (!ctl.failed) {
          try {
            work(ctl, p);
          } catch (...) {
            fail(ctl, std::current_exception());
          }
        }
        sync.arrive_and_wait();
      }
    };
    if (n == 1) {
      worker(0);
      return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(n - 1));
    for (int p = 1; p < n; ++p) threads.emplace_back(worker, p);
    worker(0);
  }

  SimGrid grid_;
  PhysParams params_;
  SourceInputs sources_;
  EngineOptions options_;
  std::vector<Partition> parts_;
  ActiveBlockMap map_;
  double time_ = 0.0;
  std::int64_t steps_ = 0;
  DtResult last_dt_;
  StageTimings timings_;
  ParticleExtent extent_;
  FlowState last_good_;
  double last_good_time_ = 0.0;
  std::int64_t last_good_step_ = 0;
};

struct RunResult {
  FlowState state;
  RunReport report;
};

/// Runs a scenario from `initial` to sched.t_end.
inline RunResult run(const FlowState& initial, const PhysParams& params, const SimGrid& grid, const Schedule& sched,
                     const SourceInputs& sources = {}, EngineOptions options = {}, const SnapshotSink& sink = {}) {
  Engine e(grid, params, sources, initial, std::move(options));
  RunReport r = e.run(sched, sink);
  return {e.state(), std::move(r)};
}

struct StepResult {
  FlowState state;
  DtResult dt;
  ActiveBlockMap active;
};

/// One pipeline step from `state`, single worker.
inline StepResult step(const FlowState& state, const PhysParams& params, const SimGrid& grid,
                       const SourceInputs& sources = {}, EngineOptions options = {}) {
  Engine e(grid, params, sources, state, std::move(options));
  const DtResult dt = e.step();
  return {e.state(), dt, e.active_map()};
}

}  // namespace swsed
