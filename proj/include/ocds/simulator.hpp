#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ocds/agent.hpp"
#include "ocds/scenario.hpp"

namespace ocds {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides Scenario::seed
  bool trace = false;
  bool strict = false;
  bool effectful_filter = true;
};

struct AssertionResult {
  Tick at;
  std::string kind;  // consistent | state | shared
  bool pass = false;
  std::string detail;
  std::size_t line = 0;
};

/// A scripted local operation as it was executed.
struct IssuedOp {
  std::uint64_t tick = 0;
  PeerId peer;
  OpKind kind = OpKind::Insert;
  Element element = 0;
  bool effectful = false;
  std::optional<Stamp> stamp;  // set iff applied
};

struct TraceEntry {
  Tick at;
  std::string text;
};

struct RunReport {
  std::vector<AssertionResult> assertions;
  std::map<PeerId, ElementSet> final_states;
  std::uint64_t messages = 0;
  std::uint64_t quiescence_tick = 0;
  std::vector<IssuedOp> issued;
  std::vector<std::string> warnings;
  std::vector<TraceEntry> trace;

  bool all_passed() const;
};

/// Deterministic discrete-event run of one scenario.
class Simulator {
 public:
  explicit Simulator(Scenario scenario, RunOptions options = {});

  /// Processes one scripted event or one delivery, or advances the clock.
  /// Returns false once END assertions have run.
  bool step();
  bool quiescent() const;
  bool finished() const noexcept { return phase_ == Phase::Done; }

  std::uint64_t now() const noexcept { return now_; }
  const Agent& agent(const PeerId& id) const;
  bool link_up(const PeerId& a, const PeerId& b) const;
  std::size_t in_flight() const;
  std::size_t buffered() const;

  const RunReport& report() const noexcept { return report_; }
  RunReport take_report();

 private:
  enum class Phase { Timed, EndActions, EndAsserts, Done };

  struct InFlight {
    std::uint64_t deliver_at;
    Message msg;
  };
  struct LinkState {
    LinkDecl decl;
    bool up = true;
    std::deque<InFlight> queue[2];  // [0]: a->b, [1]: b->a
  };

  Agent& agent_mut(const PeerId& id);
  void execute(const SimEvent& ev);
  void flush();
  bool deliver_one();
  std::optional<std::uint64_t> next_delivery_tick() const;
  void reshuffle_service_order();
  void note(std::string text);
  void record_assertion(const SimEvent& ev, std::string kind, bool pass,
                        std::string detail);

  Scenario scenario_;
  RunOptions options_;
  std::map<PeerId, Agent> agents_;
  std::vector<LinkState> links_;
  std::vector<std::size_t> timed_;  // indices into scenario_.events, tick order
  std::vector<std::size_t> end_actions_;
  std::vector<std::size_t> end_asserts_;
  std::size_t cursor_ = 0;
  Phase phase_ = Phase::Timed;
  std::uint64_t now_ = 0;
  std::mt19937_64 rng_;
  std::uint64_t seed_ = 0;
  std::vector<std::pair<std::size_t, int>> service_order_;
  RunReport report_;
};

RunReport run(const Scenario& scenario, const RunOptions& options = {});

using LinkKey = std::pair<PeerId, PeerId>;  // declaration order

/// Expected shared view per link after quiescence, computed from the
/// scenario and the run's record of issued local operations. Throws
/// ScenarioError when preconditions fail (asymmetric link, partition left
/// unhealed, initially inconsistent link).
std::map<LinkKey, SharedView> oracle_final_views(
    const Scenario& scenario, const std::vector<IssuedOp>& issued);

/// Observed shared view per link from final states (a's side).
std::map<LinkKey, SharedView> observed_views(
    const Scenario& scenario, const std::map<PeerId, ElementSet>& finals);

}  // namespace ocds
