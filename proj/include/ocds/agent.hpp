#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ocds/core.hpp"
#include "ocds/lens.hpp"
#include "ocds/set_store.hpp"

namespace ocds {

struct Message {
  PeerId from;
  PeerId to;
  Operation op;  // never identity
};

struct PartnerState {
  PeerId partner;
  PredicateLens lens;
  std::deque<Operation> outbox;
  std::set<OpId> delivered;
};

struct AgentOptions {
  /// Off: every local op is applied and propagated, remote ops skip
  /// arbitration. Only useful to reproduce divergence.
  bool effectful_filter = true;
};

struct LocalResult {
  bool applied = false;
  std::optional<Operation> op;  // set iff applied
};

/// Why a remote operation did or did not change the store.
enum class RemoteOutcome {
  Applied,       // won arbitration, membership changed
  NoEffect,      // won arbitration, membership already matched
  Duplicate,     // OpId already delivered from this partner
  Gated,         // inbound transform produced identity
  LostArbitration,
};

const char* to_string(RemoteOutcome o) noexcept;

struct RemoteResult {
  bool applied = false;
  RemoteOutcome outcome = RemoteOutcome::Duplicate;
};

class AgentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One peer. All calls on an instance must be serialized by the caller.
class Agent {
 public:
  Agent(PeerId id, std::unique_ptr<SetStore> store,
        AgentOptions options = {});

  Agent(const Agent& other);
  Agent& operator=(const Agent& other);
  Agent(Agent&&) noexcept = default;
  Agent& operator=(Agent&&) noexcept = default;

  /// Registers `partner`; `lens` is this agent's gateway toward it.
  void add_partner(const PeerId& partner, PredicateLens lens);

  LocalResult submit_local(OpKind kind, Element e);
  RemoteResult receive_remote(const Message& msg);
  std::vector<Message> drain_outbox(const PeerId& partner);

  const PeerId& id() const noexcept { return id_; }
  const SetStore& store() const noexcept { return *store_; }
  std::uint64_t clock() const noexcept { return clock_; }
  const AgentOptions& options() const noexcept { return options_; }

  bool has_partner(const PeerId& p) const { return partners_.contains(p); }
  const PartnerState& partner(const PeerId& p) const;
  std::vector<PeerId> partner_ids() const;
  std::size_t pending_outbound() const;

  std::optional<Stamp> element_stamp(Element e) const;

 private:
  PartnerState& partner_mut(const PeerId& p);
  void enqueue_outbound(const Operation& op, const PeerId* except);

  PeerId id_;
  std::unique_ptr<SetStore> store_;
  AgentOptions options_;
  std::uint64_t clock_ = 0;
  std::uint64_t next_seq_ = 0;
  std::map<PeerId, PartnerState> partners_;
  std::map<Element, Stamp> element_stamps_;
};

/// Equality of the doubly-filtered shared views of two partners.
/// Throws AgentError if they are not partners.
bool consistent(const Agent& a, const Agent& b);

/// {x in a | a.offer(x) and b.accept(x)}, using the lenses on the a-b link.
SharedView shared_view(const Agent& a, const Agent& b);

}  // namespace ocds
