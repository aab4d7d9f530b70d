#include "ocds/agent.hpp"

#include <algorithm>

namespace ocds {

const char* to_string(RemoteOutcome o) noexcept {
  switch (o) {
    case RemoteOutcome::Applied:
      return "applied";
    case RemoteOutcome::NoEffect:
      return "no-effect";
    case RemoteOutcome::Duplicate:
      return "duplicate";
    case RemoteOutcome::Gated:
      return "gated";
    case RemoteOutcome::LostArbitration:
      return "lost-arbitration";
  }
  return "?";
}

Agent::Agent(PeerId id, std::unique_ptr<SetStore> store, AgentOptions options)
    : id_(std::move(id)), store_(std::move(store)), options_(options) {
  if (!store_) throw AgentError("agent " + id_.name() + " needs a store");
}

Agent::Agent(const Agent& other)
    : id_(other.id_),
      store_(other.store_->clone()),
      options_(other.options_),
      clock_(other.clock_),
      next_seq_(other.next_seq_),
      partners_(other.partners_),
      element_stamps_(other.element_stamps_) {}

Agent& Agent::operator=(const Agent& other) {
  if (this != &other) *this = Agent(other);
  return *this;
}

void Agent::add_partner(const PeerId& partner, PredicateLens lens) {
  if (partner == id_) throw AgentError("agent cannot partner with itself");
  auto [it, inserted] =
      partners_.try_emplace(partner, PartnerState{partner, std::move(lens), {}, {}});
  if (!inserted) {
    throw AgentError("duplicate partner " + partner.name() + " at " +
                     id_.name());
  }
}

const PartnerState& Agent::partner(const PeerId& p) const {
  auto it = partners_.find(p);
  if (it == partners_.end()) {
    throw AgentError("unknown partner " + p.name() + " at " + id_.name());
  }
  return it->second;
}

PartnerState& Agent::partner_mut(const PeerId& p) {
  return const_cast<PartnerState&>(std::as_const(*this).partner(p));
}

std::vector<PeerId> Agent::partner_ids() const {
  std::vector<PeerId> out;
  for (const auto& [id, _] : partners_) out.push_back(id);
  return out;
}

std::size_t Agent::pending_outbound() const {
  std::size_t n = 0;
  for (const auto& [_, ps] : partners_) n += ps.outbox.size();
  return n;
}

std::optional<Stamp> Agent::element_stamp(Element e) const {
  auto it = element_stamps_.find(e);
  if (it == element_stamps_.end()) return std::nullopt;
  return it->second;
}

void Agent::enqueue_outbound(const Operation& op, const PeerId* except) {
  for (auto& [pid, ps] : partners_) {
    if (except && pid == *except) continue;
    Operation out = transform_outbound(op, ps.lens);
    if (!is_identity(out)) ps.outbox.push_back(std::move(out));
  }
}

LocalResult Agent::submit_local(OpKind kind, Element e) {
  if (kind == OpKind::Identity) {
    throw AgentError("local operations must be insert or delete");
  }
  ++clock_;
  Operation op = make_operation(kind, e, id_, clock_, next_seq_);

  if (!options_.effectful_filter) {
    ++next_seq_;
    store_->apply_effectful(op);
    enqueue_outbound(op, nullptr);
    return {true, op};
  }

  if (!store_->apply_effectful(op)) return {false, std::nullopt};
  ++next_seq_;
  element_stamps_.insert_or_assign(e, op.stamp());
  enqueue_outbound(op, nullptr);
  return {true, op};
}

RemoteResult Agent::receive_remote(const Message& msg) {
  if (msg.to != id_) {
    throw AgentError("message for " + msg.to.name() + " delivered to " +
                     id_.name());
  }
  PartnerState& from = partner_mut(msg.from);
  const Operation& op = msg.op;
  clock_ = std::max(clock_, op.lamport()) + 1;

  if (!from.delivered.insert(op_id(op)).second) {
    return {false, RemoteOutcome::Duplicate};
  }
  Operation in = transform_inbound(op, from.lens);
  if (is_identity(in)) return {false, RemoteOutcome::Gated};

  const Element e = *in.element();
  if (options_.effectful_filter) {
    auto it = element_stamps_.find(e);
    if (it != element_stamps_.end() && it->second >= in.stamp()) {
      return {false, RemoteOutcome::LostArbitration};
    }
    element_stamps_.insert_or_assign(e, in.stamp());
  }

  bool changed = store_->apply_effectful(in);
  // Under arbitration every winner is forwarded so that its stamp reaches
  // peers beyond this one even when it changed nothing here.
  if (changed || options_.effectful_filter) enqueue_outbound(in, &msg.from);
  return {changed, changed ? RemoteOutcome::Applied : RemoteOutcome::NoEffect};
}

std::vector<Message> Agent::drain_outbox(const PeerId& partner) {
  PartnerState& ps = partner_mut(partner);
  std::vector<Message> out;
  out.reserve(ps.outbox.size());
  while (!ps.outbox.empty()) {
    out.push_back(Message{id_, partner, std::move(ps.outbox.front())});
    ps.outbox.pop_front();
  }
  return out;
}

SharedView shared_view(const Agent& a, const Agent& b) {
  const PredicateLens& a_lens = a.partner(b.id()).lens;
  const PredicateLens& b_lens = b.partner(a.id()).lens;
  Predicate dom = shared_domain(a_lens, b_lens);
  SharedView out;
  for (Element x : a.store().snapshot()) {
    if (dom(x)) out.push_back(x);
  }
  return out;
}

bool consistent(const Agent& a, const Agent& b) {
  if (!a.has_partner(b.id()) || !b.has_partner(a.id())) {
    throw AgentError(a.id().name() + " and " + b.id().name() +
                     " are not partners");
  }
  return shared_view(a, b) == shared_view(b, a);
}

}  // namespace ocds
