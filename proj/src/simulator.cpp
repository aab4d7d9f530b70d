#include "ocds/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace ocds {

namespace {

std::string join_views(const PeerId& a, const SharedView& va, const PeerId& b,
                       const SharedView& vb) {
  return a.name() + "=" + format_set(va) + " " + b.name() + "=" +
         format_set(vb);
}

}  // namespace

bool RunReport::all_passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const AssertionResult& r) { return r.pass; });
}

Simulator::Simulator(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)), options_(options) {
  report_.warnings = validate_scenario(scenario_, options_.strict);
  seed_ = options_.seed.value_or(scenario_.seed);
  rng_.seed(seed_);

  AgentOptions agent_opts{options_.effectful_filter};
  for (const auto& p : scenario_.peers) {
    agents_.emplace(p.id, Agent(p.id, make_store(p.store, p.initial),
                                agent_opts));
  }
  for (const auto& l : scenario_.links) {
    agents_.at(l.a).add_partner(l.b, scenario_.find_peer(l.a)->lens);
    agents_.at(l.b).add_partner(l.a, scenario_.find_peer(l.b)->lens);
    links_.push_back(LinkState{l, true, {}});
  }

  for (std::size_t i = 0; i < scenario_.events.size(); ++i) {
    const auto& ev = scenario_.events[i];
    if (ev.at) {
      timed_.push_back(i);
    } else if (is_assertion(ev.action)) {
      end_asserts_.push_back(i);
    } else {
      end_actions_.push_back(i);
    }
  }
  std::stable_sort(timed_.begin(), timed_.end(), [&](std::size_t x, std::size_t y) {
    return *scenario_.events[x].at < *scenario_.events[y].at;
  });
  reshuffle_service_order();
}

const Agent& Simulator::agent(const PeerId& id) const {
  auto it = agents_.find(id);
  if (it == agents_.end()) {
    throw ScenarioError("unknown peer '" + id.name() + "'", 0);
  }
  return it->second;
}

Agent& Simulator::agent_mut(const PeerId& id) {
  return const_cast<Agent&>(std::as_const(*this).agent(id));
}

bool Simulator::link_up(const PeerId& a, const PeerId& b) const {
  auto idx = scenario_.find_link(a, b);
  if (!idx) throw ScenarioError("no link " + a.name() + " " + b.name(), 0);
  return links_[*idx].up;
}

std::size_t Simulator::in_flight() const {
  std::size_t n = 0;
  for (const auto& l : links_) n += l.queue[0].size() + l.queue[1].size();
  return n;
}

std::size_t Simulator::buffered() const {
  std::size_t n = 0;
  for (const auto& [_, a] : agents_) n += a.pending_outbound();
  return n;
}

bool Simulator::quiescent() const {
  for (const auto& l : links_) {
    if (!l.up) continue;
    if (!l.queue[0].empty() || !l.queue[1].empty()) return false;
    if (!agents_.at(l.decl.a).partner(l.decl.b).outbox.empty()) return false;
    if (!agents_.at(l.decl.b).partner(l.decl.a).outbox.empty()) return false;
  }
  return true;
}

void Simulator::note(std::string text) {
  if (options_.trace) report_.trace.push_back({Tick{now_}, std::move(text)});
}

void Simulator::record_assertion(const SimEvent& ev, std::string kind,
                                 bool pass, std::string detail) {
  note("assert " + kind + (pass ? " PASS " : " FAIL ") + detail);
  report_.assertions.push_back(
      {ev.at, std::move(kind), pass, std::move(detail), ev.line});
}

void Simulator::execute(const SimEvent& ev) {
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, OpEvent>) {
          Agent& ag = agent_mut(a.peer);
          LocalResult r = ag.submit_local(a.kind, a.element);
          IssuedOp rec{now_, a.peer, a.kind, a.element, r.applied,
                       std::nullopt};
          if (r.op) rec.stamp = r.op->stamp();
          report_.issued.push_back(rec);
          std::ostringstream os;
          os << a.peer << " local " << to_string(a.kind) << ' ' << a.element;
          if (r.applied) {
            os << " applied stamp " << r.op->stamp();
          } else {
            os << " discarded (non-effectful)";
          }
          note(os.str());
        } else if constexpr (std::is_same_v<T, PartitionEvent>) {
          links_[*scenario_.find_link(a.a, a.b)].up = false;
          note("partition " + a.a.name() + " " + a.b.name());
        } else if constexpr (std::is_same_v<T, HealEvent>) {
          links_[*scenario_.find_link(a.a, a.b)].up = true;
          note("heal " + a.a.name() + " " + a.b.name());
        } else if constexpr (std::is_same_v<T, AssertConsistent>) {
          const Agent& x = agent(a.a);
          const Agent& y = agent(a.b);
          SharedView vx = shared_view(x, y);
          SharedView vy = shared_view(y, x);
          record_assertion(ev, "consistent", vx == vy,
                           join_views(a.a, vx, a.b, vy));
        } else if constexpr (std::is_same_v<T, AssertState>) {
          ElementSet got = agent(a.peer).store().snapshot();
          record_assertion(ev, "state", got == a.expected,
                           a.peer.name() + "=" + format_set(got) +
                               " expected " + format_set(a.expected));
        } else {
          const Agent& x = agent(a.a);
          const Agent& y = agent(a.b);
          SharedView vx = shared_view(x, y);
          SharedView vy = shared_view(y, x);
          bool pass = vx == a.expected && vy == a.expected;
          record_assertion(ev, "shared", pass,
                           join_views(a.a, vx, a.b, vy) + " expected " +
                               format_set(a.expected));
        }
      },
      ev.action);
}

void Simulator::flush() {
  for (auto& l : links_) {
    if (!l.up) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const PeerId& from = dir == 0 ? l.decl.a : l.decl.b;
      const PeerId& to = dir == 0 ? l.decl.b : l.decl.a;
      for (auto& m : agent_mut(from).drain_outbox(to)) {
        ++report_.messages;
        l.queue[dir].push_back({now_ + l.decl.latency, std::move(m)});
      }
    }
  }
}

void Simulator::reshuffle_service_order() {
  service_order_.clear();
  for (std::size_t i = 0; i < links_.size(); ++i) {
    service_order_.emplace_back(i, 0);
    service_order_.emplace_back(i, 1);
  }
  if (seed_ == 0) return;
  // Fisher-Yates with explicit draws; std::shuffle is not portable.
  for (std::size_t i = service_order_.size(); i > 1; --i) {
    std::size_t j = rng_() % i;
    std::swap(service_order_[i - 1], service_order_[j]);
  }
}

bool Simulator::deliver_one() {
  for (auto [li, dir] : service_order_) {
    auto& l = links_[li];
    if (!l.up || l.queue[dir].empty()) continue;
    if (l.queue[dir].front().deliver_at > now_) continue;
    Message m = std::move(l.queue[dir].front().msg);
    l.queue[dir].pop_front();
    RemoteResult r = agent_mut(m.to).receive_remote(m);
    if (options_.trace) {
      std::ostringstream os;
      os << m.to << " recv " << describe(m.op) << " stamp " << m.op.stamp()
         << " from " << m.from << ": " << to_string(r.outcome);
      note(os.str());
    }
    return true;
  }
  return false;
}

std::optional<std::uint64_t> Simulator::next_delivery_tick() const {
  std::optional<std::uint64_t> best;
  for (const auto& l : links_) {
    if (!l.up) continue;
    for (const auto& q : l.queue) {
      if (q.empty()) continue;
      auto t = std::max(q.front().deliver_at, now_);
      if (!best || t < *best) best = t;
    }
  }
  return best;
}

bool Simulator::step() {
  switch (phase_) {
    case Phase::Done:
      return false;

    case Phase::Timed: {
      if (cursor_ < timed_.size() &&
          *scenario_.events[timed_[cursor_]].at == now_) {
        execute(scenario_.events[timed_[cursor_++]]);
        flush();
        return true;
      }
      if (deliver_one()) {
        flush();
        return true;
      }
      std::optional<std::uint64_t> next = next_delivery_tick();
      if (cursor_ < timed_.size()) {
        auto t = *scenario_.events[timed_[cursor_]].at;
        if (!next || t < *next) next = t;
      }
      if (next) {
        now_ = std::max(*next, now_ + 1);
        reshuffle_service_order();
        return true;
      }
      phase_ = Phase::EndActions;
      return true;
    }

    case Phase::EndActions:
      for (std::size_t i : end_actions_) {
        execute(scenario_.events[i]);
        flush();
      }
      end_actions_.clear();
      if (!quiescent()) {
        // Drain work created by END actions through the timed loop.
        phase_ = Phase::Timed;
        return true;
      }
      phase_ = Phase::EndAsserts;
      return true;

    case Phase::EndAsserts:
      report_.quiescence_tick = now_;
      note("quiescent");
      for (std::size_t i : end_asserts_) execute(scenario_.events[i]);
      for (const auto& [id, a] : agents_) {
        report_.final_states[id] = a.store().snapshot();
      }
      phase_ = Phase::Done;
      return false;
  }
  return false;
}

RunReport Simulator::take_report() { return std::move(report_); }

RunReport run(const Scenario& scenario, const RunOptions& options) {
  Simulator sim(scenario, options);
  while (sim.step()) {
  }
  return sim.take_report();
}

// --- oracle ---

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::map<LinkKey, SharedView> oracle_final_views(
    const Scenario& scenario, const std::vector<IssuedOp>& issued) {
  const auto& peers = scenario.peers;
  auto index_of = [&](const PeerId& id) {
    for (std::size_t i = 0; i < peers.size(); ++i) {
      if (peers[i].id == id) return i;
    }
    throw ScenarioError("oracle: unknown peer '" + id.name() + "'", 0);
  };

  std::set<Element> universe;
  for (const auto& p : peers) universe.insert(p.initial.begin(), p.initial.end());
  for (const auto& op : issued) universe.insert(op.element);

  // Preconditions.
  std::map<std::size_t, bool> link_up;
  // Replays partition/heal in execution order (tick, then file order).
  {
    std::vector<const SimEvent*> order;
    for (const auto& ev : scenario.events) order.push_back(&ev);
    std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) {
      auto kx = x->at ? *x->at : UINT64_MAX;
      auto ky = y->at ? *y->at : UINT64_MAX;
      return kx < ky;
    });
    link_up.clear();
    for (const auto* ev : order) {
      if (const auto* p = std::get_if<PartitionEvent>(&ev->action)) {
        link_up[*scenario.find_link(p->a, p->b)] = false;
      } else if (const auto* h = std::get_if<HealEvent>(&ev->action)) {
        link_up[*scenario.find_link(h->a, h->b)] = true;
      }
    }
    for (const auto& [li, up] : link_up) {
      if (!up) {
        throw ScenarioError("oracle: link " + scenario.links[li].a.name() +
                                " " + scenario.links[li].b.name() +
                                " is never healed",
                            0);
      }
    }
  }

  struct LinkDomain {
    std::size_t a, b;
    Predicate forward;
  };
  std::vector<LinkDomain> domains;
  for (const auto& l : scenario.links) {
    const auto& la = scenario.find_peer(l.a)->lens;
    const auto& lb = scenario.find_peer(l.b)->lens;
    Predicate fwd = shared_domain(la, lb);
    Predicate bwd = shared_domain(lb, la);
    for (Element e : universe) {
      if (fwd(e) != bwd(e)) {
        throw ScenarioError("oracle: link " + l.a.name() + " " + l.b.name() +
                                " is asymmetric at element " +
                                std::to_string(e),
                            0);
      }
    }
    domains.push_back({index_of(l.a), index_of(l.b), std::move(fwd)});
  }

  std::map<LinkKey, SharedView> views;
  for (const auto& l : scenario.links) views[{l.a, l.b}] = {};

  for (Element e : universe) {
    DisjointSets comps(peers.size());
    for (const auto& d : domains) {
      if (d.forward(e)) comps.unite(d.a, d.b);
    }

    // Highest-stamped issuer-effectful op per component.
    std::map<std::size_t, const IssuedOp*> winner;
    for (const auto& op : issued) {
      if (op.element != e || !op.effectful || !op.stamp) continue;
      std::size_t c = comps.find(index_of(op.peer));
      auto& w = winner[c];
      if (!w || *w->stamp < *op.stamp) w = &op;
    }

    for (std::size_t li = 0; li < domains.size(); ++li) {
      const auto& d = domains[li];
      if (!d.forward(e)) continue;
      std::size_t c = comps.find(d.a);
      bool member;
      if (auto it = winner.find(c); it != winner.end()) {
        member = it->second->kind == OpKind::Insert;
      } else {
        const auto& ia = peers[d.a].initial;
        const auto& ib = peers[d.b].initial;
        bool in_a = std::binary_search(ia.begin(), ia.end(), e);
        bool in_b = std::binary_search(ib.begin(), ib.end(), e);
        if (in_a != in_b) {
          throw ScenarioError("oracle: link " + peers[d.a].id.name() + " " +
                                  peers[d.b].id.name() +
                                  " starts inconsistent at element " +
                                  std::to_string(e),
                              0);
        }
        member = in_a;
      }
      if (member) {
        views[{scenario.links[li].a, scenario.links[li].b}].push_back(e);
      }
    }
  }
  // universe iterates in order, so each view is already sorted.
  return views;
}

std::map<LinkKey, SharedView> observed_views(
    const Scenario& scenario, const std::map<PeerId, ElementSet>& finals) {
  std::map<LinkKey, SharedView> out;
  for (const auto& l : scenario.links) {
    Predicate dom = shared_domain(scenario.find_peer(l.a)->lens,
                                  scenario.find_peer(l.b)->lens);
    SharedView v;
    for (Element e : finals.at(l.a)) {
      if (dom(e)) v.push_back(e);
    }
    out[{l.a, l.b}] = std::move(v);
  }
  return out;
}

}  // namespace ocds
