#include "ocds/fsm.hpp"

#include <algorithm>
#include <sstream>

namespace ocds::fsm {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

void Fsm::add_state(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty state label");
  if (!contains(states_, s)) states_.push_back(s);
}

void Fsm::add_op(const std::string& op) {
  if (op.empty()) throw std::invalid_argument("empty op label");
  if (op == kIdentity) return;
  if (!contains(ops_, op)) ops_.push_back(op);
}

void Fsm::add_transition(const std::string& from, const std::string& op,
                         const std::string& to) {
  if (!has_state(from) || !has_state(to)) {
    throw std::invalid_argument(name_ + ": unknown state in transition " +
                                from + " -" + op + "-> " + to);
  }
  if (!has_op(op)) {
    throw std::invalid_argument(name_ + ": unknown op '" + op + "'");
  }
  if (op == kIdentity) {
    if (from != to) {
      throw std::invalid_argument(name_ + ": identity must not change state");
    }
    return;
  }
  auto [it, inserted] = delta_.try_emplace({from, op}, to);
  if (!inserted && it->second != to) {
    throw std::invalid_argument(name_ + ": nondeterministic transition at (" +
                                from + ", " + op + ")");
  }
}

std::optional<std::string> Fsm::delta(const std::string& state,
                                      const std::string& op) const {
  if (!has_state(state)) return std::nullopt;
  if (op == kIdentity) return state;
  auto it = delta_.find({state, op});
  if (it == delta_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Fsm::ops() const {
  std::vector<std::string> out = ops_;
  out.emplace_back(kIdentity);
  return out;
}

bool Fsm::has_state(const std::string& s) const { return contains(states_, s); }

bool Fsm::has_op(const std::string& op) const {
  return op == kIdentity || contains(ops_, op);
}

HomReport check_homomorphism(const Fsm& a, const Fsm& b, const HomMap& h) {
  for (const auto& s : a.states()) {
    auto it = h.state_map.find(s);
    if (it == h.state_map.end()) {
      throw HomError("mapping is missing state '" + s + "'");
    }
    if (!b.has_state(it->second)) {
      throw HomError("state '" + s + "' maps to unknown state '" + it->second +
                     "' of " + b.name());
    }
  }
  auto map_op = [&](const std::string& op) -> std::string {
    auto it = h.op_map.find(op);
    if (it != h.op_map.end()) return it->second;
    if (op == kIdentity) return std::string(kIdentity);
    throw HomError("mapping is missing op '" + op + "'");
  };
  for (const auto& op : a.ops()) {
    std::string img = map_op(op);
    if (!b.has_op(img)) {
      throw HomError("op '" + op + "' maps to unknown op '" + img + "' of " +
                     b.name());
    }
  }

  HomReport report;
  for (const auto& s : a.states()) {
    for (const auto& op : a.ops()) {
      auto next = a.delta(s, op);
      if (!next) continue;
      ++report.squares_checked;
      auto image = b.delta(h.state_map.at(s), map_op(op));
      if (!image || *image != h.state_map.at(*next)) {
        report.violations.push_back({s, op});
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

HomMap compose(const HomMap& h, const HomMap& g) {
  HomMap out;
  for (const auto& [s, mid] : h.state_map) {
    out.state_map[s] = g.state_map.at(mid);
  }
  for (const auto& [op, mid] : h.op_map) {
    auto it = g.op_map.find(mid);
    out.op_map[op] = it != g.op_map.end()
                         ? it->second
                         : (mid == kIdentity ? std::string(kIdentity)
                                             : g.op_map.at(mid));
  }
  return out;
}

HomMap identity_map(const Fsm& m) {
  HomMap out;
  for (const auto& s : m.states()) out.state_map[s] = s;
  for (const auto& op : m.ops()) out.op_map[op] = op;
  return out;
}

DoorLight door_light_example() {
  DoorLight ex{Fsm("door"), Fsm("light"), {}, {}};

  ex.door.add_state("DoorOpen");
  ex.door.add_state("DoorClosed");
  ex.door.add_op("Open");
  ex.door.add_op("Close");
  ex.door.add_op("RingBell");
  ex.door.add_transition("DoorClosed", "Open", "DoorOpen");
  ex.door.add_transition("DoorOpen", "Close", "DoorClosed");
  // The bell is valid only on a closed door and leaves it closed.
  ex.door.add_transition("DoorClosed", "RingBell", "DoorClosed");

  ex.light.add_state("LightLit");
  ex.light.add_state("LightDim");
  ex.light.add_op("On");
  ex.light.add_op("Off");
  ex.light.add_transition("LightDim", "On", "LightLit");
  ex.light.add_transition("LightLit", "Off", "LightDim");

  ex.door_to_light.state_map = {{"DoorOpen", "LightLit"},
                                {"DoorClosed", "LightDim"}};
  ex.door_to_light.op_map = {{"Open", "On"},
                             {"Close", "Off"},
                             {"RingBell", std::string(kIdentity)},
                             {std::string(kIdentity), std::string(kIdentity)}};

  ex.light_to_door.state_map = {{"LightLit", "DoorOpen"},
                                {"LightDim", "DoorClosed"}};
  ex.light_to_door.op_map = {{"On", "Open"},
                             {"Off", "Close"},
                             {std::string(kIdentity), std::string(kIdentity)}};
  return ex;
}

FsmDocument parse_fsm_document(std::string_view text) {
  FsmDocument doc;
  std::size_t lineno = 0;
  auto machine = [&](const std::string& name) -> Fsm& {
    auto it = doc.machines.find(name);
    if (it == doc.machines.end()) {
      throw FsmParseError("undeclared machine '" + name + "'", lineno);
    }
    return it->second;
  };
  auto hom = [&](const std::string& name) -> HomDecl& {
    for (auto& h : doc.homs) {
      if (h.name == name) return h;
    }
    throw FsmParseError("undeclared hom '" + name + "'", lineno);
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string t; words >> t;) w.push_back(t);
    if (w.empty()) continue;

    auto arity = [&](std::size_t n, const char* form) {
      if (w.size() != n) {
        throw FsmParseError(std::string("expected: ") + form, lineno);
      }
    };
    try {
      const std::string& kw = w[0];
      if (kw == "machine") {
        arity(2, "machine <name>");
        if (!doc.machines.try_emplace(w[1], Fsm(w[1])).second) {
          throw FsmParseError("duplicate machine '" + w[1] + "'", lineno);
        }
      } else if (kw == "states") {
        if (w.size() < 3) throw FsmParseError("expected: states <m> <s>...", lineno);
        Fsm& m = machine(w[1]);
        for (std::size_t i = 2; i < w.size(); ++i) m.add_state(w[i]);
      } else if (kw == "ops") {
        if (w.size() < 3) throw FsmParseError("expected: ops <m> <o>...", lineno);
        Fsm& m = machine(w[1]);
        for (std::size_t i = 2; i < w.size(); ++i) m.add_op(w[i]);
      } else if (kw == "delta") {
        arity(5, "delta <m> <from> <op> <to>");
        machine(w[1]).add_transition(w[2], w[3], w[4]);
      } else if (kw == "hom") {
        arity(4, "hom <name> <src> <dst>");
        machine(w[2]);
        machine(w[3]);
        for (const auto& h : doc.homs) {
          if (h.name == w[1]) {
            throw FsmParseError("duplicate hom '" + w[1] + "'", lineno);
          }
        }
        doc.homs.push_back({w[1], w[2], w[3], {}});
      } else if (kw == "map-state") {
        arity(4, "map-state <hom> <a> <b>");
        if (!hom(w[1]).map.state_map.try_emplace(w[2], w[3]).second) {
          throw FsmParseError("state '" + w[2] + "' mapped twice", lineno);
        }
      } else if (kw == "map-op") {
        arity(4, "map-op <hom> <a> <b>");
        if (!hom(w[1]).map.op_map.try_emplace(w[2], w[3]).second) {
          throw FsmParseError("op '" + w[2] + "' mapped twice", lineno);
        }
      } else {
        throw FsmParseError("unknown statement '" + kw + "'", lineno);
      }
    } catch (const FsmParseError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw FsmParseError(e.what(), lineno);
    }
  }
  return doc;
}

}  // namespace ocds::fsm
