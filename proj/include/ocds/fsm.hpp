#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace ocds::fsm {

/// Label of the identity operation, present in every machine.
inline constexpr std::string_view kIdentity = "!";

/// Finite state machine with a partial, deterministic transition map.
/// delta(s, "!") == s for every state, implicitly.
class Fsm {
 public:
  Fsm() = default;
  explicit Fsm(std::string name) : name_(std::move(name)) {}

  void add_state(const std::string& s);
  void add_op(const std::string& op);
  /// Throws std::invalid_argument for unknown labels, identity
  /// transitions that move, or a second target for the same (from, op).
  void add_transition(const std::string& from, const std::string& op,
                      const std::string& to);

  std::optional<std::string> delta(const std::string& state,
                                   const std::string& op) const;

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  /// Declared ops plus "!".
  std::vector<std::string> ops() const;
  bool has_state(const std::string& s) const;
  bool has_op(const std::string& op) const;

 private:
  std::string name_;
  std::vector<std::string> states_;
  std::vector<std::string> ops_;
  std::map<std::pair<std::string, std::string>, std::string> delta_;
};

struct HomMap {
  std::map<std::string, std::string> state_map;
  std::map<std::string, std::string> op_map;
};

struct Square {
  std::string state;
  std::string op;
  friend auto operator<=>(const Square&, const Square&) = default;
};

struct HomReport {
  bool ok = true;
  std::vector<Square> violations;
  std::size_t squares_checked = 0;
};

class HomError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Checks delta_b(h(s), h(o)) == h(delta_a(s, o)) for every (s, o) where
/// delta_a is defined. "!" maps to "!" unless h says otherwise. Throws
/// HomError if h misses a state or op of `a` or names labels absent in `b`.
HomReport check_homomorphism(const Fsm& a, const Fsm& b, const HomMap& h);

/// g after h.
HomMap compose(const HomMap& h, const HomMap& g);

HomMap identity_map(const Fsm& m);

struct DoorLight {
  Fsm door;
  Fsm light;
  HomMap door_to_light;
  HomMap light_to_door;
};

/// Door (Open, Close, RingBell) and light (On, Off) machines with the
/// door-to-light mapping and its reverse.
DoorLight door_light_example();

// --- text format ---
//
//   machine <name>
//   states <name> <s1> <s2> ...
//   ops <name> <o1> <o2> ...
//   delta <name> <from> <op> <to>
//   hom <hname> <src> <dst>
//   map-state <hname> <a> <b>
//   map-op <hname> <a> <b|!>
//
// '#' starts a comment.

struct HomDecl {
  std::string name;
  std::string source;
  std::string target;
  HomMap map;
};

struct FsmDocument {
  std::map<std::string, Fsm> machines;
  std::vector<HomDecl> homs;  // declaration order
};

class FsmParseError : public std::runtime_error {
 public:
  FsmParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

FsmDocument parse_fsm_document(std::string_view text);

}  // namespace ocds::fsm
