#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ocds/core.hpp"
#include "ocds/lens.hpp"
#include "ocds/set_store.hpp"

namespace ocds {

/// Absent tick means END: run after quiescence.
using Tick = std::optional<std::uint64_t>;

struct PeerDecl {
  PeerId id;
  StoreKind store = StoreKind::Sorted;
  PredicateLens lens;
  ElementSet initial;

  friend bool operator==(const PeerDecl&, const PeerDecl&) = default;
};

struct LinkDecl {
  PeerId a;
  PeerId b;
  std::uint64_t latency = 1;

  friend bool operator==(const LinkDecl&, const LinkDecl&) = default;
};

struct OpEvent {
  PeerId peer;
  OpKind kind;
  Element element;
  friend bool operator==(const OpEvent&, const OpEvent&) = default;
};
struct PartitionEvent {
  PeerId a, b;
  friend bool operator==(const PartitionEvent&, const PartitionEvent&) = default;
};
struct HealEvent {
  PeerId a, b;
  friend bool operator==(const HealEvent&, const HealEvent&) = default;
};
struct AssertConsistent {
  PeerId a, b;
  friend bool operator==(const AssertConsistent&, const AssertConsistent&) = default;
};
struct AssertState {
  PeerId peer;
  ElementSet expected;
  friend bool operator==(const AssertState&, const AssertState&) = default;
};
struct AssertShared {
  PeerId a, b;
  ElementSet expected;
  friend bool operator==(const AssertShared&, const AssertShared&) = default;
};

using SimAction = std::variant<OpEvent, PartitionEvent, HealEvent,
                               AssertConsistent, AssertState, AssertShared>;

bool is_assertion(const SimAction& a);

struct SimEvent {
  Tick at;
  SimAction action;
  std::size_t line = 0;  // source line, 0 if built in code

  friend bool operator==(const SimEvent& x, const SimEvent& y) {
    return x.at == y.at && x.action == y.action;
  }
};

struct Scenario {
  std::vector<PeerDecl> peers;
  std::vector<LinkDecl> links;
  std::vector<SimEvent> events;  // file order
  std::uint64_t seed = 0;

  const PeerDecl* find_peer(const PeerId& id) const;
  /// Index into links for the unordered pair, or nullopt.
  std::optional<std::size_t> find_link(const PeerId& a, const PeerId& b) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& msg, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg
                                : msg),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Universe used for the asymmetric-link check.
inline constexpr Element kSymmetryUniverseLo = 0;
inline constexpr Element kSymmetryUniverseHi = 10000;

/// Parses and validates the line-oriented scenario format. Throws
/// ScenarioError with the offending line.
Scenario parse_scenario(std::string_view text);

/// Semantic checks; throws ScenarioError. Returns warnings (asymmetric
/// links). Under `strict` the warnings are thrown instead.
std::vector<std::string> validate_scenario(const Scenario& s,
                                           bool strict = false);

/// Canonical text form; parse_scenario(to_text(s)) == s modulo line numbers.
std::string to_text(const Scenario& s);

std::string format_set(std::span<const Element> s);

}  // namespace ocds
