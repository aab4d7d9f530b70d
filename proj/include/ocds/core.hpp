#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ocds {

using Element = std::int64_t;
/// Sorted, duplicate-free.
using ElementSet = std::vector<Element>;

/// Peer identifier. Nonempty, no whitespace, ordered lexicographically.
class PeerId {
 public:
  PeerId() = default;
  explicit PeerId(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const PeerId&, const PeerId&) = default;
  friend bool operator==(const PeerId&, const PeerId&) = default;

 private:
  std::string name_;
};

std::ostream& operator<<(std::ostream& os, const PeerId& id);

enum class OpKind : std::uint8_t { Insert, Delete, Identity };

const char* to_string(OpKind kind) noexcept;

struct OpId {
  PeerId origin;
  std::uint64_t seq = 0;

  friend auto operator<=>(const OpId&, const OpId&) = default;
  friend bool operator==(const OpId&, const OpId&) = default;
};

/// Arbitration order: lamport first, then origin.
struct Stamp {
  std::uint64_t lamport = 0;
  PeerId origin;

  friend auto operator<=>(const Stamp&, const Stamp&) = default;
  friend bool operator==(const Stamp&, const Stamp&) = default;
};

std::ostream& operator<<(std::ostream& os, const Stamp& s);

class Operation {
 public:
  OpKind kind() const noexcept { return kind_; }
  /// Absent iff kind() == Identity.
  const std::optional<Element>& element() const noexcept { return element_; }
  const PeerId& origin() const noexcept { return origin_; }
  std::uint64_t lamport() const noexcept { return lamport_; }
  std::uint64_t seq() const noexcept { return seq_; }

  Stamp stamp() const { return Stamp{lamport_, origin_}; }

  /// Same origin and stamps, kind Identity, no element. Used when a
  /// gateway suppresses an operation.
  Operation as_identity() const;

  friend bool operator==(const Operation&, const Operation&) = default;

 private:
  friend Operation make_operation(OpKind, std::optional<Element>, PeerId,
                                  std::uint64_t, std::uint64_t);
  Operation(OpKind kind, std::optional<Element> element, PeerId origin,
            std::uint64_t lamport, std::uint64_t seq)
      : kind_(kind),
        element_(element),
        origin_(std::move(origin)),
        lamport_(lamport),
        seq_(seq) {}

  OpKind kind_ = OpKind::Identity;
  std::optional<Element> element_;
  PeerId origin_;
  std::uint64_t lamport_ = 0;
  std::uint64_t seq_ = 0;
};

/// Throws std::invalid_argument unless (kind == Identity) == !element.
Operation make_operation(OpKind kind, std::optional<Element> element,
                         PeerId origin, std::uint64_t lamport,
                         std::uint64_t seq);

OpId op_id(const Operation& op);

bool is_identity(const Operation& op) noexcept;

/// Short form: "+6", "-4", "!".
std::string describe(const Operation& op);

std::ostream& operator<<(std::ostream& os, const Operation& op);

}  // namespace ocds
