#include "ocds/core.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ocds {

PeerId::PeerId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw std::invalid_argument("peer id must be nonempty");
  if (std::any_of(name_.begin(), name_.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
      })) {
    throw std::invalid_argument("peer id must not contain whitespace: '" +
                                name_ + "'");
  }
}

std::ostream& operator<<(std::ostream& os, const PeerId& id) {
  return os << id.name();
}

const char* to_string(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::Insert:
      return "insert";
    case OpKind::Delete:
      return "delete";
    case OpKind::Identity:
      return "identity";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const Stamp& s) {
  return os << '(' << s.lamport << ',' << s.origin << ')';
}

Operation Operation::as_identity() const {
  return Operation(OpKind::Identity, std::nullopt, origin_, lamport_, seq_);
}

Operation make_operation(OpKind kind, std::optional<Element> element,
                         PeerId origin, std::uint64_t lamport,
                         std::uint64_t seq) {
  if (kind == OpKind::Identity && element) {
    throw std::invalid_argument("identity operation cannot carry an element");
  }
  if (kind != OpKind::Identity && !element) {
    throw std::invalid_argument(std::string(to_string(kind)) +
                                " operation requires an element");
  }
  return Operation(kind, element, std::move(origin), lamport, seq);
}

OpId op_id(const Operation& op) { return OpId{op.origin(), op.seq()}; }

bool is_identity(const Operation& op) noexcept {
  return op.kind() == OpKind::Identity;
}

std::string describe(const Operation& op) {
  switch (op.kind()) {
    case OpKind::Insert:
      return "+" + std::to_string(*op.element());
    case OpKind::Delete:
      return "-" + std::to_string(*op.element());
    case OpKind::Identity:
      return "!";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const Operation& op) {
  return os << describe(op) << '@' << op.stamp() << '#' << op.seq();
}

}  // namespace ocds
