#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ocds/core.hpp"

namespace ocds {

/// Element-wise filter: `true`, `x % k == r`, and/or combinations.
/// Immutable; copies share structure.
class Predicate {
 public:
  struct True {};
  struct Residue {
    std::int64_t modulus;  // > 0
    std::int64_t residue;  // in [0, modulus)
  };
  struct And;
  struct Or;
  struct Node;

  /// The constant-true predicate.
  Predicate();

  static Predicate always();
  /// Throws std::invalid_argument on modulus <= 0 or residue out of range.
  static Predicate residue(std::int64_t modulus, std::int64_t residue);
  static Predicate conj(Predicate lhs, Predicate rhs);
  static Predicate disj(Predicate lhs, Predicate rhs);

  /// Negative elements use the nonnegative residue.
  bool operator()(Element e) const;

  const std::variant<True, Residue, And, Or>& node() const;

  /// Canonical text; parse_predicate(to_string()) is structurally equal.
  std::string to_string() const;

  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  explicit Predicate(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Predicate::And {
  Predicate lhs, rhs;
};
struct Predicate::Or {
  Predicate lhs, rhs;
};
struct Predicate::Node {
  std::variant<True, Residue, And, Or> v;
};

inline const std::variant<Predicate::True, Predicate::Residue, Predicate::And,
                          Predicate::Or>&
Predicate::node() const {
  return node_->v;
}

class PredicateParseError : public std::runtime_error {
 public:
  PredicateParseError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  /// 1-based offset into the predicate text.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Grammar:
///   pred := term ((and|or) term)*        left-assoc, equal precedence
///   term := "true" | "x" "%" INT "==" INT | "(" pred ")"
Predicate parse_predicate(std::string_view text);

bool eval_predicate(const Predicate& p, Element e);

/// A peer's gateway toward a partner: `offer` realizes get, `accept`
/// realizes put.
struct PredicateLens {
  Predicate offer;
  Predicate accept;

  friend bool operator==(const PredicateLens&, const PredicateLens&) = default;
};

using SharedView = ElementSet;

SharedView get_view(const PredicateLens& lens, std::span<const Element> d);

/// (d \ get(d)) ∪ {x ∈ v | accept(x)}
ElementSet put_view(const PredicateLens& lens, std::span<const Element> d,
                    std::span<const Element> v);

struct LawSample {
  ElementSet source;
  SharedView view;
};

struct LawViolation {
  enum class Law { GetPut, PutGet };
  Law law;
  ElementSet source;
  SharedView view;
  ElementSet expected;
  ElementSet actual;
};

struct LawReport {
  bool ok = true;
  std::size_t samples = 0;
  std::vector<LawViolation> counterexamples;
};

/// Checks GetPut and PutGet on every sample. A view holding an element
/// rejected by `offer` cannot round-trip and shows up as a PutGet failure.
LawReport check_well_behaved(const PredicateLens& lens,
                             std::span<const LawSample> samples);

/// Gateway transforms: non-identity output only if the element passes the
/// gate; otherwise the op becomes "!" with its stamps kept.
Operation transform_outbound(const Operation& op, const PredicateLens& lens);
Operation transform_inbound(const Operation& op, const PredicateLens& lens);

/// Elements that flow from `offerer` to `accepter`.
Predicate shared_domain(const PredicateLens& offerer,
                        const PredicateLens& accepter);

/// Both directions of the link share the same elements on [lo, hi].
bool link_symmetric(const PredicateLens& lens_p, const PredicateLens& lens_q,
                    Element lo, Element hi);

/// Sorts and dedups in place.
ElementSet normalize(ElementSet s);

}  // namespace ocds
