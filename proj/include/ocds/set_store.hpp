#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "ocds/core.hpp"

namespace ocds {

/// Mutable set of elements with effectful application of operations.
///
/// Implementations differ in representation only; any two stores that
/// saw the same operation history hold the same snapshot.
class SetStore {
 public:
  virtual ~SetStore() = default;

  /// Applies `op` and reports whether membership changed. Insert of a
  /// present element, delete of an absent one, and identity are no-ops.
  bool apply_effectful(const Operation& op);

  virtual bool contains(Element e) const = 0;
  /// Current membership in ascending order.
  virtual std::vector<Element> snapshot() const = 0;
  virtual std::size_t size() const = 0;
  virtual std::string_view kind_name() const = 0;
  virtual std::unique_ptr<SetStore> clone() const = 0;

 protected:
  virtual bool insert(Element e) = 0;
  virtual bool erase(Element e) = 0;
};

class SortedSetStore final : public SetStore {
 public:
  SortedSetStore() = default;
  explicit SortedSetStore(std::span<const Element> initial);

  bool contains(Element e) const override;
  std::vector<Element> snapshot() const override { return elements_; }
  std::size_t size() const override { return elements_.size(); }
  std::string_view kind_name() const override { return "sorted"; }
  std::unique_ptr<SetStore> clone() const override;

 protected:
  bool insert(Element e) override;
  bool erase(Element e) override;

 private:
  std::vector<Element> elements_;  // strictly increasing
};

/// Unbalanced binary search tree.
class BstSetStore final : public SetStore {
 public:
  BstSetStore() = default;
  explicit BstSetStore(std::span<const Element> initial);
  BstSetStore(const BstSetStore& other);
  BstSetStore& operator=(const BstSetStore& other);
  BstSetStore(BstSetStore&&) noexcept = default;
  BstSetStore& operator=(BstSetStore&&) noexcept = default;
  ~BstSetStore() override;

  bool contains(Element e) const override;
  std::vector<Element> snapshot() const override;
  std::size_t size() const override { return size_; }
  std::string_view kind_name() const override { return "bst"; }
  std::unique_ptr<SetStore> clone() const override;

  /// Checks the ordering invariant over the whole tree.
  bool valid_bst() const;
  std::size_t height() const;

 protected:
  bool insert(Element e) override;
  bool erase(Element e) override;

 private:
  struct Node {
    Element value;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };

  static std::unique_ptr<Node> copy_tree(const Node* n);

  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

enum class StoreKind { Sorted, Bst };

std::unique_ptr<SetStore> make_store(StoreKind kind,
                                     std::span<const Element> initial = {});

bool stores_equivalent(const SetStore& a, const SetStore& b);

}  // namespace ocds
