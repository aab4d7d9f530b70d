#include "ocds/set_store.hpp"

#include <algorithm>

namespace ocds {

bool SetStore::apply_effectful(const Operation& op) {
  switch (op.kind()) {
    case OpKind::Insert:
      return insert(*op.element());
    case OpKind::Delete:
      return erase(*op.element());
    case OpKind::Identity:
      return false;
  }
  return false;
}

// --- SortedSetStore ---

SortedSetStore::SortedSetStore(std::span<const Element> initial)
    : elements_(initial.begin(), initial.end()) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()),
                  elements_.end());
}

bool SortedSetStore::contains(Element e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

std::unique_ptr<SetStore> SortedSetStore::clone() const {
  return std::make_unique<SortedSetStore>(*this);
}

bool SortedSetStore::insert(Element e) {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), e);
  if (it != elements_.end() && *it == e) return false;
  elements_.insert(it, e);
  return true;
}

bool SortedSetStore::erase(Element e) {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), e);
  if (it == elements_.end() || *it != e) return false;
  elements_.erase(it);
  return true;
}

// --- BstSetStore ---

BstSetStore::BstSetStore(std::span<const Element> initial) {
  for (Element e : initial) insert(e);
}

BstSetStore::BstSetStore(const BstSetStore& other)
    : root_(copy_tree(other.root_.get())), size_(other.size_) {}

BstSetStore& BstSetStore::operator=(const BstSetStore& other) {
  if (this != &other) {
    root_ = copy_tree(other.root_.get());
    size_ = other.size_;
  }
  return *this;
}

// Iterative teardown; a degenerate (sorted-insert) tree would otherwise
// recurse once per element.
BstSetStore::~BstSetStore() {
  std::vector<std::unique_ptr<Node>> pending;
  if (root_) pending.push_back(std::move(root_));
  while (!pending.empty()) {
    auto n = std::move(pending.back());
    pending.pop_back();
    if (n->left) pending.push_back(std::move(n->left));
    if (n->right) pending.push_back(std::move(n->right));
  }
}

std::unique_ptr<BstSetStore::Node> BstSetStore::copy_tree(const Node* n) {
  if (!n) return nullptr;
  auto out = std::make_unique<Node>(Node{n->value, nullptr, nullptr});
  // Explicit stack of (source, destination) pairs.
  std::vector<std::pair<const Node*, Node*>> stack{{n, out.get()}};
  while (!stack.empty()) {
    auto [src, dst] = stack.back();
    stack.pop_back();
    if (src->left) {
      dst->left = std::make_unique<Node>(Node{src->left->value, nullptr, nullptr});
      stack.emplace_back(src->left.get(), dst->left.get());
    }
    if (src->right) {
      dst->right =
          std::make_unique<Node>(Node{src->right->value, nullptr, nullptr});
      stack.emplace_back(src->right.get(), dst->right.get());
    }
  }
  return out;
}

bool BstSetStore::contains(Element e) const {
  const Node* n = root_.get();
  while (n) {
    if (e == n->value) return true;
    n = e < n->value ? n->left.get() : n->right.get();
  }
  return false;
}

std::vector<Element> BstSetStore::snapshot() const {
  std::vector<Element> out;
  out.reserve(size_);
  std::vector<const Node*> stack;
  const Node* n = root_.get();
  while (n || !stack.empty()) {
    while (n) {
      stack.push_back(n);
      n = n->left.get();
    }
    n = stack.back();
    stack.pop_back();
    out.push_back(n->value);
    n = n->right.get();
  }
  return out;
}

std::unique_ptr<SetStore> BstSetStore::clone() const {
  return std::make_unique<BstSetStore>(*this);
}

bool BstSetStore::valid_bst() const {
  auto in_order = snapshot();
  return in_order.size() == size_ &&
         std::adjacent_find(in_order.begin(), in_order.end(),
                            [](Element a, Element b) { return a >= b; }) ==
             in_order.end();
}

std::size_t BstSetStore::height() const {
  std::size_t best = 0;
  std::vector<std::pair<const Node*, std::size_t>> stack;
  if (root_) stack.emplace_back(root_.get(), 1);
  while (!stack.empty()) {
    auto [n, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    if (n->left) stack.emplace_back(n->left.get(), depth + 1);
    if (n->right) stack.emplace_back(n->right.get(), depth + 1);
  }
  return best;
}

bool BstSetStore::insert(Element e) {
  std::unique_ptr<Node>* slot = &root_;
  while (*slot) {
    if (e == (*slot)->value) return false;
    slot = e < (*slot)->value ? &(*slot)->left : &(*slot)->right;
  }
  *slot = std::make_unique<Node>(Node{e, nullptr, nullptr});
  ++size_;
  return true;
}

bool BstSetStore::erase(Element e) {
  std::unique_ptr<Node>* slot = &root_;
  while (*slot && (*slot)->value != e) {
    slot = e < (*slot)->value ? &(*slot)->left : &(*slot)->right;
  }
  if (!*slot) return false;

  Node& target = **slot;
  if (!target.left) {
    *slot = std::move(target.right);
  } else if (!target.right) {
    *slot = std::move(target.left);
  } else {
    // Replace with in-order successor (leftmost of right subtree).
    std::unique_ptr<Node>* succ = &target.right;
    while ((*succ)->left) succ = &(*succ)->left;
    target.value = (*succ)->value;
    *succ = std::move((*succ)->right);
  }
  --size_;
  return true;
}

std::unique_ptr<SetStore> make_store(StoreKind kind,
                                     std::span<const Element> initial) {
  switch (kind) {
    case StoreKind::Sorted:
      return std::make_unique<SortedSetStore>(initial);
    case StoreKind::Bst:
      return std::make_unique<BstSetStore>(initial);
  }
  return nullptr;
}

bool stores_equivalent(const SetStore& a, const SetStore& b) {
  return a.snapshot() == b.snapshot();
}

}  // namespace ocds
