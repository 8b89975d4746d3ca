#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>

namespace antroute::seedstore {

// Height-balanced binary search tree keyed by 64-bit integers.
//
// Lookup walks down from the root; insertion is the recursive AVL insertion:
// descend, attach a leaf, then on the way back up refresh heights and apply a
// single or double rotation at the first node whose children differ in height
// by more than one. Existing keys are never overwritten. Only whole-tree
// destruction is supported (seeds expire in bulk).
template <typename Record>
class AvlTree {
 public:
  struct Node {
    std::uint64_t key;
    Record record;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
    std::uint8_t height = 1;
  };

  AvlTree() = default;
  AvlTree(AvlTree&&) noexcept = default;
  AvlTree& operator=(AvlTree&&) noexcept = default;
  AvlTree(const AvlTree&) = delete;
  AvlTree& operator=(const AvlTree&) = delete;

  const Record* find(std::uint64_t key) const {
    const Node* node = root_.get();
    while (node != nullptr) {
      if (key < node->key) {
        node = node->left.get();
      } else if (key > node->key) {
        node = node->right.get();
      } else {
        return &node->record;
      }
    }
    return nullptr;
  }

  Record* find(std::uint64_t key) {
    return const_cast<Record*>(std::as_const(*this).find(key));
  }

  // Returns false (and leaves the stored record untouched) if key is present.
  bool insert(std::uint64_t key, Record record) {
    bool inserted = false;
    root_ = insert_at(std::move(root_), key, std::move(record), inserted);
    if (inserted) ++size_;
    return inserted;
  }

  void clear() noexcept {
    root_.reset();
    size_ = 0;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  int height() const noexcept { return height_of(root_.get()); }
  const Node* root() const noexcept { return root_.get(); }

  // In-order traversal: f(key, record).
  template <typename F>
  void for_each(F&& f) const {
    visit(root_.get(), f);
  }

  // Full structural check: strict key order, cached heights, AVL balance.
  bool check_invariants() const {
    int h = 0;
    return check(root_.get(), nullptr, nullptr, h);
  }

 private:
  static int height_of(const Node* n) noexcept { return n != nullptr ? n->height : 0; }

  static void refresh(Node& n) noexcept {
    n.height = static_cast<std::uint8_t>(
        1 + std::max(height_of(n.left.get()), height_of(n.right.get())));
  }

  static int balance_of(const Node& n) noexcept {
    return height_of(n.left.get()) - height_of(n.right.get());
  }

  /*
        z            y
       / \          / \
      y   T3  ->  T1   z
     / \              / \
    T1  T2           T2  T3
  */
  static std::unique_ptr<Node> rotate_right(std::unique_ptr<Node> z) {
    auto y = std::move(z->left);
    z->left = std::move(y->right);
    refresh(*z);
    y->right = std::move(z);
    refresh(*y);
    return y;
  }

  static std::unique_ptr<Node> rotate_left(std::unique_ptr<Node> z) {
    auto y = std::move(z->right);
    z->right = std::move(y->left);
    refresh(*z);
    y->left = std::move(z);
    refresh(*y);
    return y;
  }

  static std::unique_ptr<Node> insert_at(std::unique_ptr<Node> node, std::uint64_t key,
                                         Record&& record, bool& inserted) {
    if (!node) {
      inserted = true;
      auto leaf = std::make_unique<Node>();
      leaf->key = key;
      leaf->record = std::move(record);
      return leaf;
    }
    if (key < node->key) {
      node->left = insert_at(std::move(node->left), key, std::move(record), inserted);
    } else if (key > node->key) {
      node->right = insert_at(std::move(node->right), key, std::move(record), inserted);
    } else {
      return node;
    }
    if (!inserted) return node;

    refresh(*node);
    const int balance = balance_of(*node);
    if (balance > 1) {
      if (key > node->left->key) node->left = rotate_left(std::move(node->left));
      return rotate_right(std::move(node));
    }
    if (balance < -1) {
      if (key < node->right->key) node->right = rotate_right(std::move(node->right));
      return rotate_left(std::move(node));
    }
    return node;
  }

  template <typename F>
  static void visit(const Node* n, F& f) {
    if (n == nullptr) return;
    visit(n->left.get(), f);
    f(n->key, n->record);
    visit(n->right.get(), f);
  }

  static bool check(const Node* n, const std::uint64_t* lo, const std::uint64_t* hi, int& h) {
    if (n == nullptr) {
      h = 0;
      return true;
    }
    if ((lo != nullptr && n->key <= *lo) || (hi != nullptr && n->key >= *hi)) return false;
    int hl = 0;
    int hr = 0;
    if (!check(n->left.get(), lo, &n->key, hl)) return false;
    if (!check(n->right.get(), &n->key, hi, hr)) return false;
    if (hl - hr > 1 || hr - hl > 1) return false;
    h = 1 + std::max(hl, hr);
    return h == n->height;
  }

  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

}  // namespace antroute::seedstore
