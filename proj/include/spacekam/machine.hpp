#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spacekam/term.hpp"

namespace spacekam {

struct Closure;
using ClosurePtr = std::shared_ptr<const Closure>;

/// Sum of abstract sizes; throws std::overflow_error instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

/// Persistent environment list [x1<-c1]...[xn<-cn], most recent binding
/// first. Copies share structure; the abstract size |e| (closures counted
/// recursively, no sharing) is cached per node.
class Env {
 public:
  struct Entry {
    std::string var;
    ClosurePtr closure;
  };

  Env() = default;
  static Env from_entries(const std::vector<Entry>& entries);

  Env push(std::string var, ClosurePtr closure) const;
  /// First binding of x, or nullptr.
  const ClosurePtr* lookup(std::string_view x) const;

  bool empty() const { return head_ == nullptr; }
  std::size_t length() const;
  std::uint64_t size() const;
  std::vector<Entry> entries() const;
  VarSet domain() const;

  /// Head entry and tail; only valid when non-empty.
  const Entry& front() const { return head_->entry; }
  Env rest() const { return Env(head_->next); }

  template <class F>
  void for_each(F&& f) const {
    for (const Node* n = head_.get(); n != nullptr; n = n->next.get()) f(n->entry);
  }

  bool same_node(const Env& other) const { return head_ == other.head_; }

 private:
  struct Node {
    Entry entry;
    std::shared_ptr<const Node> next;
    std::uint64_t size;
    std::size_t length;
  };
  explicit Env(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
  std::shared_ptr<const Node> head_;
};

struct Closure {
  TermPtr code;
  Env env;

  /// |(t,e)| = 1 + |e|
  std::uint64_t size() const { return checked_add(1, env.size()); }
};

ClosurePtr make_closure(TermPtr code, Env env);

/// Persistent argument stack, top first.
class Stack {
 public:
  Stack() = default;
  static Stack from_items(const std::vector<ClosurePtr>& items);

  Stack push(ClosurePtr c) const;
  const ClosurePtr& top() const { return head_->item; }
  Stack pop() const { return Stack(head_->next); }

  bool empty() const { return head_ == nullptr; }
  std::size_t length() const { return head_ ? head_->length : 0; }
  std::uint64_t size() const { return head_ ? head_->size : 0; }
  std::vector<ClosurePtr> items() const;

 private:
  struct Node {
    ClosurePtr item;
    std::shared_ptr<const Node> next;
    std::uint64_t size;
    std::size_t length;
  };
  explicit Stack(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
  std::shared_ptr<const Node> head_;
};

struct MachState {
  TermPtr code;
  Env env;
  Stack stack;
};

/// |(t,e,S)| = |e| + |S|
std::uint64_t state_size(const MachState& s);

/// Read-back of closures and states into lambda-terms.
TermPtr decode(const Closure& c);
TermPtr decode(const MachState& s);

/// Structural equality (terms compared syntactically).
bool env_equal(const Env& a, const Env& b);
bool closure_equal(const Closure& a, const Closure& b);
bool state_equal(const MachState& a, const MachState& b);

std::string print_env(const Env& e);
std::string print_closure(const Closure& c);
std::string print_state(const MachState& s);

}  // namespace spacekam
