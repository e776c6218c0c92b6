#include "spacekam/machine.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace spacekam {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw std::overflow_error("abstract size overflows 64 bits");
  }
  return a + b;
}

Env Env::from_entries(const std::vector<Entry>& entries) {
  Env e;
  for (std::size_t i = entries.size(); i-- > 0;) e = e.push(entries[i].var, entries[i].closure);
  return e;
}

Env Env::push(std::string var, ClosurePtr closure) const {
  std::uint64_t sz = checked_add(closure->size(), size());
  std::size_t len = length() + 1;
  return Env(std::make_shared<const Node>(Node{{std::move(var), std::move(closure)}, head_, sz, len}));
}

const ClosurePtr* Env::lookup(std::string_view x) const {
  for (const Node* n = head_.get(); n != nullptr; n = n->next.get()) {
    if (n->entry.var == x) return &n->entry.closure;
  }
  return nullptr;
}

std::size_t Env::length() const { return head_ ? head_->length : 0; }
std::uint64_t Env::size() const { return head_ ? head_->size : 0; }

std::vector<Env::Entry> Env::entries() const {
  std::vector<Entry> out;
  out.reserve(length());
  for_each([&](const Entry& e) { out.push_back(e); });
  return out;
}

VarSet Env::domain() const {
  VarSet out;
  for_each([&](const Entry& e) { out.insert(e.var); });
  return out;
}

ClosurePtr make_closure(TermPtr code, Env env) {
  return std::make_shared<const Closure>(Closure{std::move(code), std::move(env)});
}

Stack Stack::from_items(const std::vector<ClosurePtr>& items) {
  Stack s;
  for (std::size_t i = items.size(); i-- > 0;) s = s.push(items[i]);
  return s;
}

Stack Stack::push(ClosurePtr c) const {
  std::uint64_t sz = checked_add(c->size(), size());
  std::size_t len = length() + 1;
  return Stack(std::make_shared<const Node>(Node{std::move(c), head_, sz, len}));
}

std::vector<ClosurePtr> Stack::items() const {
  std::vector<ClosurePtr> out;
  out.reserve(length());
  for (const Node* n = head_.get(); n != nullptr; n = n->next.get()) out.push_back(n->item);
  return out;
}

std::uint64_t state_size(const MachState& s) { return checked_add(s.env.size(), s.stack.size()); }

namespace {

// Decoding memoized per closure object: environments are shared DAGs.
class Decoder {
 public:
  TermPtr closure(const Closure& c) {
    auto it = memo_.find(&c);
    if (it != memo_.end()) return it->second;
    TermPtr t = c.code;
    // [[(t, [x<-c']e)]] = [[(t{x:=[[c']]}, e)]]: the head binding is
    // substituted first, so it shadows later bindings of the same name.
    c.env.for_each([&](const Env::Entry& entry) {
      if (t->free_vars().contains(entry.var)) t = subst(t, entry.var, closure(*entry.closure));
    });
    memo_.emplace(&c, t);
    return t;
  }

 private:
  std::unordered_map<const Closure*, TermPtr> memo_;
};

}  // namespace

TermPtr decode(const Closure& c) { return Decoder().closure(c); }

TermPtr decode(const MachState& s) {
  Decoder d;
  TermPtr t = d.closure(Closure{s.code, s.env});
  for (const ClosurePtr& arg : s.stack.items()) t = make_app(std::move(t), d.closure(*arg));
  return t;
}

bool closure_equal(const Closure& a, const Closure& b) {
  if (&a == &b) return true;
  return syntactic_eq(*a.code, *b.code) && env_equal(a.env, b.env);
}

bool env_equal(const Env& a, const Env& b) {
  if (a.same_node(b)) return true;
  if (a.length() != b.length() || a.size() != b.size()) return false;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].var != eb[i].var) return false;
    if (!closure_equal(*ea[i].closure, *eb[i].closure)) return false;
  }
  return true;
}

bool state_equal(const MachState& a, const MachState& b) {
  if (!syntactic_eq(*a.code, *b.code) || !env_equal(a.env, b.env)) return false;
  auto sa = a.stack.items();
  auto sb = b.stack.items();
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!closure_equal(*sa[i], *sb[i])) return false;
  }
  return true;
}

std::string print_env(const Env& e) {
  if (e.empty()) return "e";
  std::string out;
  bool first = true;
  e.for_each([&](const Env::Entry& entry) {
    if (!first) out += ".";
    first = false;
    out += "[" + entry.var + "<-" + print_closure(*entry.closure) + "]";
  });
  return out;
}

std::string print_closure(const Closure& c) {
  return "(" + print_term(*c.code) + ", " + print_env(c.env) + ")";
}

std::string print_state(const MachState& s) {
  std::string out = "(" + print_term(*s.code) + " | " + print_env(s.env) + " | ";
  auto items = s.stack.items();
  if (items.empty()) out += "e";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ".";
    out += print_closure(*items[i]);
  }
  return out + ")";
}

}  // namespace spacekam
