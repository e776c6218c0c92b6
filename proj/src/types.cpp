#include "spacekam/types.hpp"

#include <algorithm>

#include "spacekam/machine.hpp"

namespace spacekam {

namespace {

template <class P>
void sort_elems(std::vector<P>& v) {
  std::sort(v.begin(), v.end(), [](const P& a, const P& b) { return compare(*a, *b) < 0; });
}

template <class P>
int compare_seq(const std::vector<P>& a, const std::vector<P>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(*a[i], *b[i])) return c;
  }
  return 0;
}

template <class P>
std::vector<P> merge_sorted(const std::vector<P>& a, const std::vector<P>& b) {
  std::vector<P> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const P& x, const P& y) { return compare(*x, *y) < 0; });
  return out;
}

template <class P>
std::string print_elems(const std::vector<P>& elems) {
  std::string out = "[";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += print_type(*elems[i]);
  }
  return out + "]";
}

}  // namespace

ClosureMulti::ClosureMulti(std::vector<LinearPtr> elems, std::uint64_t index)
    : elems_(std::move(elems)), index_(index) {
  if (index_ == 0) throw TypeError("closure multi type with index 0");
  sort_elems(elems_);
}

LinearType::LinearType(Node node) : node_(std::move(node)), size_(0) {
  if (const ArrowT* a = as_arrow()) size_ = checked_add(a->arg.index(), a->res->size());
}

LinearPtr star() {
  static const LinearPtr s = std::make_shared<const LinearType>(StarT{});
  return s;
}

LinearPtr make_arrow(ClosureMulti arg, LinearPtr res) {
  return std::make_shared<const LinearType>(ArrowT{std::move(arg), std::move(res)});
}

int compare(const ClosureMulti& a, const ClosureMulti& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  return compare_seq(a.elems(), b.elems());
}

int compare(const LinearType& a, const LinearType& b) {
  if (&a == &b) return 0;
  const ArrowT* x = a.as_arrow();
  const ArrowT* y = b.as_arrow();
  if (!x || !y) return (x ? 1 : 0) - (y ? 1 : 0);
  if (int c = compare(x->arg, y->arg)) return c;
  return compare(*x->res, *y->res);
}

bool operator==(const ClosureMulti& a, const ClosureMulti& b) { return compare(a, b) == 0; }

std::uint64_t size_linear(const LinearType& a) { return a.size(); }

std::uint64_t size_context(const TypeContext& g) {
  std::uint64_t n = 0;
  for (const auto& [x, m] : g) n = checked_add(n, m.index());
  return n;
}

bool is_dry(const TypeContext& g) {
  return std::all_of(g.begin(), g.end(), [](const auto& kv) { return kv.second.is_empty(); });
}

bool summable(const TypeContext& g, const TypeContext& d) {
  for (const auto& [x, m] : g) {
    auto it = d.find(x);
    if (it != d.end() && it->second.index() != m.index()) return false;
  }
  return true;
}

bool context_equal(const TypeContext& a, const TypeContext& b) { return a == b; }

ClosureMulti multi_union(const ClosureMulti& a, const ClosureMulti& b) {
  if (a.index() != b.index()) {
    throw NotSummable("indices " + std::to_string(a.index()) + " and " + std::to_string(b.index()) +
                      " differ");
  }
  return ClosureMulti(merge_sorted(a.elems(), b.elems()), a.index());
}

TypeContext context_union(const TypeContext& g, const TypeContext& d) {
  TypeContext out = g;
  for (const auto& [x, m] : d) {
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, m);
    } else {
      try {
        it->second = multi_union(it->second, m);
      } catch (const NotSummable& e) {
        throw NotSummable("variable " + x + ": " + e.what());
      }
    }
  }
  return out;
}

SplitWitness split_multi(const ClosureMulti& plus, const std::vector<LinearPtr>& a,
                         const std::vector<LinearPtr>& b) {
  if (a.size() + b.size() != plus.elems().size()) throw BadSplit("element counts do not add up");
  std::vector<bool> used(plus.elems().size(), false);
  auto take = [&](const LinearPtr& t) {
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i] && type_eq(*plus.elems()[i], *t)) {
        used[i] = true;
        return i;
      }
    }
    throw BadSplit("type " + print_type(*t) + " not available in " + print_multi(plus));
  };
  SplitWitness w;
  for (const auto& t : a) w.left.push_back(take(t));
  for (const auto& t : b) w.right.push_back(take(t));
  return w;
}

std::string print_type(const LinearType& a) {
  const ArrowT* arr = a.as_arrow();
  if (!arr) return "*";
  return print_multi(arr->arg) + " -> " + print_type(*arr->res);
}

std::string print_multi(const ClosureMulti& m) {
  return print_elems(m.elems()) + "^" + std::to_string(m.index());
}

std::string print_context(const TypeContext& g) {
  std::string out;
  for (const auto& [x, m] : g) {
    if (!out.empty()) out += ", ";
    out += x + ":" + print_multi(m);
  }
  return out;
}

MultiType::MultiType(std::vector<PlainPtr> elems) : elems_(std::move(elems)) { sort_elems(elems_); }

PlainPtr plain_star() {
  static const PlainPtr s = std::make_shared<const PlainType>(StarT{});
  return s;
}

PlainPtr make_plain_arrow(MultiType arg, PlainPtr res) {
  return std::make_shared<const PlainType>(PlainArrow{std::move(arg), std::move(res)});
}

int compare(const MultiType& a, const MultiType& b) { return compare_seq(a.elems(), b.elems()); }

int compare(const PlainType& a, const PlainType& b) {
  if (&a == &b) return 0;
  const PlainArrow* x = a.as_arrow();
  const PlainArrow* y = b.as_arrow();
  if (!x || !y) return (x ? 1 : 0) - (y ? 1 : 0);
  if (int c = compare(x->arg, y->arg)) return c;
  return compare(*x->res, *y->res);
}

bool operator==(const MultiType& a, const MultiType& b) { return compare(a, b) == 0; }

MultiType multi_union(const MultiType& a, const MultiType& b) {
  return MultiType(merge_sorted(a.elems(), b.elems()));
}

PlainContext context_union(const PlainContext& g, const PlainContext& d) {
  PlainContext out = g;
  for (const auto& [x, m] : d) {
    if (m.is_empty()) continue;
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, m);
    } else {
      it->second = multi_union(it->second, m);
    }
  }
  return out;
}

bool context_equal(const PlainContext& a, const PlainContext& b) { return a == b; }

std::string print_type(const PlainType& a) {
  const PlainArrow* arr = a.as_arrow();
  if (!arr) return "*";
  return print_multi(arr->arg) + " -> " + print_type(*arr->res);
}

std::string print_multi(const MultiType& m) { return print_elems(m.elems()); }

std::string print_context(const PlainContext& g) {
  std::string out;
  for (const auto& [x, m] : g) {
    if (!out.empty()) out += ", ";
    out += x + ":" + print_multi(m);
  }
  return out;
}

}  // namespace spacekam
