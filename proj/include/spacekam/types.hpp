#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "spacekam/errors.hpp"

namespace spacekam {

class LinearType;
using LinearPtr = std::shared_ptr<const LinearType>;

/// [A1..An]^k with k > 0. Elements are kept sorted, so equality of
/// ClosureMulti values is multiset equality.
class ClosureMulti {
 public:
  /// Throws TypeError when index == 0.
  ClosureMulti(std::vector<LinearPtr> elems, std::uint64_t index);
  static ClosureMulti empty(std::uint64_t index) { return ClosureMulti({}, index); }

  const std::vector<LinearPtr>& elems() const { return elems_; }
  std::uint64_t index() const { return index_; }
  bool is_empty() const { return elems_.empty(); }

 private:
  std::vector<LinearPtr> elems_;
  std::uint64_t index_;
};

struct StarT {};
struct ArrowT {
  ClosureMulti arg;
  LinearPtr res;
};

class LinearType {
 public:
  using Node = std::variant<StarT, ArrowT>;
  explicit LinearType(Node node);

  const Node& node() const { return node_; }
  bool is_star() const { return std::holds_alternative<StarT>(node_); }
  const ArrowT* as_arrow() const { return std::get_if<ArrowT>(&node_); }
  std::uint64_t size() const { return size_; }

 private:
  Node node_;
  std::uint64_t size_;
};

LinearPtr star();
LinearPtr make_arrow(ClosureMulti arg, LinearPtr res);

/// Total structural order; 0 means equal.
int compare(const LinearType& a, const LinearType& b);
int compare(const ClosureMulti& a, const ClosureMulti& b);
bool operator==(const ClosureMulti& a, const ClosureMulti& b);
inline bool type_eq(const LinearType& a, const LinearType& b) { return compare(a, b) == 0; }

using TypeContext = std::map<std::string, ClosureMulti, std::less<>>;

std::uint64_t size_linear(const LinearType& a);
/// Sum of the indices; element sizes are ignored.
std::uint64_t size_context(const TypeContext& g);
bool is_dry(const TypeContext& g);
bool summable(const TypeContext& g, const TypeContext& d);
bool context_equal(const TypeContext& a, const TypeContext& b);

/// Same index required, else NotSummable.
ClosureMulti multi_union(const ClosureMulti& a, const ClosureMulti& b);
TypeContext context_union(const TypeContext& g, const TypeContext& d);

/// Positions in plus.elems() taken by each element of a and of b.
struct SplitWitness {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
};
SplitWitness split_multi(const ClosureMulti& plus, const std::vector<LinearPtr>& a,
                         const std::vector<LinearPtr>& b);

std::string print_type(const LinearType& a);
std::string print_multi(const ClosureMulti& m);
std::string print_context(const TypeContext& g);

// Unindexed multi types for the KAM weight system.

class PlainType;
using PlainPtr = std::shared_ptr<const PlainType>;

class MultiType {
 public:
  MultiType() = default;
  explicit MultiType(std::vector<PlainPtr> elems);
  const std::vector<PlainPtr>& elems() const { return elems_; }
  bool is_empty() const { return elems_.empty(); }

 private:
  std::vector<PlainPtr> elems_;
};

struct PlainArrow {
  MultiType arg;
  PlainPtr res;
};

class PlainType {
 public:
  using Node = std::variant<StarT, PlainArrow>;
  explicit PlainType(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }
  bool is_star() const { return std::holds_alternative<StarT>(node_); }
  const PlainArrow* as_arrow() const { return std::get_if<PlainArrow>(&node_); }

 private:
  Node node_;
};

PlainPtr plain_star();
PlainPtr make_plain_arrow(MultiType arg, PlainPtr res);
int compare(const PlainType& a, const PlainType& b);
int compare(const MultiType& a, const MultiType& b);
bool operator==(const MultiType& a, const MultiType& b);

/// Variables mapped to empty multisets are never stored.
using PlainContext = std::map<std::string, MultiType, std::less<>>;

MultiType multi_union(const MultiType& a, const MultiType& b);
PlainContext context_union(const PlainContext& g, const PlainContext& d);
bool context_equal(const PlainContext& a, const PlainContext& b);

std::string print_type(const PlainType& a);
std::string print_multi(const MultiType& m);
std::string print_context(const PlainContext& g);

}  // namespace spacekam
