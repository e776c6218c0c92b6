#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "spacekam/errors.hpp"

namespace spacekam {

using VarSet = std::set<std::string, std::less<>>;

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  std::string name;
};

struct Abs {
  std::string binder;
  TermPtr body;
};

struct App {
  TermPtr fun;
  TermPtr arg;
};

/// Immutable lambda-term node with named binders. Free variables and the
/// node count are computed once at construction, so sub-terms can be shared
/// freely between terms, closures and machine states.
class Term {
 public:
  using Node = std::variant<Var, Abs, App>;

  explicit Term(Node node);

  const Node& node() const { return node_; }
  const Var* as_var() const { return std::get_if<Var>(&node_); }
  const Abs* as_abs() const { return std::get_if<Abs>(&node_); }
  const App* as_app() const { return std::get_if<App>(&node_); }
  bool is_var() const { return as_var() != nullptr; }
  bool is_abs() const { return as_abs() != nullptr; }
  bool is_app() const { return as_app() != nullptr; }

  const VarSet& free_vars() const { return fv_; }
  bool is_closed() const { return fv_.empty(); }
  std::size_t size() const { return size_; }

 private:
  Node node_;
  VarSet fv_;
  std::size_t size_;
};

TermPtr make_var(std::string name);
TermPtr make_abs(std::string binder, TermPtr body);
TermPtr make_app(TermPtr fun, TermPtr arg);

bool is_identifier(std::string_view s);

/// Parses `term ::= abs | app`, `abs ::= ('\' | 'λ') ident '.' term`,
/// `app ::= atom+`. Application is left-associative and an abstraction body
/// extends as far right as possible; an abstraction may also close an
/// application spine (`f \x.x`). `--` starts a comment. Throws ParseError.
TermPtr parse_term(std::string_view text);

/// Prints with `\` for lambda and minimal parentheses; parse(print(t)) is
/// syntactically identical to t.
std::string print_term(const Term& t);

const VarSet& free_vars(const Term& t);

/// Name derived from `base` that is not in `avoid`, using a process-wide
/// counter suffix.
std::string fresh_name(std::string_view base, const VarSet& avoid);

/// Capture-avoiding t{x:=u}.
TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& u);

/// One weak head step: (\x.t) u r1..rh -> t{x:=u} r1..rh.
std::optional<TermPtr> whnf_step(const TermPtr& t);

struct WhnfResult {
  TermPtr result;
  std::size_t steps = 0;
  bool exhausted = false;
};

WhnfResult whnf_eval(TermPtr t, std::size_t fuel);

bool alpha_eq(const Term& a, const Term& b);

/// Raw, name-sensitive structural equality.
bool syntactic_eq(const Term& a, const Term& b);

}  // namespace spacekam
