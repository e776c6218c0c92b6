#include "spacekam/term.hpp"

#include <atomic>
#include <cctype>
#include <utility>
#include <vector>

namespace spacekam {

namespace {

struct NodeInfo {
  VarSet fv;
  std::size_t size;
};

NodeInfo info_of(const Term::Node& node) {
  return std::visit(
      [](const auto& n) -> NodeInfo {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          return {VarSet{n.name}, 1};
        } else if constexpr (std::is_same_v<N, Abs>) {
          VarSet fv = n.body->free_vars();
          fv.erase(n.binder);
          return {std::move(fv), 1 + n.body->size()};
        } else {
          VarSet fv = n.fun->free_vars();
          fv.insert(n.arg->free_vars().begin(), n.arg->free_vars().end());
          return {std::move(fv), 1 + n.fun->size() + n.arg->size()};
        }
      },
      node);
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TermPtr parse() {
    TermPtr t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input");
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (text_.substr(pos_, 2) == "--") {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_lambda() {
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";  // UTF-8 lambda
  }

  bool at_atom_start() {
    if (pos_ >= text_.size()) return false;
    return text_[pos_] == '(' || is_ident_char(text_[pos_]);
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  TermPtr term() {
    skip_ws();
    if (at_lambda()) return abstraction();
    return application();
  }

  TermPtr abstraction() {
    pos_ += text_[pos_] == '\\' ? 1 : 2;
    skip_ws();
    std::string binder = ident();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '.') fail("expected '.'");
    ++pos_;
    return make_abs(std::move(binder), term());
  }

  TermPtr application() {
    skip_ws();
    if (!at_atom_start()) fail("expected term");
    TermPtr acc = atom();
    for (;;) {
      skip_ws();
      if (at_lambda()) return make_app(std::move(acc), abstraction());
      if (!at_atom_start()) return acc;
      acc = make_app(std::move(acc), atom());
    }
  }

  TermPtr atom() {
    if (text_[pos_] == '(') {
      ++pos_;
      TermPtr t = term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    return make_var(ident());
  }
};

void print_into(const Term& t, std::string& out) {
  if (const Var* v = t.as_var()) {
    out += v->name;
  } else if (const Abs* a = t.as_abs()) {
    out += '\\';
    out += a->binder;
    out += '.';
    print_into(*a->body, out);
  } else {
    const App& app = *t.as_app();
    if (app.fun->is_abs()) {
      out += '(';
      print_into(*app.fun, out);
      out += ')';
    } else {
      print_into(*app.fun, out);
    }
    out += ' ';
    if (app.arg->is_var()) {
      print_into(*app.arg, out);
    } else {
      out += '(';
      print_into(*app.arg, out);
      out += ')';
    }
  }
}

std::atomic<unsigned long long> fresh_counter{0};

// Binder stacks for alpha comparison: position of the innermost binding of
// `name`, counted from the outside, or -1 when free.
long find_binding(const std::vector<std::string_view>& binders, std::string_view name) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (binders[i] == name) return static_cast<long>(i);
  }
  return -1;
}

bool alpha_rec(const Term& a, const Term& b, std::vector<std::string_view>& ba,
               std::vector<std::string_view>& bb) {
  if (const Var* va = a.as_var()) {
    const Var* vb = b.as_var();
    if (!vb) return false;
    long ia = find_binding(ba, va->name);
    long ib = find_binding(bb, vb->name);
    if (ia != ib) return false;
    return ia >= 0 || va->name == vb->name;
  }
  if (const Abs* aa = a.as_abs()) {
    const Abs* ab = b.as_abs();
    if (!ab) return false;
    ba.push_back(aa->binder);
    bb.push_back(ab->binder);
    bool eq = alpha_rec(*aa->body, *ab->body, ba, bb);
    ba.pop_back();
    bb.pop_back();
    return eq;
  }
  const App* pa = a.as_app();
  const App* pb = b.as_app();
  if (!pb) return false;
  return alpha_rec(*pa->fun, *pb->fun, ba, bb) && alpha_rec(*pa->arg, *pb->arg, ba, bb);
}

}  // namespace

Term::Term(Node node) : node_(std::move(node)) {
  NodeInfo info = info_of(node_);
  fv_ = std::move(info.fv);
  size_ = info.size;
}

TermPtr make_var(std::string name) { return std::make_shared<const Term>(Var{std::move(name)}); }

TermPtr make_abs(std::string binder, TermPtr body) {
  return std::make_shared<const Term>(Abs{std::move(binder), std::move(body)});
}

TermPtr make_app(TermPtr fun, TermPtr arg) {
  return std::make_shared<const Term>(App{std::move(fun), std::move(arg)});
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

TermPtr parse_term(std::string_view text) { return Parser(text).parse(); }

std::string print_term(const Term& t) {
  std::string out;
  print_into(t, out);
  return out;
}

const VarSet& free_vars(const Term& t) { return t.free_vars(); }

std::string fresh_name(std::string_view base, const VarSet& avoid) {
  for (;;) {
    std::string candidate = std::string(base) + "_" + std::to_string(++fresh_counter);
    if (!avoid.contains(candidate)) return candidate;
  }
}

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& u) {
  if (!t->free_vars().contains(x)) return t;
  if (t->is_var()) return u;
  if (const App* app = t->as_app()) {
    return make_app(subst(app->fun, x, u), subst(app->arg, x, u));
  }
  const Abs& abs = *t->as_abs();
  // x is free in t, so binder != x.
  if (!u->free_vars().contains(abs.binder)) {
    return make_abs(abs.binder, subst(abs.body, x, u));
  }
  VarSet avoid = u->free_vars();
  avoid.insert(abs.body->free_vars().begin(), abs.body->free_vars().end());
  avoid.insert(x);
  std::string renamed = fresh_name(abs.binder, avoid);
  TermPtr body = subst(abs.body, abs.binder, make_var(renamed));
  return make_abs(std::move(renamed), subst(body, x, u));
}

std::optional<TermPtr> whnf_step(const TermPtr& t) {
  std::vector<TermPtr> args;  // innermost argument last
  const Term* head = t.get();
  TermPtr head_ptr = t;
  while (const App* app = head->as_app()) {
    args.push_back(app->arg);
    head_ptr = app->fun;
    head = head_ptr.get();
  }
  const Abs* abs = head->as_abs();
  if (!abs || args.empty()) return std::nullopt;
  TermPtr acc = subst(abs->body, abs->binder, args.back());
  for (std::size_t i = args.size() - 1; i-- > 0;) acc = make_app(std::move(acc), args[i]);
  return acc;
}

WhnfResult whnf_eval(TermPtr t, std::size_t fuel) {
  WhnfResult r{std::move(t), 0, false};
  while (r.steps < fuel) {
    auto next = whnf_step(r.result);
    if (!next) return r;
    r.result = std::move(*next);
    ++r.steps;
  }
  r.exhausted = whnf_step(r.result).has_value();
  return r;
}

bool alpha_eq(const Term& a, const Term& b) {
  std::vector<std::string_view> ba, bb;
  return alpha_rec(a, b, ba, bb);
}

bool syntactic_eq(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  if (const Var* va = a.as_var()) {
    const Var* vb = b.as_var();
    return vb && va->name == vb->name;
  }
  if (const Abs* aa = a.as_abs()) {
    const Abs* ab = b.as_abs();
    return ab && aa->binder == ab->binder && syntactic_eq(*aa->body, *ab->body);
  }
  const App* pa = a.as_app();
  const App* pb = b.as_app();
  return pb && syntactic_eq(*pa->fun, *pb->fun) && syntactic_eq(*pa->arg, *pb->arg);
}

}  // namespace spacekam
