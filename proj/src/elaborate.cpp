// Sort inference and elaboration of untyped commands into interned terms.
//
// Terms are first read into preterms whose sorts are union-find variables,
// so that symbols whose sort is only fixed by a later use (context
// variables, undeclared functions, numerals) can be resolved before any
// term is interned.

#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "vtcheck/parser.hpp"

namespace vtcheck {

namespace {

struct Pre {
  enum class K { Var, Num, Bool, App, Binder, Let };
  K k = K::App;
  std::string name;
  Op op = Op::Uf;
  BinderKind binder = BinderKind::Forall;
  Rational value;
  bool truth = false;
  // App: arguments.  Binder: variables then body.  Let: var, value pairs
  // then body.
  std::vector<Pre*> kids;
  int sv = -1;
  Position pos;
};

class SortVars {
 public:
  explicit SortVars(TermStore& store) : store_(store) {}

  int fresh(std::string origin, bool numeric = false) {
    cells_.push_back({static_cast<int>(cells_.size()), SortId{}, numeric, std::move(origin)});
    return static_cast<int>(cells_.size()) - 1;
  }

  int concrete(SortId s, std::string origin) {
    int v = fresh(std::move(origin));
    cells_[v].sort = s;
    return v;
  }

  int find(int v) {
    while (cells_[v].parent != v) {
      cells_[v].parent = cells_[cells_[v].parent].parent;
      v = cells_[v].parent;
    }
    return v;
  }

  void unify(int a, int b, const std::string& what, const Position& pos, std::size_t cmd) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    Cell& ca = cells_[a];
    Cell& cb = cells_[b];
    if (ca.sort.valid() && cb.sort.valid() && ca.sort != cb.sort)
      throw SortError("sort mismatch in " + what + ": " + describe(a) + " vs " + describe(b),
                      pos, cmd);
    SortId s = ca.sort.valid() ? ca.sort : cb.sort;
    bool numeric = ca.numeric || cb.numeric;
    if (numeric && s.valid() && !store_.is_numeric(s))
      throw SortError("sort mismatch in " + what + ": expected a numeric sort, found " +
                          store_.sort(s).name,
                      pos, cmd);
    cb.parent = a;
    ca.sort = s;
    ca.numeric = numeric;
    if (ca.origin.empty()) ca.origin = cb.origin;
  }

  void require_numeric(int a, const std::string& what, const Position& pos, std::size_t cmd) {
    a = find(a);
    Cell& c = cells_[a];
    if (c.sort.valid() && !store_.is_numeric(c.sort))
      throw SortError(what + " expects a numeric sort, found " + store_.sort(c.sort).name, pos,
                      cmd);
    c.numeric = true;
  }

  SortId resolve(int v, const Position& pos, std::size_t cmd) {
    Cell& c = cells_[find(v)];
    if (c.sort.valid()) return c.sort;
    if (c.numeric) return store_.int_sort();
    throw SortError("cannot infer the sort of " + c.origin, pos, cmd);
  }

 private:
  struct Cell {
    int parent;
    SortId sort;
    bool numeric;
    std::string origin;
  };

  std::string describe(int root) {
    const Cell& c = cells_[root];
    if (c.sort.valid()) return store_.sort(c.sort).name;
    return c.numeric ? "a numeric sort" : "an unknown sort";
  }

  TermStore& store_;
  std::vector<Cell> cells_;
};

struct Scope {
  const Scope* parent = nullptr;
  std::unordered_map<std::string, Pre*> vars;
  int id = 0;

  Pre* lookup(const std::string& name) const {
    for (const Scope* s = this; s; s = s->parent)
      if (auto it = s->vars.find(name); it != s->vars.end()) return it->second;
    return nullptr;
  }
};

struct FunInfo {
  std::vector<int> args;
  int result = -1;
  Pre* constant = nullptr;
};

struct PreArg {
  Pre* var = nullptr;  // assignment target
  Pre* term = nullptr;
};

struct PreCommand {
  const RawCommand* raw = nullptr;
  std::size_t number = 0;
  Pre* term = nullptr;
  std::vector<Pre*> clause;
  std::vector<PreArg> args;
  std::vector<PreArg> context;  // var, optional value
  std::vector<Pre*> params;
  int result_sv = -1;
};

bool is_reserved(const std::string& s) {
  return s == "true" || s == "false" || builtin_op(s).has_value() || s == "let" ||
         s == "forall" || s == "exists" || s == "choice" || s == "!" || s == "cl";
}

class Elaborator {
 public:
  Elaborator(TermStore& store, const Declarations* decls) : store_(store), sv_(store) {
    global_.id = next_scope_id_++;
    if (decls) declare(*decls);
  }

  std::vector<ProofCommand> run(const std::vector<RawCommand>& commands) {
    prescan(commands);
    std::vector<PreCommand> pre;
    pre.reserve(commands.size());
    struct Region {
      std::string target;
      Scope* scope;
    };
    std::vector<Region> regions;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const RawCommand& c = commands[i];
      cmd_ = i + 1;
      PreCommand pc;
      pc.raw = &c;
      pc.number = cmd_;
      if (c.kind == RawCommand::Kind::Step && !regions.empty() && regions.back().target == c.index)
        regions.pop_back();
      const Scope* scope = regions.empty() ? &global_ : regions.back().scope;
      switch (c.kind) {
        case RawCommand::Kind::Assume:
          pc.term = walk(c.term, scope);
          expect_bool(pc.term, "assumption " + c.index);
          break;
        case RawCommand::Kind::Step:
          for (const auto& lit : c.clause) {
            Pre* p = walk(lit, scope);
            expect_bool(p, "clause of step " + c.index);
            pc.clause.push_back(p);
          }
          for (const auto& a : c.args) pc.args.push_back(step_arg(a, scope));
          break;
        case RawCommand::Kind::Anchor: {
          Scope* region = new_scope(scope);
          for (const auto& a : c.args) pc.context.push_back(anchor_arg(a, region));
          regions.push_back({c.index, region});
          break;
        }
        case RawCommand::Kind::DefineFun: {
          Scope* params = new_scope(&global_);
          for (const auto& [name, sort] : c.params) {
            Pre* v = make_var(name, sv_.concrete(to_sort(*sort), "parameter '" + name + "'"),
                              sort->pos());
            params->vars[name] = v;
            pc.params.push_back(v);
          }
          pc.result_sv = sv_.concrete(to_sort(*c.result_sort), "'" + c.index + "'");
          pc.term = walk(c.body, params);
          sv_.unify(pc.term->sv, pc.result_sv, "body of '" + c.index + "'", c.pos, cmd_);
          break;
        }
      }
      pre.push_back(std::move(pc));
    }

    std::vector<ProofCommand> out;
    out.reserve(pre.size());
    for (const PreCommand& pc : pre) {
      cmd_ = pc.number;
      try {
        out.push_back(build_command(pc));
      } catch (const Error& e) {
        if (e.command()) throw;
        throw SortError(e.bare_message(), e.position() ? e.position() : pc.raw->pos, cmd_);
      }
    }
    return out;
  }

 private:
  // --- declarations and prescan -------------------------------------------

  void declare(const Declarations& decls) {
    for (const auto& s : decls.sorts) {
      store_.uninterpreted_sort(s);
      sort_names_.insert(s);
    }
    for (const auto& f : decls.funs) {
      if (is_reserved(f.name)) throw SortError("cannot redeclare '" + f.name + "'");
      Rank rank;
      FunInfo info;
      for (const auto& a : f.args) {
        SortId s = to_sort(*a);
        rank.args.push_back(s);
        info.args.push_back(sv_.concrete(s, "'" + f.name + "'"));
      }
      rank.result = to_sort(*f.result);
      info.result = sv_.concrete(rank.result, "'" + f.name + "'");
      store_.declare_fun(f.name, rank);
      funs_[f.name] = std::move(info);
    }
  }

  void prescan(const std::vector<RawCommand>& commands) {
    std::vector<std::string> open;
    for (const auto& c : commands) {
      if (c.kind == RawCommand::Kind::Step && !open.empty() && open.back() == c.index)
        open.pop_back();
      bool top = open.empty();
      auto scan = [&](const SExprPtr& e) {
        std::unordered_set<const SExpr*> seen;
        scan_symbols(*e, top, seen);
      };
      switch (c.kind) {
        case RawCommand::Kind::Assume: scan(c.term); break;
        case RawCommand::Kind::Step:
          for (const auto& l : c.clause) scan(l);
          for (const auto& a : c.args) {
            if (a.sort) collect_sorts(*a.sort);
            scan(a.term);
          }
          break;
        case RawCommand::Kind::Anchor:
          for (const auto& a : c.args) {
            if (a.sort) collect_sorts(*a.sort);
            if (a.term && a.kind != RawArg::Kind::Pair) {
              std::unordered_set<const SExpr*> seen;
              scan_symbols(*a.term, false, seen);
            }
          }
          open.push_back(c.index);
          break;
        case RawCommand::Kind::DefineFun:
          for (const auto& p : c.params) collect_sorts(*p.second);
          collect_sorts(*c.result_sort);
          {
            std::unordered_set<const SExpr*> seen;
            scan_symbols(*c.body, false, seen);
          }
          break;
      }
    }
  }

  void collect_sorts(const SExpr& s) {
    sort_names_.insert(s.is_symbol() ? s.token.text : sexpr_to_string(s));
  }

  // Records symbols used as terms; `top` additionally records them as
  // occurring outside every anchored region.  Bound names are approximated
  // by skipping the declaration lists only.
  void scan_symbols(const SExpr& e, bool top, std::unordered_set<const SExpr*>& seen) {
    if (!seen.insert(&e).second) return;
    if (e.is_symbol()) {
      term_symbols_.insert(e.token.text);
      if (top) top_symbols_.insert(e.token.text);
      return;
    }
    if (!e.list) return;
    bool binder = e.is_app_of("forall") || e.is_app_of("exists") || e.is_app_of("choice");
    std::unordered_set<std::string> bound;
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      const SExpr& c = *e.items[i];
      if (binder && i == 1 && c.list) {
        for (const auto& d : c.items)
          if (d->list && d->items.size() == 2) {
            collect_sorts(*d->items[1]);
            if (d->items[0]->is_symbol()) bound.insert(d->items[0]->token.text);
          }
        continue;
      }
      if (e.is_app_of("let") && i == 1 && c.list) {
        for (const auto& d : c.items)
          if (d->list && d->items.size() == 2) scan_symbols(*d->items[1], top, seen);
        continue;
      }
      if (!bound.empty() && c.is_symbol() && bound.count(c.token.text)) continue;
      scan_symbols(c, top && bound.empty(), seen);
    }
  }

  // --- sorts -------------------------------------------------------------

  SortId to_sort(const SExpr& s) {
    if (s.is_symbol()) {
      const std::string& n = s.token.text;
      if (n == "Bool") return store_.bool_sort();
      if (n == "Int") return store_.int_sort();
      if (n == "Real") return store_.real_sort();
      return store_.uninterpreted_sort(n);
    }
    if (s.list && !s.items.empty()) return store_.uninterpreted_sort(sexpr_to_string(s));
    throw ParseError("malformed sort", s.pos(), cmd_);
  }

  bool looks_like_sort(const SExpr& s) const {
    if (s.list) return !s.items.empty() && s.items[0]->is_symbol() && !s.items[0]->is_symbol("!") &&
                       !builtin_op(s.items[0]->token.text) && !funs_.count(s.items[0]->token.text) &&
                       !term_symbols_.count(s.items[0]->token.text);
    if (!s.is_symbol()) return false;
    const std::string& n = s.token.text;
    if (sort_names_.count(n)) return true;
    return !term_symbols_.count(n) && !funs_.count(n) && !is_reserved(n);
  }

  // --- preterms ------------------------------------------------------------

  Pre* alloc(Pre::K k, const Position& pos) {
    arena_.emplace_back();
    Pre* p = &arena_.back();
    p->k = k;
    p->pos = pos;
    return p;
  }

  Pre* make_var(const std::string& name, int sv, const Position& pos) {
    Pre* p = alloc(Pre::K::Var, pos);
    p->name = name;
    p->sv = sv;
    return p;
  }

  Scope* new_scope(const Scope* parent) {
    scopes_.emplace_back();
    Scope* s = &scopes_.back();
    s->parent = parent;
    s->id = next_scope_id_++;
    return s;
  }

  void expect_bool(Pre* p, const std::string& what) {
    sv_.unify(p->sv, bool_sv(), what, p->pos, cmd_);
  }

  int bool_sv() {
    if (bool_sv_ < 0) bool_sv_ = sv_.concrete(store_.bool_sort(), "Bool");
    return bool_sv_;
  }
  int real_sv() {
    if (real_sv_ < 0) real_sv_ = sv_.concrete(store_.real_sort(), "Real");
    return real_sv_;
  }
  int int_sv() {
    if (int_sv_ < 0) int_sv_ = sv_.concrete(store_.int_sort(), "Int");
    return int_sv_;
  }

  [[noreturn]] void fail(const std::string& msg, const Position& pos) {
    throw ParseError(msg, pos, cmd_);
  }

  Pre* walk(const SExprPtr& e, const Scope* scope) {
    auto key = std::make_pair(e.get(), scope->id);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Pre* p = walk_uncached(*e, scope);
    memo_.emplace(key, p);
    return p;
  }

  FunInfo& function(const std::string& name, std::size_t arity, const Position& pos) {
    auto it = funs_.find(name);
    if (it == funs_.end()) {
      FunInfo info;
      for (std::size_t i = 0; i < arity; ++i)
        info.args.push_back(sv_.fresh("argument " + std::to_string(i + 1) + " of '" + name + "'"));
      info.result = sv_.fresh("'" + name + "'");
      it = funs_.emplace(name, std::move(info)).first;
    } else if (it->second.args.size() != arity) {
      throw SortError("'" + name + "' applied to " + std::to_string(arity) +
                          " arguments but has arity " + std::to_string(it->second.args.size()),
                      pos, cmd_);
    }
    return it->second;
  }

  Pre* walk_uncached(const SExpr& e, const Scope* scope) {
    if (e.is_atom()) {
      switch (e.token.kind) {
        case TokenKind::Numeral: {
          Pre* p = alloc(Pre::K::Num, e.pos());
          p->value = Rational(Integer(e.token.text, 10));
          p->sv = sv_.fresh("numeral " + e.token.text, true);
          return p;
        }
        case TokenKind::Decimal: {
          Pre* p = alloc(Pre::K::Num, e.pos());
          auto dot = e.token.text.find('.');
          std::string digits = e.token.text.substr(0, dot) + e.token.text.substr(dot + 1);
          Integer den = 1;
          for (std::size_t i = dot + 1; i < e.token.text.size(); ++i) den *= 10;
          p->value = Rational(Integer(digits, 10), den);
          p->value.canonicalize();
          p->sv = real_sv();
          return p;
        }
        case TokenKind::Symbol:
          return symbol(e, scope);
        default:
          fail("unexpected " + std::string(e.token.kind == TokenKind::Keyword ? "keyword " : "literal ") +
                   e.token.text,
               e.pos());
      }
    }
    if (e.items.empty()) fail("empty list is not a term", e.pos());
    const SExpr& head = *e.items[0];
    if (!head.is_symbol()) fail("application head must be a symbol", head.pos());
    const std::string& h = head.token.text;
    if (!head.token.quoted) {
      if (h == "forall" || h == "exists" || h == "choice") return binder(e, scope);
      if (h == "let") return let(e, scope);
      if (h == "!") fail("annotation left after name resolution", e.pos());
      if (h == "cl") fail("'cl' may only head a step clause", e.pos());
      if (h == "_") fail("indexed identifiers are not supported", e.pos());
      if (auto op = builtin_op(h)) return builtin(*op, e, scope);
    }
    if (e.items.size() == 1) fail("application of '" + h + "' without arguments", e.pos());
    if (scope->lookup(h)) fail("variable '" + h + "' applied as a function", head.pos());
    Pre* p = alloc(Pre::K::App, e.pos());
    p->name = h;
    for (std::size_t i = 1; i < e.items.size(); ++i) p->kids.push_back(walk(e.items[i], scope));
    FunInfo& f = function(h, p->kids.size(), e.pos());
    for (std::size_t i = 0; i < p->kids.size(); ++i)
      sv_.unify(f.args[i], p->kids[i]->sv, "argument " + std::to_string(i + 1) + " of '" + h + "'",
                e.items[i + 1]->pos(), cmd_);
    p->sv = f.result;
    return p;
  }

  Pre* symbol(const SExpr& e, const Scope* scope) {
    const std::string& s = e.token.text;
    if (Pre* v = scope->lookup(s)) return v;
    if (!e.token.quoted) {
      if (s == "true" || s == "false") {
        Pre* p = alloc(Pre::K::Bool, e.pos());
        p->truth = s == "true";
        p->sv = bool_sv();
        return p;
      }
      if (is_reserved(s)) fail("'" + s + "' used as a constant", e.pos());
    }
    FunInfo& f = function(s, 0, e.pos());
    if (!f.constant) {
      f.constant = alloc(Pre::K::App, e.pos());
      f.constant->name = s;
      f.constant->sv = f.result;
    }
    return f.constant;
  }

  Pre* binder(const SExpr& e, const Scope* scope) {
    const std::string& h = e.items[0]->token.text;
    if (e.items.size() != 3 || !e.items[1]->list || e.items[1]->items.empty())
      fail(h + " takes a non-empty variable list and a body", e.pos());
    Pre* p = alloc(Pre::K::Binder, e.pos());
    p->binder = h == "forall" ? BinderKind::Forall
                : h == "exists" ? BinderKind::Exists
                                : BinderKind::Choice;
    if (p->binder == BinderKind::Choice && e.items[1]->items.size() != 1)
      fail("choice binds exactly one variable", e.pos());
    Scope* inner = new_scope(scope);
    for (const auto& d : e.items[1]->items) {
      if (!d->list || d->items.size() != 2 || !d->items[0]->is_symbol())
        fail("malformed sorted variable", d->pos());
      const std::string& name = d->items[0]->token.text;
      Pre* v = make_var(name, sv_.concrete(to_sort(*d->items[1]), "variable '" + name + "'"),
                        d->pos());
      inner->vars[name] = v;
      p->kids.push_back(v);
    }
    Pre* body = walk(e.items[2], inner);
    p->kids.push_back(body);
    if (p->binder == BinderKind::Choice) {
      expect_bool(body, "choice body");
      p->sv = p->kids[0]->sv;
    } else {
      expect_bool(body, h + " body");
      p->sv = bool_sv();
    }
    return p;
  }

  Pre* let(const SExpr& e, const Scope* scope) {
    if (e.items.size() != 3 || !e.items[1]->list || e.items[1]->items.empty())
      fail("let takes a non-empty binding list and a body", e.pos());
    Pre* p = alloc(Pre::K::Let, e.pos());
    Scope* inner = new_scope(scope);
    for (const auto& b : e.items[1]->items) {
      if (!b->list || b->items.size() != 2 || !b->items[0]->is_symbol())
        fail("malformed let binding", b->pos());
      const std::string& name = b->items[0]->token.text;
      Pre* value = walk(b->items[1], scope);
      Pre* v = make_var(name, value->sv, b->pos());
      inner->vars[name] = v;
      p->kids.push_back(v);
      p->kids.push_back(value);
    }
    Pre* body = walk(e.items[2], inner);
    p->kids.push_back(body);
    p->sv = body->sv;
    return p;
  }

  Pre* builtin(Op op, const SExpr& e, const Scope* scope) {
    Pre* p = alloc(Pre::K::App, e.pos());
    p->op = op;
    for (std::size_t i = 1; i < e.items.size(); ++i) p->kids.push_back(walk(e.items[i], scope));
    const std::string sym(op_symbol(op));
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (p->kids.size() < lo || p->kids.size() > hi)
        fail("wrong number of arguments to '" + sym + "'", e.pos());
    };
    auto all = [&](int sv) {
      for (std::size_t i = 0; i < p->kids.size(); ++i)
        sv_.unify(sv, p->kids[i]->sv, "argument " + std::to_string(i + 1) + " of '" + sym + "'",
                  e.items[i + 1]->pos(), cmd_);
    };
    auto same = [&] {
      for (std::size_t i = 1; i < p->kids.size(); ++i)
        sv_.unify(p->kids[0]->sv, p->kids[i]->sv, "arguments of '" + sym + "'",
                  e.items[i + 1]->pos(), cmd_);
    };
    constexpr std::size_t many = SIZE_MAX;
    switch (op) {
      case Op::Not: arity(1, 1); all(bool_sv()); p->sv = bool_sv(); break;
      case Op::And: case Op::Or: arity(1, many); all(bool_sv()); p->sv = bool_sv(); break;
      case Op::Implies: case Op::Xor: arity(2, many); all(bool_sv()); p->sv = bool_sv(); break;
      case Op::Eq: case Op::Distinct: arity(2, many); same(); p->sv = bool_sv(); break;
      case Op::Ite:
        arity(3, 3);
        sv_.unify(bool_sv(), p->kids[0]->sv, "condition of 'ite'", e.items[1]->pos(), cmd_);
        sv_.unify(p->kids[1]->sv, p->kids[2]->sv, "branches of 'ite'", e.pos(), cmd_);
        p->sv = p->kids[1]->sv;
        break;
      case Op::Add: case Op::Sub: case Op::Mul:
        arity(1, many);
        same();
        sv_.require_numeric(p->kids[0]->sv, "'" + sym + "'", e.pos(), cmd_);
        p->sv = p->kids[0]->sv;
        break;
      case Op::Div: arity(2, many); all(real_sv()); p->sv = real_sv(); break;
      case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
        arity(2, many);
        same();
        sv_.require_numeric(p->kids[0]->sv, "'" + sym + "'", e.pos(), cmd_);
        p->sv = bool_sv();
        break;
      case Op::IntDiv: case Op::Mod: arity(2, 2); all(int_sv()); p->sv = int_sv(); break;
      case Op::Abs: arity(1, 1); all(int_sv()); p->sv = int_sv(); break;
      case Op::ToReal: arity(1, 1); all(int_sv()); p->sv = real_sv(); break;
      case Op::ToInt: arity(1, 1); all(real_sv()); p->sv = int_sv(); break;
      case Op::IsInt: arity(1, 1); all(real_sv()); p->sv = bool_sv(); break;
      case Op::Uf: break;
    }
    return p;
  }

  // --- arguments -------------------------------------------------------------

  PreArg step_arg(const RawArg& a, const Scope* scope) {
    PreArg out;
    out.term = walk(a.term, scope);
    if (a.kind == RawArg::Kind::Assign) {
      int sv = a.sort ? sv_.concrete(to_sort(*a.sort), "variable '" + a.name + "'")
                      : sv_.fresh("variable '" + a.name + "'");
      out.var = make_var(a.name, sv, a.pos);
      sv_.unify(sv, out.term->sv, "argument ':= " + a.name + "'", a.pos, cmd_);
    }
    return out;
  }

  // A bare symbol on the right of an anchor assignment that is neither in
  // scope nor used outside every region is a fresh variable (as `vr4` in
  // `(:= z2 vr4)`).
  Pre* anchor_value(const SExprPtr& t, Scope* region) {
    if (t->is_symbol() && !t->token.quoted) {
      const std::string& s = t->token.text;
      if (!region->lookup(s) && !top_symbols_.count(s) && !funs_.count(s) && !is_reserved(s)) {
        Pre* v = make_var(s, sv_.fresh("variable '" + s + "'"), t->pos());
        region->vars[s] = v;
        return v;
      }
    }
    return walk(t, region);
  }

  PreArg anchor_arg(const RawArg& a, Scope* region) {
    PreArg out;
    auto target = [&](int sv) {
      if (auto it = region->vars.find(a.name); it != region->vars.end()) {
        sv_.unify(it->second->sv, sv, "context variable '" + a.name + "'", a.pos, cmd_);
        return it->second;
      }
      Pre* v = make_var(a.name, sv, a.pos);
      region->vars[a.name] = v;
      return v;
    };
    switch (a.kind) {
      case RawArg::Kind::Symbol:
        out.var = target(sv_.fresh("context variable '" + a.name + "'"));
        break;
      case RawArg::Kind::Pair:
        if (looks_like_sort(*a.term)) {
          out.var = target(sv_.concrete(to_sort(*a.term), "context variable '" + a.name + "'"));
          break;
        }
        [[fallthrough]];
      case RawArg::Kind::Assign: {
        out.term = anchor_value(a.term, region);
        int sv = a.sort ? sv_.concrete(to_sort(*a.sort), "context variable '" + a.name + "'")
                        : sv_.fresh("context variable '" + a.name + "'");
        sv_.unify(sv, out.term->sv, "context mapping of '" + a.name + "'", a.pos, cmd_);
        out.var = target(sv);
        break;
      }
      case RawArg::Kind::Term:
        fail("malformed anchor argument", a.pos);
    }
    return out;
  }

  // --- interning -------------------------------------------------------------

  TermId build(Pre* p) {
    if (auto it = built_.find(p); it != built_.end()) return it->second;
    TermId t;
    switch (p->k) {
      case Pre::K::Var:
        t = store_.var(p->name, sv_.resolve(p->sv, p->pos, cmd_));
        break;
      case Pre::K::Num:
        t = store_.numeral(p->value, sv_.resolve(p->sv, p->pos, cmd_));
        break;
      case Pre::K::Bool:
        t = store_.boolean(p->truth);
        break;
      case Pre::K::App: {
        std::vector<TermId> kids;
        kids.reserve(p->kids.size());
        for (Pre* k : p->kids) kids.push_back(build(k));
        t = p->op == Op::Uf ? store_.app(p->name, std::move(kids), sv_.resolve(p->sv, p->pos, cmd_))
                            : store_.app(p->op, std::move(kids));
        break;
      }
      case Pre::K::Binder: {
        std::vector<TermId> vars;
        for (std::size_t i = 0; i + 1 < p->kids.size(); ++i) vars.push_back(build(p->kids[i]));
        t = store_.binder(p->binder, std::move(vars), build(p->kids.back()));
        break;
      }
      case Pre::K::Let: {
        Substitution s;
        for (std::size_t i = 0; i + 1 < p->kids.size(); i += 2)
          s.mappings.emplace_back(build(p->kids[i]), build(p->kids[i + 1]));
        t = store_.apply_subst(build(p->kids.back()), s);
        break;
      }
    }
    built_.emplace(p, t);
    return t;
  }

  ProofCommand build_command(const PreCommand& pc) {
    const RawCommand& c = *pc.raw;
    ProofCommand out;
    out.pos = c.pos;
    switch (c.kind) {
      case RawCommand::Kind::Assume:
        out.body = AssumeCmd{c.index, build(pc.term)};
        break;
      case RawCommand::Kind::Step: {
        StepCmd s;
        s.index = c.index;
        for (Pre* l : pc.clause) s.clause.push_back(build(l));
        s.rule = c.rule;
        s.premises = c.premises;
        s.discharge = c.discharge;
        for (const PreArg& a : pc.args) {
          StepArg arg;
          if (a.var) arg.var = build(a.var);
          arg.term = build(a.term);
          s.args.push_back(arg);
        }
        out.body = std::move(s);
        break;
      }
      case RawCommand::Kind::Anchor: {
        AnchorCmd a;
        a.target = c.index;
        for (const PreArg& e : pc.context) {
          ContextEntry entry;
          entry.var = build(e.var);
          if (e.term) entry.value = build(e.term);
          a.context.push_back(entry);
        }
        out.body = std::move(a);
        break;
      }
      case RawCommand::Kind::DefineFun: {
        DefineFunCmd d;
        d.name = c.index;
        for (Pre* p : pc.params) d.params.push_back(build(p));
        d.result = sv_.resolve(pc.result_sv, c.pos, cmd_);
        d.body = build(pc.term);
        d.expanded = c.expanded;
        out.body = std::move(d);
        break;
      }
    }
    return out;
  }

  TermStore& store_;
  SortVars sv_;
  std::deque<Pre> arena_;
  std::deque<Scope> scopes_;
  Scope global_;
  int next_scope_id_ = 0;
  std::map<std::pair<const SExpr*, int>, Pre*> memo_;
  std::unordered_map<Pre*, TermId> built_;
  std::unordered_map<std::string, FunInfo> funs_;
  std::unordered_set<std::string> sort_names_{"Bool", "Int", "Real"};
  std::unordered_set<std::string> term_symbols_;
  std::unordered_set<std::string> top_symbols_;
  int bool_sv_ = -1;
  int real_sv_ = -1;
  int int_sv_ = -1;
  std::size_t cmd_ = 0;
};

}  // namespace

std::vector<ProofCommand> infer_sorts(const std::vector<RawCommand>& commands,
                                      const Declarations* declarations, TermStore& store) {
  return Elaborator(store, declarations).run(commands);
}

}  // namespace vtcheck
