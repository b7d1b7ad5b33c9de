#include "vtcheck/term.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace vtcheck {

std::string to_string(const Position& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

Error::Error(std::string code, const std::string& message,
             std::optional<Position> pos, std::optional<std::size_t> command)
    : std::runtime_error(pos ? to_string(*pos) + ": " + message : message),
      code_(std::move(code)),
      message_(message),
      pos_(pos),
      command_(command) {}

namespace {

struct OpName {
  std::string_view symbol;
  Op op;
};

constexpr std::array<OpName, 22> kOps{{
    {"not", Op::Not},       {"and", Op::And},       {"or", Op::Or},
    {"=>", Op::Implies},    {"xor", Op::Xor},       {"=", Op::Eq},
    {"distinct", Op::Distinct}, {"ite", Op::Ite},   {"+", Op::Add},
    {"-", Op::Sub},         {"*", Op::Mul},         {"/", Op::Div},
    {"<", Op::Lt},          {"<=", Op::Le},         {">", Op::Gt},
    {">=", Op::Ge},         {"div", Op::IntDiv},    {"mod", Op::Mod},
    {"abs", Op::Abs},       {"to_real", Op::ToReal}, {"to_int", Op::ToInt},
    {"is_int", Op::IsInt},
}};

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

bool is_simple_symbol_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
      (c >= '0' && c <= '9'))
    return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&':
    case '*': case '_': case '-': case '+': case '=': case '<': case '>':
    case '.': case '?': case '/':
      return true;
    default:
      return false;
  }
}

std::string canonical_var_name(std::uint32_t index) {
  // '|' cannot occur in any symbol read from a proof.
  return "b|" + std::to_string(index);
}

}  // namespace

std::optional<Op> builtin_op(std::string_view symbol) {
  for (const auto& entry : kOps)
    if (entry.symbol == symbol) return entry.op;
  return std::nullopt;
}

std::string_view op_symbol(Op op) {
  for (const auto& entry : kOps)
    if (entry.op == op) return entry.symbol;
  return "?";
}

std::string_view binder_symbol(BinderKind kind) {
  switch (kind) {
    case BinderKind::Forall: return "forall";
    case BinderKind::Exists: return "exists";
    case BinderKind::Choice: return "choice";
  }
  return "?";
}

bool TermNode::operator==(const TermNode& other) const {
  return kind == other.kind && op == other.op && binder == other.binder &&
         sort == other.sort && name == other.name && value == other.value &&
         children == other.children;
}

bool TermNode::is_bool_const() const {
  return kind == Kind::Const && sort == SortId{0};
}

std::size_t TermNodeHash::operator()(const TermNode& n) const noexcept {
  std::size_t seed = static_cast<std::size_t>(n.kind);
  hash_combine(seed, static_cast<std::size_t>(n.op));
  hash_combine(seed, static_cast<std::size_t>(n.binder));
  hash_combine(seed, n.sort.value);
  hash_combine(seed, std::hash<std::string>{}(n.name));
  if (n.kind == Kind::Const) hash_combine(seed, std::hash<std::string>{}(n.value.get_str()));
  for (TermId c : n.children) hash_combine(seed, c.value);
  return seed;
}

std::optional<TermId> Substitution::lookup(TermId var) const {
  for (const auto& [v, r] : mappings)
    if (v == var) return r;
  return std::nullopt;
}

TermStore::TermStore() {
  sorts_.push_back({SortKind::Bool, "Bool"});
  sorts_.push_back({SortKind::Int, "Int"});
  sorts_.push_back({SortKind::Real, "Real"});
  sort_index_.emplace("Bool", SortId{0});
  sort_index_.emplace("Int", SortId{1});
  sort_index_.emplace("Real", SortId{2});
}

SortId TermStore::uninterpreted_sort(std::string_view name) {
  if (auto it = sort_index_.find(std::string(name)); it != sort_index_.end())
    return it->second;
  SortId id{static_cast<std::uint32_t>(sorts_.size())};
  sorts_.push_back({SortKind::Uninterpreted, std::string(name)});
  sort_index_.emplace(std::string(name), id);
  return id;
}

std::optional<SortId> TermStore::find_sort(std::string_view name) const {
  if (auto it = sort_index_.find(std::string(name)); it != sort_index_.end())
    return it->second;
  return std::nullopt;
}

void TermStore::declare_fun(std::string_view name, Rank rank) {
  auto [it, inserted] = signature_.emplace(std::string(name), rank);
  if (!inserted && !(it->second == rank))
    throw SortError("conflicting declarations of '" + std::string(name) + "'");
}

const Rank* TermStore::rank(std::string_view name) const {
  auto it = signature_.find(std::string(name));
  return it == signature_.end() ? nullptr : &it->second;
}

SortId TermStore::check_app(Op op, const std::vector<TermId>& args) const {
  auto fail = [&](const std::string& why) -> SortId {
    throw SortError("ill-sorted application of '" +
                    std::string(op_symbol(op)) + "': " + why);
  };
  auto all_bool = [&] {
    for (TermId a : args)
      if (sort_of(a) != bool_sort()) fail("expected Bool arguments");
  };
  auto same_sort = [&] {
    for (TermId a : args)
      if (sort_of(a) != sort_of(args.front())) fail("argument sorts differ");
  };
  auto same_numeric = [&] {
    same_sort();
    if (!is_numeric(sort_of(args.front()))) fail("expected numeric arguments");
  };
  auto arity_at_least = [&](std::size_t n) {
    if (args.size() < n) fail("expected at least " + std::to_string(n) + " arguments");
  };
  auto arity = [&](std::size_t n) {
    if (args.size() != n) fail("expected " + std::to_string(n) + " arguments");
  };
  switch (op) {
    case Op::Not: arity(1); all_bool(); return bool_sort();
    case Op::And: case Op::Or: arity_at_least(1); all_bool(); return bool_sort();
    case Op::Implies: case Op::Xor: arity_at_least(2); all_bool(); return bool_sort();
    case Op::Eq: case Op::Distinct: arity_at_least(2); same_sort(); return bool_sort();
    case Op::Ite:
      arity(3);
      if (sort_of(args[0]) != bool_sort()) fail("condition must be Bool");
      if (sort_of(args[1]) != sort_of(args[2])) fail("branch sorts differ");
      return sort_of(args[1]);
    case Op::Add: case Op::Sub: case Op::Mul:
      arity_at_least(1); same_numeric(); return sort_of(args.front());
    case Op::Div:
      arity_at_least(2);
      for (TermId a : args)
        if (sort_of(a) != real_sort()) fail("expected Real arguments");
      return real_sort();
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
      arity_at_least(2); same_numeric(); return bool_sort();
    case Op::IntDiv: case Op::Mod:
      arity(2);
      for (TermId a : args)
        if (sort_of(a) != int_sort()) fail("expected Int arguments");
      return int_sort();
    case Op::Abs:
      arity(1);
      if (sort_of(args[0]) != int_sort()) fail("expected Int argument");
      return int_sort();
    case Op::ToReal:
      arity(1);
      if (sort_of(args[0]) != int_sort()) fail("expected Int argument");
      return real_sort();
    case Op::ToInt: case Op::IsInt:
      arity(1);
      if (sort_of(args[0]) != real_sort()) fail("expected Real argument");
      return op == Op::ToInt ? int_sort() : bool_sort();
    case Op::Uf: break;
  }
  return fail("not a builtin");
}

TermId TermStore::intern(TermNode n) {
  switch (n.kind) {
    case Kind::Var:
      if (n.name.empty()) throw SortError("variable without a name");
      if (!n.sort.valid() || n.sort.value >= sorts_.size())
        throw SortError("variable '" + n.name + "' has no sort");
      n.op = Op::Uf;
      n.children.clear();
      n.value = 0;
      break;
    case Kind::Const:
      if (n.sort == bool_sort()) {
        if (n.value != 0 && n.value != 1) throw SortError("bad Boolean constant");
      } else if (n.sort == int_sort()) {
        if (n.value.get_den() != 1)
          throw SortError("non-integral Int constant " + n.value.get_str());
      } else if (n.sort != real_sort()) {
        throw SortError("constants must be Bool, Int or Real");
      }
      n.name.clear();
      n.children.clear();
      break;
    case Kind::App:
      if (n.op == Op::Uf) {
        if (!n.sort.valid()) throw SortError("application of '" + n.name + "' has no sort");
        Rank r;
        for (TermId a : n.children) r.args.push_back(sort_of(a));
        r.result = n.sort;
        if (const Rank* known = rank(n.name)) {
          if (!(*known == r))
            throw SortError("'" + n.name + "' used with a rank that contradicts an earlier use");
        } else {
          signature_.emplace(n.name, r);
        }
      } else {
        n.sort = check_app(n.op, n.children);
        n.name.clear();
        // Negative numerals and constant fractions become signed constants.
        if (n.op == Op::Sub && n.children.size() == 1 &&
            node(n.children[0]).kind == Kind::Const)
          return numeral(-node(n.children[0]).value, n.sort);
        if (n.op == Op::Div && n.children.size() == 2 &&
            node(n.children[0]).kind == Kind::Const &&
            node(n.children[1]).kind == Kind::Const &&
            node(n.children[1]).value != 0)
          return numeral(node(n.children[0]).value / node(n.children[1]).value,
                         real_sort());
      }
      n.value = 0;
      break;
    case Kind::Binder: {
      if (n.children.size() < 2) throw SortError("binder without variables");
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
        if (node(n.children[i]).kind != Kind::Var)
          throw SortError("binder must bind variables");
      TermId body = n.children.back();
      if (n.binder == BinderKind::Choice) {
        if (n.children.size() != 2) throw SortError("choice binds exactly one variable");
        if (sort_of(body) != bool_sort()) throw SortError("choice body must be Bool");
        n.sort = sort_of(n.children[0]);
      } else {
        if (sort_of(body) != bool_sort()) throw SortError("quantifier body must be Bool");
        n.sort = bool_sort();
      }
      n.name.clear();
      n.value = 0;
      break;
    }
  }
  if (auto it = index_.find(n); it != index_.end()) return it->second;
  TermId id{static_cast<std::uint32_t>(nodes_.size())};
  if (n.kind == Kind::Var) var_names_.insert(n.name);
  index_.emplace(n, id);
  nodes_.push_back(std::move(n));
  return id;
}

TermId TermStore::var(std::string_view name, SortId sort) {
  TermNode n;
  n.kind = Kind::Var;
  n.name = std::string(name);
  n.sort = sort;
  return intern(std::move(n));
}

TermId TermStore::boolean(bool value) {
  TermNode n;
  n.kind = Kind::Const;
  n.sort = bool_sort();
  n.value = value ? 1 : 0;
  return intern(std::move(n));
}

TermId TermStore::numeral(const Rational& value, SortId sort) {
  TermNode n;
  n.kind = Kind::Const;
  n.sort = sort;
  n.value = value;
  n.value.canonicalize();
  return intern(std::move(n));
}

TermId TermStore::app(Op op, std::vector<TermId> args) {
  TermNode n;
  n.kind = Kind::App;
  n.op = op;
  n.children = std::move(args);
  return intern(std::move(n));
}

TermId TermStore::app(std::string_view fn, std::vector<TermId> args, SortId result) {
  TermNode n;
  n.kind = Kind::App;
  n.op = Op::Uf;
  n.name = std::string(fn);
  n.sort = result;
  n.children = std::move(args);
  return intern(std::move(n));
}

TermId TermStore::binder(BinderKind kind, std::vector<TermId> vars, TermId body) {
  TermNode n;
  n.kind = Kind::Binder;
  n.binder = kind;
  n.children = std::move(vars);
  n.children.push_back(body);
  return intern(std::move(n));
}

TermId TermStore::rebuild(TermId t, std::vector<TermId> children) {
  const TermNode& n = node(t);
  if (children == n.children) return t;
  switch (n.kind) {
    case Kind::App:
      if (n.op == Op::Uf) return app(std::string(n.name), std::move(children), n.sort);
      return app(n.op, std::move(children));
    case Kind::Binder: {
      TermId body = children.back();
      children.pop_back();
      return binder(n.binder, std::move(children), body);
    }
    default:
      return t;
  }
}

const std::vector<TermId>& TermStore::free_vars(TermId t) {
  if (auto it = free_vars_.find(t); it != free_vars_.end()) return it->second;
  std::vector<TermId> result;
  const TermNode n = node(t);
  switch (n.kind) {
    case Kind::Var:
      result.push_back(t);
      break;
    case Kind::Const:
      break;
    case Kind::App:
      for (TermId c : n.children) {
        const auto& fv = free_vars(c);
        result.insert(result.end(), fv.begin(), fv.end());
      }
      std::sort(result.begin(), result.end());
      result.erase(std::unique(result.begin(), result.end()), result.end());
      break;
    case Kind::Binder: {
      auto bound = n.bound_vars();
      for (TermId v : free_vars(n.body()))
        if (std::find(bound.begin(), bound.end(), v) == bound.end())
          result.push_back(v);
      break;
    }
  }
  return free_vars_.emplace(t, std::move(result)).first->second;
}

bool TermStore::occurs_free(TermId var, TermId t) {
  const auto& fv = free_vars(t);
  return std::binary_search(fv.begin(), fv.end(), var);
}

std::string TermStore::fresh_var_name(std::string_view base) {
  for (;;) {
    std::string name = std::string(base) + "!" + std::to_string(fresh_counter_++);
    if (!var_names_.count(name) && !signature_.count(name)) return name;
  }
}

TermId TermStore::apply_subst(TermId t, const Substitution& subst) {
  if (subst.empty()) return t;
  std::unordered_map<TermId, TermId, TermIdHash> memo;
  return apply_subst_rec(t, subst, memo);
}

TermId TermStore::apply_subst_rec(TermId t, const Substitution& subst,
                                  std::unordered_map<TermId, TermId, TermIdHash>& memo) {
  bool relevant = false;
  for (const auto& [v, r] : subst.mappings)
    if (occurs_free(v, t)) {
      relevant = true;
      break;
    }
  if (!relevant) return t;
  if (auto it = memo.find(t); it != memo.end()) return it->second;

  const TermNode n = node(t);
  TermId result = t;
  switch (n.kind) {
    case Kind::Var:
      if (auto r = subst.lookup(t)) {
        if (sort_of(*r) != n.sort)
          throw SortError("substitution for '" + n.name + "' changes its sort");
        result = *r;
      }
      break;
    case Kind::Const:
      break;
    case Kind::App: {
      std::vector<TermId> kids;
      kids.reserve(n.children.size());
      for (TermId c : n.children) kids.push_back(apply_subst_rec(c, subst, memo));
      result = rebuild(t, std::move(kids));
      break;
    }
    case Kind::Binder: {
      auto bound = n.bound_vars();
      TermId body = n.body();
      Substitution inner;
      for (const auto& [v, r] : subst.mappings) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
        if (!occurs_free(v, body)) continue;
        inner.mappings.emplace_back(v, r);
      }
      if (inner.empty()) break;
      std::vector<TermId> captured;
      for (const auto& [v, r] : inner.mappings) {
        const auto& fv = free_vars(r);
        captured.insert(captured.end(), fv.begin(), fv.end());
      }
      std::vector<TermId> new_vars;
      for (TermId b : bound) {
        if (std::find(captured.begin(), captured.end(), b) != captured.end()) {
          const TermNode& bn = node(b);
          TermId renamed = var(fresh_var_name(bn.name), bn.sort);
          inner.mappings.emplace_back(b, renamed);
          new_vars.push_back(renamed);
        } else {
          new_vars.push_back(b);
        }
      }
      std::unordered_map<TermId, TermId, TermIdHash> inner_memo;
      TermId new_body = apply_subst_rec(body, inner, inner_memo);
      result = binder(n.binder, std::move(new_vars), new_body);
      break;
    }
  }
  memo.emplace(t, result);
  return result;
}

std::pair<TermId, unsigned> TermStore::strip_negations(TermId t) const {
  unsigned count = 0;
  while (is_app(t, Op::Not)) {
    t = node(t).children[0];
    ++count;
  }
  return {t, count};
}

TermId TermStore::eq_nf(TermId t) {
  if (auto it = eq_nf_.find(t); it != eq_nf_.end()) return it->second;
  const TermNode n = node(t);
  TermId result = t;
  if (n.kind == Kind::App || n.kind == Kind::Binder) {
    std::vector<TermId> kids = n.children;
    if (n.kind == Kind::App) {
      for (TermId& k : kids) k = eq_nf(k);
      if (n.op == Op::Eq) std::sort(kids.begin(), kids.end());
    } else {
      kids.back() = eq_nf(kids.back());
    }
    result = rebuild(t, std::move(kids));
  }
  eq_nf_.emplace(t, result);
  return result;
}

TermId TermStore::implicit_nf(TermId t) {
  auto [core, negations] = strip_negations(t);
  TermId c = eq_nf(core);
  return negations % 2 == 1 ? mk_not(c) : c;
}

TermId TermStore::alpha_nf(TermId t) { return alpha_nf_at(t, 0); }

TermId TermStore::alpha_nf_at(TermId t, std::uint32_t depth) {
  auto key = std::make_pair(t, depth);
  if (auto it = alpha_nf_.find(key); it != alpha_nf_.end()) return it->second;
  const TermNode n = node(t);
  TermId result = t;
  switch (n.kind) {
    case Kind::Var:
    case Kind::Const:
      break;
    case Kind::App: {
      std::vector<TermId> kids = n.children;
      for (TermId& k : kids) k = alpha_nf_at(k, depth);
      result = rebuild(t, std::move(kids));
      break;
    }
    case Kind::Binder: {
      // Canonical names must not clash with the free variables of `t`.
      std::unordered_set<std::string> taken;
      for (TermId v : free_vars(t)) taken.insert(node(v).name);
      Substitution rename;
      std::vector<TermId> vars;
      std::uint32_t next = depth;
      for (TermId b : n.bound_vars()) {
        while (taken.count(canonical_var_name(next))) ++next;
        TermId c = var(canonical_var_name(next++), node(b).sort);
        rename.mappings.emplace_back(b, c);
        vars.push_back(c);
      }
      TermId body = alpha_nf_at(apply_subst(n.body(), rename), next);
      result = binder(n.binder, std::move(vars), body);
      break;
    }
  }
  alpha_nf_.emplace(key, result);
  return result;
}

TermId TermStore::canonical(TermId t) {
  if (auto it = canonical_.find(t); it != canonical_.end()) return it->second;
  TermId result = implicit_nf(alpha_nf(t));
  canonical_.emplace(t, result);
  return result;
}

NegationSplit strip_double_negation(const TermStore& store, TermId t) {
  auto [core, n] = store.strip_negations(t);
  return {core, n};
}

bool complementary(TermStore& store, TermId a, TermId b) {
  auto [ca, na] = store.strip_negations(a);
  auto [cb, nb] = store.strip_negations(b);
  return (na % 2) != (nb % 2) && store.eq_nf(ca) == store.eq_nf(cb);
}

bool equal_mod_implicit(TermStore& store, TermId a, TermId b) {
  return store.implicit_nf(a) == store.implicit_nf(b);
}

bool alpha_equiv(TermStore& store, TermId a, TermId b) {
  return store.alpha_nf(a) == store.alpha_nf(b);
}

TermId apply_subst(TermStore& store, TermId t, const Substitution& subst) {
  return store.apply_subst(t, subst);
}

Substitution compose(TermStore& store, const Substitution& first,
                     const Substitution& second) {
  Substitution out;
  for (const auto& [v, r] : first.mappings)
    out.mappings.emplace_back(v, store.apply_subst(r, second));
  for (const auto& [v, r] : second.mappings)
    if (!first.lookup(v)) out.mappings.emplace_back(v, r);
  return out;
}

LiteralKey literal_key(TermStore& store, TermId lit) {
  auto [core, n] = store.strip_negations(lit);
  return {store.canonical(core), n % 2 == 1};
}

NormalizedClause clause_normalize(TermStore& store, const Clause& lits) {
  NormalizedClause out;
  std::vector<LiteralKey> seen;
  for (TermId lit : lits) {
    LiteralKey key = literal_key(store, lit);
    LiteralKey flipped{key.atom, !key.negated};
    if (std::find(seen.begin(), seen.end(), flipped) != seen.end()) out.tautology = true;
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    out.literals.push_back(lit);
  }
  return out;
}

std::string quote_symbol(std::string_view symbol) {
  bool simple = !symbol.empty() && !(symbol[0] >= '0' && symbol[0] <= '9');
  for (char c : symbol)
    if (!is_simple_symbol_char(c)) simple = false;
  if (simple) return std::string(symbol);
  return "|" + std::string(symbol) + "|";
}

namespace {

void print_numeral(std::ostream& os, const Rational& v, bool real) {
  Rational mag = abs(v);
  bool negative = v < 0;
  if (negative) os << "(- ";
  if (!real) {
    os << mag.get_num().get_str();
  } else if (mag.get_den() == 1) {
    os << mag.get_num().get_str() << ".0";
  } else {
    os << "(/ " << mag.get_num().get_str() << ".0 " << mag.get_den().get_str()
       << ".0)";
  }
  if (negative) os << ")";
}

void print_term(const TermStore& store, TermId t, std::ostream& os) {
  const TermNode& n = store.node(t);
  switch (n.kind) {
    case Kind::Var:
      os << quote_symbol(n.name);
      return;
    case Kind::Const:
      if (n.sort == store.bool_sort())
        os << (n.value == 1 ? "true" : "false");
      else
        print_numeral(os, n.value, n.sort == store.real_sort());
      return;
    case Kind::App: {
      std::string head = n.op == Op::Uf ? quote_symbol(n.name) : std::string(op_symbol(n.op));
      if (n.children.empty()) {
        os << head;
        return;
      }
      os << "(" << head;
      for (TermId c : n.children) {
        os << " ";
        print_term(store, c, os);
      }
      os << ")";
      return;
    }
    case Kind::Binder: {
      os << "(" << binder_symbol(n.binder) << " (";
      auto vars = n.bound_vars();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const TermNode& v = store.node(vars[i]);
        os << (i ? " " : "") << "(" << quote_symbol(v.name) << " "
           << store.sort(v.sort).name << ")";
      }
      os << ") ";
      print_term(store, n.body(), os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string term_to_string(const TermStore& store, TermId t) {
  std::ostringstream os;
  print_term(store, t, os);
  return os.str();
}

}  // namespace vtcheck
