#include "vtcheck/parser.hpp"

#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace vtcheck {

namespace {

bool is_binder_head(const SExpr& e) {
  return e.is_app_of("forall") || e.is_app_of("exists") || e.is_app_of("choice");
}

class CommandParser {
 public:
  explicit CommandParser(std::size_t number) : number_(number) {}

  RawCommand parse(const SExpr& e) {
    if (!e.list || e.items.empty() || !e.items[0]->is_symbol())
      fail("expected a command", e.pos());
    const std::string& head = e.items[0]->token.text;
    RawCommand cmd;
    cmd.pos = e.pos();
    if (head == "assume") {
      if (e.items.size() != 3) fail("assume takes an index and a term", e.pos());
      cmd.kind = RawCommand::Kind::Assume;
      cmd.index = symbol(*e.items[1], "assume index");
      cmd.term = e.items[2];
    } else if (head == "step") {
      parse_step(e, cmd);
    } else if (head == "anchor") {
      parse_anchor(e, cmd);
    } else if (head == "define-fun") {
      parse_define(e, cmd);
    } else {
      fail("unknown command '" + head + "'", e.pos());
    }
    return cmd;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Position& pos) const {
    throw ParseError(msg, pos, number_);
  }

  std::string symbol(const SExpr& e, const char* what) const {
    if (!e.is_symbol()) fail(std::string("expected a symbol for ") + what, e.pos());
    return e.token.text;
  }

  std::vector<std::string> symbol_list(const SExpr& e, const char* what) const {
    if (!e.list) fail(std::string("expected a list for ") + what, e.pos());
    std::vector<std::string> out;
    for (const auto& item : e.items) out.push_back(symbol(*item, what));
    return out;
  }

  void parse_step(const SExpr& e, RawCommand& cmd) {
    cmd.kind = RawCommand::Kind::Step;
    if (e.items.size() < 3) fail("step takes an index and a clause", e.pos());
    cmd.index = symbol(*e.items[1], "step index");
    const SExpr& clause = *e.items[2];
    if (!clause.is_app_of("cl")) fail("clause not headed by 'cl'", clause.pos());
    cmd.clause.assign(clause.items.begin() + 1, clause.items.end());
    std::unordered_set<std::string> seen;
    bool have_rule = false;
    for (std::size_t i = 3; i < e.items.size(); i += 2) {
      const SExpr& key = *e.items[i];
      if (key.is_atom() && key.token.kind != TokenKind::Keyword)
        fail("expected an attribute keyword", key.pos());
      if (!key.is_atom()) fail("expected an attribute keyword", key.pos());
      if (i + 1 >= e.items.size()) fail("attribute " + key.token.text + " has no value", key.pos());
      if (!seen.insert(key.token.text).second)
        fail("repeated attribute " + key.token.text, key.pos());
      const SExpr& value = *e.items[i + 1];
      if (key.token.text == ":rule") {
        cmd.rule = symbol(value, ":rule");
        have_rule = true;
      } else if (key.token.text == ":premises") {
        cmd.premises = symbol_list(value, ":premises");
      } else if (key.token.text == ":discharge") {
        cmd.discharge = symbol_list(value, ":discharge");
      } else if (key.token.text == ":args") {
        if (!value.list) fail("expected a list for :args", value.pos());
        for (const auto& a : value.items) cmd.args.push_back(step_arg(a));
      } else {
        fail("unknown step attribute " + key.token.text, key.pos());
      }
    }
    if (!have_rule) fail("step " + cmd.index + " has no :rule", e.pos());
  }

  // (:= x t) or (:= (x S) t); anything else is a plain term.
  std::optional<RawArg> assignment(const SExprPtr& a) const {
    if (!a->list || a->items.empty() || !a->items[0]->is_keyword(":=")) return std::nullopt;
    if (a->items.size() != 3) fail("':=' takes a variable and a term", a->pos());
    RawArg arg;
    arg.kind = RawArg::Kind::Assign;
    arg.pos = a->pos();
    const SExpr& lhs = *a->items[1];
    if (lhs.is_symbol()) {
      arg.name = lhs.token.text;
    } else if (lhs.list && lhs.items.size() == 2 && lhs.items[0]->is_symbol()) {
      arg.name = lhs.items[0]->token.text;
      arg.sort = lhs.items[1];
    } else {
      fail("malformed ':=' variable", lhs.pos());
    }
    arg.term = a->items[2];
    return arg;
  }

  RawArg step_arg(const SExprPtr& a) const {
    if (auto assign = assignment(a)) return *assign;
    RawArg arg;
    arg.kind = RawArg::Kind::Term;
    arg.term = a;
    arg.pos = a->pos();
    return arg;
  }

  void parse_anchor(const SExpr& e, RawCommand& cmd) {
    cmd.kind = RawCommand::Kind::Anchor;
    bool have_step = false;
    for (std::size_t i = 1; i < e.items.size(); i += 2) {
      const SExpr& key = *e.items[i];
      if (!key.is_atom() || key.token.kind != TokenKind::Keyword)
        fail("expected an attribute keyword", key.pos());
      if (i + 1 >= e.items.size()) fail("attribute " + key.token.text + " has no value", key.pos());
      const SExpr& value = *e.items[i + 1];
      if (key.token.text == ":step") {
        if (have_step) fail("repeated attribute :step", key.pos());
        cmd.index = symbol(value, ":step");
        have_step = true;
      } else if (key.token.text == ":args") {
        if (!value.list) fail("expected a list for :args", value.pos());
        for (const auto& a : value.items) cmd.args.push_back(anchor_arg(a));
      } else {
        fail("unknown anchor attribute " + key.token.text, key.pos());
      }
    }
    if (!have_step) fail("anchor without :step", e.pos());
  }

  RawArg anchor_arg(const SExprPtr& a) const {
    if (auto assign = assignment(a)) return *assign;
    RawArg arg;
    arg.pos = a->pos();
    if (a->is_symbol()) {
      arg.kind = RawArg::Kind::Symbol;
      arg.name = a->token.text;
      return arg;
    }
    if (a->list && a->items.size() == 2 && a->items[0]->is_symbol()) {
      arg.kind = RawArg::Kind::Pair;
      arg.name = a->items[0]->token.text;
      arg.term = a->items[1];
      return arg;
    }
    fail("malformed anchor argument", a->pos());
  }

  void parse_define(const SExpr& e, RawCommand& cmd) {
    cmd.kind = RawCommand::Kind::DefineFun;
    if (e.items.size() != 5) fail("define-fun takes a name, parameters, a sort and a body", e.pos());
    cmd.index = symbol(*e.items[1], "define-fun name");
    const SExpr& params = *e.items[2];
    if (!params.list) fail("expected a parameter list", params.pos());
    for (const auto& p : params.items) {
      if (!p->list || p->items.size() != 2 || !p->items[0]->is_symbol())
        fail("malformed parameter", p->pos());
      cmd.params.emplace_back(p->items[0]->token.text, p->items[1]);
    }
    cmd.result_sort = e.items[3];
    cmd.body = e.items[4];
  }

  std::size_t number_;
};

// Applies `f` to every term-valued s-expression of a command.
void for_each_term(RawCommand& cmd, const std::function<void(SExprPtr&)>& f) {
  switch (cmd.kind) {
    case RawCommand::Kind::Assume:
      f(cmd.term);
      break;
    case RawCommand::Kind::Step:
      for (auto& lit : cmd.clause) f(lit);
      for (auto& a : cmd.args) f(a.term);
      break;
    case RawCommand::Kind::Anchor:
      for (auto& a : cmd.args)
        if (a.term) f(a.term);
      break;
    case RawCommand::Kind::DefineFun:
      f(cmd.body);
      break;
  }
}

class NameResolver {
 public:
  std::vector<RawCommand> run(std::vector<RawCommand> commands) {
    for (auto& cmd : commands) for_each_term(cmd, [&](SExprPtr& e) { collect(*e); });
    for (std::size_t i = 0; i < commands.size(); ++i) {
      command_ = i + 1;
      for_each_term(commands[i], [&](SExprPtr& e) { e = resolve(e); });
    }
    return commands;
  }

 private:
  void collect(const SExpr& e) {
    if (!e.list) return;
    if (e.is_app_of("!"))
      for (std::size_t i = 2; i + 1 < e.items.size(); ++i)
        if (e.items[i]->is_keyword(":named") && e.items[i + 1]->is_symbol())
          all_.insert(e.items[i + 1]->token.text);
    for (const auto& c : e.items) collect(*c);
  }

  SExprPtr resolve(const SExprPtr& e) {
    if (e->is_symbol()) {
      const std::string& s = e->token.text;
      if (auto it = names_.find(s); it != names_.end()) return it->second;
      if (all_.count(s))
        throw NameError("name '" + s + "' used before its definition", e->pos(), command_);
      return e;
    }
    if (!e->list) return e;
    if (e->is_app_of("!")) {
      if (e->items.size() < 2) throw ParseError("empty annotation", e->pos(), command_);
      SExprPtr inner = resolve(e->items[1]);
      for (std::size_t i = 2; i < e->items.size(); ++i) {
        const SExpr& attr = *e->items[i];
        if (attr.is_atom() && attr.token.kind == TokenKind::Keyword) {
          if (attr.token.text == ":named") {
            if (i + 1 >= e->items.size() || !e->items[i + 1]->is_symbol())
              throw ParseError(":named requires a symbol", attr.pos(), command_);
            const std::string& n = e->items[i + 1]->token.text;
            if (!names_.emplace(n, inner).second)
              throw NameError("name '" + n + "' defined twice", e->items[i + 1]->pos(), command_);
            ++i;
          } else if (i + 1 < e->items.size() &&
                     !(e->items[i + 1]->is_atom() &&
                       e->items[i + 1]->token.kind == TokenKind::Keyword)) {
            ++i;  // other attribute values (patterns) are dropped
          }
        } else {
          throw ParseError("malformed annotation", attr.pos(), command_);
        }
      }
      return inner;
    }
    std::vector<SExprPtr> items = e->items;
    bool changed = false;
    std::size_t skip = is_binder_head(*e) ? 1 : SIZE_MAX;
    for (std::size_t i = 1; i < items.size(); ++i) {
      SExprPtr r;
      if (i == skip) continue;
      if (i == 1 && e->is_app_of("let") && items[1]->list) {
        r = resolve_let_bindings(items[1]);
      } else {
        r = resolve(items[i]);
      }
      if (r != items[i]) {
        items[i] = r;
        changed = true;
      }
    }
    // The head of an application is a function symbol, never a name.
    if (!items.empty() && items[0]->list) {
      SExprPtr r = resolve(items[0]);
      if (r != items[0]) {
        items[0] = r;
        changed = true;
      }
    }
    return changed ? make_list(e->pos(), std::move(items)) : e;
  }

  SExprPtr resolve_let_bindings(const SExprPtr& bindings) {
    std::vector<SExprPtr> items = bindings->items;
    bool changed = false;
    for (auto& b : items) {
      if (!b->list || b->items.size() != 2) continue;
      SExprPtr v = resolve(b->items[1]);
      if (v != b->items[1]) {
        b = make_list(b->pos(), {b->items[0], v});
        changed = true;
      }
    }
    return changed ? make_list(bindings->pos(), std::move(items)) : bindings;
  }

  std::unordered_set<std::string> all_;
  std::unordered_map<std::string, SExprPtr> names_;
  std::size_t command_ = 0;
};

class DefineExpander {
 public:
  std::vector<RawCommand> run(std::vector<RawCommand> commands) {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const RawCommand& c = commands[i];
      if (c.kind != RawCommand::Kind::DefineFun) continue;
      if (defines_.count(c.index))
        throw DefineError("'" + c.index + "' defined twice", c.pos, i + 1);
      Define d;
      for (const auto& p : c.params) d.params.push_back(p.first);
      d.body = c.body;
      d.command = i + 1;
      d.pos = c.pos;
      defines_.emplace(c.index, std::move(d));
    }
    if (defines_.empty()) return commands;
    std::unordered_map<const SExpr*, SExprPtr> memo;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      RawCommand& c = commands[i];
      command_ = i + 1;
      if (c.kind == RawCommand::Kind::DefineFun) {
        c.body = expanded_body(c.index);
        c.expanded = true;
        continue;
      }
      for_each_term(c, [&](SExprPtr& e) { e = expand(e, nullptr, memo); });
    }
    return commands;
  }

 private:
  struct Define {
    std::vector<std::string> params;
    SExprPtr body;
    SExprPtr expanded;
    bool visiting = false;
    std::size_t command = 0;
    Position pos;
  };

  SExprPtr expanded_body(const std::string& name) {
    Define& d = defines_.at(name);
    if (d.expanded) return d.expanded;
    if (d.visiting)
      throw DefineError("recursive definition of '" + name + "'", d.pos, d.command);
    d.visiting = true;
    std::unordered_set<std::string> params(d.params.begin(), d.params.end());
    std::unordered_map<const SExpr*, SExprPtr> memo;
    SExprPtr body = expand(d.body, &params, memo);
    Define& again = defines_.at(name);
    again.visiting = false;
    again.expanded = body;
    return body;
  }

  SExprPtr expand(const SExprPtr& e, const std::unordered_set<std::string>* params,
                  std::unordered_map<const SExpr*, SExprPtr>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    SExprPtr result = e;
    if (e->is_symbol()) {
      const std::string& s = e->token.text;
      if (!(params && params->count(s))) {
        auto it = defines_.find(s);
        if (it != defines_.end() && it->second.params.empty()) result = expanded_body(s);
      }
    } else if (e->list && !e->items.empty()) {
      const SExpr& head = *e->items[0];
      auto it = head.is_symbol() ? defines_.find(head.token.text) : defines_.end();
      bool shadowed = head.is_symbol() && params && params->count(head.token.text);
      if (it != defines_.end() && !shadowed && !it->second.params.empty()) {
        const std::vector<std::string> fparams = it->second.params;
        if (fparams.size() + 1 != e->items.size())
          throw DefineError("'" + head.token.text + "' applied to the wrong number of arguments",
                            e->pos(), command_);
        SExprPtr body = expanded_body(head.token.text);
        std::vector<SExprPtr> bindings;
        for (std::size_t i = 0; i < fparams.size(); ++i) {
          Token sym;
          sym.kind = TokenKind::Symbol;
          sym.text = fparams[i];
          sym.pos = e->pos();
          bindings.push_back(
              make_list(e->pos(), {make_atom(sym), expand(e->items[i + 1], params, memo)}));
        }
        Token let;
        let.kind = TokenKind::Symbol;
        let.text = "let";
        let.pos = e->pos();
        result = make_list(e->pos(), {make_atom(let), make_list(e->pos(), std::move(bindings)), body});
      } else {
        std::vector<SExprPtr> items = e->items;
        bool changed = false;
        std::size_t skip = is_binder_head(*e) ? 1 : SIZE_MAX;
        for (std::size_t i = 1; i < items.size(); ++i) {
          if (i == skip) continue;
          SExprPtr r;
          if (i == 1 && e->is_app_of("let") && items[1]->list) {
            std::vector<SExprPtr> bs = items[1]->items;
            bool bchanged = false;
            for (auto& b : bs) {
              if (!b->list || b->items.size() != 2) continue;
              SExprPtr v = expand(b->items[1], params, memo);
              if (v != b->items[1]) {
                b = make_list(b->pos(), {b->items[0], v});
                bchanged = true;
              }
            }
            r = bchanged ? make_list(items[1]->pos(), std::move(bs)) : items[1];
          } else {
            r = expand(items[i], params, memo);
          }
          if (r != items[i]) {
            items[i] = r;
            changed = true;
          }
        }
        if (!items.empty() && items[0]->list) {
          SExprPtr r = expand(items[0], params, memo);
          if (r != items[0]) {
            items[0] = r;
            changed = true;
          }
        }
        if (changed) result = make_list(e->pos(), std::move(items));
      }
    }
    memo.emplace(e.get(), result);
    return result;
  }

  std::map<std::string, Define> defines_;
  std::size_t command_ = 0;
};

}  // namespace

std::vector<RawCommand> parse_proof(const std::vector<Token>& tokens) {
  std::vector<RawCommand> out;
  auto sexprs = parse_sexprs(tokens);
  out.reserve(sexprs.size());
  for (std::size_t i = 0; i < sexprs.size(); ++i)
    out.push_back(CommandParser(i + 1).parse(*sexprs[i]));
  return out;
}

std::vector<RawCommand> resolve_named(std::vector<RawCommand> commands) {
  return NameResolver().run(std::move(commands));
}

std::vector<RawCommand> expand_defines(std::vector<RawCommand> commands) {
  return DefineExpander().run(std::move(commands));
}

Declarations parse_problem(std::string_view text) {
  Declarations decls;
  auto sexprs = parse_sexprs(tokenize(text));
  for (std::size_t i = 0; i < sexprs.size(); ++i) {
    const SExpr& e = *sexprs[i];
    if (!e.list || e.items.empty() || !e.items[0]->is_symbol())
      throw ParseError("expected a problem command", e.pos(), i + 1);
    const std::string& head = e.items[0]->token.text;
    auto name_at = [&](std::size_t k) {
      if (e.items.size() <= k || !e.items[k]->is_symbol())
        throw ParseError("malformed " + head, e.pos(), i + 1);
      return e.items[k]->token.text;
    };
    if (head == "declare-sort") {
      decls.sorts.push_back(name_at(1));
    } else if (head == "declare-fun") {
      if (e.items.size() != 4 || !e.items[2]->list)
        throw ParseError("malformed declare-fun", e.pos(), i + 1);
      decls.funs.push_back({name_at(1), e.items[2]->items, e.items[3]});
    } else if (head == "declare-const") {
      if (e.items.size() != 3) throw ParseError("malformed declare-const", e.pos(), i + 1);
      decls.funs.push_back({name_at(1), {}, e.items[2]});
    } else if (head == "define-fun") {
      if (e.items.size() != 5 || !e.items[2]->list)
        throw ParseError("malformed define-fun", e.pos(), i + 1);
      FunDecl f{name_at(1), {}, e.items[3]};
      for (const auto& p : e.items[2]->items) {
        if (!p->list || p->items.size() != 2) throw ParseError("malformed parameter", p->pos(), i + 1);
        f.args.push_back(p->items[1]);
      }
      decls.funs.push_back(std::move(f));
    } else if (head == "define-sort" || head == "declare-datatype" ||
               head == "declare-datatypes") {
      throw ParseError(head + " is not supported", e.pos(), i + 1);
    }
    // set-logic, set-info, set-option, assert, check-sat, get-*, exit: no signature content
  }
  return decls;
}

std::vector<ProofCommand> load_proof(std::string_view text, TermStore& store,
                                     const Declarations* declarations) {
  auto raw = parse_proof(tokenize(text));
  raw = resolve_named(std::move(raw));
  raw = expand_defines(std::move(raw));
  return infer_sorts(raw, declarations, store);
}

}  // namespace vtcheck
