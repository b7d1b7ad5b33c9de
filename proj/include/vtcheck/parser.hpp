#ifndef VTCHECK_PARSER_HPP
#define VTCHECK_PARSER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vtcheck/sexpr.hpp"
#include "vtcheck/term.hpp"

namespace vtcheck {

// ---------------------------------------------------------------------------
// Untyped commands, as read from the text.

struct RawArg {
  enum class Kind {
    Term,     // a plain term
    Assign,   // (:= x t) or (:= (x S) t)
    Symbol,   // a bare symbol (anchor: fixed variable)
    Pair,     // (x e): a sorted variable or an assignment, decided by elaboration
  };
  Kind kind = Kind::Term;
  std::string name;
  SExprPtr sort;  // Assign with an explicit sort
  SExprPtr term;  // Term/Assign value; Pair second component
  Position pos;
};

struct RawCommand {
  enum class Kind { Assume, Step, Anchor, DefineFun };
  Kind kind = Kind::Step;
  std::string index;  // assume/step index, anchor target, define-fun name
  SExprPtr term;      // assume
  std::vector<SExprPtr> clause;
  std::string rule;
  std::vector<std::string> premises;
  std::vector<std::string> discharge;
  std::vector<RawArg> args;  // step :args or anchor :args
  std::vector<std::pair<std::string, SExprPtr>> params;  // define-fun
  SExprPtr result_sort;                                  // define-fun
  SExprPtr body;                                         // define-fun
  bool expanded = false;
  Position pos;
};

/// Parses the command list of the flat proof syntax.
std::vector<RawCommand> parse_proof(const std::vector<Token>& tokens);

/// Registers and strips `(! t :named n)` annotations, replacing every later
/// occurrence of a name by its term.  Purely syntactic.
std::vector<RawCommand> resolve_named(std::vector<RawCommand> commands);

/// Expands occurrences of define-fun symbols by their bodies.  Defines are
/// kept in the list and marked expanded.
std::vector<RawCommand> expand_defines(std::vector<RawCommand> commands);

// ---------------------------------------------------------------------------
// Optional problem-file signature.

struct FunDecl {
  std::string name;
  std::vector<SExprPtr> args;
  SExprPtr result;
};

struct Declarations {
  std::vector<std::string> sorts;
  std::vector<FunDecl> funs;
};

Declarations parse_problem(std::string_view text);

// ---------------------------------------------------------------------------
// Typed commands.

struct ContextEntry {
  TermId var;
  std::optional<TermId> value;  // empty for a fixed variable

  bool operator==(const ContextEntry&) const = default;
};

struct StepArg {
  std::optional<TermId> var;  // set for (:= x t)
  TermId term;

  bool operator==(const StepArg&) const = default;
};

struct AssumeCmd {
  std::string index;
  TermId term;

  bool operator==(const AssumeCmd&) const = default;
};

struct StepCmd {
  std::string index;
  Clause clause;
  std::string rule;
  std::vector<std::string> premises;
  std::vector<StepArg> args;
  std::vector<std::string> discharge;

  bool operator==(const StepCmd&) const = default;
};

struct AnchorCmd {
  std::string target;
  std::vector<ContextEntry> context;

  bool operator==(const AnchorCmd&) const = default;
};

struct DefineFunCmd {
  std::string name;
  std::vector<TermId> params;
  SortId result;
  TermId body;
  bool expanded = true;

  bool operator==(const DefineFunCmd&) const = default;
};

struct ProofCommand {
  std::variant<AssumeCmd, StepCmd, AnchorCmd, DefineFunCmd> body;
  Position pos;

  bool operator==(const ProofCommand& other) const { return body == other.body; }
};

/// Sort inference and elaboration into interned terms.  Context variables
/// get their sorts from the paired term or from their uses inside the
/// anchored region; unknown functions get ranks from their uses.
std::vector<ProofCommand> infer_sorts(const std::vector<RawCommand>& commands,
                                      const Declarations* declarations,
                                      TermStore& store);

/// The whole pipeline: tokenize, parse, resolve names, expand defines,
/// elaborate.
std::vector<ProofCommand> load_proof(std::string_view text, TermStore& store,
                                     const Declarations* declarations = nullptr);

}  // namespace vtcheck

#endif  // VTCHECK_PARSER_HPP
