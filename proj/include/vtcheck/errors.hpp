#ifndef VTCHECK_ERRORS_HPP
#define VTCHECK_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vtcheck {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
};

std::string to_string(const Position& pos);

/// Base of every error raised while loading a proof.  `code()` is the stable
/// diagnostic identifier reported by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::optional<Position> pos = std::nullopt,
        std::optional<std::size_t> command = std::nullopt);

  const std::string& code() const { return code_; }
  const std::optional<Position>& position() const { return pos_; }
  const std::optional<std::size_t>& command() const { return command_; }
  const std::string& bare_message() const { return message_; }

 private:
  std::string code_;
  std::string message_;
  std::optional<Position> pos_;
  std::optional<std::size_t> command_;
};

#define VTCHECK_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& message,                              \
                  std::optional<Position> pos = std::nullopt,              \
                  std::optional<std::size_t> command = std::nullopt)       \
        : Error(Code, message, pos, command) {}                            \
  };

VTCHECK_DEFINE_ERROR(LexError, "lex-error")
VTCHECK_DEFINE_ERROR(ParseError, "parse-error")
VTCHECK_DEFINE_ERROR(NameError, "name-error")
VTCHECK_DEFINE_ERROR(DefineError, "define-error")
VTCHECK_DEFINE_ERROR(SortError, "sort-error")
VTCHECK_DEFINE_ERROR(StructureError, "structure-error")
VTCHECK_DEFINE_ERROR(NonlinearError, "nonlinear")

#undef VTCHECK_DEFINE_ERROR

}  // namespace vtcheck

#endif  // VTCHECK_ERRORS_HPP
