#pragma once

// Syntax recognizer for Python 3 source, covering the grammar up to 3.12
// (match statements, walrus, positional-only parameters, except*, type
// parameter lists, f-string replacement fields). It answers one question,
// "would the CPython parser accept this?", and reports the top-level
// statements of an accepted module. No AST is built.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nblint::python {

struct SyntaxError {
  int line = 0;    // 1-based
  int column = 0;  // 0-based byte offset within the line
  std::string message;
};

enum class StatementKind {
  kImport,     // `import x` or `from x import y`
  kDocstring,  // expression statement made only of string literals
  kOther,
};

struct TopLevelStatement {
  int line = 0;
  StatementKind kind = StatementKind::kOther;
};

struct ParseResult {
  std::optional<SyntaxError> error;
  // Empty when `error` is set. Statements joined by `;` are listed separately.
  std::vector<TopLevelStatement> statements;

  bool ok() const { return !error.has_value(); }
};

ParseResult Parse(std::string_view source);

// IPython magics and shell escapes are not Python. Lines starting at column 0
// with `%` or `!`, and `name = !cmd` / `name = %magic` captures, are blanked
// so line numbers are preserved.
//
// A cell opening with a `%%` cell magic is only Python when the magic runs its
// body through the kernel (`%%time`, `%%timeit`, `%%capture`, ...). Other
// cell magics (`%%bash`, `%%html`, ...) mark the whole cell as foreign.
struct StrippedCell {
  std::string text;
  bool foreign = false;
};

StrippedCell StripMagics(std::string_view cell_source);

}  // namespace nblint::python
