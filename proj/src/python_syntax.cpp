#include "nblint/python_syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>
#include <regex>
#include <utility>

namespace nblint::python {
namespace {

enum class TokenType { kName, kNumber, kString, kOp, kNewline, kIndent, kDedent, kEnd };

struct Token {
  TokenType type;
  std::string_view text;
  int line;
  int column;
};

struct Failure {
  int line;
  int column;
  std::string message;
};

[[noreturn]] void Fail(int line, int column, std::string message) {
  throw Failure{line, column, std::move(message)};
}

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",
    "await", "break",  "class",   "continue", "def",      "del",    "elif",
    "else",  "except", "finally", "for",      "from",     "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",  "raise",  "return",  "try",      "while",    "with",   "yield"};

bool IsKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool IsIdentStart(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool IsIdentChar(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool IsStringPrefix(std::string_view word) {
  if (word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static constexpr std::array<std::string_view, 8> kPrefixes = {"r",  "u",  "f",  "b",
                                                               "br", "rb", "fr", "rf"};
  return std::find(kPrefixes.begin(), kPrefixes.end(), lower) != kPrefixes.end();
}

// ---------------------------------------------------------------------------
// Tokenizer

class Tokenizer {
 public:
  // A bracketed tokenizer behaves as if the text were enclosed in parentheses:
  // no NEWLINE/INDENT/DEDENT tokens. Used for f-string replacement fields.
  Tokenizer(std::string_view source, bool bracketed, int base_line)
      : src_(source), bracketed_(bracketed), line_(base_line) {}

  std::vector<Token> Run() {
    bool at_line_start = !bracketed_;
    while (true) {
      if (at_line_start && brackets_.empty()) {
        if (!MeasureIndent()) break;
        at_line_start = false;
        if (pos_ >= src_.size()) break;
      }
      SkipBlanks();
      if (pos_ >= src_.size()) break;
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        ConsumeNewline();
        if (brackets_.empty() && !bracketed_) {
          Emit(TokenType::kNewline, pos_, 0);
          at_line_start = true;
        }
        continue;
      }
      if (c == '\\') {
        const size_t next = pos_ + 1;
        if (next >= src_.size()) Fail(line_, Column(), "unexpected EOF while parsing");
        if (src_[next] == '\n' || src_[next] == '\r') {
          ++pos_;
          ConsumeNewline();
          if (pos_ >= src_.size()) Fail(line_, 0, "unexpected EOF while parsing");
          continue;
        }
        Fail(line_, Column(), "unexpected character after line continuation character");
      }
      if (IsIdentStart(static_cast<unsigned char>(c))) {
        size_t end = pos_;
        while (end < src_.size() && IsIdentChar(static_cast<unsigned char>(src_[end]))) ++end;
        const std::string_view word = src_.substr(pos_, end - pos_);
        if (end < src_.size() && (src_[end] == '"' || src_[end] == '\'') && IsStringPrefix(word)) {
          ScanString(pos_, end);
        } else {
          Emit(TokenType::kName, pos_, end - pos_);
          pos_ = end;
        }
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        ScanNumber();
        continue;
      }
      if (c == '"' || c == '\'') {
        ScanString(pos_, pos_);
        continue;
      }
      ScanOperator();
    }
    Finish();
    return std::move(out_);
  }

 private:
  int Column() const { return static_cast<int>(pos_ - line_start_); }

  void Emit(TokenType type, size_t start, size_t length) {
    out_.push_back(Token{type, src_.substr(std::min(start, src_.size()), length), line_,
                         static_cast<int>(start >= line_start_ ? start - line_start_ : 0)});
  }

  void ConsumeNewline() {
    if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++pos_;
    ++pos_;
    ++line_;
    line_start_ = pos_;
  }

  void SkipBlanks() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f'))
      ++pos_;
  }

  // Returns false at end of input. Blank and comment-only lines are skipped.
  bool MeasureIndent() {
    while (true) {
      int column = 0;
      int alt_column = 0;
      size_t p = pos_;
      while (p < src_.size()) {
        const char c = src_[p];
        if (c == ' ') {
          ++column;
          ++alt_column;
        } else if (c == '\t') {
          column = (column / 8 + 1) * 8;
          ++alt_column;
        } else if (c == '\f') {
          column = 0;
          alt_column = 0;
        } else {
          break;
        }
        ++p;
      }
      if (p >= src_.size()) {
        pos_ = p;
        return false;
      }
      const char c = src_[p];
      if (c == '#' || c == '\n' || c == '\r') {
        pos_ = p;
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        if (pos_ >= src_.size()) return false;
        ConsumeNewline();
        continue;
      }
      pos_ = p;
      // Indentation must compare the same way whether a tab counts as 8
      // columns or as 1, otherwise the meaning depends on tab width.
      constexpr const char* kInconsistent = "inconsistent use of tabs and spaces in indentation";
      if (column > indents_.back()) {
        if (alt_column <= alt_indents_.back()) Fail(line_, Column(), kInconsistent);
        indents_.push_back(column);
        alt_indents_.push_back(alt_column);
        Emit(TokenType::kIndent, pos_, 0);
      } else {
        while (column < indents_.back()) {
          indents_.pop_back();
          alt_indents_.pop_back();
          Emit(TokenType::kDedent, pos_, 0);
        }
        if (column != indents_.back()) {
          Fail(line_, Column(), "unindent does not match any outer indentation level");
        }
        if (alt_column != alt_indents_.back()) Fail(line_, Column(), kInconsistent);
      }
      return true;
    }
  }

  // Consumes `digit (_? digit)*`; returns false when no digit is present.
  bool ReadDigits(size_t& p, int (*is_digit)(int)) const {
    if (p >= src_.size() || !is_digit(static_cast<unsigned char>(src_[p]))) return false;
    ++p;
    while (p < src_.size()) {
      if (is_digit(static_cast<unsigned char>(src_[p]))) {
        ++p;
      } else if (src_[p] == '_' && p + 1 < src_.size() &&
                 is_digit(static_cast<unsigned char>(src_[p + 1]))) {
        p += 2;
      } else {
        break;
      }
    }
    return true;
  }

  static int IsOctal(int c) { return c >= '0' && c <= '7'; }
  static int IsBinary(int c) { return c == '0' || c == '1'; }

  void ScanNumber() {
    size_t p = pos_;
    const char next = p + 1 < src_.size() ? src_[p + 1] : '\0';
    if (src_[p] == '0' && std::string_view("xXoObB").find(next) != std::string_view::npos &&
        next != '\0') {
      p += 2;
      if (p < src_.size() && src_[p] == '_') ++p;
      int (*pred)(int) = (next == 'x' || next == 'X')   ? &isxdigit
                         : (next == 'o' || next == 'O') ? &IsOctal
                                                        : &IsBinary;
      if (!ReadDigits(p, pred)) Fail(line_, Column(), "invalid number literal");
    } else {
      const size_t int_start = p;
      ReadDigits(p, &isdigit);
      const std::string_view int_part = src_.substr(int_start, p - int_start);
      bool is_float = false;
      if (p < src_.size() && src_[p] == '.') {
        ++p;
        is_float = true;
        ReadDigits(p, &isdigit);
      }
      if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
        size_t q = p + 1;
        if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
        if (!ReadDigits(q, &isdigit)) Fail(line_, Column(), "invalid decimal literal");
        p = q;
        is_float = true;
      }
      bool imaginary = false;
      if (p < src_.size() && (src_[p] == 'j' || src_[p] == 'J')) {
        ++p;
        imaginary = true;
      }
      if (!is_float && !imaginary && int_part.size() > 1 && int_part[0] == '0' &&
          int_part.find_first_not_of("0_") != std::string_view::npos) {
        Fail(line_, Column(),
             "leading zeros in decimal integer literals are not permitted; use an 0o prefix "
             "for octal integers");
      }
    }
    if (p < src_.size() && IsIdentChar(static_cast<unsigned char>(src_[p]))) {
      Fail(line_, Column(), "invalid decimal literal");
    }
    Emit(TokenType::kNumber, pos_, p - pos_);
    pos_ = p;
  }

  void ScanString(size_t start, size_t quote_pos) {
    const int start_line = line_;
    const int start_column = static_cast<int>(start - line_start_);
    const char quote = src_[quote_pos];
    const bool triple = quote_pos + 2 < src_.size() && src_[quote_pos + 1] == quote &&
                        src_[quote_pos + 2] == quote;
    size_t p = quote_pos + (triple ? 3 : 1);
    while (true) {
      if (p >= src_.size()) {
        Fail(start_line, start_column,
             triple ? "unterminated triple-quoted string literal" : "unterminated string literal");
      }
      const char c = src_[p];
      if (c == '\\') {
        ++p;
        if (p < src_.size() && (src_[p] == '\n' || src_[p] == '\r')) {
          pos_ = p;
          ConsumeNewline();
          p = pos_;
        } else {
          ++p;
        }
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (!triple) Fail(start_line, start_column, "unterminated string literal");
        pos_ = p;
        ConsumeNewline();
        p = pos_;
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++p;
          break;
        }
        if (p + 2 < src_.size() && src_[p + 1] == quote && src_[p + 2] == quote) {
          p += 3;
          break;
        }
      }
      ++p;
    }
    out_.push_back(Token{TokenType::kString, src_.substr(start, p - start), start_line, start_column});
    pos_ = p;
  }

  void ScanOperator() {
    static constexpr std::array<std::string_view, 4> kThree = {"**=", "//=", ">>=", "<<="};
    static constexpr std::array<std::string_view, 19> kTwo = {
        "->", ":=", "**", "//", ">>", "<<", "<=", ">=", "==", "!=",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@="};
    const std::string_view rest = src_.substr(pos_);
    if (rest.substr(0, 3) == "...") {
      Emit(TokenType::kOp, pos_, 3);
      pos_ += 3;
      return;
    }
    for (auto op : kThree) {
      if (rest.substr(0, 3) == op) {
        Emit(TokenType::kOp, pos_, 3);
        pos_ += 3;
        return;
      }
    }
    for (auto op : kTwo) {
      if (rest.substr(0, 2) == op) {
        Emit(TokenType::kOp, pos_, 2);
        pos_ += 2;
        return;
      }
    }
    const char c = src_[pos_];
    if (std::string_view("+-*/%@&|^~<>,:;.=").find(c) != std::string_view::npos) {
      Emit(TokenType::kOp, pos_, 1);
      ++pos_;
      return;
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back({c, line_, Column()});
      Emit(TokenType::kOp, pos_, 1);
      ++pos_;
      return;
    }
    if (c == ')' || c == ']' || c == '}') {
      const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty()) Fail(line_, Column(), std::string("unmatched '") + c + "'");
      if (brackets_.back().kind != open) {
        Fail(line_, Column(),
             std::string("closing parenthesis '") + c +
                 "' does not match opening parenthesis '" + brackets_.back().kind + "'");
      }
      brackets_.pop_back();
      Emit(TokenType::kOp, pos_, 1);
      ++pos_;
      return;
    }
    Fail(line_, Column(), "invalid character '" + std::string(1, c) + "'");
  }

  void Finish() {
    if (!brackets_.empty()) {
      const auto& open = brackets_.back();
      Fail(open.line, open.column, std::string("'") + open.kind + "' was never closed");
    }
    if (!bracketed_) {
      if (!out_.empty() && out_.back().type != TokenType::kNewline &&
          out_.back().type != TokenType::kDedent && out_.back().type != TokenType::kIndent) {
        Emit(TokenType::kNewline, pos_, 0);
      }
      while (indents_.size() > 1) {
        indents_.pop_back();
        alt_indents_.pop_back();
        Emit(TokenType::kDedent, pos_, 0);
      }
    }
    Emit(TokenType::kEnd, pos_, 0);
  }

  struct OpenBracket {
    char kind;
    int line;
    int column;
  };

  std::string_view src_;
  bool bracketed_;
  size_t pos_ = 0;
  int line_;
  size_t line_start_ = 0;
  std::vector<int> indents_{0};
  std::vector<int> alt_indents_{0};
  std::vector<OpenBracket> brackets_;
  std::vector<Token> out_;
};

// ---------------------------------------------------------------------------
// Parser

enum class ExprKind { kName, kAttribute, kSubscript, kStarred, kTuple, kList, kString, kOther };

struct Expr {
  ExprKind kind = ExprKind::kOther;
  bool targetable = false;
  bool parenthesized = false;
};

Expr Other() { return Expr{}; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<TopLevelStatement> Module() {
    std::vector<TopLevelStatement> statements;
    while (Peek().type != TokenType::kEnd) {
      if (Peek().type == TokenType::kIndent) Fail(Peek(), "unexpected indent");
      if (Peek().type == TokenType::kNewline) {
        Next();
        continue;
      }
      Statement(&statements);
    }
    return statements;
  }

  void ReplacementExpression() {
    if (AtKeyword("yield")) {
      YieldExpression();
    } else {
      const Token& at = Peek();
      if (StarExpressions().kind == ExprKind::kStarred) {
        Fail(at, "can't use starred expression here");
      }
    }
    if (Peek().type != TokenType::kEnd) Fail(Peek(), "invalid syntax");
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& Peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& Next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] static void Fail(const Token& at, std::string message) {
    python::Fail(at.line, at.column, std::move(message));
  }

  bool AtOp(std::string_view op, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.type == TokenType::kOp && t.text == op;
  }
  bool AtKeyword(std::string_view kw, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.type == TokenType::kName && t.text == kw;
  }
  // A NAME usable as an identifier (soft keywords included).
  bool AtIdentifier(size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.type == TokenType::kName && !IsKeyword(t.text);
  }

  void ExpectOp(std::string_view op) {
    if (!AtOp(op)) Fail(Peek(), "expected '" + std::string(op) + "'");
    Next();
  }
  void ExpectKeyword(std::string_view kw) {
    if (!AtKeyword(kw)) Fail(Peek(), "expected '" + std::string(kw) + "'");
    Next();
  }
  void ExpectNewline() {
    if (Peek().type != TokenType::kNewline) Fail(Peek(), "invalid syntax");
    Next();
  }
  void Identifier() {
    if (!AtIdentifier()) Fail(Peek(), "invalid syntax");
    Next();
  }

  bool StartsExpression() const {
    const Token& t = Peek();
    switch (t.type) {
      case TokenType::kNumber:
      case TokenType::kString:
        return true;
      case TokenType::kName:
        return !IsKeyword(t.text) || t.text == "None" || t.text == "True" || t.text == "False" ||
               t.text == "not" || t.text == "lambda" || t.text == "await";
      case TokenType::kOp:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" ||
               t.text == "+" || t.text == "~" || t.text == "..." || t.text == "*";
      default:
        return false;
    }
  }

  // -- statements -----------------------------------------------------------

  void Statement(std::vector<TopLevelStatement>* record) {
    const Token& t = Peek();
    if (t.type == TokenType::kName) {
      const std::string_view w = t.text;
      if (w == "if" || w == "while" || w == "for" || w == "try" || w == "with" || w == "def" ||
          w == "class") {
        Record(record, t.line, StatementKind::kOther);
        Compound();
        return;
      }
      if (w == "async" && (AtKeyword("def", 1) || AtKeyword("for", 1) || AtKeyword("with", 1))) {
        Record(record, t.line, StatementKind::kOther);
        Next();
        Compound();
        return;
      }
      if (w == "match" && TryMatch()) {
        Record(record, t.line, StatementKind::kOther);
        return;
      }
    }
    if (AtOp("@")) {
      Record(record, t.line, StatementKind::kOther);
      Decorated();
      return;
    }
    SimpleStatements(record);
  }

  static void Record(std::vector<TopLevelStatement>* record, int line, StatementKind kind) {
    if (record != nullptr) record->push_back({line, kind});
  }

  void SimpleStatements(std::vector<TopLevelStatement>* record) {
    while (true) {
      const int line = Peek().line;
      const StatementKind kind = SimpleStatement();
      Record(record, line, kind);
      if (AtOp(";")) {
        Next();
        if (Peek().type == TokenType::kNewline) break;
        continue;
      }
      break;
    }
    ExpectNewline();
  }

  StatementKind SimpleStatement() {
    const Token& t = Peek();
    if (t.type == TokenType::kName) {
      const std::string_view w = t.text;
      if (w == "pass" || w == "break" || w == "continue") {
        Next();
        return StatementKind::kOther;
      }
      if (w == "return") {
        Next();
        if (StartsExpression()) StarExpressions();
        return StatementKind::kOther;
      }
      if (w == "raise") {
        Next();
        if (StartsExpression()) {
          Expression();
          if (AtKeyword("from")) {
            Next();
            Expression();
          }
        }
        return StatementKind::kOther;
      }
      if (w == "global" || w == "nonlocal") {
        Next();
        Identifier();
        while (AtOp(",")) {
          Next();
          Identifier();
        }
        return StatementKind::kOther;
      }
      if (w == "del") {
        Next();
        TargetList(/*allow_star=*/false);
        return StatementKind::kOther;
      }
      if (w == "assert") {
        Next();
        Expression();
        if (AtOp(",")) {
          Next();
          Expression();
        }
        return StatementKind::kOther;
      }
      if (w == "import") {
        ImportName();
        return StatementKind::kImport;
      }
      if (w == "from") {
        ImportFrom();
        return StatementKind::kImport;
      }
      if (w == "type" && AtIdentifier(1) && (AtOp("=", 2) || AtOp("[", 2))) {
        Next();
        Next();
        if (AtOp("[")) TypeParams();
        ExpectOp("=");
        Expression();
        return StatementKind::kOther;
      }
    }
    return ExpressionStatement();
  }

  StatementKind ExpressionStatement() {
    const Token& start = Peek();
    const Expr first = AtKeyword("yield") ? YieldExpression() : StarExpressions();
    if (AtOp(":")) {
      if (first.kind == ExprKind::kTuple) {
        Fail(start, "only single target (not tuple) can be annotated");
      }
      if (first.kind == ExprKind::kList) {
        Fail(start, "only single target (not list) can be annotated");
      }
      if (first.kind != ExprKind::kName && first.kind != ExprKind::kAttribute &&
          first.kind != ExprKind::kSubscript) {
        Fail(start, "illegal target for annotation");
      }
      Next();
      Expression();
      if (AtOp("=")) {
        Next();
        AssignedValue();
      }
      return StatementKind::kOther;
    }
    if (AtAugmentedAssign()) {
      if (first.parenthesized && first.kind != ExprKind::kName) {
        Fail(start, "'tuple' is an illegal expression for augmented assignment");
      }
      if (first.kind != ExprKind::kName && first.kind != ExprKind::kAttribute &&
          first.kind != ExprKind::kSubscript) {
        Fail(start, "illegal expression for augmented assignment");
      }
      Next();
      AssignedValue();
      return StatementKind::kOther;
    }
    if (AtOp("=")) {
      CheckTarget(first, start);
      while (AtOp("=")) {
        Next();
        const Token& at = Peek();
        const Expr value = AssignedValue();
        if (AtOp("=")) CheckTarget(value, at);
      }
      return StatementKind::kOther;
    }
    return first.kind == ExprKind::kString ? StatementKind::kDocstring : StatementKind::kOther;
  }

  Expr AssignedValue() {
    if (AtKeyword("yield")) return YieldExpression();
    return StarExpressions();
  }

  bool AtAugmentedAssign() const {
    static constexpr std::array<std::string_view, 13> kOps = {
        "+=", "-=", "*=", "/=", "//=", "%=", "@=", "&=", "|=", "^=", ">>=", "<<=", "**="};
    const Token& t = Peek();
    return t.type == TokenType::kOp &&
           std::find(kOps.begin(), kOps.end(), t.text) != kOps.end();
  }

  static void CheckTarget(const Expr& e, const Token& at) {
    if (!e.targetable) Fail(at, "cannot assign to expression");
  }


  void ImportName() {
    Next();
    DottedName();
    if (AtKeyword("as")) {
      Next();
      Identifier();
    }
    while (AtOp(",")) {
      Next();
      DottedName();
      if (AtKeyword("as")) {
        Next();
        Identifier();
      }
    }
  }

  void DottedName() {
    Identifier();
    while (AtOp(".")) {
      Next();
      Identifier();
    }
  }

  void ImportFrom() {
    Next();
    int dots = 0;
    while (AtOp(".") || AtOp("...")) {
      dots += static_cast<int>(Peek().text.size());
      Next();
    }
    if (!AtKeyword("import") || dots == 0) DottedName();
    ExpectKeyword("import");
    if (AtOp("*")) {
      Next();
      return;
    }
    const bool parenthesized = AtOp("(");
    if (parenthesized) Next();
    while (true) {
      Identifier();
      if (AtKeyword("as")) {
        Next();
        Identifier();
      }
      if (!AtOp(",")) break;
      Next();
      if (parenthesized && AtOp(")")) break;
      if (!parenthesized && !AtIdentifier()) {
        Fail(Peek(), "trailing comma not allowed without surrounding parentheses");
      }
    }
    if (parenthesized) ExpectOp(")");
  }

  void Block() {
    ExpectOp(":");
    if (Peek().type != TokenType::kNewline) {
      SimpleStatements(nullptr);
      return;
    }
    Next();
    if (Peek().type != TokenType::kIndent) Fail(Peek(), "expected an indented block");
    Next();
    while (Peek().type != TokenType::kDedent && Peek().type != TokenType::kEnd) {
      Statement(nullptr);
    }
    Next();
  }

  void Compound() {
    const Token& t = Next();
    const std::string_view w = t.text;
    if (w == "if") {
      NamedExpression();
      Block();
      while (AtKeyword("elif")) {
        Next();
        NamedExpression();
        Block();
      }
      ElseClause();
    } else if (w == "while") {
      NamedExpression();
      Block();
      ElseClause();
    } else if (w == "for") {
      TargetList(/*allow_star=*/true);
      ExpectKeyword("in");
      StarExpressions();
      Block();
      ElseClause();
    } else if (w == "try") {
      Try();
    } else if (w == "with") {
      With();
    } else if (w == "def") {
      Identifier();
      if (AtOp("[")) TypeParams();
      ExpectOp("(");
      Parameters(/*lambda=*/false);
      ExpectOp(")");
      if (AtOp("->")) {
        Next();
        Expression();
      }
      Block();
    } else if (w == "class") {
      Identifier();
      if (AtOp("[")) TypeParams();
      if (AtOp("(")) {
        Next();
        Arguments();
      }
      Block();
    } else {
      Fail(t, "invalid syntax");
    }
  }

  void ElseClause() {
    if (AtKeyword("else")) {
      Next();
      Block();
    }
  }

  void Try() {
    Block();
    bool handlers = false;
    while (AtKeyword("except")) {
      handlers = true;
      Next();
      if (AtOp("*")) Next();
      if (!AtOp(":")) {
        Expression();
        if (AtOp(",")) Fail(Peek(), "multiple exception types must be parenthesized");
        if (AtKeyword("as")) {
          Next();
          Identifier();
        }
      }
      Block();
    }
    if (handlers) ElseClause();
    if (AtKeyword("finally")) {
      Next();
      Block();
    } else if (!handlers) {
      Fail(Peek(), "expected 'except' or 'finally' block");
    }
  }

  void With() {
    if (AtOp("(")) {
      const size_t save = pos_;
      try {
        Next();
        WithItem();
        while (AtOp(",")) {
          Next();
          if (AtOp(")")) break;
          WithItem();
        }
        ExpectOp(")");
        if (!AtOp(":")) Fail(Peek(), "expected ':'");
        Block();
        return;
      } catch (const Failure&) {
        pos_ = save;
      }
    }
    WithItem();
    while (AtOp(",")) {
      Next();
      WithItem();
    }
    Block();
  }

  void WithItem() {
    Expression();
    if (AtKeyword("as")) {
      Next();
      const Token& at = Peek();
      const Expr target = TargetAtom();
      if (target.kind == ExprKind::kStarred || !target.targetable) {
        Fail(at, "cannot assign to expression");
      }
    }
  }

  void Decorated() {
    while (AtOp("@")) {
      Next();
      NamedExpression();
      ExpectNewline();
    }
    if (AtKeyword("async") && AtKeyword("def", 1)) Next();
    if (!AtKeyword("def") && !AtKeyword("class")) Fail(Peek(), "invalid syntax");
    Compound();
  }

  void TypeParams() {
    ExpectOp("[");
    while (!AtOp("]")) {
      if (AtOp("*") || AtOp("**")) {
        Next();
        Identifier();
      } else {
        Identifier();
        if (AtOp(":")) {
          Next();
          Expression();
        }
      }
      if (AtOp("=")) {
        Next();
        Expression();
      }
      if (!AtOp(",")) break;
      Next();
    }
    ExpectOp("]");
  }

  void Parameters(bool lambda) {
    const std::string_view terminator = lambda ? ":" : ")";
    int count = 0;
    bool seen_slash = false;
    bool seen_star = false;
    bool bare_star_pending = false;
    bool seen_default = false;
    bool seen_kwargs = false;
    while (!AtOp(terminator)) {
      const Token& at = Peek();
      if (seen_kwargs) Fail(at, "arguments cannot follow var-keyword argument");
      if (AtOp("/")) {
        if (count == 0) Fail(at, "at least one argument must precede /");
        if (seen_slash) Fail(at, "/ may appear only once");
        if (seen_star) Fail(at, "/ must be ahead of *");
        Next();
        seen_slash = true;
      } else if (AtOp("**")) {
        Next();
        Identifier();
        if (!lambda && AtOp(":")) {
          Next();
          Expression();
        }
        if (AtOp("=")) Fail(Peek(), "var-keyword argument cannot have default value");
        seen_kwargs = true;
      } else if (AtOp("*")) {
        if (seen_star) Fail(at, "* argument may appear only once");
        Next();
        seen_star = true;
        if (AtIdentifier()) {
          Next();
          if (!lambda && AtOp(":")) {
            Next();
            StarExpression();
          }
        } else {
          bare_star_pending = true;
          if (!AtOp(",")) Fail(Peek(), "named arguments must follow bare *");
        }
        if (AtOp("=")) Fail(Peek(), "var-positional argument cannot have default value");
      } else {
        Identifier();
        if (!lambda && AtOp(":")) {
          Next();
          Expression();
        }
        bool has_default = false;
        if (AtOp("=")) {
          Next();
          Expression();
          has_default = true;
        }
        if (seen_star) {
          bare_star_pending = false;
        } else if (has_default) {
          seen_default = true;
        } else if (seen_default) {
          Fail(at, "non-default argument follows default argument");
        }
      }
      ++count;
      if (!AtOp(",")) break;
      Next();
    }
    if (bare_star_pending) Fail(Peek(), "named arguments must follow bare *");
  }

  // -- match statement ------------------------------------------------------

  bool TryMatch() {
    const size_t save = pos_;
    try {
      Next();
      StarNamedExpression();
      if (AtOp(",")) {
        while (AtOp(",")) {
          Next();
          if (AtOp(":")) break;
          StarNamedExpression();
        }
      }
      ExpectOp(":");
      ExpectNewline();
      if (Peek().type != TokenType::kIndent) Fail(Peek(), "expected an indented block");
      Next();
      if (!AtKeyword("case")) Fail(Peek(), "expected 'case'");
    } catch (const Failure&) {
      pos_ = save;
      return false;
    }
    while (AtKeyword("case")) {
      Next();
      OpenSequencePattern();
      if (AtKeyword("if")) {
        Next();
        NamedExpression();
      }
      Block();
    }
    if (Peek().type != TokenType::kDedent) Fail(Peek(), "expected 'case'");
    Next();
    return true;
  }

  void OpenSequencePattern() {
    MaybeStarPattern();
    while (AtOp(",")) {
      Next();
      if (AtOp(":") || AtKeyword("if")) break;
      MaybeStarPattern();
    }
  }

  void MaybeStarPattern() {
    if (AtOp("*")) {
      Next();
      Identifier();
      return;
    }
    Pattern();
  }

  void Pattern() {
    ClosedPattern();
    while (AtOp("|")) {
      Next();
      ClosedPattern();
    }
    if (AtKeyword("as")) {
      Next();
      if (AtKeyword("_")) Fail(Peek(), "cannot use '_' as a target");
      Identifier();
    }
  }

  void SignedNumber() {
    if (AtOp("-")) Next();
    if (Peek().type != TokenType::kNumber) Fail(Peek(), "invalid syntax");
    Next();
    if (AtOp("+") || AtOp("-")) {
      Next();
      if (Peek().type != TokenType::kNumber) Fail(Peek(), "invalid syntax");
      Next();
    }
  }

  void LiteralStrings() {
    while (Peek().type == TokenType::kString) {
      const Token& t = Next();
      const size_t quote = t.text.find_first_of("'\"");
      for (char c : t.text.substr(0, quote)) {
        if (c == 'f' || c == 'F') Fail(t, "patterns may only match literals and attribute lookups");
      }
    }
  }

  void ClosedPattern() {
    const Token& t = Peek();
    if (AtOp("-") || t.type == TokenType::kNumber) {
      SignedNumber();
      return;
    }
    if (t.type == TokenType::kString) {
      LiteralStrings();
      return;
    }
    if (AtKeyword("None") || AtKeyword("True") || AtKeyword("False")) {
      Next();
      return;
    }
    if (AtIdentifier()) {
      Next();
      while (AtOp(".")) {
        Next();
        Identifier();
      }
      if (AtOp("(")) ClassPatternArguments();
      return;
    }
    if (AtOp("(")) {
      Next();
      if (AtOp(")")) {
        Next();
        return;
      }
      MaybeStarPattern();
      while (AtOp(",")) {
        Next();
        if (AtOp(")")) break;
        MaybeStarPattern();
      }
      ExpectOp(")");
      return;
    }
    if (AtOp("[")) {
      Next();
      while (!AtOp("]")) {
        MaybeStarPattern();
        if (!AtOp(",")) break;
        Next();
      }
      ExpectOp("]");
      return;
    }
    if (AtOp("{")) {
      MappingPattern();
      return;
    }
    Fail(t, "invalid pattern");
  }

  void MappingPattern() {
    Next();
    bool seen_rest = false;
    while (!AtOp("}")) {
      if (seen_rest) Fail(Peek(), "double star pattern must be last");
      if (AtOp("**")) {
        Next();
        Identifier();
        seen_rest = true;
      } else {
        const Token& key = Peek();
        if (key.type == TokenType::kString) {
          LiteralStrings();
        } else if (AtOp("-") || key.type == TokenType::kNumber) {
          SignedNumber();
        } else if (AtKeyword("None") || AtKeyword("True") || AtKeyword("False")) {
          Next();
        } else if (AtIdentifier()) {
          Next();
          if (!AtOp(".")) Fail(key, "mapping pattern keys may only match literals and attribute lookups");
          while (AtOp(".")) {
            Next();
            Identifier();
          }
        } else {
          Fail(key, "invalid pattern");
        }
        ExpectOp(":");
        Pattern();
      }
      if (!AtOp(",")) break;
      Next();
    }
    ExpectOp("}");
  }

  void ClassPatternArguments() {
    Next();
    bool seen_keyword = false;
    while (!AtOp(")")) {
      if (AtIdentifier() && AtOp("=", 1)) {
        Next();
        Next();
        Pattern();
        seen_keyword = true;
      } else {
        if (seen_keyword) Fail(Peek(), "positional patterns follow keyword patterns");
        Pattern();
      }
      if (!AtOp(",")) break;
      Next();
    }
    ExpectOp(")");
  }

  // -- targets --------------------------------------------------------------

  // Assignment targets in `for`, `del` and comprehensions, where the general
  // expression grammar would swallow the `in` keyword.
  Expr TargetList(bool allow_star) {
    Expr first = TargetItem(allow_star);
    if (!AtOp(",")) return first;
    while (AtOp(",")) {
      Next();
      if (AtKeyword("in") || AtOp("=") || Peek().type == TokenType::kNewline || AtOp(";")) break;
      TargetItem(allow_star);
    }
    return Expr{ExprKind::kTuple, true, false};
  }

  Expr TargetItem(bool allow_star) {
    const Token& at = Peek();
    if (AtOp("*")) {
      if (!allow_star) Fail(at, "cannot delete starred");
      Next();
      const Expr inner = TargetAtom();
      if (!inner.targetable) Fail(at, "cannot assign to expression");
      return Expr{ExprKind::kStarred, true, false};
    }
    const Expr e = TargetAtom();
    if (!e.targetable || (e.kind == ExprKind::kStarred && !allow_star)) {
      Fail(at, allow_star ? "cannot assign to expression" : "cannot delete expression");
    }
    return e;
  }

  Expr TargetAtom() { return Primary(); }

  // -- expressions ----------------------------------------------------------

  Expr StarExpressions() {
    const Expr first = StarExpression();
    if (!AtOp(",")) return first;
    bool targetable = first.targetable;
    while (AtOp(",")) {
      Next();
      if (!StartsExpression()) break;
      targetable = StarExpression().targetable && targetable;
    }
    return Expr{ExprKind::kTuple, targetable, false};
  }

  Expr StarExpression() {
    if (AtOp("*")) {
      Next();
      const Expr inner = BitwiseOr();
      return Expr{ExprKind::kStarred, inner.targetable, false};
    }
    return Expression();
  }

  Expr StarNamedExpression() {
    if (AtOp("*")) {
      Next();
      const Expr inner = BitwiseOr();
      return Expr{ExprKind::kStarred, inner.targetable, false};
    }
    return NamedExpression();
  }

  Expr NamedExpression() {
    if (AtIdentifier() && AtOp(":=", 1)) {
      Next();
      Next();
      Expression();
      return Other();
    }
    const Token& at = Peek();
    const Expr e = Expression();
    if (AtOp(":=")) Fail(at, "cannot use assignment expressions with expression");
    return e;
  }

  Expr Expression() {
    if (AtKeyword("lambda")) return Lambda();
    const Expr e = Disjunction();
    if (AtKeyword("if")) {
      Next();
      Disjunction();
      if (!AtKeyword("else")) Fail(Peek(), "expected 'else' after 'if' expression");
      Next();
      Expression();
      return Other();
    }
    return e;
  }

  Expr Lambda() {
    Next();
    Parameters(/*lambda=*/true);
    ExpectOp(":");
    Expression();
    return Other();
  }

  Expr YieldExpression() {
    Next();
    if (AtKeyword("from")) {
      Next();
      Expression();
    } else if (StartsExpression()) {
      StarExpressions();
    }
    return Other();
  }

  Expr Disjunction() {
    Expr e = Conjunction();
    while (AtKeyword("or")) {
      Next();
      Conjunction();
      e = Other();
    }
    return e;
  }

  Expr Conjunction() {
    Expr e = Inversion();
    while (AtKeyword("and")) {
      Next();
      Inversion();
      e = Other();
    }
    return e;
  }

  Expr Inversion() {
    if (AtKeyword("not")) {
      Next();
      Inversion();
      return Other();
    }
    return Comparison();
  }

  bool AtComparisonOperator() const {
    const Token& t = Peek();
    if (t.type == TokenType::kOp) {
      return t.text == "<" || t.text == ">" || t.text == "==" || t.text == ">=" ||
             t.text == "<=" || t.text == "!=";
    }
    return AtKeyword("in") || AtKeyword("is") || (AtKeyword("not") && AtKeyword("in", 1));
  }

  Expr Comparison() {
    Expr e = BitwiseOr();
    while (AtComparisonOperator()) {
      if (AtKeyword("not")) {
        Next();
        Next();
      } else if (AtKeyword("is")) {
        Next();
        if (AtKeyword("not")) Next();
      } else {
        Next();
      }
      BitwiseOr();
      e = Other();
    }
    return e;
  }

  Expr Binary(std::initializer_list<std::string_view> ops, Expr (Parser::*operand)()) {
    Expr e = (this->*operand)();
    while (Peek().type == TokenType::kOp &&
           std::find(ops.begin(), ops.end(), Peek().text) != ops.end()) {
      Next();
      (this->*operand)();
      e = Other();
    }
    return e;
  }

  Expr BitwiseOr() { return Binary({"|"}, &Parser::BitwiseXor); }
  Expr BitwiseXor() { return Binary({"^"}, &Parser::BitwiseAnd); }
  Expr BitwiseAnd() { return Binary({"&"}, &Parser::Shift); }
  Expr Shift() { return Binary({"<<", ">>"}, &Parser::Sum); }
  Expr Sum() { return Binary({"+", "-"}, &Parser::Term); }
  Expr Term() { return Binary({"*", "/", "//", "%", "@"}, &Parser::Factor); }

  Expr Factor() {
    if (AtOp("+") || AtOp("-") || AtOp("~")) {
      Next();
      Factor();
      return Other();
    }
    return Power();
  }

  Expr Power() {
    Expr e;
    if (AtKeyword("await")) {
      Next();
      Primary();
      e = Other();
    } else {
      e = Primary();
    }
    if (AtOp("**")) {
      Next();
      Factor();
      return Other();
    }
    return e;
  }

  Expr Primary() {
    Expr e = Atom();
    while (true) {
      if (AtOp(".")) {
        Next();
        Identifier();
        e = Expr{ExprKind::kAttribute, true, false};
      } else if (AtOp("(")) {
        Next();
        Arguments();
        e = Other();
      } else if (AtOp("[")) {
        Next();
        Slices();
        e = Expr{ExprKind::kSubscript, true, false};
      } else {
        return e;
      }
    }
  }

  void Arguments() {
    bool seen_keyword = false;
    bool seen_double_star = false;
    bool generator = false;
    int count = 0;
    while (!AtOp(")")) {
      const Token& at = Peek();
      if (AtOp("*")) {
        Next();
        Expression();
        if (seen_double_star) {
          Fail(at, "iterable argument unpacking follows keyword argument unpacking");
        }
      } else if (AtOp("**")) {
        Next();
        Expression();
        seen_double_star = true;
      } else if (at.type == TokenType::kName && AtOp("=", 1)) {
        if (IsKeyword(at.text)) Fail(at, "cannot assign to " + std::string(at.text));
        Next();
        Next();
        Expression();
        seen_keyword = true;
      } else {
        NamedExpression();
        if (AtKeyword("for") || (AtKeyword("async") && AtKeyword("for", 1))) {
          ComprehensionClauses();
          generator = true;
        }
        if (AtOp("=")) {
          Fail(Peek(), "expression cannot contain assignment, perhaps you meant \"==\"?");
        }
        if (seen_double_star) {
          Fail(at, "positional argument follows keyword argument unpacking");
        }
        if (seen_keyword) Fail(at, "positional argument follows keyword argument");
      }
      ++count;
      if (!AtOp(",")) break;
      Next();
    }
    if (generator && count > 1) Fail(Peek(), "Generator expression must be parenthesized");
    ExpectOp(")");
  }

  void Slices() {
    if (AtOp("]")) Fail(Peek(), "invalid syntax");
    while (true) {
      Slice();
      if (!AtOp(",")) break;
      Next();
      if (AtOp("]")) break;
    }
    ExpectOp("]");
  }

  void Slice() {
    if (AtOp("*")) {
      Next();
      BitwiseOr();
      return;
    }
    if (!AtOp(":")) {
      NamedExpression();
      if (!AtOp(":")) return;
    }
    Next();
    if (!AtOp(":") && !AtOp(",") && !AtOp("]")) Expression();
    if (AtOp(":")) {
      Next();
      if (!AtOp(",") && !AtOp("]")) Expression();
    }
  }

  void ComprehensionClauses() {
    while (AtKeyword("for") || (AtKeyword("async") && AtKeyword("for", 1))) {
      if (AtKeyword("async")) Next();
      Next();
      TargetList(/*allow_star=*/true);
      ExpectKeyword("in");
      Disjunction();
      while (AtKeyword("if")) {
        Next();
        Disjunction();
      }
    }
  }

  bool AtComprehension() const {
    return AtKeyword("for") || (AtKeyword("async") && AtKeyword("for", 1));
  }

  Expr Atom() {
    const Token& t = Peek();
    switch (t.type) {
      case TokenType::kName:
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          Next();
          return Other();
        }
        if (IsKeyword(t.text)) Fail(t, "invalid syntax");
        Next();
        return Expr{ExprKind::kName, true, false};
      case TokenType::kNumber:
        Next();
        return Other();
      case TokenType::kString:
        Strings();
        return Expr{ExprKind::kString, false, false};
      case TokenType::kOp:
        if (t.text == "...") {
          Next();
          return Other();
        }
        if (t.text == "(") return Parenthesized();
        if (t.text == "[") return ListDisplay();
        if (t.text == "{") return BraceDisplay();
        break;
      default:
        break;
    }
    if (t.type == TokenType::kNewline || t.type == TokenType::kEnd) {
      Fail(t, "invalid syntax");
    }
    Fail(t, "invalid syntax");
  }

  Expr Parenthesized() {
    const Token& open = Next();
    if (AtOp(")")) {
      Next();
      return Expr{ExprKind::kTuple, true, true};
    }
    if (AtKeyword("yield")) {
      YieldExpression();
      ExpectOp(")");
      return Other();
    }
    Expr first = StarNamedExpression();
    if (AtComprehension()) {
      if (first.kind == ExprKind::kStarred) Fail(open, "iterable unpacking cannot be used in comprehension");
      ComprehensionClauses();
      ExpectOp(")");
      return Other();
    }
    if (AtOp(",")) {
      bool targetable = first.targetable;
      while (AtOp(",")) {
        Next();
        if (AtOp(")")) break;
        targetable = StarNamedExpression().targetable && targetable;
      }
      ExpectOp(")");
      return Expr{ExprKind::kTuple, targetable, true};
    }
    ExpectOp(")");
    if (first.kind == ExprKind::kStarred) Fail(open, "cannot use starred expression here");
    first.parenthesized = true;
    return first;
  }

  Expr ListDisplay() {
    const Token& open = Next();
    if (AtOp("]")) {
      Next();
      return Expr{ExprKind::kList, true, false};
    }
    const Expr first = StarNamedExpression();
    if (AtComprehension()) {
      if (first.kind == ExprKind::kStarred) Fail(open, "iterable unpacking cannot be used in comprehension");
      ComprehensionClauses();
      ExpectOp("]");
      return Other();
    }
    bool targetable = first.targetable;
    while (AtOp(",")) {
      Next();
      if (AtOp("]")) break;
      targetable = StarNamedExpression().targetable && targetable;
    }
    ExpectOp("]");
    return Expr{ExprKind::kList, targetable, false};
  }

  Expr BraceDisplay() {
    const Token& open = Next();
    if (AtOp("}")) {
      Next();
      return Other();
    }
    bool dict = false;
    if (AtOp("**")) {
      Next();
      BitwiseOr();
      dict = true;
    } else {
      const Expr first = StarNamedExpression();
      if (AtOp(":")) {
        if (first.kind == ExprKind::kStarred) Fail(open, "cannot use a starred expression in a dictionary value");
        Next();
        Expression();
        dict = true;
      } else if (AtComprehension()) {
        if (first.kind == ExprKind::kStarred) Fail(open, "iterable unpacking cannot be used in comprehension");
        ComprehensionClauses();
        ExpectOp("}");
        return Other();
      }
    }
    if (dict && AtComprehension()) {
      ComprehensionClauses();
      ExpectOp("}");
      return Other();
    }
    while (AtOp(",")) {
      Next();
      if (AtOp("}")) break;
      if (dict) {
        if (AtOp("**")) {
          Next();
          BitwiseOr();
        } else {
          Expression();
          ExpectOp(":");
          Expression();
        }
      } else {
        StarNamedExpression();
      }
    }
    ExpectOp("}");
    return Other();
  }

  void Strings() {
    bool any_bytes = false;
    bool any_text = false;
    while (Peek().type == TokenType::kString) {
      const Token& t = Next();
      const size_t quote = t.text.find_first_of("'\"");
      bool is_bytes = false;
      bool is_format = false;
      bool is_raw = false;
      for (char c : t.text.substr(0, quote)) {
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        is_bytes |= lower == 'b';
        is_format |= lower == 'f';
        is_raw |= lower == 'r';
      }
      (is_bytes ? any_bytes : any_text) = true;
      if (any_bytes && any_text) Fail(t, "cannot mix bytes and nonbytes literals");
      const std::string_view quoted = t.text.substr(quote);
      const size_t width =
          quoted.size() >= 6 && quoted[1] == quoted[0] && quoted[2] == quoted[0] ? 3 : 1;
      const std::string_view body = quoted.substr(width, quoted.size() - 2 * width);
      if (is_bytes) {
        for (char c : body) {
          if (static_cast<unsigned char>(c) >= 0x80) {
            Fail(t, "bytes can only contain ASCII literal characters");
          }
        }
      }
      if (!is_raw) ValidateEscapes(body, is_bytes, t);
      if (is_format) ValidateFString(body, is_raw, t);
    }
  }

  static void ValidateEscapes(std::string_view body, bool bytes, const Token& at) {
    auto hex_run = [&](size_t from, size_t count) {
      if (from + count > body.size()) return false;
      for (size_t k = from; k < from + count; ++k) {
        if (!std::isxdigit(static_cast<unsigned char>(body[k]))) return false;
      }
      return true;
    };
    for (size_t i = 0; i + 1 < body.size(); ++i) {
      if (body[i] != '\\') continue;
      const char kind = body[i + 1];
      if (kind == 'x' && !hex_run(i + 2, 2)) Fail(at, "(value error) invalid \\x escape");
      if (!bytes) {
        if (kind == 'u' && !hex_run(i + 2, 4)) Fail(at, "(unicode error) truncated \\uXXXX escape");
        if (kind == 'U' && !hex_run(i + 2, 8)) {
          Fail(at, "(unicode error) truncated \\UXXXXXXXX escape");
        }
        if (kind == 'N' && (i + 2 >= body.size() || body[i + 2] != '{' ||
                            body.find('}', i + 3) == std::string_view::npos)) {
          Fail(at, "(unicode error) malformed \\N character escape");
        }
      }
      ++i;
    }
  }

  static void ValidateFString(std::string_view body, bool raw, const Token& at) {
    size_t i = 0;
    while (i < body.size()) {
      const char c = body[i];
      if (c == '\\' && !raw) {
        if (i + 2 < body.size() && body[i + 1] == 'N' && body[i + 2] == '{') {
          const size_t close = body.find('}', i + 3);
          i = close == std::string_view::npos ? body.size() : close + 1;
        } else {
          i += 2;
        }
      } else if (c == '{') {
        if (i + 1 < body.size() && body[i + 1] == '{') {
          i += 2;
        } else {
          i = ReplacementField(body, i + 1, raw, at, 0);
        }
      } else if (c == '}') {
        if (i + 1 < body.size() && body[i + 1] == '}') {
          i += 2;
        } else {
          Fail(at, "f-string: single '}' is not allowed");
        }
      } else {
        ++i;
      }
    }
  }

  // `start` is just past the opening brace; returns the index past the
  // closing brace.
  static size_t ReplacementField(std::string_view body, size_t start, bool raw, const Token& at,
                                 int nesting) {
    if (nesting > 1) Fail(at, "f-string: expressions nested too deeply");
    int depth = 0;
    size_t j = start;
    while (j < body.size()) {
      const char ch = body[j];
      if (ch == '\'' || ch == '"') {
        const size_t close = body.find(ch, j + 1);
        if (close == std::string_view::npos) Fail(at, "f-string: unterminated string");
        j = close + 1;
        continue;
      }
      if (ch == '#') Fail(at, "f-string expression part cannot include '#'");
      if (ch == '(' || ch == '[' || ch == '{') {
        ++depth;
      } else if (ch == ')' || ch == ']' || ch == '}') {
        if (depth == 0) {
          if (ch == '}') break;
          Fail(at, std::string("f-string: unmatched '") + ch + "'");
        }
        --depth;
      } else if (depth == 0 && ch == '!' && (j + 1 >= body.size() || body[j + 1] != '=')) {
        break;
      } else if (depth == 0 && ch == ':') {
        break;
      } else if (depth == 0 && ch == '=') {
        if (j + 1 < body.size() && body[j + 1] == '=') {
          j += 2;
          continue;
        }
        const char prev = j > start ? body[j - 1] : '\0';
        if (prev != '=' && prev != '!' && prev != '<' && prev != '>') break;
      }
      ++j;
    }
    if (j >= body.size()) Fail(at, "f-string: expecting '}'");
    const std::string_view expression = body.substr(start, j - start);
    if (expression.find_first_not_of(" \t\r\n\f") == std::string_view::npos) {
      Fail(at, "f-string: empty expression not allowed");
    }
    try {
      Parser sub(Tokenizer(expression, /*bracketed=*/true, at.line).Run());
      sub.ReplacementExpression();
    } catch (const Failure& failure) {
      Fail(at, "f-string: " + failure.message);
    }
    if (body[j] == '=') {
      ++j;
      while (j < body.size() && body[j] == ' ') ++j;
    }
    if (j < body.size() && body[j] == '!') {
      ++j;
      if (j >= body.size() || std::string_view("sra").find(body[j]) == std::string_view::npos) {
        Fail(at, "f-string: invalid conversion character");
      }
      ++j;
    }
    if (j < body.size() && body[j] == ':') {
      ++j;
      while (j < body.size() && body[j] != '}') {
        if (body[j] == '{') {
          j = ReplacementField(body, j + 1, raw, at, nesting + 1);
        } else {
          ++j;
        }
      }
    }
    if (j >= body.size() || body[j] != '}') Fail(at, "f-string: expecting '}'");
    return j + 1;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

ParseResult Parse(std::string_view source) {
  ParseResult result;
  try {
    Parser parser(Tokenizer(source, /*bracketed=*/false, 1).Run());
    result.statements = parser.Module();
  } catch (const Failure& failure) {
    result.error = SyntaxError{failure.line, failure.column, failure.message};
    result.statements.clear();
  }
  return result;
}

StrippedCell StripMagics(std::string_view cell_source) {
  static const std::array<std::string_view, 7> kPythonCellMagics = {
      "time", "timeit", "capture", "prun", "debug", "python", "python3"};
  static const std::regex kCapture(R"(^[A-Za-z_][A-Za-z0-9_]*\s*=\s*[!%])");
  static const std::regex kHelp(
      R"(^(\?{1,2}[A-Za-z_][A-Za-z0-9_.]*\*?|[A-Za-z_][A-Za-z0-9_.]*\?{1,2})\s*$)");

  StrippedCell cell;
  size_t start = 0;
  bool first_content_line = true;
  while (start <= cell_source.size()) {
    size_t end = cell_source.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = cell_source.size();
    const std::string_view line = cell_source.substr(start, end - start);
    const bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;

    bool strip = false;
    if (first_content_line && !blank) {
      first_content_line = false;
      if (line.rfind("%%", 0) == 0) {
        std::string_view name = line.substr(2);
        name = name.substr(0, name.find_first_of(" \t\r"));
        if (std::find(kPythonCellMagics.begin(), kPythonCellMagics.end(), name) ==
            kPythonCellMagics.end()) {
          cell.text.clear();
          cell.foreign = true;
          return cell;
        }
        strip = true;
      }
    }
    if (!line.empty() && (line[0] == '%' || line[0] == '!')) strip = true;
    if (!strip && !blank) {
      const std::string owned(line);
      strip = std::regex_search(owned, kCapture) || std::regex_search(owned, kHelp);
    }
    if (!strip) cell.text.append(line);
    if (last) break;
    cell.text.push_back('\n');
    start = end + 1;
  }
  return cell;
}

}  // namespace nblint::python
