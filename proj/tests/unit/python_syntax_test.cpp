#include <doctest.h>

#include <string>

#include "nblint/python_syntax.hpp"

using nblint::python::Parse;
using nblint::python::StatementKind;
using nblint::python::StripMagics;

namespace {

struct CorpusCase {
  const char* source;
  bool accepted;
};

// Verdicts recorded from CPython's own parser.
const CorpusCase kCorpus[] = {
#include "python_syntax_corpus.inc"
};

}  // namespace

TEST_SUITE("python_syntax") {

TEST_CASE("agrees with the reference parser on the recorded corpus") {
  int mismatches = 0;
  for (const auto& c : kCorpus) {
    bool accepted = Parse(c.source).ok();
    if (accepted != c.accepted) {
      ++mismatches;
      MESSAGE("mismatch for source: " << c.source);
    }
  }
  CHECK(mismatches == 0);
  CHECK(std::size(kCorpus) > 400);
}

TEST_CASE("accepts syntax newer than the recording interpreter") {
  CHECK(Parse("x[*a]\n").ok());
  CHECK(Parse("try:\n    pass\nexcept* ValueError:\n    pass\n").ok());
  CHECK(Parse("type Point = tuple[float, float]\n").ok());
  CHECK(Parse("def f[T](x: T) -> T:\n    return x\n").ok());
  CHECK(Parse("class Box[T]:\n    pass\n").ok());
  CHECK(Parse("match x:\n    case [1, *rest]:\n        pass\n    case {'k': v}:\n        pass\n").ok());
}

TEST_CASE("reports the position of the first error") {
  auto r = Parse("x = 1\ndef f(:\n    pass\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->line == 2);
  CHECK(r.statements.empty());

  auto indent = Parse("if x:\npass\n");
  REQUIRE_FALSE(indent.ok());
  CHECK(indent.error->line == 2);
}

TEST_CASE("classifies top-level statements") {
  auto r = Parse("\"\"\"doc\"\"\"\nimport os\nfrom a import (b,\n    c)\nx = 1; import sys\n");
  REQUIRE(r.ok());
  REQUIRE(r.statements.size() == 5);
  CHECK(r.statements[0].kind == StatementKind::kDocstring);
  CHECK(r.statements[1].kind == StatementKind::kImport);
  CHECK(r.statements[1].line == 2);
  CHECK(r.statements[2].kind == StatementKind::kImport);
  CHECK(r.statements[3].kind == StatementKind::kOther);
  CHECK(r.statements[4].kind == StatementKind::kImport);
  CHECK(r.statements[4].line == 5);
}

TEST_CASE("nested imports are not top-level statements") {
  auto r = Parse("def f():\n    import os\n");
  REQUIRE(r.ok());
  REQUIRE(r.statements.size() == 1);
  CHECK(r.statements[0].kind == StatementKind::kOther);
}

TEST_CASE("line magics and shell escapes are blanked in place") {
  auto s = StripMagics("%matplotlib inline\n!pip install x\nfiles = !ls\nimport os\n");
  CHECK_FALSE(s.foreign);
  CHECK(s.text == "\n\n\nimport os\n");
  auto r = Parse(s.text);
  REQUIRE(r.ok());
  REQUIRE(r.statements.size() == 1);
  CHECK(r.statements[0].line == 4);
}

TEST_CASE("help queries are stripped") {
  CHECK(StripMagics("len?\nx = 1").text == "\nx = 1");
  CHECK(StripMagics("??np.array").text == "");
  CHECK(StripMagics("?print\nx = 1").text == "\nx = 1");
  CHECK(StripMagics("x = a ? b").text == "x = a ? b");
}

TEST_CASE("python cell magics keep their body") {
  auto s = StripMagics("%%time\nx = 1\n");
  CHECK_FALSE(s.foreign);
  CHECK(s.text == "\nx = 1\n");
}

TEST_CASE("other cell magics make the cell foreign") {
  CHECK(StripMagics("%%bash\nls -l\n").foreign);
  CHECK(StripMagics("\n%%html\n<b>x</b>").foreign);
  // Only the first content line can hold a cell magic.
  CHECK_FALSE(StripMagics("x = 1\n%%bash\n").foreign);
}

TEST_CASE("indented percent is Python, not a magic") {
  auto s = StripMagics("if x:\n    %time f()\n");
  CHECK(s.text == "if x:\n    %time f()\n");
  CHECK_FALSE(Parse(s.text).ok());
}

}  // TEST_SUITE
