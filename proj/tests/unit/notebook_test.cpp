#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nblint/error.hpp"
#include "nblint/notebook.hpp"

using namespace nblint;
using nblint::testing::Code;
using nblint::testing::Md;
using nblint::testing::NotebookJson;

namespace {

const std::filesystem::path kFixtures = NBLINT_TEST_SOURCE_DIR "/fixtures";

ErrorCode CodeOf(const std::string& raw) {
  try {
    ParseNotebook(raw, "x.ipynb");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

Notebook Build(const std::vector<testing::CellSpec>& cells) {
  return ParseNotebook(NotebookJson(cells), "t.ipynb");
}

}  // namespace

TEST_SUITE("notebook") {

TEST_CASE("empty notebook") {
  Notebook nb = ParseNotebook(R"({"cells": [], "metadata": {}, "nbformat": 4, "nbformat_minor": 5})",
                              "empty.ipynb");
  CHECK(nb.cells.empty());
  CHECK(nb.language.empty());
  CHECK(nb.nbformat_major == 4);
  CHECK(nb.nbformat_minor == 5);
  CHECK(nb.IsPython());
}

TEST_CASE("three_cells fixture mirrors the JSON cells") {
  Notebook nb = LoadNotebookFile(kFixtures / "three_cells.ipynb");
  REQUIRE(nb.cells.size() == 3);
  CHECK(nb.cells[0].kind == CellKind::kMarkdown);
  CHECK(nb.cells[1].kind == CellKind::kCode);
  CHECK(nb.cells[2].kind == CellKind::kCode);
  for (int i = 0; i < 3; ++i) CHECK(nb.cells[i].index == i);
  CHECK(nb.cells[0].source == "# Title");
  CHECK(nb.cells[1].source == "import os\nprint(os.getcwd())");
  CHECK(nb.cells[2].source.empty());
  CHECK_FALSE(nb.cells[0].execution_count.has_value());
  CHECK(nb.cells[1].execution_count == 1);
  CHECK_FALSE(nb.cells[2].execution_count.has_value());
  CHECK(nb.language == "python");
}

TEST_CASE("errors") {
  CHECK(CodeOf("{not json") == ErrorCode::kMalformedJson);
  CHECK(CodeOf("") == ErrorCode::kMalformedJson);
  CHECK(CodeOf("[1, 2]") == ErrorCode::kNotANotebook);
  CHECK(CodeOf(R"({"nbformat": 4})") == ErrorCode::kNotANotebook);
  CHECK(CodeOf(R"({"cells": []})") == ErrorCode::kNotANotebook);
  CHECK(CodeOf(R"({"cells": [], "nbformat": "4"})") == ErrorCode::kNotANotebook);
  CHECK(CodeOf(R"({"cells": [{"source": "x"}], "nbformat": 4})") == ErrorCode::kNotANotebook);
  CHECK(CodeOf(R"({"cells": [], "nbformat": 3})") == ErrorCode::kUnsupportedFormat);
  CHECK_THROWS_AS(LoadNotebookFile(kFixtures / "missing.ipynb"), Error);
}

TEST_CASE("language falls back to language_info") {
  auto nb = ParseNotebook(
      R"({"cells": [], "metadata": {"language_info": {"name": "julia"}}, "nbformat": 4})", "j");
  CHECK(nb.language == "julia");
  CHECK_FALSE(nb.IsPython());
  auto both = ParseNotebook(
      R"({"cells": [], "metadata": {"kernelspec": {"language": "Python"},
          "language_info": {"name": "R"}}, "nbformat": 4})",
      "b");
  CHECK(both.language == "Python");
  CHECK(both.IsPython());
}

TEST_CASE("execution counts only on code cells") {
  auto nb = ParseNotebook(
      R"({"cells": [{"cell_type": "markdown", "execution_count": 3, "source": ""},
                    {"cell_type": "raw", "source": ["a\n", "b"]}], "nbformat": 4})",
      "m");
  CHECK_FALSE(nb.cells[0].execution_count.has_value());
  CHECK(nb.cells[1].kind == CellKind::kRaw);
  CHECK(nb.cells[1].source == "a\nb");
}

TEST_CASE("notebook_script") {
  CHECK(NotebookScript(Build({})) == "");
  CHECK(NotebookScript(Build({Code("a = 1"), Code("print(a)")})) == "a = 1\nprint(a)\n");
  CHECK(NotebookScript(Build({Md("# T"), Code("x=0")})) == "x=0\n");
}

TEST_CASE("compute_facts on an empty notebook") {
  NotebookFacts f = ComputeFacts(Build({}));
  CHECK(f.code_cell_count == 0);
  CHECK(f.markdown_cell_count == 0);
  CHECK(f.heading_cell_indexes.empty());
  CHECK(f.executed_counts.empty());
  CHECK(f.import_cell_indexes.empty());
  CHECK(f.unparseable_cell_indexes.empty());
}

TEST_CASE("compute_facts classification") {
  NotebookFacts f =
      ComputeFacts(Build({Md("# Title"), Code("import os", 1), Code("os.getcwd()", 2)}));
  CHECK(f.heading_cell_indexes == std::vector<int>{0});
  CHECK(f.import_cell_indexes == std::vector<int>{1});
  CHECK(f.executed_counts == std::vector<std::pair<int, int>>{{1, 1}, {2, 2}});
  CHECK(f.code_cell_count == 2);
  CHECK(f.markdown_cell_count == 1);
}

TEST_CASE("unparseable cells are facts") {
  NotebookFacts f = ComputeFacts(Build({Code("import os\ndef f(:"), Code("from x import y")}));
  CHECK(f.unparseable_cell_indexes == std::vector<int>{0});
  CHECK(f.import_cell_indexes == std::vector<int>{1});
  REQUIRE(f.code_cells.size() == 2);
  CHECK(f.code_cells[0].syntax_error.has_value());
}

TEST_CASE("magics do not make a cell unparseable") {
  NotebookFacts f = ComputeFacts(Build({Code("%load_ext autoreload\n!ls\nimport os"),
                                        Code("%%bash\necho 'not python ('")}));
  CHECK(f.unparseable_cell_indexes.empty());
  CHECK(f.import_cell_indexes == std::vector<int>{0});
  CHECK(f.code_cells[1].foreign);
}

TEST_CASE("non-Python notebooks are not parsed") {
  Notebook nb = LoadNotebookFile(kFixtures / "r_analysis.ipynb");
  NotebookFacts f = ComputeFacts(nb);
  CHECK_FALSE(nb.IsPython());
  CHECK(f.code_cell_count == 1);
  CHECK(f.unparseable_cell_indexes.empty());
  CHECK(f.code_cells.empty());
  CHECK(f.executed_counts.size() == 1);
}

TEST_CASE("heading detection") {
  CHECK(LeadingHeadingLevel("# T") == 1);
  CHECK(LeadingHeadingLevel("\n  \n## Sub\ntext") == 2);
  CHECK(LeadingHeadingLevel("   ###### six") == 6);
  CHECK(LeadingHeadingLevel("####### seven") == 0);
  CHECK(LeadingHeadingLevel("#NoSpace") == 0);
  CHECK(LeadingHeadingLevel("    # code block") == 0);
  CHECK(LeadingHeadingLevel("text\n# later") == 0);
  CHECK(LeadingHeadingLevel("") == 0);
}

TEST_CASE("line counting") {
  CHECK(CountLines("") == 0);
  CHECK(CountLines("a") == 1);
  CHECK(CountLines("a\n") == 1);
  CHECK(CountLines("a\nb") == 2);
  CHECK(CountLines("\n\n") == 2);
}

TEST_CASE("properties over random notebooks") {
  std::mt19937 rng(20221016);
  const std::vector<std::string> fragments = {"import os", "x = 1", "# H", "", "def f(:",
                                              "print('a|b')\n", "  \n", "from a import b\ny()",
                                              "## Sub\ntext", "%time x"};
  for (int round = 0; round < 200; ++round) {
    std::vector<testing::CellSpec> specs;
    int n = static_cast<int>(rng() % 12);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      std::string src = fragments[rng() % fragments.size()];
      if (rng() % 3 == 0) src += "\n" + fragments[rng() % fragments.size()];
      int kind = static_cast<int>(rng() % 3);
      if (kind == 0) {
        specs.push_back(Md(src));
      } else if (rng() % 2) {
        specs.push_back(Code(src, ++count));
      } else {
        specs.push_back(Code(src));
      }
    }
    std::string raw = NotebookJson(specs);
    Notebook a = ParseNotebook(raw, "p.ipynb");
    Notebook b = ParseNotebook(raw, "p.ipynb");
    REQUIRE(a.cells.size() == specs.size());

    std::string script = NotebookScript(a);
    size_t cursor = 0;
    for (size_t i = 0; i < a.cells.size(); ++i) {
      // Lossless: the joined source array equals the authored text.
      CHECK(a.cells[i].source == specs[i].source);
      CHECK(a.cells[i].source == b.cells[i].source);
      if (a.cells[i].kind != CellKind::kCode) continue;
      size_t at = script.find(a.cells[i].source, cursor);
      REQUIRE(at == cursor);
      cursor = at + a.cells[i].source.size() + 1;
    }
    CHECK(cursor == script.size());

    NotebookFacts f = ComputeFacts(a);
    CHECK(f.code_cell_count + f.markdown_cell_count <= static_cast<int>(a.cells.size()));
    auto increasing = [&](const std::vector<int>& v) {
      for (size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) return false;
      }
      for (int idx : v) {
        if (idx < 0 || idx >= static_cast<int>(a.cells.size())) return false;
      }
      return true;
    };
    CHECK(increasing(f.heading_cell_indexes));
    CHECK(increasing(f.import_cell_indexes));
    CHECK(increasing(f.unparseable_cell_indexes));
    std::vector<int> executed;
    for (auto [idx, c] : f.executed_counts) executed.push_back(idx);
    CHECK(increasing(executed));
  }
}

}  // TEST_SUITE
