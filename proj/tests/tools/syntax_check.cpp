// Prints one verdict per file argument: "ok" or "error LINE:COL message".
// Used by the differential test against CPython's own parser.

#include <fstream>
#include <iostream>
#include <sstream>

#include "nblint/python_syntax.hpp"

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::ifstream in(argv[i], std::ios::binary);
    if (!in) {
      std::cerr << "cannot read " << argv[i] << "\n";
      return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto result = nblint::python::Parse(buffer.str());
    if (result.ok()) {
      std::cout << "ok\n";
    } else {
      std::cout << "error " << result.error->line << ":" << result.error->column << " "
                << result.error->message << "\n";
    }
  }
  return 0;
}
