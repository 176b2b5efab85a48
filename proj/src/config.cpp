#include "nblint/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nblint/error.hpp"
#include "nblint/report.hpp"

namespace nblint {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kKeys[] = {
    "OUTPUT",       "INCLUDE",         "EXCLUDE", "FAIL_LEVEL", "MAX_CELLS",
    "MAX_CELL_LINES", "PREVIEW_LINES", "PLUGINS", "EXCLUDE_DIRS",
    "REMOTE_STRATEGY", "QUIET",        "NO_COLOR", "TIMESTAMP",
};

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string Upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> SplitList(std::string_view value) {
  std::vector<std::string> items;
  size_t pos = 0;
  while (pos <= value.size()) {
    size_t end = value.find(',', pos);
    if (end == std::string_view::npos) end = value.size();
    std::string item = Trim(value.substr(pos, end - pos));
    if (!item.empty()) items.push_back(std::move(item));
    pos = end + 1;
  }
  return items;
}

int PositiveInt(std::string_view key, const std::string& value) {
  int n = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size() || n <= 0) {
    throw Error(ErrorCode::kInvalidValue,
                std::string(key) + " must be a positive integer, got '" + value + "'");
  }
  return n;
}

bool Boolean(std::string_view key, const std::string& value) {
  std::string v = Lower(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::kInvalidValue,
              std::string(key) + " must be true or false, got '" + value + "'");
}

fs::path Resolve(const fs::path& p, const fs::path& base) {
  return p.is_absolute() ? p : base / p;
}

// Same rule as the plugin loader: a path contains '/' or ends in .so, any
// other locator is a short name left to the library search path.
std::string ResolveLocator(const std::string& locator, const fs::path& base) {
  bool is_path = locator.find('/') != std::string::npos ||
                 (locator.size() > 3 && locator.compare(locator.size() - 3, 3, ".so") == 0);
  if (!is_path) return locator;
  return Resolve(locator, base).string();
}

void Apply(Config& c, const std::string& key, const std::string& value, const fs::path& base) {
  if (key == "OUTPUT") {
    if (value.empty()) {
      c.output.reset();
      return;
    }
    fs::path out = Resolve(value, base);
    FormatForPath(out);
    c.output = out;
  } else if (key == "INCLUDE") {
    auto ids = SplitList(value);
    if (ids.empty()) {
      c.include.reset();
    } else {
      c.include = std::move(ids);
    }
  } else if (key == "EXCLUDE") {
    c.exclude = SplitList(value);
  } else if (key == "FAIL_LEVEL") {
    auto level = ParseFailLevel(Lower(value));
    if (!level) {
      throw Error(ErrorCode::kInvalidValue,
                  "FAIL_LEVEL must be error, warning, info or never, got '" + value + "'");
    }
    c.fail_level = *level;
  } else if (key == "MAX_CELLS") {
    c.thresholds.max_cells_per_notebook = PositiveInt(key, value);
  } else if (key == "MAX_CELL_LINES") {
    c.thresholds.max_lines_per_code_cell = PositiveInt(key, value);
  } else if (key == "PREVIEW_LINES") {
    c.thresholds.preview_lines = PositiveInt(key, value);
  } else if (key == "PLUGINS") {
    c.plugins.clear();
    for (const auto& p : SplitList(value)) c.plugins.push_back(ResolveLocator(p, base));
  } else if (key == "EXCLUDE_DIRS") {
    c.exclude_dirs = SplitList(value);
  } else if (key == "REMOTE_STRATEGY") {
    std::string v = Lower(value);
    if (v == "auto") {
      c.remote_strategy = RemoteStrategy::kAuto;
    } else if (v == "git") {
      c.remote_strategy = RemoteStrategy::kGit;
    } else if (v == "archive") {
      c.remote_strategy = RemoteStrategy::kArchive;
    } else if (v.rfind("local:", 0) == 0 && value.size() > 6) {
      c.remote_strategy = RemoteStrategy::kLocalFixture;
      std::string fixture = value.substr(6);
      c.remote_fixture = fixture.rfind("file://", 0) == 0 ? fixture
                                                           : Resolve(fixture, base).string();
    } else {
      throw Error(ErrorCode::kInvalidValue,
                  "REMOTE_STRATEGY must be auto, git, archive or local:PATH, got '" + value + "'");
    }
  } else if (key == "QUIET") {
    c.quiet = Boolean(key, value);
  } else if (key == "NO_COLOR") {
    c.no_color = Boolean(key, value);
  } else if (key == "TIMESTAMP") {
    c.timestamp = Boolean(key, value);
  }
}

}  // namespace

OutputFormat FormatForPath(const fs::path& path) {
  std::string ext = Lower(path.extension().string());
  if (ext == ".md") return OutputFormat::kMarkdown;
  if (ext == ".json") return OutputFormat::kJson;
  throw Error(ErrorCode::kInvalidValue,
              "output file '" + path.string() + "' must end in .md or .json");
}

std::map<std::string, std::string> ParseDotenv(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kConfigParse,
                  std::string(kDotenvFileName) + " line " + std::to_string(number) + ": " + why);
    };
    std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("export ", 0) == 0) line = Trim(line.substr(7));
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected KEY=VALUE");
    std::string key = Trim(line.substr(0, eq));
    bool valid_key = !key.empty() && !std::isdigit(static_cast<unsigned char>(key[0])) &&
                     std::all_of(key.begin(), key.end(), [](unsigned char c) {
                       return std::isalnum(c) || c == '_';
                     });
    if (!valid_key) fail("invalid key '" + key + "'");
    std::string value = Trim(line.substr(eq + 1));
    if (!value.empty() && (value[0] == '"' || value[0] == '\'')) {
      size_t close = value.find(value[0], 1);
      if (close == std::string::npos) fail("unterminated quoted value");
      std::string rest = Trim(value.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') fail("unexpected text after quoted value");
      value = value.substr(1, close - 1);
    } else {
      for (size_t i = 1; i < value.size(); ++i) {
        if (value[i] == '#' && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
          value = Trim(value.substr(0, i));
          break;
        }
      }
      if (value == "#" || (!value.empty() && value[0] == '#')) value.clear();
    }
    out[Upper(key)] = value;
  }
  return out;
}

Config LoadConfig(const std::vector<std::string>& args, const fs::path& working_dir) {
  CLI::App app{"Static analyzer for Jupyter notebooks and the repositories around them.",
               "nblint"};
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string target;
  app.add_option("target", target, "Notebook file, directory, .zip archive or GitHub URL")
      ->required();
  struct FlagSpec {
    const char* name;
    const char* key;
    const char* help;
  };
  static const FlagSpec kValued[] = {
      {"-o,--output", "OUTPUT", "Write a report to this .md or .json file"},
      {"--include", "INCLUDE", "Comma-separated rule ids; run only these"},
      {"--exclude", "EXCLUDE", "Comma-separated rule ids to skip"},
      {"--fail-level", "FAIL_LEVEL", "error, warning, info or never (default warning)"},
      {"--max-cells", "MAX_CELLS", "Cells allowed per notebook (default 50)"},
      {"--max-cell-lines", "MAX_CELL_LINES", "Lines allowed per code cell (default 30)"},
      {"--preview-lines", "PREVIEW_LINES", "Lines shown in cell previews (default 10)"},
      {"--plugins", "PLUGINS", "Comma-separated plugin libraries or names"},
      {"--exclude-dirs", "EXCLUDE_DIRS", "Comma-separated directory names skipped in discovery"},
      {"--remote-strategy", "REMOTE_STRATEGY", "auto, git, archive or local:PATH"},
  };
  static const FlagSpec kSwitches[] = {
      {"-q,--quiet", "QUIET", "Do not print the terminal report"},
      {"--no-color", "NO_COLOR", "Disable colored terminal output"},
      {"--timestamp", "TIMESTAMP", "Include the generation time in reports"},
  };
  std::map<std::string, std::string> valued;
  std::map<std::string, CLI::Option*> options;
  for (const auto& spec : kValued) {
    options[spec.key] = app.add_option(spec.name, valued[spec.key], spec.help);
  }
  for (const auto& spec : kSwitches) options[spec.key] = app.add_flag(spec.name, spec.help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageExit(0, app.help());
  } catch (const CLI::CallForVersion&) {
    throw UsageExit(0, std::string(kToolVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageExit(2, std::string(e.what()) + "\nRun with --help for more information.\n");
  }

  Config config;
  config.target = target;

  fs::path dotenv_path = working_dir / kDotenvFileName;
  std::map<std::string, std::string> dotenv;
  if (fs::is_regular_file(dotenv_path)) {
    std::ifstream in(dotenv_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + dotenv_path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    dotenv = ParseDotenv(buffer.str());
  }
  for (const auto& [key, value] : dotenv) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw Error(ErrorCode::kConfigParse,
                  std::string(kDotenvFileName) + ": unknown key '" + key + "'");
    }
  }

  for (std::string_view key_view : kKeys) {
    std::string key(key_view);
    CLI::Option* option = options.at(key);
    if (option->count() > 0) {
      bool is_switch = valued.find(key) == valued.end();
      Apply(config, key, is_switch ? "true" : valued[key], working_dir);
    } else if (auto it = dotenv.find(key); it != dotenv.end()) {
      Apply(config, key, it->second, working_dir);
    }
  }

  if (config.include) {
    for (const auto& id : *config.include) {
      if (std::find(config.exclude.begin(), config.exclude.end(), id) != config.exclude.end()) {
        throw Error(ErrorCode::kInvalidValue,
                    "rule id '" + id + "' is both included and excluded");
      }
    }
  }
  return config;
}

InputKind Dispatch(std::string_view target, const fs::path& working_dir) {
  if (target.find("://") != std::string_view::npos ||
      target.rfind("github.com/", 0) == 0) {
    if (!ParseGitHubUrl(target)) {
      throw Error(ErrorCode::kInvalidUrl,
                  "'" + std::string(target) +
                      "' is not a public GitHub repository URL (https://github.com/OWNER/REPO)");
    }
    return InputKind::kRemote;
  }
  fs::path path = Resolve(fs::path(std::string(target)), working_dir);
  std::error_code ec;
  auto status = fs::status(path, ec);
  if (ec || !fs::exists(status)) {
    throw Error(ErrorCode::kTargetNotFound, "target '" + std::string(target) + "' does not exist");
  }
  if (fs::is_directory(status)) return InputKind::kDirectory;
  if (Lower(path.extension().string()) == ".zip") return InputKind::kZip;
  return InputKind::kStandalone;
}

}  // namespace nblint
