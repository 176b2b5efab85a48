#include "nblint/cli.hpp"

#include <ctime>
#include <fstream>
#include <ostream>

#include "nblint/builtin_rules.hpp"
#include "nblint/config.hpp"
#include "nblint/error.hpp"
#include "nblint/plugin.hpp"
#include "nblint/remote.hpp"
#include "nblint/report.hpp"

namespace nblint {
namespace fs = std::filesystem;

namespace {

Project LoadTarget(const Config& config, const fs::path& working_dir) {
  DiscoveryOptions discovery;
  discovery.excluded_dirs = config.exclude_dirs;
  fs::path path = fs::path(config.target).is_absolute() ? fs::path(config.target)
                                                         : working_dir / config.target;
  switch (Dispatch(config.target, working_dir)) {
    case InputKind::kRemote: {
      RemoteOptions remote;
      remote.strategy = config.remote_strategy;
      remote.fixture = config.remote_fixture;
      return FetchRemote(config.target, remote, discovery);
    }
    case InputKind::kZip:
      return LoadZip(path, discovery);
    case InputKind::kDirectory:
      return LoadDirectory(path, discovery);
    case InputKind::kStandalone:
      return LoadStandalone(path);
  }
  throw Error(ErrorCode::kTargetNotFound, "unsupported target '" + config.target + "'");
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

int RunCli(const std::vector<std::string>& args, const CliEnvironment& env, std::ostream& out,
           std::ostream& err) {
  try {
    Config config = LoadConfig(args, env.working_dir);

    RuleRegistry registry = BuiltinRegistry();
    RegisterPlugins(registry, config.plugins);
    registry.Freeze();
    std::vector<const Rule*> rules = SelectRules(registry, config.selection());

    Project project = LoadTarget(config, env.working_dir);
    std::vector<Finding> findings = Run(project, rules, config.thresholds);
    for (Finding& notice : ProjectNotices(project)) findings.push_back(std::move(notice));
    SortFindings(findings);

    Report report = MakeReport(config.target, project, std::move(findings), rules);
    if (config.timestamp) report.generated_at = env.clock ? env.clock() : UtcTimestamp();

    if (!config.quiet) out << RenderTerminal(report, env.stdout_is_terminal && !config.no_color);
    if (config.output) {
      std::string content = config.output_format() == OutputFormat::kJson
                                ? RenderJson(report)
                                : RenderMarkdown(report);
      WriteFile(*config.output, content);
    }
    out.flush();
    return ExitStatus(report, config.fail_level);
  } catch (const UsageExit& e) {
    (e.status() == 0 ? out : err) << e.what();
    return e.status();
  } catch (const Error& e) {
    err << "nblint: " << ToString(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "nblint: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nblint
