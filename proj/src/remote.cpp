#include "nblint/remote.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <regex>

#include "process.hpp"

namespace nblint {

namespace fs = std::filesystem;

std::optional<GitHubRepository> ParseGitHubUrl(std::string_view url) {
  static const std::regex kPattern(
      R"(^https://github\.com/([A-Za-z0-9](?:[A-Za-z0-9-]{0,38}))/([A-Za-z0-9._-]+?)(?:\.git)?/?$)");
  std::match_results<std::string_view::const_iterator> match;
  if (!std::regex_match(url.begin(), url.end(), match, kPattern)) return std::nullopt;
  GitHubRepository repo{match[1].str(), match[2].str()};
  if (repo.name == "." || repo.name == "..") return std::nullopt;
  return repo;
}

namespace {

std::string Lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

std::string FirstLine(const std::string& text) {
  const auto start = text.find_first_not_of(" \r\n");
  if (start == std::string::npos) return {};
  return text.substr(start, text.find('\n', start) - start);
}

struct Materialized {
  std::shared_ptr<TempDir> storage;
  fs::path root;
  // Set when the snapshot was loaded through LoadZip.
  std::optional<Project> project;
};

Materialized CloneWithGit(const GitHubRepository& repo, const RemoteOptions& options) {
  Materialized out;
  out.storage = TempDir::Create("nblint-remote");
  out.root = out.storage->path() / repo.name;
  const std::string clone_url = options.git_base + repo.owner + "/" + repo.name;
  const detail::ProcessResult result =
      detail::RunProcess({"git", "clone", "--depth", "1", "--quiet", "--", clone_url, out.root.string()},
                         {"GIT_TERMINAL_PROMPT=0", "GIT_ASKPASS=true"});
  if (result.exit_code == 0) return out;
  if (result.exit_code < 0) {
    throw Error(ErrorCode::kNetwork, "cannot run git: " + result.error_output);
  }
  const std::string message = Lowercase(result.error_output);
  if (message.find("not found") != std::string::npos ||
      message.find("does not exist") != std::string::npos ||
      message.find("does not appear to be a git repository") != std::string::npos ||
      message.find("could not read username") != std::string::npos) {
    throw Error(ErrorCode::kRepositoryNotFound,
                repo.Url() + ": repository not found: " + FirstLine(result.error_output));
  }
  throw Error(ErrorCode::kNetwork, repo.Url() + ": git clone failed: " + FirstLine(result.error_output));
}

Materialized DownloadArchive(const GitHubRepository& repo, const RemoteOptions& options,
                             const DiscoveryOptions& discovery) {
  static const std::regex kBase(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(options.archive_base, match, kBase)) {
    throw Error(ErrorCode::kInvalidUrl, "invalid archive base URL '" + options.archive_base + "'");
  }
  std::string prefix = match[2].str();
  if (prefix.empty() || prefix.back() != '/') prefix += '/';
  const std::string path = prefix + repo.owner + "/" + repo.name + "/zip/HEAD";

  httplib::Client client(match[1].str());
  client.set_follow_location(true);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  const httplib::Result response = client.Get(path);
  if (!response) {
    throw Error(ErrorCode::kNetwork,
                repo.Url() + ": download failed: " + httplib::to_string(response.error()));
  }
  if (response->status == 404) {
    throw Error(ErrorCode::kRepositoryNotFound, repo.Url() + ": repository not found (HTTP 404)");
  }
  if (response->status != 200) {
    throw Error(ErrorCode::kNetwork,
                repo.Url() + ": download failed with HTTP " + std::to_string(response->status));
  }

  const auto download = TempDir::Create("nblint-download");
  const fs::path archive = download->path() / (repo.name + ".zip");
  {
    std::ofstream out(archive, std::ios::binary);
    out.write(response->body.data(), static_cast<std::streamsize>(response->body.size()));
    if (!out) throw Error(ErrorCode::kIo, archive.string() + ": write failed");
  }
  Materialized out;
  out.project = LoadZip(archive, discovery);
  return out;
}

Materialized CopyFixture(const GitHubRepository& repo, const RemoteOptions& options,
                         const DiscoveryOptions& discovery) {
  std::string location = options.fixture;
  if (location.rfind("file://", 0) == 0) location.erase(0, 7);
  std::error_code ec;
  if (location.empty() || !fs::exists(location, ec)) {
    throw Error(ErrorCode::kRepositoryNotFound,
                repo.Url() + ": repository not found (fixture '" + options.fixture + "' is missing)");
  }
  Materialized out;
  if (fs::is_regular_file(location, ec)) {
    out.project = LoadZip(location, discovery);
    return out;
  }
  out.storage = TempDir::Create("nblint-remote");
  out.root = out.storage->path() / repo.name;
  fs::copy(location, out.root, fs::copy_options::recursive | fs::copy_options::copy_symlinks, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot copy fixture '" + location + "': " + ec.message());
  return out;
}

}  // namespace

Project FetchRemote(std::string_view url, const RemoteOptions& remote,
                    const DiscoveryOptions& discovery) {
  const auto repo = ParseGitHubUrl(url);
  if (!repo) {
    throw Error(ErrorCode::kInvalidUrl,
                "'" + std::string(url) + "' is not a https://github.com/<owner>/<repo> URL");
  }

  RemoteStrategy strategy = remote.strategy;
  if (strategy == RemoteStrategy::kAuto) {
    strategy = detail::ExecutableOnPath("git") ? RemoteStrategy::kGit : RemoteStrategy::kArchive;
  }
  Materialized materialized;
  switch (strategy) {
    case RemoteStrategy::kGit:
      materialized = CloneWithGit(*repo, remote);
      break;
    case RemoteStrategy::kArchive:
      materialized = DownloadArchive(*repo, remote, discovery);
      break;
    case RemoteStrategy::kLocalFixture:
      materialized = CopyFixture(*repo, remote, discovery);
      break;
    case RemoteStrategy::kAuto:
      break;
  }

  Project project = materialized.project ? std::move(*materialized.project)
                                         : LoadDirectory(materialized.root, discovery);
  if (materialized.storage) project.storage = std::move(materialized.storage);
  project.origin = Origin::kRemoteRepository;
  project.origin_url = std::string(url);
  // GitHub repositories are version-controlled by definition, even when the
  // snapshot carries no .git directory.
  project.facts.version_control_satisfied_by_origin = !project.facts.is_version_controlled;
  return project;
}

}  // namespace nblint
