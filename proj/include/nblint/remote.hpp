#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nblint/project.hpp"

namespace nblint {

struct GitHubRepository {
  std::string owner;
  std::string name;

  std::string Url() const { return "https://github.com/" + owner + "/" + name; }
};

// Accepts `https://github.com/<owner>/<repo>` with an optional `.git` suffix
// and an optional trailing slash.
std::optional<GitHubRepository> ParseGitHubUrl(std::string_view url);

enum class RemoteStrategy {
  kAuto,          // git when the executable is available, archive otherwise
  kGit,           // git clone --depth 1
  kArchive,       // download the default-branch zip snapshot over HTTP(S)
  kLocalFixture,  // copy a local directory or zip; for hermetic tests
};

struct RemoteOptions {
  RemoteStrategy strategy = RemoteStrategy::kAuto;
  // Directory, zip file or file:// URL standing in for the repository.
  std::string fixture;
  // Clone URL is git_base + owner + "/" + repo.
  std::string git_base = "https://github.com/";
  // Snapshot URL is archive_base + owner + "/" + repo + "/zip/HEAD".
  std::string archive_base = "https://codeload.github.com/";
  int timeout_seconds = 120;
};

// Materializes the default branch of a public GitHub repository into a
// temporary directory owned by the returned Project.
// Throws kInvalidUrl, kNetwork or kRepositoryNotFound.
Project FetchRemote(std::string_view url, const RemoteOptions& remote = {},
                    const DiscoveryOptions& discovery = {});

}  // namespace nblint
