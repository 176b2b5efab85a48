#include "nblint/project.hpp"

#include <algorithm>
#include <map>
#include <system_error>

#include "nblint/zip_archive.hpp"

namespace nblint {

namespace fs = std::filesystem;

std::string_view ToString(Origin origin) {
  switch (origin) {
    case Origin::kStandaloneNotebook:
      return "standalone_notebook";
    case Origin::kLocalDirectory:
      return "local_directory";
    case Origin::kZipArchive:
      return "zip_archive";
    case Origin::kRemoteRepository:
      return "remote_repository";
  }
  return "local_directory";
}

namespace {

bool Contains(const std::vector<std::string>& list, const std::string& value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

struct Scan {
  std::vector<std::string> notebooks;
  std::vector<std::string> test_paths;
  std::vector<std::string> dvc_artifacts;
};

Scan ScanTree(const fs::path& root, const DiscoveryOptions& options) {
  Scan scan;
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error(ErrorCode::kIo, root.string() + ": " + ec.message());

  // Directories already reported as test directories; files below them are
  // not listed again.
  std::vector<std::string> test_dirs;
  auto under_test_dir = [&](const std::string& relative) {
    return std::any_of(test_dirs.begin(), test_dirs.end(), [&](const std::string& dir) {
      return relative.size() > dir.size() && relative.compare(0, dir.size(), dir) == 0 &&
             relative[dir.size()] == '/';
    });
  };

  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw Error(ErrorCode::kIo, root.string() + ": " + ec.message());
    const fs::directory_entry& entry = *it;
    const std::string name = entry.path().filename().string();
    const std::string relative = entry.path().lexically_relative(root).generic_string();
    const bool is_dir = entry.is_directory(ec) && !entry.is_symlink(ec);

    if (is_dir) {
      if (name == ".dvc") scan.dvc_artifacts.push_back(relative);
      if (Contains(options.excluded_dirs, name)) {
        it.disable_recursion_pending();
        continue;
      }
      if (Contains(options.test_dir_names, name) && !under_test_dir(relative)) {
        scan.test_paths.push_back(relative);
        test_dirs.push_back(relative);
      }
      continue;
    }
    if (entry.is_symlink(ec) && fs::is_directory(entry.path(), ec)) continue;

    const std::string extension = entry.path().extension().string();
    if (extension == ".ipynb") scan.notebooks.push_back(relative);
    if (name.rfind("test_", 0) == 0 && Contains(options.test_file_extensions, extension) &&
        !under_test_dir(relative)) {
      scan.test_paths.push_back(relative);
    }
    if (name == "dvc.yaml" || name == "dvc.lock" || extension == ".dvc") {
      scan.dvc_artifacts.push_back(relative);
    }
  }
  std::sort(scan.notebooks.begin(), scan.notebooks.end());
  std::sort(scan.test_paths.begin(), scan.test_paths.end());
  std::sort(scan.dvc_artifacts.begin(), scan.dvc_artifacts.end());
  return scan;
}

ProjectFacts FactsFromScan(const fs::path& root, const Scan& scan, const DiscoveryOptions& options) {
  ProjectFacts facts;
  std::error_code ec;
  facts.is_version_controlled = fs::exists(root / ".git", ec);
  for (const auto& name : options.dependency_files) {
    if (fs::is_regular_file(root / name, ec)) facts.dependency_files.push_back(name);
  }
  std::sort(facts.dependency_files.begin(), facts.dependency_files.end());
  facts.test_paths = scan.test_paths;
  facts.dvc_artifacts = scan.dvc_artifacts;

  std::map<std::string, std::vector<std::string>> by_name;
  for (const auto& path : scan.notebooks) {
    by_name[fs::path(path).filename().string()].push_back(path);
  }
  for (auto& [filename, paths] : by_name) {
    if (paths.size() >= 2) facts.duplicate_notebook_names.push_back({filename, std::move(paths)});
  }
  return facts;
}

void RequireDirectory(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kIo, path.string() + ": no such directory");
  if (!fs::is_directory(path, ec)) throw Error(ErrorCode::kIo, path.string() + ": not a directory");
}

}  // namespace

std::vector<std::string> DiscoverNotebooks(const fs::path& root, const DiscoveryOptions& options) {
  RequireDirectory(root);
  return ScanTree(root, options).notebooks;
}

ProjectFacts ComputeProjectFacts(const fs::path& root, const DiscoveryOptions& options) {
  RequireDirectory(root);
  return FactsFromScan(root, ScanTree(root, options), options);
}

Project LoadStandalone(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kIo, path.string() + ": no such file");
  if (fs::is_directory(path, ec)) throw Error(ErrorCode::kIo, path.string() + ": is a directory");

  Project project;
  project.origin = Origin::kStandaloneNotebook;
  project.root = path.has_parent_path() ? path.parent_path() : fs::path(".");
  project.facts.applicable = false;
  Notebook notebook = LoadNotebookFile(path);
  NotebookFacts facts = ComputeFacts(notebook);
  project.notebooks.push_back(
      AnalyzedNotebook{path.filename().generic_string(), std::move(notebook), std::move(facts)});
  return project;
}

Project LoadDirectory(const fs::path& path, const DiscoveryOptions& options) {
  RequireDirectory(path);
  const Scan scan = ScanTree(path, options);

  Project project;
  project.origin = Origin::kLocalDirectory;
  project.root = path;
  project.facts = FactsFromScan(path, scan, options);
  for (const auto& relative : scan.notebooks) {
    try {
      Notebook notebook = LoadNotebookFile(path / relative);
      NotebookFacts facts = ComputeFacts(notebook);
      project.notebooks.push_back(AnalyzedNotebook{relative, std::move(notebook), std::move(facts)});
    } catch (const Error& e) {
      // The finding carries the relative path; an absolute one would differ
      // between a directory and its extracted zip.
      std::string message = e.what();
      const std::string prefix = (path / relative).string() + ": ";
      if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
      project.issues.push_back(LoadIssue{relative, e.code(), std::move(message)});
    }
  }
  return project;
}

Project LoadZip(const fs::path& path, const DiscoveryOptions& options) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::kIo, path.string() + ": no such file");
  auto storage = TempDir::Create("nblint-zip");
  zip::ExtractAll(path, storage->path());

  fs::path root = storage->path();
  std::vector<fs::path> top_level;
  for (const auto& entry : fs::directory_iterator(root)) top_level.push_back(entry.path());
  if (top_level.size() == 1 && fs::is_directory(top_level.front())) root = top_level.front();

  Project project = LoadDirectory(root, options);
  project.origin = Origin::kZipArchive;
  project.storage = std::move(storage);
  return project;
}

}  // namespace nblint
