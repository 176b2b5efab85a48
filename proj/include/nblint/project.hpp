#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nblint/error.hpp"
#include "nblint/notebook.hpp"
#include "nblint/temp_dir.hpp"

namespace nblint {

enum class Origin { kStandaloneNotebook, kLocalDirectory, kZipArchive, kRemoteRepository };

std::string_view ToString(Origin origin);

struct DuplicateName {
  std::string filename;
  std::vector<std::string> paths;

  bool operator==(const DuplicateName&) const = default;
};

// Repository-level observations. All paths are relative to the project root
// and use `/` separators.
struct ProjectFacts {
  // False for standalone notebooks, where repository rules do not apply.
  bool applicable = true;
  bool is_version_controlled = false;
  // A remote repository snapshot that arrived without `.git` metadata.
  bool version_control_satisfied_by_origin = false;
  std::vector<std::string> dependency_files;
  std::vector<std::string> test_paths;
  std::vector<std::string> dvc_artifacts;
  std::vector<DuplicateName> duplicate_notebook_names;

  bool operator==(const ProjectFacts&) const = default;
};

struct AnalyzedNotebook {
  std::string relative_path;
  Notebook notebook;
  NotebookFacts facts;
};

// A notebook found during discovery that could not be parsed.
struct LoadIssue {
  std::string relative_path;
  ErrorCode code;
  std::string message;
};

struct Project {
  std::filesystem::path root;
  Origin origin = Origin::kLocalDirectory;
  std::string origin_url;  // set for remote repositories
  std::vector<AnalyzedNotebook> notebooks;  // sorted by relative_path
  ProjectFacts facts;
  std::vector<LoadIssue> issues;
  // Keeps a temporary materialization (zip or remote) alive.
  std::shared_ptr<const TempDir> storage;
};

struct DiscoveryOptions {
  std::vector<std::string> excluded_dirs = {".git", ".ipynb_checkpoints", ".dvc",
                                            "node_modules", ".venv", "venv"};
  std::vector<std::string> dependency_files = {"requirements.txt", "pyproject.toml", "setup.py",
                                               "setup.cfg", "Pipfile", "environment.yml"};
  std::vector<std::string> test_dir_names = {"tests", "test"};
  std::vector<std::string> test_file_extensions = {".py", ".ipynb", ".r", ".R", ".jl"};
};

// The file content decides: any readable file holding notebook JSON works.
Project LoadStandalone(const std::filesystem::path& path);

Project LoadDirectory(const std::filesystem::path& path, const DiscoveryOptions& options = {});

// Extracts into a temporary directory owned by the returned Project. An
// archive with a single top-level directory is rooted at that directory.
Project LoadZip(const std::filesystem::path& path, const DiscoveryOptions& options = {});

// Relative paths of every `.ipynb` file under `root`, pruning excluded
// directories, sorted.
std::vector<std::string> DiscoverNotebooks(const std::filesystem::path& root,
                                           const DiscoveryOptions& options = {});

ProjectFacts ComputeProjectFacts(const std::filesystem::path& root,
                                 const DiscoveryOptions& options = {});

}  // namespace nblint
