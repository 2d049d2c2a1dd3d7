#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "repscape/dataset.hpp"
#include "repscape/format.hpp"

namespace fixture {

/// Dataset with ids r0.., coordinates spread over a small lat/lon patch.
inline repscape::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                      std::vector<std::string> names = {}) {
  const std::size_t cols = rows.empty() ? names.size() : rows.front().size();
  if (names.empty())
    for (std::size_t c = 0; c < cols; ++c) names.push_back("v" + std::to_string(c));
  std::vector<repscape::Region> regions;
  std::vector<repscape::VariableSpec> vars;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    regions.push_back({"r" + std::to_string(i), -60.0 + static_cast<double>(i % 120),
                       -170.0 + static_cast<double>((i / 120) % 340)});
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  for (auto& n : names) vars.push_back({n, repscape::VariableKind::continuous, std::nullopt});
  return {std::move(regions), std::move(vars), std::move(values)};
}

/// One-variable dataset from a list of values.
inline repscape::Dataset column(const std::vector<double>& xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return make_dataset(rows);
}

/// Rows of `cols` uniform values in [0, 1).
inline std::vector<std::vector<double>> random_rows(std::size_t n, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(cols));
  for (auto& r : rows)
    for (auto& v : r) v = u(rng);
  return rows;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("repscape-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout; stderr is discarded.
inline CommandResult run(const std::string& command) {
  CommandResult r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string slurp(const std::filesystem::path& p) { return repscape::read_file(p); }

inline void spit(const std::filesystem::path& p, const std::string& text) { repscape::write_file_atomic(p, text); }

}  // namespace fixture
