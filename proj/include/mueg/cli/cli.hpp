#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "mueg/fields/grid.hpp"

namespace mueg {

// Flat "section.key" -> value map read from line-oriented `key = value` text with [section] headers.
// Keys before the first section belong to section "job".
class JobConfig {
 public:
  static JobConfig from_string(const std::string& text, const std::string& source = "<config>");
  // Throws ParseError with the offending line.
  static JobConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  // Typed getters mark the key as used and throw ParseError on malformed values.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  // Resolved against the directory of the config file; throws DomainError when the file does not exist.
  std::string get_path(const std::string& key) const;

  // ParseError pointing at the line of `key`, or at the command line when it was set there.
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  // One of the listed words, or fallback when the key is absent.
  std::string get_choice(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& choices) const;

  // Throws ParseError for keys of the given sections that no getter has read.
  void check_unused(const std::vector<std::string>& sections) const;

  // "section.key = value" lines of the given sections, sorted, without job.out and job.workers.
  std::string canonical(const std::vector<std::string>& sections) const;
  // FNV-1a 64 of the canonical text.
  std::uint64_t hash(const std::vector<std::string>& sections) const;

  const std::string& source() const { return source_; }
  const std::string& base_dir() const { return base_dir_; }

 private:
  const std::string* find(const std::string& key) const;
  std::map<std::string, std::string> values_;
  // Line of each key in the config text; keys set from the command line are absent.
  std::map<std::string, int> lines_;
  mutable std::set<std::string> used_;
  std::string source_ = "<config>";
  std::string base_dir_ = ".";
};

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

enum ExitCode { exit_pass = 0, exit_check_failure = 1, exit_usage = 2 };

const std::vector<std::string>& cli_commands();

// Runs one job. The main output goes to `out`, diagnostics to `err`. Files go to job.out when set.
// Returns 0 when every check passes, 1 when a check fails and 2 for usage, parse and input errors.
int run_job(const std::string& command, const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace mueg
