#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mueg/cli/cli.hpp"
#include "mueg/errors.hpp"

namespace mueg {

namespace {

namespace pt = boost::property_tree;

std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }

// Keys that do not change results stay out of the hash.
bool hashed(const std::string& key) { return key != "job.out" && key != "job.workers"; }

}  // namespace

JobConfig JobConfig::from_string(const std::string& text, const std::string& source) {
  JobConfig c;
  c.source_ = source;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(source, static_cast<int>(e.line()), e.message());
  }
  // The property tree drops line numbers, so recover them for error messages.
  std::istringstream lines(text);
  std::string line, section = "job";
  for (int n = 1; std::getline(lines, line); ++n) {
    boost::trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line[0] == '[') {
      section = boost::trim_copy(line.substr(1, line.find(']') - 1));
      continue;
    }
    const auto eq = line.find('=');
    if (eq != std::string::npos) c.lines_[section + "." + boost::trim_copy(line.substr(0, eq))] = n;
  }
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      c.values_["job." + name] = node.data();
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) c.fail(name + "." + key, "nested key in section [" + name + "]");
      c.values_[name + "." + key] = leaf.data();
    }
  }
  return c;
}

JobConfig JobConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  JobConfig c = from_string(ss.str(), path);
  const auto dir = std::filesystem::path(path).parent_path();
  c.base_dir_ = dir.empty() ? "." : dir.string();
  return c;
}

void JobConfig::set(const std::string& key, const std::string& value) {
  if (key.find('.') == std::string::npos) throw ParseError("command line", 0, "key '" + key + "' lacks a section");
  values_[key] = value;
  lines_.erase(key);
}

void JobConfig::fail(const std::string& key, const std::string& what) const {
  const auto it = lines_.find(key);
  if (it == lines_.end()) throw ParseError("command line", 0, what);
  throw ParseError(source_, it->second, what);
}

const std::string* JobConfig::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string JobConfig::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? boost::trim_copy(*v) : fallback;
}

std::string JobConfig::get_choice(const std::string& key, const std::string& fallback,
                                  const std::vector<std::string>& choices) const {
  const std::string v = get_string(key, fallback);
  if (std::find(choices.begin(), choices.end(), v) != choices.end()) return v;
  fail(key, key + ": expected one of " + boost::join(choices, ", ") + ", got '" + v + "'");
}

double JobConfig::get_double(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  const std::string s = boost::trim_copy(*v);
  double out = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    fail(key, key + ": expected a number, got '" + s + "'");
  return out;
}

int JobConfig::get_int(const std::string& key, int fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  const std::string s = boost::trim_copy(*v);
  int out = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    fail(key, key + ": expected an integer, got '" + s + "'");
  return out;
}

std::uint64_t JobConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  const std::string s = boost::trim_copy(*v);
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    fail(key, key + ": expected a nonnegative integer, got '" + s + "'");
  return out;
}

bool JobConfig::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  const std::string s = boost::to_lower_copy(boost::trim_copy(*v));
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(key, key + ": expected true or false, got '" + s + "'");
}

std::vector<double> JobConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  std::vector<std::string> parts;
  boost::split(parts, *v, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<double> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    double x = 0.0;
    const auto [end, ec] = std::from_chars(p.data(), p.data() + p.size(), x);
    if (ec != std::errc() || end != p.data() + p.size())
      fail(key, key + ": expected a list of numbers, got '" + *v + "'");
    out.push_back(x);
  }
  return out;
}

Vec3 JobConfig::get_vec3(const std::string& key, const Vec3& fallback) const {
  if (!has(key)) return fallback;
  const std::vector<double> v = get_list(key, {});
  if (v.size() != 3) fail(key, key + ": expected three numbers");
  return Vec3(v[0], v[1], v[2]);
}

std::string JobConfig::get_path(const std::string& key) const {
  const std::string s = get_string(key, "");
  if (s.empty()) throw DomainError(key + ": path required");
  std::filesystem::path p(s);
  if (p.is_relative()) p = std::filesystem::path(base_dir_) / p;
  if (!std::filesystem::is_regular_file(p)) throw DomainError(key + ": no such file " + p.string());
  return p.string();
}

void JobConfig::check_unused(const std::vector<std::string>& sections) const {
  for (const auto& [key, value] : values_) {
    if (used_.count(key)) continue;
    if (std::find(sections.begin(), sections.end(), section_of(key)) != sections.end())
      fail(key, "unknown key '" + key + "'");
  }
}

std::string JobConfig::canonical(const std::vector<std::string>& sections) const {
  std::string out;
  for (const auto& [key, value] : values_)
    if (hashed(key) && std::find(sections.begin(), sections.end(), section_of(key)) != sections.end())
      out += key + " = " + boost::trim_copy(value) + "\n";
  return out;
}

std::uint64_t JobConfig::hash(const std::vector<std::string>& sections) const { return fnv1a64(canonical(sections)); }

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mueg
