#include "mueg/report.hpp"

#include <cstdio>
#include <sstream>

namespace mueg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Report::section(const std::string& name) { lines_.emplace_back("[" + name + "]", ""); }
void Report::add(const std::string& key, double v) { lines_.emplace_back(key, format_double(v)); }
void Report::add(const std::string& key, long long v) { lines_.emplace_back(key, std::to_string(v)); }
void Report::add(const std::string& key, bool v) { lines_.emplace_back(key, v ? "true" : "false"); }
void Report::add(const std::string& key, const std::string& v) { lines_.emplace_back(key, v); }
void Report::append(const Report& other) { lines_.insert(lines_.end(), other.lines_.begin(), other.lines_.end()); }

void Report::write(std::ostream& os) const {
  for (const auto& [k, v] : lines_) {
    if (!k.empty() && k.front() == '[' && v.empty())
      os << k << "\n";
    else
      os << k << " = " << v << "\n";
  }
}

std::string Report::str() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

std::string Report::get(const std::string& key) const {
  for (auto it = lines_.rbegin(); it != lines_.rend(); ++it)
    if (it->first == key) return it->second;
  return {};
}

}  // namespace mueg
