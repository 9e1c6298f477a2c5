#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mueg {

// Ordered `key = value` lines, optionally grouped under [section] headers.
class Report {
 public:
  void section(const std::string& name);
  void add(const std::string& key, double v);
  void add(const std::string& key, long long v);
  void add(const std::string& key, int v) { add(key, static_cast<long long>(v)); }
  void add(const std::string& key, std::size_t v) { add(key, static_cast<long long>(v)); }
  void add(const std::string& key, bool v);
  void add(const std::string& key, const std::string& v);
  void add(const std::string& key, const char* v) { add(key, std::string(v)); }
  void append(const Report& other);
  void write(std::ostream& os) const;
  std::string str() const;
  // Value of the last entry with this key, or empty.
  std::string get(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string format_double(double v);

}  // namespace mueg
