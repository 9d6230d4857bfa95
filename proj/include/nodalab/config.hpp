#pragma once

// Flat key=value run configuration with section prefixes.

#include <map>
#include <set>
#include <string>
#include <vector>

namespace nodalab {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

class Config {
 public:
  Config();

  static const std::vector<ConfigKey>& keys();

  void load_file(const std::string& path);
  /// Lines "key = value"; '#' starts a comment.
  void load_text(const std::string& text, const std::string& origin = "config");
  void set(const std::string& key, const std::string& value);

  bool is_set(const std::string& key) const { return explicit_.count(key) > 0; }
  const std::string& str(const std::string& key) const;
  /// Decimal or a/b.
  double number(const std::string& key) const;
  double positive(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  /// ';'-separated items, blanks dropped.
  std::vector<std::string> items(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

double parse_number(const std::string& text, const std::string& key);

}  // namespace nodalab
