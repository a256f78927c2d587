#pragma once

#include "bsl/common.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bsl::kv {

// Structured text: `key = value` lines grouped under optional `[section]`
// headers. Sections may repeat. `#` starts a comment.

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int value_column = 0;
};

class Section {
 public:
  Section() = default;
  Section(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }
  const std::vector<Entry>& entries() const { return entries_; }
  void add(Entry e) { entries_.push_back(std::move(e)); }

  bool has(std::string_view key) const { return find(key) != nullptr; }
  const Entry* find(std::string_view key) const;

  /// Typed accessors; malformed values raise ParseError at the value position,
  /// missing required keys raise ParseError at the section header.
  std::string get_string(std::string_view key) const;
  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key) const;
  double get_double(std::string_view key, double fallback) const;
  int get_int(std::string_view key) const;
  int get_int(std::string_view key, int fallback) const;
  Vec3 get_vec3(std::string_view key) const;
  Vec3 get_vec3(std::string_view key, const Vec3& fallback) const;
  std::vector<double> get_list(std::string_view key) const;
  std::vector<double> get_list(std::string_view key, std::vector<double> fallback) const;

 private:
  std::string name_;
  int line_ = 0;
  std::vector<Entry> entries_;
};

class Document {
 public:
  static Document parse(std::string_view text);
  static Document load(const std::string& path);

  /// Sections in file order; the implicit leading section has an empty name.
  const std::vector<Section>& sections() const { return sections_; }
  const Section* first(std::string_view name) const;
  const Section& require(std::string_view name) const;
  std::vector<const Section*> all(std::string_view name) const;
  /// Sections whose name is `prefix` or starts with `prefix.`.
  std::vector<const Section*> subtree(std::string_view prefix) const;

 private:
  std::vector<Section> sections_;
};

std::vector<double> parse_numbers(std::string_view text, int line, int column);

}  // namespace bsl::kv
