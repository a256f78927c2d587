#include "bsl/keyvalue.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bsl::kv {

namespace {

std::string_view trim(std::string_view s, int* lead = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  if (lead) *lead = static_cast<int>(b);
  return s.substr(b, e - b);
}

}  // namespace

std::vector<double> parse_numbers(std::string_view text, int line, int column) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
    const std::string token(text.substr(i, j - i));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v))
      throw ParseError("expected a number, found '" + token + "'", line, column + static_cast<int>(i));
    out.push_back(v);
    i = j;
  }
  return out;
}

const Entry* Section::find(std::string_view key) const {
  const Entry* hit = nullptr;
  for (const auto& e : entries_)
    if (e.key == key) hit = &e;  // last assignment wins
  return hit;
}

std::string Section::get_string(std::string_view key) const {
  const Entry* e = find(key);
  if (!e)
    throw ParseError("missing key '" + std::string(key) + "' in section [" + name_ + "]", line_, 1);
  return e->value;
}

std::string Section::get_string(std::string_view key, std::string_view fallback) const {
  const Entry* e = find(key);
  return e ? e->value : std::string(fallback);
}

double Section::get_double(std::string_view key) const {
  const Entry* e = find(key);
  if (!e)
    throw ParseError("missing key '" + std::string(key) + "' in section [" + name_ + "]", line_, 1);
  auto v = parse_numbers(e->value, e->line, e->value_column);
  if (v.size() != 1) throw ParseError("expected a single number for '" + e->key + "'", e->line, e->value_column);
  return v[0];
}

double Section::get_double(std::string_view key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Section::get_int(std::string_view key) const {
  const Entry* e = find(key);
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ParseError("expected an integer for '" + e->key + "'", e->line, e->value_column);
  return static_cast<int>(v);
}

int Section::get_int(std::string_view key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

Vec3 Section::get_vec3(std::string_view key) const {
  const Entry* e = find(key);
  auto v = get_list(key);
  if (v.size() != 3) throw ParseError("expected three numbers for '" + e->key + "'", e->line, e->value_column);
  return {v[0], v[1], v[2]};
}

Vec3 Section::get_vec3(std::string_view key, const Vec3& fallback) const {
  return has(key) ? get_vec3(key) : fallback;
}

std::vector<double> Section::get_list(std::string_view key) const {
  const Entry* e = find(key);
  if (!e)
    throw ParseError("missing key '" + std::string(key) + "' in section [" + name_ + "]", line_, 1);
  return parse_numbers(e->value, e->line, e->value_column);
}

std::vector<double> Section::get_list(std::string_view key, std::vector<double> fallback) const {
  return has(key) ? get_list(key) : fallback;
}

Document Document::parse(std::string_view text) {
  Document doc;
  doc.sections_.emplace_back("", 0);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    int lead = 0;
    std::string_view line = trim(raw, &lead);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no, lead + static_cast<int>(line.size()) + 1);
      std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError("empty section name", line_no, lead + 2);
      doc.sections_.emplace_back(std::string(name), line_no);
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("expected 'key = value'", line_no, lead + 1);
      std::string_view key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError("empty key", line_no, lead + 1);
      int vlead = 0;
      std::string_view value = trim(line.substr(eq + 1), &vlead);
      if (value.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line_no, lead + static_cast<int>(eq) + 2);
      doc.sections_.back().add(
          Entry{std::string(key), std::string(value), line_no, lead + static_cast<int>(eq) + 2 + vlead});
    }
    if (nl == text.size()) break;
  }
  return doc;
}

Document Document::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Section* Document::first(std::string_view name) const {
  for (const auto& s : sections_)
    if (s.name() == name) return &s;
  return nullptr;
}

const Section& Document::require(std::string_view name) const {
  const Section* s = first(name);
  if (!s) throw ParseError("missing section [" + std::string(name) + "]", 1, 1);
  return *s;
}

std::vector<const Section*> Document::all(std::string_view name) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_)
    if (s.name() == name) out.push_back(&s);
  return out;
}

std::vector<const Section*> Document::subtree(std::string_view prefix) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_) {
    const auto& n = s.name();
    if (n == prefix || (n.size() > prefix.size() && n.compare(0, prefix.size(), prefix) == 0 &&
                        n[prefix.size()] == '.'))
      out.push_back(&s);
  }
  return out;
}

}  // namespace bsl::kv
