// Copyright 2026 The samwinch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-oriented `key = value` files shared by the parameter and scenario
// loaders. `#` starts a comment. A key may repeat (waypoints, events); lookups
// of scalar fields reject repeats.

#ifndef SAM_CORE_KEYVALUE_HPP_
#define SAM_CORE_KEYVALUE_HPP_

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sam {

struct FieldError {
  int line = 0;  // 0 when the field is missing altogether
  std::string field;
  std::string message;
};

inline std::string describe(const FieldError& e) {
  std::string out;
  if (e.line > 0) out += "line " + std::to_string(e.line) + ": ";
  out += "field '" + e.field + "': " + e.message;
  return out;
}

// Aggregates every schema violation found while loading one file.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<FieldError> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<FieldError>& errors) {
    std::string out;
    for (const auto& e : errors) {
      if (!out.empty()) out += "\n";
      out += describe(e);
    }
    return out;
  }
  std::vector<FieldError> errors_;
};

struct KeyValueEntry {
  std::string key;
  std::string value;
  int line = 0;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::vector<FieldError> errors;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        errors.push_back({line, body, "expected 'key = value'"});
        continue;
      }
      kv.entries_.push_back({trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line});
    }
    if (!errors.empty()) throw SchemaError(errors);
    return kv;
  }

  static KeyValueFile load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  const std::vector<KeyValueEntry>& entries() const { return entries_; }

  std::vector<const KeyValueEntry*> all(const std::string& key) const {
    std::vector<const KeyValueEntry*> out;
    for (const auto& e : entries_)
      if (e.key == key) out.push_back(&e);
    return out;
  }

  // Single occurrence or nullptr; repeats are reported into `errors`.
  const KeyValueEntry* find(const std::string& key, std::vector<FieldError>& errors) const {
    const auto hits = all(key);
    if (hits.size() > 1) errors.push_back({hits[1]->line, key, "given more than once"});
    return hits.empty() ? nullptr : hits.front();
  }

  // Keys not in `known` (prefix matches allowed when the known key ends in '.').
  std::vector<FieldError> unknown_keys(const std::set<std::string>& known) const {
    std::vector<FieldError> out;
    for (const auto& e : entries_) {
      bool ok = known.count(e.key) > 0;
      for (const auto& k : known)
        if (!ok && !k.empty() && k.back() == '.' && e.key.rfind(k, 0) == 0) ok = true;
      if (!ok) out.push_back({e.line, e.key, "unknown field"});
    }
    return out;
  }

 private:
  std::vector<KeyValueEntry> entries_;
};

inline bool parse_numbers(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    // Underflow to a subnormal is fine; overflow is not.
    if (end != tok.c_str() + tok.size() || (errno == ERANGE && std::isinf(v))) return false;
    out.push_back(v);
  }
  return true;
}

// Reads exactly `n` numbers; records a field error otherwise.
inline bool read_numbers(const KeyValueEntry& e, std::size_t n, std::vector<double>& out,
                         std::vector<FieldError>& errors) {
  if (!parse_numbers(e.value, out)) {
    errors.push_back({e.line, e.key, "not a number: '" + e.value + "'"});
    return false;
  }
  if (out.size() != n) {
    errors.push_back({e.line, e.key,
                      "expected " + std::to_string(n) + " number(s), got " +
                          std::to_string(out.size())});
    return false;
  }
  for (double v : out) {
    if (!std::isfinite(v)) {
      errors.push_back({e.line, e.key, "non-finite value"});
      return false;
    }
  }
  return true;
}

}  // namespace sam

#endif  // SAM_CORE_KEYVALUE_HPP_
