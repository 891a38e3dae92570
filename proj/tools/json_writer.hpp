#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace tightlag::cli {

/// Deterministic JSON object builder: insertion order preserved, doubles
/// printed with 17 significant digits so identical runs emit identical bytes.
class JsonObject {
 public:
  JsonObject& num(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return raw(key, buf);
  }

  JsonObject& integer(const std::string& key, long long value) {
    return raw(key, std::to_string(value));
  }

  JsonObject& boolean(const std::string& key, bool value) {
    return raw(key, value ? "true" : "false");
  }

  JsonObject& str(const std::string& key, const std::string& value) {
    std::string escaped = "\"";
    for (const char c : value) {
      if (c == '"' || c == '\\') escaped += '\\';
      escaped += c;
    }
    return raw(key, escaped + "\"");
  }

  JsonObject& numbers(const std::string& key, const std::vector<double>& values) {
    std::string arr = "[";
    char buf[40];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
      arr += buf;
      if (i + 1 < values.size()) arr += ", ";
    }
    return raw(key, arr + "]");
  }

  JsonObject& integers(const std::string& key, const std::vector<long long>& values) {
    std::string arr = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      arr += std::to_string(values[i]);
      if (i + 1 < values.size()) arr += ", ";
    }
    return raw(key, arr + "]");
  }

  JsonObject& raw(const std::string& key, const std::string& json) {
    entries_.emplace_back(key, json);
    return *this;
  }

  std::string dump() const {
    std::ostringstream out;
    out << "{\n";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      out << "  \"" << entries_[i].first << "\": " << entries_[i].second;
      out << (i + 1 < entries_.size() ? ",\n" : "\n");
    }
    out << "}\n";
    return out.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace tightlag::cli
