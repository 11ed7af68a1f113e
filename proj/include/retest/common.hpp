#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace retest {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Recoverable by retrying (network, transient tool failure).
class RetriableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Host is missing something we need (compiler, adapter binary).
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small string helpers
// ---------------------------------------------------------------------------

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  std::string h = to_lower(haystack);
  std::string n = to_lower(needle);
  return h.find(n) != std::string::npos;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// FNV-1a 64-bit, hex-encoded. Used as the cassette content key; collision
// resistance is not a requirement, mismatch detection is.
inline std::string content_hash(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// File IO
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write via a temp file then rename, so readers never observe a torn file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Structured progress events: one `key=value` line per event on stderr.
// ---------------------------------------------------------------------------

class EventLog {
 public:
  static EventLog& instance() {
    static EventLog log;
    return log;
  }

  void set_enabled(bool on) { enabled_ = on; }

  void emit(std::string_view event,
            std::initializer_list<std::pair<std::string_view, std::string>> fields = {}) {
    if (!enabled_) return;
    std::ostringstream line;
    line << "event=" << event;
    for (const auto& [k, v] : fields) {
      line << ' ' << k << '=' << quote_if_needed(v);
    }
    std::cerr << line.str() << '\n';
  }

 private:
  static std::string quote_if_needed(const std::string& v) {
    if (v.find_first_of(" \t\"") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
      if (c == '"') out += "\\\"";
      else out += c;
    }
    out += '"';
    return out;
  }

  bool enabled_ = false;
};

}  // namespace retest
