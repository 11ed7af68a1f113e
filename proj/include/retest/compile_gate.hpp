#pragma once

#include <cstdlib>
#include <numeric>

#include "retest/common.hpp"
#include "retest/javalite.hpp"
#include "retest/proc.hpp"

namespace retest {

struct SourceUnit {
  std::string class_name;
  std::string source;
};

struct GateDiagnostic {
  std::string file;
  int line = 0;
  int col = 0;
  std::string severity;  // "error", "warning", "note", "unknown"
  std::string message;
};

struct CompileResult {
  bool accepted = false;
  std::vector<GateDiagnostic> diagnostics;
  std::string compiler_version;
  std::chrono::milliseconds elapsed{0};

  int error_count() const {
    int n = 0;
    for (const auto& d : diagnostics)
      if (d.severity == "error") ++n;
    return n;
  }
};

class ToolFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GateOptions {
  std::string javac_path;     // empty: $RETEST_JAVAC, then PATH lookup
  bool allow_builtin = true;  // fall back to the javalite checker if no javac
  bool keep_artifacts = false;
  std::chrono::milliseconds timeout{30000};
};

class CompileGate {
 public:
  explicit CompileGate(GateOptions opts = {}) : opts_(std::move(opts)) {}

  // Finds an external javac; empty when none is usable.
  static std::string discover_javac(const std::string& explicit_path = "") {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("RETEST_JAVAC"); env && *env) return env;
    auto probe = run_process({"/bin/sh", "-c", "command -v javac"}, "",
                             std::chrono::milliseconds(5000));
    if (probe.exit_code == 0) {
      std::string path = trim(probe.out);
      if (!path.empty()) return path;
    }
    return "";
  }

  CompileResult compile(const std::vector<SourceUnit>& units, int jdk_major) const {
    auto start = std::chrono::steady_clock::now();
    std::string javac = discover_javac(opts_.javac_path);
    CompileResult result;
    if (!javac.empty()) {
      result = compile_javac(javac, units, jdk_major);
    } else if (opts_.allow_builtin) {
      result = compile_builtin(units);
    } else {
      throw EnvironmentError("javac (JDK " + std::to_string(jdk_major) +
                             ") not found on host and builtin checker disabled");
    }
    result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    result.accepted = result.error_count() == 0;
    return result;
  }

  // Non-blank line counts. Mean is reported both raw and rounded half-up.
  struct LocStats {
    double mean_raw = 0;
    int mean = 0;
    double median = 0;
    std::vector<int> per_unit;
  };

  static LocStats loc_stats(const std::vector<std::string>& sources) {
    LocStats st;
    for (const auto& s : sources) {
      int loc = 0;
      for (const auto& line : split(s, '\n'))
        if (!trim(line).empty()) ++loc;
      st.per_unit.push_back(loc);
    }
    if (st.per_unit.empty()) return st;
    st.mean_raw = std::accumulate(st.per_unit.begin(), st.per_unit.end(), 0.0) /
                  static_cast<double>(st.per_unit.size());
    st.mean = static_cast<int>(st.mean_raw + 0.5);
    std::vector<int> sorted = st.per_unit;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    st.median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    return st;
  }

 private:
  CompileResult compile_javac(const std::string& javac, const std::vector<SourceUnit>& units,
                              int jdk_major) const {
    namespace fs = std::filesystem;
    CompileResult result;

    auto version = run_process({javac, "--version"}, "", std::chrono::milliseconds(10000));
    if (version.exit_code != 0)
      throw EnvironmentError("javac at '" + javac + "' is not runnable (need JDK " +
                             std::to_string(jdk_major) + ")");
    result.compiler_version = trim(version.out.empty() ? version.err : version.out);
    int found_major = parse_major(result.compiler_version);
    if (found_major > 0 && found_major < jdk_major)
      throw EnvironmentError("javac major version " + std::to_string(found_major) +
                             " is older than required JDK " + std::to_string(jdk_major));

    fs::path dir = fs::temp_directory_path() /
                   ("retest-gate-" + content_hash(std::to_string(::getpid()) +
                                                  std::to_string(counter_++)));
    fs::create_directories(dir);
    std::vector<std::string> args = {javac, "-d", (dir / "out").string()};
    for (const auto& u : units) {
      fs::path f = dir / (u.class_name + ".java");
      write_file_atomic(f, u.source);
      args.push_back(f.string());
    }

    auto run = run_process(args, "", opts_.timeout);
    if (!opts_.keep_artifacts) fs::remove_all(dir);
    if (run.timed_out)
      throw ToolFailure("javac timed out after " + std::to_string(opts_.timeout.count()) +
                        "ms; output: " + run.err);
    if (run.exit_code != 0 && run.err.empty() && run.out.empty())
      throw ToolFailure("javac failed with exit code " + std::to_string(run.exit_code) +
                        " and no diagnostics");

    parse_javac_output(run.err.empty() ? run.out : run.err, result.diagnostics);
    return result;
  }

  static int parse_major(const std::string& version_line) {
    // "javac 22.0.1"
    auto parts = split(version_line, ' ');
    if (parts.size() < 2) return -1;
    return std::atoi(parts[1].c_str());
  }

  // javac emits `File.java:12: error: message`; unparseable lines are kept
  // verbatim with severity=unknown.
  static void parse_javac_output(const std::string& output, std::vector<GateDiagnostic>& out) {
    for (const auto& line : split(output, '\n')) {
      if (trim(line).empty()) continue;
      GateDiagnostic d;
      size_t p1 = line.find(".java:");
      if (p1 != std::string::npos) {
        size_t colon1 = p1 + 5;
        size_t colon2 = line.find(':', colon1 + 1);
        if (colon2 != std::string::npos) {
          d.file = line.substr(0, colon1);
          d.line = std::atoi(line.substr(colon1 + 1, colon2 - colon1 - 1).c_str());
          std::string rest = trim(line.substr(colon2 + 1));
          for (const char* sev : {"error", "warning", "note"}) {
            std::string prefix = std::string(sev) + ":";
            if (rest.rfind(prefix, 0) == 0) {
              d.severity = sev;
              d.message = trim(rest.substr(prefix.size()));
              break;
            }
          }
          if (!d.severity.empty()) {
            out.push_back(std::move(d));
            continue;
          }
        }
      }
      // summary lines like "2 errors" are noise, everything else is retained
      std::string t = trim(line);
      if (t.size() > 6 && (t.substr(t.size() - 6) == "errors" || t.substr(t.size() - 5) == "error") &&
          std::isdigit(static_cast<unsigned char>(t[0])))
        continue;
      out.push_back({"", 0, 0, "unknown", t});
    }
  }

  // Offline fallback: javalite syntax plus lexical-scope legality.
  CompileResult compile_builtin(const std::vector<SourceUnit>& units) const {
    CompileResult result;
    result.compiler_version = "javalite-builtin";
    // Units are scope-checked jointly so cross-unit type references resolve.
    javalite::Ast merged;
    bool all_parsed = true;
    for (const auto& u : units) {
      auto parsed = javalite::parse(u.source);
      if (!parsed.ok()) {
        all_parsed = false;
        for (const auto& d : parsed.diagnostics)
          result.diagnostics.push_back(
              {u.class_name + ".java", d.span.line, d.span.col, "error", d.message});
        continue;
      }
      for (auto& t : parsed.ast->types) merged.types.push_back(t);
    }
    if (all_parsed) {
      for (const auto& d : javalite::scope_check(merged))
        result.diagnostics.push_back({units.size() == 1 ? units[0].class_name + ".java" : "",
                                      d.span.line, d.span.col, "error", d.message});
    }
    return result;
  }

  GateOptions opts_;
  mutable int counter_ = 0;
};

}  // namespace retest
