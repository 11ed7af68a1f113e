#pragma once

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <set>
#include <thread>

#include "retest/common.hpp"

namespace retest {

// ---------------------------------------------------------------------------
// Bug reports
// ---------------------------------------------------------------------------

namespace source_id {
inline constexpr const char* kEclipseBugzilla = "eclipse-bugzilla";
inline constexpr const char* kEclipseGithub = "eclipse-github";
inline constexpr const char* kIdeaYoutrack = "idea-youtrack";
inline constexpr const char* kFixture = "fixture";
}  // namespace source_id

struct BugReport {
  std::string id;
  std::string source;
  std::string title;
  std::string body;  // full report text including comments
  std::string status;
  std::string resolution;
  std::int64_t fixed_at = 0;  // unix seconds, 0 = unknown
  std::string url;
  bool marked_duplicate = false;
  std::string matched_field;  // which field the mining keyword hit: title/body

  bool operator==(const BugReport&) const = default;
};

inline void to_json(nlohmann::json& j, const BugReport& r) {
  j = {{"id", r.id},
       {"source", r.source},
       {"title", r.title},
       {"body", r.body},
       {"status", r.status},
       {"resolution", r.resolution},
       {"fixed_at", r.fixed_at},
       {"url", r.url},
       {"marked_duplicate", r.marked_duplicate},
       {"matched_field", r.matched_field}};
}

inline void from_json(const nlohmann::json& j, BugReport& r) {
  j.at("id").get_to(r.id);
  j.at("source").get_to(r.source);
  j.at("title").get_to(r.title);
  j.at("body").get_to(r.body);
  r.status = j.value("status", "");
  r.resolution = j.value("resolution", "");
  r.fixed_at = j.value("fixed_at", static_cast<std::int64_t>(0));
  r.url = j.value("url", "");
  r.marked_duplicate = j.value("marked_duplicate", false);
  r.matched_field = j.value("matched_field", "");
}

struct LabelRecord {
  std::string report_id;
  std::string annotator;
  bool relevant = false;
  std::set<std::string> criteria_met;  // engine-related, has-input-program,
                                       // has-reproduce-steps, clear-symptom
  std::string note;
  std::string resolved_by;  // agreement resolver, when two annotators disagreed

  static const std::set<std::string>& all_criteria() {
    static const std::set<std::string> c = {"engine-related", "has-input-program",
                                            "has-reproduce-steps", "clear-symptom"};
    return c;
  }

  // relevant = true requires all four criteria present
  bool valid() const {
    if (!relevant) return true;
    return criteria_met == all_criteria();
  }
};

inline void to_json(nlohmann::json& j, const LabelRecord& r) {
  j = {{"report_id", r.report_id}, {"annotator", r.annotator},   {"relevant", r.relevant},
       {"criteria_met", r.criteria_met}, {"note", r.note}, {"resolved_by", r.resolved_by}};
}

inline void from_json(const nlohmann::json& j, LabelRecord& r) {
  j.at("report_id").get_to(r.report_id);
  j.at("annotator").get_to(r.annotator);
  j.at("relevant").get_to(r.relevant);
  r.criteria_met = j.value("criteria_met", std::set<std::string>{});
  r.note = j.value("note", "");
  r.resolved_by = j.value("resolved_by", "");
}

// ---------------------------------------------------------------------------
// Tracker clients
// ---------------------------------------------------------------------------

class MalformedPayloadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One page of raw tracker results. Pagination stops on an empty page.
class TrackerClient {
 public:
  virtual ~TrackerClient() = default;
  virtual std::string source() const = 0;
  virtual std::vector<nlohmann::json> fetch_page(int page) = 0;
  virtual BugReport parse_report(const nlohmann::json& raw) const = 0;
};

// Reads static page files (`page-*.json`, each a JSON array) so the whole
// pipeline runs offline.
class FixtureTracker : public TrackerClient {
 public:
  explicit FixtureTracker(std::filesystem::path dir) : dir_(std::move(dir)) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir_))
      throw EnvironmentError("fixture tracker directory not found: " + dir_.string());
    for (const auto& e : fs::directory_iterator(dir_))
      if (e.path().extension() == ".json") pages_.push_back(e.path());
    std::sort(pages_.begin(), pages_.end());
  }

  std::string source() const override { return source_id::kFixture; }

  std::vector<nlohmann::json> fetch_page(int page) override {
    if (page < 0 || page >= static_cast<int>(pages_.size())) return {};
    auto doc = nlohmann::json::parse(read_file(pages_[page]), nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
      throw MalformedPayloadError("fixture page is not a JSON array: " + pages_[page].string());
    return std::vector<nlohmann::json>(doc.begin(), doc.end());
  }

  BugReport parse_report(const nlohmann::json& raw) const override {
    BugReport r = raw.get<BugReport>();
    if (r.source.empty()) r.source = source_id::kFixture;
    if (r.body.empty()) throw MalformedPayloadError("report body empty: " + r.id);
    return r;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> pages_;
};

// HTTP-backed tracker. The GET function is injectable so the payload mappers
// are testable offline; the production binding lives in the CLI.
class HttpTracker : public TrackerClient {
 public:
  using HttpGet = std::function<std::string(const std::string& url)>;

  HttpTracker(std::string source, std::string base_url, HttpGet get)
      : source_(std::move(source)), base_url_(std::move(base_url)), get_(std::move(get)) {}

  std::string source() const override { return source_; }

  std::vector<nlohmann::json> fetch_page(int page) override {
    std::string url = page_url(page);
    std::string body;
    std::string last_error;
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (attempt) {  // exponential backoff: 0.5s, 1s, 2s
        auto delay = std::chrono::milliseconds(500 << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }
      try {
        body = get_(url);
        last_error.clear();
        break;
      } catch (const std::exception& e) {
        last_error = e.what();
      }
    }
    if (!last_error.empty())
      throw RetriableError("tracker fetch failed (" + source_ + ", " + url + "): " + last_error);
    auto doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded())
      throw MalformedPayloadError("tracker returned non-JSON payload: " + url);
    if (doc.is_array()) return std::vector<nlohmann::json>(doc.begin(), doc.end());
    if (doc.contains("bugs") && doc["bugs"].is_array())  // Bugzilla REST shape
      return std::vector<nlohmann::json>(doc["bugs"].begin(), doc["bugs"].end());
    throw MalformedPayloadError("unexpected tracker payload shape: " + url);
  }

  BugReport parse_report(const nlohmann::json& raw) const override {
    BugReport r;
    r.source = source_;
    if (source_ == source_id::kEclipseBugzilla) {
      r.id = std::to_string(raw.at("id").get<std::int64_t>());
      r.title = raw.value("summary", "");
      r.status = raw.value("status", "");
      r.resolution = raw.value("resolution", "");
      r.body = raw.value("description", raw.value("comment_text", ""));
      r.url = base_url_ + "/show_bug.cgi?id=" + r.id;
      r.marked_duplicate = r.resolution == "DUPLICATE";
    } else if (source_ == source_id::kEclipseGithub) {
      r.id = std::to_string(raw.at("number").get<std::int64_t>());
      r.title = raw.value("title", "");
      r.body = raw.value("body", "");
      r.status = raw.value("state", "");
      r.resolution = raw.value("state_reason", "") == "completed" ? "FIXED" : "";
      r.url = raw.value("html_url", "");
      r.marked_duplicate = raw.value("state_reason", "") == "not_planned";
    } else if (source_ == source_id::kIdeaYoutrack) {
      r.id = raw.value("idReadable", "");
      r.title = raw.value("summary", "");
      r.body = raw.value("description", "");
      r.resolution = raw.value("resolution", "");
      r.status = raw.value("resolved", static_cast<std::int64_t>(0)) != 0 ? "RESOLVED" : "OPEN";
      r.url = base_url_ + "/issue/" + r.id;
      r.marked_duplicate = to_lower(r.resolution) == "duplicate";
    } else {
      throw MalformedPayloadError("unknown tracker source: " + source_);
    }
    if (r.id.empty() || r.body.empty())
      throw MalformedPayloadError("tracker payload missing id or body");
    return r;
  }

 private:
  std::string page_url(int page) const {
    if (source_ == source_id::kEclipseGithub)
      return base_url_ + "/issues?state=closed&per_page=100&page=" + std::to_string(page + 1);
    if (source_ == source_id::kEclipseBugzilla)
      return base_url_ + "/rest/bug?limit=100&offset=" + std::to_string(page * 100);
    return base_url_ + "/api/issues?$top=100&$skip=" + std::to_string(page * 100);
  }

  std::string source_;
  std::string base_url_;
  HttpGet get_;
};

// ---------------------------------------------------------------------------
// Mining operations
// ---------------------------------------------------------------------------

struct FetchStats {
  int pages = 0;
  int seen = 0;
  int malformed_skipped = 0;
};

// Keyword match is case-insensitive substring over title and body; the
// matched field is recorded on the report.
inline bool keyword_hit(BugReport& report, const std::vector<std::string>& keywords) {
  for (const auto& k : keywords) {
    if (contains_ci(report.title, k)) {
      report.matched_field = "title";
      return true;
    }
    if (contains_ci(report.body, k)) {
      report.matched_field = "body";
      return true;
    }
  }
  return false;
}

inline std::vector<BugReport> fetch_reports(TrackerClient& tracker,
                                            const std::vector<std::string>& keywords,
                                            std::int64_t cutoff, size_t cap,
                                            FetchStats* stats = nullptr) {
  if (keywords.empty()) throw UsageError("fetch_reports requires at least one keyword");
  FetchStats local;
  std::vector<BugReport> out;
  for (int page = 0;; ++page) {
    auto raws = tracker.fetch_page(page);
    if (raws.empty()) break;
    ++local.pages;
    for (const auto& raw : raws) {
      ++local.seen;
      BugReport r;
      try {
        r = tracker.parse_report(raw);
      } catch (const MalformedPayloadError& e) {
        ++local.malformed_skipped;
        EventLog::instance().emit("mine.skip_malformed", {{"reason", e.what()}});
        continue;
      }
      if (cutoff > 0 && r.fixed_at > 0 && r.fixed_at >= cutoff) continue;
      if (!keyword_hit(r, keywords)) continue;
      out.push_back(std::move(r));
    }
    if (out.size() >= cap * 4 && cap > 0) break;  // plenty to rank; stop paging
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const BugReport& a, const BugReport& b) { return a.fixed_at > b.fixed_at; });
  if (cap > 0 && out.size() > cap) out.resize(cap);
  if (stats) *stats = local;
  return out;
}

// Bugzilla-style fixed filter; other trackers map through their equivalent
// markers at parse time (resolution normalized to FIXED). Idempotent.
inline std::vector<BugReport> filter_fixed(const std::vector<BugReport>& reports) {
  std::vector<BugReport> out;
  for (const auto& r : reports) {
    if (r.marked_duplicate) continue;
    std::string status = to_lower(r.status);
    bool status_ok = status == "resolved" || status == "verified" || status == "closed";
    bool fixed = to_lower(r.resolution) == "fixed";
    if (status_ok && fixed) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: UTF-8, one JSON record per line. Records are immutable once
// written; writes go through a temp file + rename.
// ---------------------------------------------------------------------------

class CorpusFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void persist_corpus(const std::filesystem::path& path,
                           const std::vector<BugReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    nlohmann::json j = r;
    out += j.dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

inline std::vector<BugReport> load_corpus(const std::filesystem::path& path) {
  std::string content = read_file(path);
  std::vector<BugReport> out;
  int line_no = 0;
  for (const auto& line : split(content, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded())
      throw CorpusFormatError("corrupt corpus record at line " + std::to_string(line_no));
    try {
      out.push_back(doc.get<BugReport>());
    } catch (const nlohmann::json::exception& e) {
      throw CorpusFormatError("corrupt corpus record at line " + std::to_string(line_no) + ": " +
                              e.what());
    }
  }
  return out;
}

}  // namespace retest
