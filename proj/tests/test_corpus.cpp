#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/corpus.hpp"

namespace fs = std::filesystem;
using namespace retest;

static const fs::path kFixtures = RETEST_FIXTURES;

namespace {
std::vector<std::string> ids(const std::vector<BugReport>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.id);
  return out;
}
}  // namespace

TEST_CASE("mining the fixture tracker") {
  FixtureTracker tracker(kFixtures / "tracker_pages");
  FetchStats stats;
  auto reports = fetch_reports(tracker, {"refactoring", "refactor"}, 0, SIZE_MAX, &stats);

  SUBCASE("keyword matches survive, sorted by fix date, malformed entries skipped") {
    CHECK(ids(reports) ==
          std::vector<std::string>{"M-07", "M-01", "M-08", "M-06", "M-02", "M-04"});
    CHECK(stats.pages == 2);
    CHECK(stats.seen == 8);
    CHECK(stats.malformed_skipped == 1);  // M-05 has an empty body
  }

  SUBCASE("the matched field is recorded") {
    for (const auto& r : reports) {
      if (r.id == "M-01") CHECK(r.matched_field == "title");
      if (r.id == "M-02") CHECK(r.matched_field == "body");
    }
  }

  SUBCASE("fixed filter keeps resolved+fixed, drops open and duplicates") {
    auto fixed = filter_fixed(reports);
    CHECK(ids(fixed) == std::vector<std::string>{"M-07", "M-01", "M-08", "M-02"});
    // idempotent
    CHECK(filter_fixed(fixed) == fixed);
  }
}

TEST_CASE("mining respects the cutoff and the cap") {
  FixtureTracker tracker(kFixtures / "tracker_pages");
  auto capped = fetch_reports(tracker, {"refactor"}, 0, 2);
  CHECK(capped.size() == 2);
  auto cut = fetch_reports(tracker, {"refactor"}, 1600000000, SIZE_MAX);
  for (const auto& r : cut) CHECK(r.id != "M-07");  // fixed after the cutoff
}

TEST_CASE("mining requires at least one keyword") {
  FixtureTracker tracker(kFixtures / "tracker_pages");
  CHECK_THROWS_AS(fetch_reports(tracker, {}, 0, SIZE_MAX), UsageError);
}

TEST_CASE("fixture tracker rejects non-array pages and missing directories") {
  CHECK_THROWS_AS(FixtureTracker(kFixtures / "no-such-dir"), EnvironmentError);
  auto dir = fs::temp_directory_path() / "retest-bad-pages";
  fs::create_directories(dir);
  write_file_atomic(dir / "page-0.json", "{\"not\": \"an array\"}\n");
  FixtureTracker tracker(dir);
  CHECK_THROWS_AS(tracker.fetch_page(0), MalformedPayloadError);
  fs::remove_all(dir);
}

TEST_CASE("http tracker payload mappers") {
  SUBCASE("github issues") {
    HttpTracker t(source_id::kEclipseGithub, "https://api.example", [](const std::string& url) {
      if (url.ends_with("&page=1"))  // "per_page=100" would match a bare find
        return std::string(
            R"([{"number": 12, "title": "refactor drops cast", "body": "details",)"
            R"( "state": "closed", "state_reason": "completed", "html_url": "https://x/12"}])");
      return std::string("[]");
    });
    auto reports = fetch_reports(t, {"refactor"}, 0, SIZE_MAX);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].id == "12");
    CHECK(reports[0].resolution == "FIXED");
    CHECK(reports[0].url == "https://x/12");
  }
  SUBCASE("bugzilla rest shape") {
    HttpTracker t(source_id::kEclipseBugzilla, "https://bugs.example", [](const std::string& url) {
      if (url.find("offset=0") != std::string::npos)
        return std::string(
            R"({"bugs": [{"id": 99, "summary": "refactoring bug", "status": "RESOLVED",)"
            R"( "resolution": "DUPLICATE", "description": "text"}]})");
      return std::string(R"({"bugs": []})");
    });
    auto reports = fetch_reports(t, {"refactoring"}, 0, SIZE_MAX);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].id == "99");
    CHECK(reports[0].marked_duplicate);
    CHECK(reports[0].url == "https://bugs.example/show_bug.cgi?id=99");
  }
  SUBCASE("youtrack shape") {
    HttpTracker t(source_id::kIdeaYoutrack, "https://yt.example", [](const std::string&) {
      return std::string("[]");
    });
    nlohmann::json raw = {{"idReadable", "IDEA-1"},
                          {"summary", "refactor"},
                          {"description", "body"},
                          {"resolution", "Duplicate"},
                          {"resolved", 123}};
    auto r = t.parse_report(raw);
    CHECK(r.id == "IDEA-1");
    CHECK(r.status == "RESOLVED");
    CHECK(r.marked_duplicate);
  }
  SUBCASE("non-JSON payloads are malformed, not retriable") {
    HttpTracker t(source_id::kEclipseGithub, "https://api.example",
                  [](const std::string&) { return std::string("<html>oops</html>"); });
    CHECK_THROWS_AS(t.fetch_page(0), MalformedPayloadError);
  }
}

TEST_CASE("corpus persistence round-trips and rejects corruption") {
  auto path = fs::temp_directory_path() / "retest-corpus-test.jsonl";
  BugReport a = {"X-1", "fixture", "title", "body", "RESOLVED", "FIXED",
                 1000,  "https://x", false,   "title"};
  BugReport b = {"X-2", "fixture", "t2", "b2", "CLOSED", "FIXED", 900, "", true, "body"};
  persist_corpus(path, {a, b});
  auto loaded = load_corpus(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == a);
  CHECK(loaded[1] == b);

  write_file_atomic(path, "{\"id\": \"X-1\"\n");  // truncated record
  CHECK_THROWS_AS(load_corpus(path), CorpusFormatError);
  fs::remove(path);
}

TEST_CASE("the bundled extraction corpus loads") {
  auto corpus = load_corpus(kFixtures / "corpus" / "reports.jsonl");
  CHECK(corpus.size() == 21);  // 20 with programs + 1 without
  int with_programs = 0;
  for (const auto& r : corpus)
    if (r.body.find("```java") != std::string::npos) ++with_programs;
  CHECK(with_programs == 20);
}

TEST_CASE("label records require all four criteria when relevant") {
  LabelRecord r;
  r.relevant = true;
  r.criteria_met = {"engine-related", "has-input-program"};
  CHECK_FALSE(r.valid());
  r.criteria_met = LabelRecord::all_criteria();
  CHECK(r.valid());
  r.relevant = false;
  r.criteria_met = {};
  CHECK(r.valid());
}
