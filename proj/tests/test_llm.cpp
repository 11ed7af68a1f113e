#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/corpus.hpp"
#include "retest/llm.hpp"

namespace fs = std::filesystem;
using namespace retest;

static const fs::path kFixtures = RETEST_FIXTURES;

namespace {

struct FakeTransport : llm::Transport {
  std::vector<std::string> replies;
  size_t calls = 0;
  std::string complete(const std::string&) override {
    REQUIRE(calls < replies.size());
    return replies[calls++];
  }
};

}  // namespace

TEST_CASE("prompt templates substitute and police their placeholders") {
  auto tpl = llm::default_template(llm::PromptKind::Mutate);
  std::map<std::string, std::string> bind = {
      {"Refactoring Type", "PullUp"},     {"Definition", "def"}, {"Characteristic", "lambda"},
      {"Template", "TEMPLATE-BODY"},      {"Version", "22"},
  };
  auto prompt = tpl.render(bind);
  CHECK(prompt.find("PullUp") != std::string::npos);
  CHECK(prompt.find("TEMPLATE-BODY") != std::string::npos);
  CHECK(prompt.find("{Template}") == std::string::npos);  // nothing residual
  CHECK(prompt.find("Reply with keyed lines") != std::string::npos);  // Format auto-filled

  SUBCASE("mutate requires the template binding") {
    bind.erase("Template");
    CHECK_THROWS_AS(tpl.render(bind), llm::RenderError);
  }
  SUBCASE("unbound placeholders fail loudly") {
    auto info = llm::default_template(llm::PromptKind::ExtractInfo);
    CHECK_THROWS_AS(info.render({}), llm::RenderError);  // Example unbound, no shots
  }
  SUBCASE("no-template variant requires the raw program") {
    auto nt = llm::default_template(llm::PromptKind::MutateNoTemplate);
    std::map<std::string, std::string> b2 = bind;
    b2.erase("Input Program");
    CHECK_THROWS_AS(nt.render(b2), llm::RenderError);
  }
}

TEST_CASE("reply parsing") {
  SUBCASE("program blocks") {
    auto units = llm::detail_reply::parse_program_blocks(
        "Class: A\n```java\nclass A {\n}\n```\nClass: B\n```\nclass B {\n}\n```\n");
    REQUIRE(units.size() == 2);
    CHECK(units[0].class_name == "A");
    CHECK(units[0].source == "class A {\n}\n");
    CHECK(units[1].class_name == "B");
  }
  SUBCASE("fields stop at the next key or fence") {
    std::vector<std::string> keys = {"Target", "Procedure"};
    auto v = llm::detail_reply::find_field("Target: class:A/method:m\nProcedure: do it\n",
                                           "Target", keys);
    REQUIRE(v.has_value());
    CHECK(*v == "class:A/method:m");
    CHECK_FALSE(llm::detail_reply::find_field("nothing here\n", "Target", keys).has_value());
  }
  SUBCASE("params split on semicolons") {
    auto p = llm::detail_reply::parse_params(" name = part ; var_type = int ; dangling ");
    ParamMap want = {{"name", "part"}, {"var_type", "int"}};
    CHECK(p == want);
  }
  SUBCASE("variant replies need a program and a target") {
    CHECK_THROWS_AS(llm::Gateway::parse_variant_reply("no code at all\n"),
                    llm::GenerationFormatError);
    CHECK_THROWS_AS(llm::Gateway::parse_variant_reply(
                        "Variant:\nClass: A\n```java\nclass A {\n}\n```\n"),
                    llm::GenerationFormatError);
    CHECK_THROWS_AS(llm::Gateway::parse_variant_reply(
                        "Class: A\n```java\nclass A {\n}\n```\nTarget: ???\n"),
                    llm::GenerationFormatError);
  }
  SUBCASE("incomplete seed replies list what is missing") {
    try {
      llm::Gateway::parse_seed_reply("Refactoring type: Pull up\n", "R-0");
      FAIL("expected IncompleteSeedError");
    } catch (const llm::IncompleteSeedError& e) {
      std::string what = e.what();
      CHECK(what.find("input-program") != std::string::npos);
      CHECK(what.find("element") != std::string::npos);
      CHECK(what.find("symptom") != std::string::npos);
    }
  }
  SUBCASE("symptom normalization") {
    CHECK(llm::Gateway::normalize_symptom("Compile error after refactoring") == "compile-error");
    CHECK(llm::Gateway::normalize_symptom("Behavior change observed") == "behavior-change");
    CHECK(llm::Gateway::normalize_symptom("The refactoring fails") == "failed-refactoring");
    CHECK(llm::Gateway::normalize_symptom("  Something Odd ") == "something odd");
  }
}

TEST_CASE("cassette record and replay") {
  auto dir = fs::temp_directory_path() / "retest-cassettes-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  llm::CassetteStore store(dir);

  FakeTransport t;
  t.replies = {"first reply", "second reply"};
  {
    llm::Session rec("cassette-demo", llm::SessionMode::Record, &t, &store);
    CHECK(rec.complete("prompt one") == "first reply");
    CHECK(rec.complete("prompt two") == "second reply");
  }
  CHECK(store.exists("cassette-demo"));

  SUBCASE("replay returns the recorded turns without a transport") {
    llm::Session rep("cassette-demo", llm::SessionMode::Replay, nullptr, &store);
    CHECK(rep.complete("prompt one") == "first reply");
    CHECK(rep.complete("prompt two") == "second reply");
    // a third turn was never recorded
    CHECK_THROWS_AS(rep.complete("prompt three"), llm::ReplayMissError);
  }
  SUBCASE("a changed prompt is a replay miss, not a silent mismatch") {
    llm::Session rep("cassette-demo", llm::SessionMode::Replay, nullptr, &store);
    CHECK_THROWS_AS(rep.complete("prompt one EDITED"), llm::ReplayMissError);
  }
  SUBCASE("an unknown session is a replay miss") {
    CHECK_THROWS_AS(llm::Session("never-recorded", llm::SessionMode::Replay, nullptr, &store),
                    llm::ReplayMissError);
  }
  SUBCASE("live and record modes require a transport; replay a store") {
    CHECK_THROWS_AS(llm::Session("x", llm::SessionMode::Record, nullptr, &store), UsageError);
    CHECK_THROWS_AS(llm::Session("x", llm::SessionMode::Live, nullptr, &store), UsageError);
    CHECK_THROWS_AS(llm::Session("x", llm::SessionMode::Replay, nullptr, nullptr), UsageError);
  }
  fs::remove_all(dir);
}

TEST_CASE("gateway extraction replays from the bundled cassettes") {
  auto corpus = load_corpus(kFixtures / "corpus" / "reports.jsonl");
  llm::CassetteStore store(kFixtures / "cassettes" / "extract");
  llm::Gateway gateway;

  int with_program = 0, without = 0;
  for (const auto& report : corpus) {
    llm::Session s("extract-program-" + report.id, llm::SessionMode::Replay, nullptr, &store);
    auto units = gateway.extract_input_program(report, s);
    if (units.empty()) {
      ++without;
      continue;
    }
    ++with_program;
    REQUIRE(units.size() == 1);
    auto expected = read_file(kFixtures / "expected" / (report.id + ".java"));
    CHECK(units[0].source == expected);
  }
  CHECK(with_program == 20);
  CHECK(without == 1);
}

TEST_CASE("gateway info extraction produces the bundled seed records") {
  auto corpus = load_corpus(kFixtures / "corpus" / "reports.jsonl");
  llm::CassetteStore store(kFixtures / "cassettes" / "extract");
  llm::Gateway gateway;
  for (const auto& report : corpus) {
    if (report.id[0] != 'S') continue;
    llm::Session s("extract-info-" + report.id, llm::SessionMode::Replay, nullptr, &store);
    auto seed = gateway.extract_refactoring_info(report, s);
    nlohmann::json got = seed;
    auto want = nlohmann::json::parse(read_file(kFixtures / "seeds" / (report.id + ".json")));
    CHECK(got == want);
  }
}

TEST_CASE("seed records round-trip through json") {
  auto j = nlohmann::json::parse(read_file(kFixtures / "seeds" / "S-1.json"));
  auto seed = j.get<llm::SeedRecord>();
  CHECK(seed.type == RefactoringType::PullUp);
  CHECK(seed.params.at("destination") == "BasePanel");
  CHECK(seed.target.to_string() == "class:Frame/class:Panel/method:arrange");
  nlohmann::json back = seed;
  CHECK(back == j);
}
