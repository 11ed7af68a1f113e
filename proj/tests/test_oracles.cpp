#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/compile_gate.hpp"
#include "retest/engine.hpp"
#include "retest/oracles.hpp"

namespace fs = std::filesystem;
using namespace retest;
using engine::EngineResponse;
using engine::Status;
using oracles::EngineOutcome;
using oracles::OracleViolation;
using oracles::Outcomes;
using oracles::Verdict;
using oracles::ViolationKind;

static const fs::path kFixtures = RETEST_FIXTURES;

namespace {

EngineOutcome outcome(Status st, std::vector<SourceUnit> units = {},
                      std::vector<std::string> warnings = {}) {
  EngineOutcome o;
  o.response.status = st;
  o.response.units = std::move(units);
  o.response.warnings = std::move(warnings);
  if (oracles::produced_output(o.response)) {
    CompileGate gate;
    o.compile = gate.compile(o.response.units, 22);
  }
  return o;
}

}  // namespace

TEST_CASE("uncompilable oracle flags engines whose accepted output fails the gate") {
  Outcomes outcomes;
  outcomes["good"] = outcome(Status::Ok, {{"A", "class A {\n}\n"}});
  outcomes["bad"] = outcome(Status::Ok,
                            {{"A", "class A {\n    void m() {\n        int x = missing;\n    }\n}\n"}});
  outcomes["refuser"] = outcome(Status::Refused);
  outcomes["crasher"] = outcome(Status::Crashed);

  auto vs = oracles::uncompilable_oracle("variant-1", RefactoringType::InlineMethod, outcomes);
  REQUIRE(vs.size() == 1);
  const auto& v = vs[0];
  CHECK(v.kind == ViolationKind::Uncompilable);
  CHECK(v.symptom == "compile-error");
  CHECK(v.variant_ref == "variant-1");
  REQUIRE(v.responses.size() == 1);  // only the offending engine is recorded
  CHECK(v.responses.count("bad") == 1);
  CHECK(v.evidence.find("engine bad reported success but its output does not compile:") !=
        std::string::npos);
  CHECK(v.evidence.find("error:") != std::string::npos);
  CHECK(v.evidence.find("missing") != std::string::npos);
  CHECK(v.verdict == Verdict::New);
}

TEST_CASE("warning-status oracle") {
  std::vector<SourceUnit> units = {{"A", "class A {\n}\n"}};

  SUBCASE("warning divergence between succeeding engines") {
    Outcomes o;
    o["quiet"] = outcome(Status::Ok, units);
    o["chatty"] = outcome(Status::Warning, units, {"signature changed"});
    auto vs = oracles::warning_status_oracle("v", RefactoringType::MakeStatic, o);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].symptom == "warning-divergence");
    CHECK(vs[0].responses.size() == 2);
    CHECK(vs[0].evidence.find("quiet: ok") != std::string::npos);
    CHECK(vs[0].evidence.find("chatty: warning [signature changed]") != std::string::npos);
  }
  SUBCASE("refusal asymmetry wins over warning divergence") {
    Outcomes o;
    o["doer"] = outcome(Status::Ok, units);
    auto refusing = outcome(Status::Refused);
    refusing.response.reason = "method is recursive";
    o["refuser"] = refusing;
    auto vs = oracles::warning_status_oracle("v", RefactoringType::InlineMethod, o);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].symptom == "failed-refactoring");
    CHECK(vs[0].evidence.find("(method is recursive)") != std::string::npos);
  }
  SUBCASE("crashed engines do not vote") {
    Outcomes o;
    o["doer"] = outcome(Status::Ok, units);
    o["crasher"] = outcome(Status::Crashed);
    CHECK(oracles::warning_status_oracle("v", RefactoringType::PullUp, o).empty());
  }
  SUBCASE("a single opinion is no divergence") {
    Outcomes o;
    o["only"] = outcome(Status::Warning, units, {"w"});
    CHECK(oracles::warning_status_oracle("v", RefactoringType::PullUp, o).empty());
  }
}

TEST_CASE("differential oracle on the bundled make-static pair") {
  engine::RefactoringRequest req;
  req.type = RefactoringType::MakeStatic;
  req.units = {{"Meter", read_file(kFixtures / "makestatic_pair" / "Meter.java")}};
  req.target = *javalite::ElementLocator::parse("class:Meter/method:bump");

  auto run = [&](const std::string& profile) {
    engine::Engine eng(engine::EngineConfig::for_profile(profile));
    auto resp = eng.apply(req);
    REQUIRE(oracles::produced_output(resp));
    EngineOutcome o;
    o.response = resp;
    o.compile = CompileGate().compile(resp.units, 22);
    REQUIRE(o.compile->accepted);
    return o;
  };
  Outcomes o;
  o["ec"] = run("ec-like");
  o["idea"] = run("idea-like");

  SUBCASE("without the normalizer the divergence is a new violation") {
    auto vs = oracles::differential_oracle("v", req.type, o, {});
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == ViolationKind::Differential);
    CHECK(vs[0].symptom == "output-divergence");
    CHECK(vs[0].verdict == Verdict::New);
    CHECK(vs[0].evidence.find("normalized outputs differ between ec and idea") !=
          std::string::npos);
  }
  SUBCASE("the final-parameter normalizer downgrades it to suppressed-config") {
    oracles::NormalizerSet norm;
    norm.final_parameter = true;
    auto vs = oracles::differential_oracle("v", req.type, o, norm);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].verdict == Verdict::SuppressedConfig);
  }
  SUBCASE("three engines yield one flag per diverging pair") {
    o["ec2"] = run("ec-like");  // identical to ec
    auto vs = oracles::differential_oracle("v", req.type, o, {});
    CHECK(vs.size() == 2);  // (ec,idea) and (ec2,idea); ec==ec2 stays quiet
  }
}

TEST_CASE("duplicate search scores type tokens double and symptom tokens single") {
  OracleViolation v;
  v.type = RefactoringType::InlineMethod;  // one token ("inlinemethod"), weight 2
  v.symptom = "compile-error";             // two tokens, weight 1 each → denom 4

  BugReport hit;
  hit.id = "OLD-1";
  hit.title = "InlineMethod produces compile error";
  hit.body = "details";
  BugReport weak;
  weak.id = "OLD-2";
  weak.title = "Something about a compile hiccup";
  weak.body = "";
  BugReport miss;
  miss.id = "OLD-3";
  miss.title = "Unrelated crash";
  miss.body = "";

  SUBCASE("a full match is a suspected duplicate") {
    auto matches = oracles::dedup_search(v, {hit, weak, miss});
    REQUIRE_FALSE(matches.empty());
    CHECK(matches[0] == "OLD-1");  // score 4/4, best first
    CHECK(v.verdict == Verdict::SuspectedDuplicate);
    CHECK(v.dedup_matches == matches);
  }
  SUBCASE("a sub-threshold match keeps the verdict new") {
    auto matches = oracles::dedup_search(v, {weak});  // "compile" alone: 1/4
    CHECK(matches == std::vector<std::string>{"OLD-2"});
    CHECK(v.verdict == Verdict::New);
  }
  SUBCASE("the threshold boundary counts as duplicate") {
    // "compile" + "error" = 2 of denom 4; 2/4 >= 0.5 exactly
    BugReport boundary;
    boundary.id = "OLD-4";
    boundary.title = "some compile error somewhere";
    auto matches = oracles::dedup_search(v, {boundary});
    CHECK(v.verdict == Verdict::SuspectedDuplicate);
    CHECK(matches == std::vector<std::string>{"OLD-4"});
  }
  SUBCASE("max_matches caps the list") {
    oracles::DedupConfig cfg;
    cfg.max_matches = 1;
    auto matches = oracles::dedup_search(v, {weak, hit}, cfg);
    CHECK(matches.size() == 1);
    CHECK(matches[0] == "OLD-1");  // stable sort by score, best kept
  }
  SUBCASE("non-new verdicts are never upgraded or downgraded") {
    v.verdict = Verdict::SuppressedConfig;
    oracles::dedup_search(v, {hit});
    CHECK(v.verdict == Verdict::SuppressedConfig);
  }
  SUBCASE("an empty corpus is a no-op") {
    CHECK(oracles::dedup_search(v, {}).empty());
    CHECK(v.verdict == Verdict::New);
  }
}

TEST_CASE("violations round-trip through json") {
  OracleViolation v;
  v.kind = ViolationKind::Differential;
  v.variant_ref = "S-5/lambda/3";
  v.type = RefactoringType::MakeStatic;
  v.symptom = "output-divergence";
  EngineResponse r;
  r.status = Status::Warning;
  r.units = {{"Meter", "class Meter {\n}\n"}};
  r.warnings = {"signature changed: instance parameter m added"};
  v.responses["ec"] = r;
  v.evidence = "normalized outputs differ\nline two";
  v.dedup_matches = {"OLD-1"};
  v.verdict = Verdict::SuppressedConfig;

  nlohmann::json j = v;
  auto back = j.get<OracleViolation>();
  CHECK(back.kind == v.kind);
  CHECK(back.variant_ref == v.variant_ref);
  CHECK(back.type == v.type);
  CHECK(back.symptom == v.symptom);
  REQUIRE(back.responses.count("ec"));
  CHECK(back.responses["ec"].status == Status::Warning);
  CHECK(back.responses["ec"].units[0].source == r.units[0].source);
  CHECK(back.responses["ec"].warnings == r.warnings);
  CHECK(back.evidence == v.evidence);
  CHECK(back.dedup_matches == v.dedup_matches);
  CHECK(back.verdict == v.verdict);
  nlohmann::json again = back;
  CHECK(again == j);
}

TEST_CASE("report documents render and parse as a round trip") {
  OracleViolation v;
  v.kind = ViolationKind::Uncompilable;
  v.variant_ref = "S-2/generics/1";
  v.type = RefactoringType::InlineMethod;
  v.symptom = "compile-error";
  EngineResponse r;
  r.status = Status::Ok;
  v.responses["faulty"] = r;
  v.evidence = "engine faulty reported success but its output does not compile:\n"
               "Calc.java:4: error: variable msg is already defined\n";

  std::vector<SourceUnit> input = {{"Calc", "class Calc {\n    void run() {\n    }\n}\n"}};
  auto doc = oracles::make_report(v, input);
  CHECK(doc.for_submission);  // verdict is new

  auto text = oracles::render_report(doc);
  auto back = oracles::parse_report(text);
  CHECK(back.title == doc.title);
  CHECK(back.verdict == doc.verdict);
  CHECK(back.kind == doc.kind);
  CHECK(back.variant_ref == doc.variant_ref);
  CHECK(back.for_submission == doc.for_submission);
  CHECK(back.engine_lines == doc.engine_lines);
  REQUIRE(back.programs.size() == 1);
  CHECK(back.programs[0].class_name == "Calc");
  CHECK(back.programs[0].source == input[0].source);
  CHECK(back.evidence == v.evidence);

  SUBCASE("non-new verdicts are gated out of submission") {
    v.verdict = Verdict::SuspectedDuplicate;
    auto gated = oracles::make_report(v, input);
    CHECK_FALSE(gated.for_submission);
    auto reparsed = oracles::parse_report(oracles::render_report(gated));
    CHECK_FALSE(reparsed.for_submission);
  }
}

TEST_CASE("archiving writes a stable pair of files") {
  OracleViolation v;
  v.variant_ref = "S-1/lambda/0";
  v.symptom = "compile-error";
  v.evidence = "evidence line\n";
  std::vector<SourceUnit> input = {{"A", "class A {\n}\n"}};

  auto dir = fs::temp_directory_path() / "retest-archive-test";
  fs::remove_all(dir);
  auto stem = oracles::archive_violation(dir, v, input);
  CHECK(stem.rfind("violation-", 0) == 0);
  CHECK(fs::exists(dir / (stem + ".json")));
  CHECK(fs::exists(dir / (stem + ".report.txt")));

  // same violation, same stem: reruns overwrite instead of accumulating
  CHECK(oracles::archive_violation(dir, v, input) == stem);
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) { (void)e; ++files; }
  CHECK(files == 2);

  auto loaded = nlohmann::json::parse(read_file(dir / (stem + ".json"))).get<OracleViolation>();
  CHECK(loaded.variant_ref == v.variant_ref);
  fs::remove_all(dir);
}
