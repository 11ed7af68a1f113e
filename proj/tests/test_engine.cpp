#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "retest/compile_gate.hpp"
#include "retest/engine.hpp"

namespace fs = std::filesystem;
using namespace retest;
using engine::Engine;
using engine::EngineConfig;
using engine::Fault;
using engine::RefactoringRequest;
using engine::Status;

static const fs::path kFixtures = RETEST_FIXTURES;

namespace {

struct Golden {
  std::string id;
  RefactoringRequest req;
  EngineConfig cfg;
  Status expected_status = Status::Ok;
  std::vector<SourceUnit> expected;
};

std::vector<SourceUnit> units_from_json(const nlohmann::json& arr) {
  std::vector<SourceUnit> out;
  for (const auto& u : arr) out.push_back({u.at("name"), u.at("source")});
  return out;
}

std::vector<Golden> load_goldens() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kFixtures / "golden")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Golden> out;
  for (const auto& f : files) {
    auto j = nlohmann::json::parse(read_file(f));
    Golden g;
    g.id = j.at("id");
    auto type = parse_refactoring_type(j.at("type").get<std::string>());
    REQUIRE(type.has_value());
    g.req.type = *type;
    g.req.units = units_from_json(j.at("units"));
    auto loc = javalite::ElementLocator::parse(j.at("target").get<std::string>());
    REQUIRE(loc.has_value());
    g.req.target = *loc;
    g.req.params = j.at("params").get<ParamMap>();
    g.cfg = EngineConfig::for_profile(j.at("profile"));
    auto st = engine::parse_status(j.at("expected_status"));
    REQUIRE(st.has_value());
    g.expected_status = *st;
    g.expected = units_from_json(j.at("expected"));
    out.push_back(std::move(g));
  }
  return out;
}

bool units_normalized_equal(const std::vector<SourceUnit>& a, const std::vector<SourceUnit>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].class_name != b[i].class_name) return false;
    if (!javalite::ast_equal(javalite::parse_or_throw(a[i].source),
                             javalite::parse_or_throw(b[i].source),
                             javalite::EqualMode::Normalized, {})) return false;
  }
  return true;
}

RefactoringRequest simple_request(RefactoringType type, const std::string& source,
                                  const std::string& target, ParamMap params = {}) {
  RefactoringRequest req;
  req.type = type;
  req.units = {{"T", source}};
  auto loc = javalite::ElementLocator::parse(target);
  REQUIRE(loc.has_value());
  req.target = *loc;
  req.params = std::move(params);
  return req;
}

}  // namespace

TEST_CASE("golden suite: every golden applies to its hand-derived output") {
  auto goldens = load_goldens();
  REQUIRE(goldens.size() == 15);
  CompileGate gate;
  for (const auto& g : goldens) {
    CAPTURE(g.id);
    Engine eng(g.cfg);
    auto resp = eng.apply(g.req);
    CHECK(resp.status == g.expected_status);
    REQUIRE(resp.units.size() == g.expected.size());
    CHECK(units_normalized_equal(resp.units, g.expected));
    CHECK(gate.compile(resp.units, 22).accepted);
  }
}

TEST_CASE("precondition refusals carry actionable reasons") {
  Engine eng;
  auto refuse = [&](const RefactoringRequest& req, const std::string& needle) {
    auto resp = eng.apply(req);
    CAPTURE(resp.reason);
    CHECK(resp.status == Status::Refused);
    CHECK(resp.reason.find(needle) != std::string::npos);
  };

  SUBCASE("missing parameter") {
    refuse(simple_request(RefactoringType::PullUp,
                          "class A {\n}\n\nclass T extends A {\n    void m() {\n    }\n}\n",
                          "class:T/method:m"),
           "missing parameter: destination");
  }
  SUBCASE("pull-up destination not found") {
    refuse(simple_request(RefactoringType::PullUp,
                          "class A {\n}\n\nclass T extends A {\n    void m() {\n    }\n}\n",
                          "class:T/method:m", {{"destination", "Zed"}}),
           "destination class not found");
  }
  SUBCASE("pull-up destination not the direct superclass") {
    refuse(simple_request(RefactoringType::PullUp,
                          "class A {\n}\n\nclass B extends A {\n}\n\n"
                          "class T extends B {\n    void m() {\n    }\n}\n",
                          "class:T/method:m", {{"destination", "A"}}),
           "not the direct superclass");
  }
  SUBCASE("pull-up name clash in destination") {
    refuse(simple_request(RefactoringType::PullUp,
                          "class A {\n    void m() {\n    }\n}\n\n"
                          "class T extends A {\n    void m() {\n        int x = 1;\n    }\n}\n",
                          "class:T/method:m", {{"destination", "A"}}),
           "already declares a method named m");
  }
  SUBCASE("pull-up enclosing-instance dependency") {
    RefactoringRequest req;
    req.type = RefactoringType::PullUp;
    req.units = {{"Frame", read_file(kFixtures / "fig3" / "Frame.java")}};
    req.target = *javalite::ElementLocator::parse("class:Frame/class:Panel/method:arrange");
    req.params = {{"destination", "BasePanel"}};
    refuse(req, "depends on the enclosing instance");
  }
  SUBCASE("inline refuses recursion") {
    refuse(simple_request(RefactoringType::InlineMethod,
                          "class T {\n    int f(int x) {\n        return f(x);\n    }\n}\n",
                          "class:T/method:f"),
           "recursive");
  }
  SUBCASE("inline refuses when nothing calls the method") {
    refuse(simple_request(RefactoringType::InlineMethod,
                          "class T {\n    int f(int x) {\n        return x;\n    }\n}\n",
                          "class:T/method:f"),
           "no call sites");
  }
  SUBCASE("inline refuses bodies it cannot splice") {
    refuse(simple_request(RefactoringType::InlineMethod,
                          "class T {\n    int f(int x) {\n        int y = x;\n        return y;\n"
                          "    }\n\n    int g() {\n        return f(1);\n    }\n}\n",
                          "class:T/method:f"),
           "unsupported body shape");
  }
  SUBCASE("extract-variable refuses side effects") {
    refuse(simple_request(RefactoringType::ExtractVariable,
                          "class T {\n    void m(int x) {\n        int y = x++;\n    }\n}\n",
                          "class:T/method:m/stmt:0/expr:0",
                          {{"name", "part"}, {"var_type", "int"}}),
           "side effects");
  }
  SUBCASE("extract-variable refuses taken names") {
    refuse(simple_request(RefactoringType::ExtractVariable,
                          "class T {\n    void m(int x) {\n        int y = x + 1;\n    }\n}\n",
                          "class:T/method:m/stmt:0/expr:1",
                          {{"name", "y"}, {"var_type", "int"}}),
           "name already in scope: y");
  }
  SUBCASE("extract-method refuses jump statements") {
    refuse(simple_request(RefactoringType::ExtractMethod,
                          "class T {\n    void m(int x) {\n        while (x > 0) {\n"
                          "            break;\n        }\n    }\n}\n",
                          "class:T/method:m",
                          {{"name", "part"}, {"start", "0"}, {"end", "0"}}),
           "jump statement");
  }
  SUBCASE("extract-method refuses out-of-range selections") {
    refuse(simple_request(RefactoringType::ExtractMethod,
                          "class T {\n    void m() {\n        int a = 1;\n    }\n}\n",
                          "class:T/method:m",
                          {{"name", "part"}, {"start", "0"}, {"end", "5"}}),
           "out of bounds");
  }
  SUBCASE("extract-method refuses two live-out values") {
    refuse(simple_request(RefactoringType::ExtractMethod,
                          "class Two {\n    int go(int v) {\n        int a = v + 1;\n"
                          "        int b = v + 2;\n        return a + b;\n    }\n}\n",
                          "class:Two/method:go",
                          {{"name", "part"}, {"start", "0"}, {"end", "1"}}),
           "more than one value flows out");
  }
  SUBCASE("make-static refuses already-static methods") {
    refuse(simple_request(RefactoringType::MakeStatic,
                          "class T {\n    static int m() {\n        return 1;\n    }\n}\n",
                          "class:T/method:m"),
           "already static");
  }
  SUBCASE("make-static refuses external call sites") {
    refuse(simple_request(RefactoringType::MakeStatic,
                          "class T {\n    int m() {\n        return 1;\n    }\n}\n\n"
                          "class U {\n    int go(T t) {\n        return t.m();\n    }\n}\n",
                          "class:T/method:m"),
           "call sites outside the declaring class");
  }
}

TEST_CASE("check_preconditions and apply never disagree") {
  std::vector<RefactoringRequest> reqs;
  for (const auto& g : load_goldens()) reqs.push_back(g.req);
  reqs.push_back(simple_request(RefactoringType::InlineMethod,
                                "class T {\n    int f(int x) {\n        return f(x);\n    }\n}\n",
                                "class:T/method:f"));
  reqs.push_back(simple_request(RefactoringType::MakeStatic,
                                "class T {\n    static int m() {\n        return 1;\n    }\n}\n",
                                "class:T/method:m"));
  reqs.push_back(simple_request(RefactoringType::PullUp, "class T {\n}\n", "class:T/method:m"));

  Engine eng;
  for (const auto& req : reqs) {
    auto pre = eng.check_preconditions(req);
    auto resp = eng.apply(req);
    if (pre) {
      CHECK(resp.status == Status::Refused);
      CHECK(resp.reason == *pre);
    } else {
      CHECK(resp.status != Status::Refused);
    }
  }
}

TEST_CASE("faults turn refusals into wrong output") {
  RefactoringRequest fig3;
  fig3.type = RefactoringType::PullUp;
  fig3.units = {{"Frame", read_file(kFixtures / "fig3" / "Frame.java")}};
  fig3.target = *javalite::ElementLocator::parse("class:Frame/class:Panel/method:arrange");
  fig3.params = {{"destination", "BasePanel"}};

  SUBCASE("pull-up fault drops the outer qualifier") {
    Engine pristine;
    CHECK(pristine.apply(fig3).status == Status::Refused);

    Engine faulty(EngineConfig{"ec-like", false, Fault::PullupDropOuterQualifier});
    auto resp = faulty.apply(fig3);
    REQUIRE(resp.status == Status::Ok);
    bool dangling = false;
    for (const auto& u : resp.units)
      for (const auto& d : javalite::scope_check(javalite::parse_or_throw(u.source)))
        if (d.message.find("margin") != std::string::npos) dangling = true;
    CHECK(dangling);
  }

  SUBCASE("inline fault skips local freshening") {
    auto g05 = nlohmann::json::parse(read_file(kFixtures / "golden" / "g05.json"));
    RefactoringRequest req;
    req.type = RefactoringType::InlineMethod;
    req.units = units_from_json(g05.at("units"));
    req.target = *javalite::ElementLocator::parse(g05.at("target").get<std::string>());

    Engine faulty(EngineConfig{"ec-like", false, Fault::InlineSkipNameFreshening});
    auto resp = faulty.apply(req);
    REQUIRE(resp.status == Status::Ok);
    CompileGate gate;
    auto check = gate.compile(resp.units, 22);
    CHECK_FALSE(check.accepted);
    bool dup = false;
    for (const auto& d : check.diagnostics)
      if (d.message.find("msg") != std::string::npos) dup = true;
    CHECK(dup);
  }

  SUBCASE("extract-method fault loses live-out values") {
    auto req = simple_request(RefactoringType::ExtractMethod,
                              "class Two {\n    int go(int v) {\n        int a = v + 1;\n"
                              "        int b = v + 2;\n        return a + b;\n    }\n}\n",
                              "class:Two/method:go",
                              {{"name", "part"}, {"start", "0"}, {"end", "1"}});
    Engine pristine;
    CHECK(pristine.apply(req).status == Status::Refused);

    Engine faulty(EngineConfig{"ec-like", false, Fault::ExtractMethodIgnoreLiveOut});
    auto resp = faulty.apply(req);
    REQUIRE(resp.status == Status::Ok);
    auto diags = javalite::scope_check(javalite::parse_or_throw(resp.units[0].source));
    bool unresolved = false;
    for (const auto& d : diags)
      if (d.message.find("a") != std::string::npos || d.message.find("b") != std::string::npos)
        unresolved = true;
    CHECK(unresolved);
  }
}

TEST_CASE("make-static details") {
  SUBCASE("instance parameter avoids colliding with existing names") {
    auto req = simple_request(RefactoringType::MakeStatic,
                              "class Meter {\n    int level;\n\n    int bump(int m) {\n"
                              "        return level + m;\n    }\n\n    void use() {\n"
                              "        int r = bump(1);\n    }\n}\n",
                              "class:Meter/method:bump");
    req.units[0].class_name = "Meter";
    Engine eng;
    auto resp = eng.apply(req);
    REQUIRE(resp.status == Status::Warning);
    CHECK(resp.units[0].source.find("Meter m0") != std::string::npos);
    CHECK(resp.warnings.size() == 1);
    CHECK(resp.warnings[0].find("instance parameter m0 added") != std::string::npos);
  }
  SUBCASE("the final-parameter divergence is the only profile difference") {
    RefactoringRequest req;
    req.type = RefactoringType::MakeStatic;
    req.units = {{"Meter", read_file(kFixtures / "makestatic_pair" / "Meter.java")}};
    req.target = *javalite::ElementLocator::parse("class:Meter/method:bump");

    auto ec = Engine(EngineConfig::for_profile("ec-like")).apply(req);
    auto idea = Engine(EngineConfig::for_profile("idea-like")).apply(req);
    REQUIRE(ec.status == Status::Warning);
    REQUIRE(idea.status == Status::Warning);
    auto a = javalite::parse_or_throw(ec.units[0].source);
    auto b = javalite::parse_or_throw(idea.units[0].source);
    CHECK_FALSE(javalite::ast_equal(a, b, javalite::EqualMode::Normalized, {}));
    CHECK(javalite::ast_equal(a, b, javalite::EqualMode::Normalized, {true}));
  }
}

TEST_CASE("crashes are contained, never thrown") {
  auto req = simple_request(RefactoringType::PullUp, "class {{{", "class:T/method:m",
                            {{"destination", "A"}});
  Engine eng;
  auto resp = eng.apply(req);
  CHECK(resp.status == Status::Crashed);
  CHECK_FALSE(resp.reason.empty());
  CHECK(resp.units.empty());

  auto pre = eng.check_preconditions(req);
  REQUIRE(pre.has_value());
  CHECK(pre->find("does not parse") != std::string::npos);
}
