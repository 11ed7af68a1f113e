#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/compile_gate.hpp"

using namespace retest;

namespace {
SourceUnit unit(const std::string& n, const std::string& s) { return {n, s}; }
}  // namespace

TEST_CASE("gate accepts a well-formed program") {
  CompileGate gate;
  auto r = gate.compile({unit("A",
                              "class A {\n"
                              "    int go(int v) {\n"
                              "        return v + 1;\n"
                              "    }\n"
                              "}\n")},
                        22);
  CHECK(r.accepted);
  CHECK(r.error_count() == 0);
  CHECK_FALSE(r.compiler_version.empty());
}

TEST_CASE("gate rejects unresolved symbols with a diagnostic") {
  CompileGate gate;
  auto r = gate.compile({unit("A",
                              "class A {\n"
                              "    int go() {\n"
                              "        return missing;\n"
                              "    }\n"
                              "}\n")},
                        22);
  CHECK_FALSE(r.accepted);
  REQUIRE(r.error_count() >= 1);
  bool hit = false;
  for (const auto& d : r.diagnostics)
    if (d.message.find("missing") != std::string::npos) hit = true;
  CHECK(hit);
}

TEST_CASE("gate rejects syntax errors") {
  CompileGate gate;
  auto r = gate.compile({unit("A", "class A {\n    int = ;\n}\n")}, 22);
  CHECK_FALSE(r.accepted);
  CHECK(r.error_count() >= 1);
}

TEST_CASE("gate compiles multi-unit inputs as one workspace") {
  CompileGate gate;
  auto r = gate.compile({unit("Main",
                              "class Main {\n"
                              "    void go() {\n"
                              "        Helper h = new Helper();\n"
                              "        System.out.println(h);\n"
                              "    }\n"
                              "}\n"),
                         unit("Helper", "class Helper {\n}\n")},
                        22);
  CHECK(r.accepted);
}

TEST_CASE("builtin fallback can be disabled") {
  // Only meaningful when no javac is discoverable; on JDK-equipped hosts the
  // external compiler satisfies the gate and the fallback never engages.
  if (!CompileGate::discover_javac().empty()) return;
  GateOptions opts;
  opts.allow_builtin = false;
  CompileGate gate(opts);
  CHECK_THROWS_AS(gate.compile({unit("A", "class A {\n}\n")}, 22), EnvironmentError);
}

TEST_CASE("loc statistics round half-up") {
  auto st = CompileGate::loc_stats({"a\nb\n\nc\n", "x\n"});
  CHECK(st.per_unit == std::vector<int>{3, 1});
  CHECK(st.mean == 2);
  CHECK(st.median == doctest::Approx(2.0));
}
