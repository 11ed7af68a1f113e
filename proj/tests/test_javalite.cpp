#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/javalite.hpp"
#include "retest/common.hpp"

namespace fs = std::filesystem;
using namespace retest;
using namespace retest::javalite;

static const fs::path kFixtures = RETEST_FIXTURES;

TEST_CASE("parser round-trip property over the fixture corpus") {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kFixtures / "parser"))
    if (e.path().extension() == ".java") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  REQUIRE(files.size() >= 40);

  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    std::string src = read_file(f);
    Ast ast = parse_or_throw(src);
    std::string printed = print(ast);
    Ast reparsed = parse_or_throw(printed);
    CHECK(ast_equal(ast, reparsed, EqualMode::Strict));
    // printing is a fixed point after one normalization pass
    CHECK(print(reparsed) == printed);
  }
}

TEST_CASE("parser handles the error-prone characteristics") {
  SUBCASE("lambda capturing enclosing state") {
    auto ast = parse_or_throw(
        "class L {\n"
        "    void go() {\n"
        "        int seed = 1;\n"
        "        Runnable r = () -> {\n"
        "            System.out.println(seed);\n"
        "        };\n"
        "        r.run();\n"
        "    }\n"
        "}\n");
    CHECK(ast.types.size() == 1);
  }
  SUBCASE("generic declarations and arguments") {
    auto ast = parse_or_throw(
        "class Box<T> {\n"
        "    T item;\n"
        "}\n"
        "\n"
        "class U {\n"
        "    Box<String> b = new Box<String>();\n"
        "}\n");
    CHECK(ast.types.size() == 2);
  }
  SUBCASE("anonymous class bodies") {
    auto ast = parse_or_throw(
        "class A {\n"
        "    Runnable r = new Runnable() {\n"
        "        public void run() {\n"
        "        }\n"
        "    };\n"
        "}\n");
    CHECK(ast.types.size() == 1);
  }
  SUBCASE("qualified this") {
    auto ast = parse_or_throw(
        "class Outer {\n"
        "    int margin;\n"
        "\n"
        "    class Inner {\n"
        "        int pad() {\n"
        "            return Outer.this.margin + 1;\n"
        "        }\n"
        "    }\n"
        "}\n");
    CHECK(ast.types.size() == 1);
  }
  SUBCASE("syntax errors carry a line number") {
    CHECK_THROWS_AS(parse_or_throw("class A {\n  int = ;\n}\n"), SyntaxError);
  }
}

TEST_CASE("element locators parse and print") {
  auto loc = ElementLocator::parse("class:Frame/class:Panel/method:arrange/stmt:2/expr:1");
  REQUIRE(loc.has_value());
  CHECK(loc->to_string() == "class:Frame/class:Panel/method:arrange/stmt:2/expr:1");
  CHECK_FALSE(ElementLocator::parse("bogus:Frame").has_value());
  CHECK_FALSE(ElementLocator::parse("").has_value());
  CHECK(ElementLocator{}.empty());
}

TEST_CASE("scope checker diagnostics") {
  SUBCASE("undeclared names") {
    auto diags = scope_check(parse_or_throw(
        "class A {\n"
        "    int go() {\n"
        "        return missing + 1;\n"
        "    }\n"
        "}\n"));
    REQUIRE_FALSE(diags.empty());
    bool hit = false;
    for (const auto& d : diags)
      if (d.message.find("cannot find symbol: missing") != std::string::npos) hit = true;
    CHECK(hit);
  }
  SUBCASE("duplicate locals across enclosing scopes") {
    auto diags = scope_check(parse_or_throw(
        "class A {\n"
        "    void go() {\n"
        "        int v = 1;\n"
        "        int v = 2;\n"
        "        System.out.println(v);\n"
        "    }\n"
        "}\n"));
    bool hit = false;
    for (const auto& d : diags)
      if (d.message.find("already defined") != std::string::npos) hit = true;
    CHECK(hit);
  }
  SUBCASE("well-known library types are in scope") {
    auto diags = scope_check(parse_or_throw(
        "class A {\n"
        "    void go() {\n"
        "        StringBuilder sb = new StringBuilder();\n"
        "        Runnable r = () -> {\n"
        "            System.out.println(sb);\n"
        "        };\n"
        "        r.run();\n"
        "    }\n"
        "}\n"));
    CHECK(diags.empty());
  }
}

TEST_CASE("normalized equality discounts only what it is told to") {
  auto a = parse_or_throw("class A {\n    static int f(final A x, int y) {\n        return y;\n    }\n}\n");
  auto b = parse_or_throw("class A {\n    static int f(A x, int y) {\n        return y;\n    }\n}\n");
  CHECK_FALSE(ast_equal(a, b, EqualMode::Strict));
  CHECK_FALSE(ast_equal(a, b, EqualMode::Normalized, {}));
  NormalizeOptions relaxed;
  relaxed.ignore_param_final = true;
  CHECK(ast_equal(a, b, EqualMode::Normalized, relaxed));

  // the relaxation must not blur genuinely different programs
  auto c = parse_or_throw("class A {\n    static int f(A x, int y) {\n        return y + 1;\n    }\n}\n");
  CHECK_FALSE(ast_equal(a, c, EqualMode::Normalized, relaxed));
}
