// Generates the committed fixture tree: seed records, replay cassettes,
// tracker pages, parser corpus, golden refactoring fixtures, and the bundled
// demonstration campaign. Everything it writes is verified in-process before
// the run succeeds, so a green fixturegen means the fixtures and the library
// agree with each other.
//
// Usage: fixturegen [output-dir]   (default: fixtures)

#include <functional>
#include <iostream>

#include "retest/retest.hpp"

namespace fs = std::filesystem;
using namespace retest;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++g_failures;
    std::cerr << "fixturegen: FAILED: " << what << "\n";
  }
}

// Replays a canned reply; used to drive record-mode sessions offline.
struct ScriptedTransport : llm::Transport {
  std::vector<std::string> replies;
  size_t next = 0;
  std::string complete(const std::string&) override {
    if (next >= replies.size()) throw std::runtime_error("scripted transport exhausted");
    return replies[next++];
  }
};

SourceUnit unit(const std::string& name, const std::string& src) { return {name, src}; }

std::string program_block(const std::string& name, const std::string& src) {
  return "Class: " + name + "\n```java\n" + src + "```\n";
}

// ---------------------------------------------------------------------------
// Variant program builders, one family per seed. Each returns the full reply
// text a mutation model would produce for (characteristic, k).
// ---------------------------------------------------------------------------

struct VariantSpec {
  std::string unit_name;
  std::string source;
  std::string target;
  std::string params;     // `k=v; k=v` or empty
  std::string procedure;
};

std::string variant_reply(const VariantSpec& v) {
  std::string r = "Variant:\n" + program_block(v.unit_name, v.source);
  r += "Target: " + v.target + "\n";
  r += "Procedure: " + v.procedure + "\n";
  if (!v.params.empty()) r += "Parameters: " + v.params + "\n";
  return r;
}

std::string box_class() { return "class Box<T> {\n    T item;\n}\n\n"; }

VariantSpec pullup_variant(const std::string& c, int k) {
  std::string K = std::to_string(k);
  std::string body;
  if (k >= 8) {
    body = "            int broken = missingName" + K + ";\n"
           "            System.out.println(broken);\n";
  } else if (c == "lambda") {
    body = "            Runnable task = () -> {\n"
           "                int tick = " + K + ";\n"
           "                System.out.println(tick);\n"
           "            };\n"
           "            task.run();\n";
  } else if (c == "generics") {
    body = "            Box<String> box = new Box<String>();\n"
           "            System.out.println(box.item);\n"
           "            int width = " + K + ";\n"
           "            System.out.println(width);\n";
  } else {  // anonymous-class
    body = "            BasePanel extra = new BasePanel() {\n"
           "                void hook() {\n"
           "                    System.out.println(" + K + ");\n"
           "                }\n"
           "            };\n"
           "            System.out.println(extra);\n";
  }
  std::string src = "class BasePanel {\n}\n\n";
  if (c == "generics" && k < 8) src += box_class();
  src += "class Frame {\n"
         "    class Panel extends BasePanel {\n"
         "        void arrange() {\n" + body +
         "        }\n"
         "    }\n"
         "}\n";
  return {"Frame", src, "class:Frame/class:Panel/method:arrange", "destination=BasePanel",
          "Pull arrange() from Panel up into BasePanel."};
}

VariantSpec inline_variant(const std::string& c, int k) {
  std::string K = std::to_string(k);
  bool collision = (c == "lambda" && k <= 1) || (c != "lambda" && k == 0);
  if (collision) {
    std::string flavor;
    if (c == "lambda") {
      flavor = "        Runnable show = () -> {\n"
               "            System.out.println(msg);\n"
               "        };\n"
               "        show.run();\n";
    } else if (c == "generics") {
      flavor = "        Box<String> tag = new Box<String>();\n"
               "        System.out.println(tag.item);\n";
    } else {
      flavor = "        Runnable note = new Runnable() {\n"
               "            public void run() {\n"
               "                System.out.println(msg);\n"
               "            }\n"
               "        };\n"
               "        note.run();\n";
    }
    std::string src = (c == "generics") ? box_class() : std::string();
    src += "class Calc {\n"
           "    void log(int v) {\n"
           "        int msg = v + 1;\n" + flavor +
           "        System.out.println(msg);\n"
           "    }\n"
           "\n"
           "    void run() {\n"
           "        int msg = " + std::to_string(k + 3) + ";\n"
           "        log(msg);\n"
           "        System.out.println(msg);\n"
           "    }\n"
           "}\n";
    return {"Calc", src, "class:Calc/method:log", "",
            "Inline log() into its only call site in run()."};
  }
  std::string flavor;
  if (k == 9) {
    flavor = "        int broken = missingName" + K + ";\n"
             "        System.out.println(broken);\n";
  } else if (c == "lambda") {
    flavor = "        Runnable show = () -> {\n"
             "            System.out.println(out);\n"
             "        };\n"
             "        show.run();\n";
  } else if (c == "generics") {
    flavor = "        Box<String> tag = new Box<String>();\n"
             "        System.out.println(tag.item);\n";
  } else {
    flavor = "        Runnable note = new Runnable() {\n"
             "            public void run() {\n"
             "                System.out.println(seed);\n"
             "            }\n"
             "        };\n"
             "        note.run();\n";
  }
  std::string src = (c == "generics" && k != 9) ? box_class() : std::string();
  src += "class Calc {\n"
         "    int bump(int v) {\n"
         "        return v + " + K + ";\n"
         "    }\n"
         "\n"
         "    int run(int seed) {\n"
         "        int out = bump(seed) * 2;\n" + flavor +
         "        return out;\n"
         "    }\n"
         "}\n";
  return {"Calc", src, "class:Calc/method:bump", "",
          "Inline bump() into the expression in run()."};
}

VariantSpec extract_variable_variant(const std::string& c, int k) {
  std::string K = std::to_string(k);
  std::string flavor;
  if (c == "lambda") {
    flavor = "        Runnable show = () -> {\n"
             "            System.out.println(base);\n"
             "        };\n"
             "        show.run();\n";
  } else if (c == "generics") {
    flavor = "        Box<String> tag = new Box<String>();\n"
             "        System.out.println(tag.item);\n";
  } else {
    flavor = "        Runnable note = new Runnable() {\n"
             "            public void run() {\n"
             "                System.out.println(qty);\n"
             "            }\n"
             "        };\n"
             "        note.run();\n";
  }
  std::string src = (c == "generics") ? box_class() : std::string();
  src += "class Price {\n"
         "    int total(int price, int qty) {\n"
         "        int base = price * qty + price;\n" + flavor +
         "        System.out.println(" + K + ");\n"
         "        return base;\n"
         "    }\n"
         "}\n";
  return {"Price", src, "class:Price/method:total/stmt:0/expr:1", "name=part; var_type=int",
          "Extract price * qty into a local named part."};
}

VariantSpec extract_method_variant(const std::string& c, int k) {
  std::string K = std::to_string(k);
  std::string flavor;
  if (k == 9) {
    flavor = "        int broken = missingName" + K + ";\n"
             "        System.out.println(broken);\n";
  } else if (c == "lambda") {
    flavor = "        Runnable show = () -> {\n"
             "            System.out.println(rows);\n"
             "        };\n"
             "        show.run();\n";
  } else if (c == "generics") {
    flavor = "        Box<String> tag = new Box<String>();\n"
             "        System.out.println(tag.item);\n";
  } else {
    flavor = "        Runnable note = new Runnable() {\n"
             "            public void run() {\n"
             "                System.out.println(rows);\n"
             "            }\n"
             "        };\n"
             "        note.run();\n";
  }
  std::string src = (c == "generics" && k != 9) ? box_class() : std::string();
  src += "class Job {\n"
         "    int render(int rows) {\n"
         "        int total = 0;\n"
         "        int row = 0;\n"
         "        while (row < rows) {\n"
         "            total = total + row;\n"
         "            row = row + 1;\n"
         "        }\n" + flavor +
         "        System.out.println(" + K + ");\n"
         "        return total;\n"
         "    }\n"
         "}\n";
  return {"Job", src, "class:Job/method:render", "name=sweep; start=0; end=2",
          "Extract the accumulation loop into a method named sweep."};
}

VariantSpec make_static_variant(const std::string& c, int k) {
  std::string K = std::to_string(k);
  bool broken = k == 9;
  bool already_static = (c == "lambda" && (k == 1 || k == 4 || k == 7)) ||
                        (c == "generics" && (k == 2 || k == 5)) ||
                        (c == "anonymous-class" && (k == 1 || k == 3 || k == 6));
  bool instance = (c == "lambda" && k == 0) || (c == "generics" && k == 0);
  std::string flavor;
  if (c == "lambda") {
    flavor = "        Runnable show = () -> {\n"
             "            System.out.println(delta);\n"
             "        };\n"
             "        show.run();\n";
  } else if (c == "generics") {
    flavor = "        Box<String> tag = new Box<String>();\n"
             "        System.out.println(tag.item);\n";
  } else {
    flavor = "        Runnable note = new Runnable() {\n"
             "            public void run() {\n"
             "                System.out.println(delta);\n"
             "            }\n"
             "        };\n"
             "        note.run();\n";
  }
  std::string src = (c == "generics" && !broken) ? box_class() : std::string();
  if (instance) {
    src += "class Meter {\n"
           "    int level;\n"
           "\n"
           "    int bump(int delta) {\n"
           "        level = level + delta;\n" + flavor +
           "        return level;\n"
           "    }\n"
           "}\n";
  } else {
    std::string mods = already_static ? "static " : "";
    std::string body = "        int next = delta + " + K + ";\n";
    if (broken) {
      body += "        int broken = missingName" + K + ";\n"
              "        System.out.println(broken);\n";
    } else {
      body += flavor;
    }
    body += "        return next;\n";
    src += "class Meter {\n"
           "    " + mods + "int bump(int delta) {\n" + body +
           "    }\n"
           "}\n";
  }
  return {"Meter", src, "class:Meter/method:bump", "",
          "Convert bump() into a static method."};
}

VariantSpec build_variant(RefactoringType type, const std::string& c, int k) {
  switch (type) {
    case RefactoringType::PullUp: return pullup_variant(c, k);
    case RefactoringType::InlineMethod: return inline_variant(c, k);
    case RefactoringType::ExtractVariable: return extract_variable_variant(c, k);
    case RefactoringType::ExtractMethod: return extract_method_variant(c, k);
    case RefactoringType::MakeStatic: return make_static_variant(c, k);
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Seed reports: the five campaign seeds plus fifteen extra extraction reports
// and one program-less report.
// ---------------------------------------------------------------------------

struct SeedFixture {
  BugReport report;
  std::string unit_name;
  std::string input_src;
  std::string info_reply;  // full extract-info reply; empty for extras
};

std::string seed_reply(const std::string& type_text, const std::string& unit_name,
                       const std::string& input_src, const std::string& refactored_src,
                       const std::string& element, const std::string& procedure,
                       const std::string& symptom, const std::string& template_src,
                       const std::string& params) {
  std::string r;
  r += "Refactoring type: " + type_text + "\n";
  r += "Input program:\n" + program_block(unit_name, input_src);
  r += "Refactored program:\n" + program_block(unit_name, refactored_src);
  r += "Refactored element: " + element + "\n";
  r += "Procedure: " + procedure + "\n";
  r += "Bug symptoms: " + symptom + "\n";
  r += "Structure template:\n" + program_block("Template", template_src);
  if (!params.empty()) r += "Parameters: " + params + "\n";
  return r;
}

BugReport make_report(const std::string& id, const std::string& title, const std::string& body,
                      std::int64_t fixed_at) {
  BugReport r;
  r.id = id;
  r.source = source_id::kFixture;
  r.title = title;
  r.body = body;
  r.status = "RESOLVED";
  r.resolution = "FIXED";
  r.fixed_at = fixed_at;
  r.url = "https://tracker.example/" + id;
  return r;
}

std::string report_body(const std::string& steps, const std::string& unit_name,
                        const std::string& src, const std::string& symptom) {
  return steps + "\n\nClass: " + unit_name + "\n```java\n" + src + "```\n\n" + symptom + "\n";
}

std::vector<SeedFixture> build_seed_fixtures() {
  std::vector<SeedFixture> out;

  {  // S-1 pull up method
    std::string input =
        "class BasePanel {\n"
        "}\n"
        "\n"
        "class Frame {\n"
        "    class Panel extends BasePanel {\n"
        "        void arrange() {\n"
        "            int width = 4;\n"
        "            System.out.println(width);\n"
        "        }\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class BasePanel {\n"
        "    void arrange() {\n"
        "        int width = 4;\n"
        "        System.out.println(width);\n"
        "    }\n"
        "}\n"
        "\n"
        "class Frame {\n"
        "    class Panel extends BasePanel {\n"
        "    }\n"
        "}\n";
    std::string tmpl =
        "class BasePanel {\n"
        "}\n"
        "\n"
        "class Frame {\n"
        "    class Panel extends BasePanel {\n"
        "        void arrange() {\n"
        "            int width = 0;\n"
        "            System.out.println(width);\n"
        "        }\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = "Frame";
    f.input_src = input;
    f.report = make_report(
        "S-1", "Pull up method refactoring from inner class produces broken code",
        report_body("Steps:\n1. Open the program below.\n2. Pull arrange() from Panel up into "
                    "BasePanel.",
                    "Frame", input, "The refactored code no longer compiles."),
        1493000000);
    f.info_reply = seed_reply(
        "Pull up method", "Frame", input, refactored,
        "name=arrange; type=method; position=class:Frame/class:Panel/method:arrange",
        "Select arrange() in Panel and pull it up into BasePanel.",
        "Compile error in the refactored code.", tmpl, "destination=BasePanel");
    out.push_back(std::move(f));
  }

  {  // S-2 inline method
    std::string input =
        "class Calc {\n"
        "    int bump(int v) {\n"
        "        return v + 1;\n"
        "    }\n"
        "\n"
        "    int run(int seed) {\n"
        "        int out = bump(seed) * 2;\n"
        "        return out;\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class Calc {\n"
        "    int run(int seed) {\n"
        "        int out = (seed + 1) * 2;\n"
        "        return out;\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = "Calc";
    f.input_src = input;
    f.report = make_report(
        "S-2", "Inline method refactoring reuses a clashing local variable name",
        report_body("Steps:\n1. Open the class below.\n2. Inline bump() into run().",
                    "Calc", input,
                    "Refactoring fails; the inlined local clashes with an existing variable."),
        1492000000);
    f.info_reply = seed_reply(
        "Inline method", "Calc", input, refactored,
        "name=bump; type=method; position=class:Calc/method:bump",
        "Inline bump() into every call site and delete the method.",
        "Refactoring fails with a duplicate variable definition.", input, "");
    out.push_back(std::move(f));
  }

  {  // S-3 extract variable
    std::string input =
        "class Price {\n"
        "    int total(int price, int qty) {\n"
        "        int base = price * qty + price;\n"
        "        return base;\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class Price {\n"
        "    int total(int price, int qty) {\n"
        "        int part = price * qty;\n"
        "        int base = part + price;\n"
        "        return base;\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = "Price";
    f.input_src = input;
    f.report = make_report(
        "S-3", "Extract variable refactoring corrupts the initializer expression",
        report_body("Steps:\n1. Open the class below.\n2. Extract price * qty into a new local.",
                    "Price", input, "The refactored program does not compile."),
        1491000000);
    f.info_reply = seed_reply(
        "Extract variable", "Price", input, refactored,
        "name=part; type=local-variable; position=class:Price/method:total/stmt:0/expr:1",
        "Extract the subexpression price * qty into a local named part.",
        "Compile error after the refactoring.", input, "name=part; var_type=int");
    out.push_back(std::move(f));
  }

  {  // S-4 extract method
    std::string input =
        "class Job {\n"
        "    int render(int rows) {\n"
        "        int total = 0;\n"
        "        int row = 0;\n"
        "        while (row < rows) {\n"
        "            total = total + row;\n"
        "            row = row + 1;\n"
        "        }\n"
        "        return total;\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class Job {\n"
        "    int render(int rows) {\n"
        "        int total = sweep(rows);\n"
        "        return total;\n"
        "    }\n"
        "\n"
        "    private int sweep(int rows) {\n"
        "        int total = 0;\n"
        "        int row = 0;\n"
        "        while (row < rows) {\n"
        "            total = total + row;\n"
        "            row = row + 1;\n"
        "        }\n"
        "        return total;\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = "Job";
    f.input_src = input;
    f.report = make_report(
        "S-4", "Extract method refactoring drops the value flowing out of the selection",
        report_body("Steps:\n1. Open the class below.\n2. Extract the first three statements "
                    "into a method.",
                    "Job", input, "The refactored program does not compile."),
        1490000000);
    f.info_reply = seed_reply(
        "Extract method", "Job", input, refactored,
        "name=sweep; type=method; position=class:Job/method:render",
        "Extract statements 0 through 2 of render() into a method named sweep.",
        "Compile error after the refactoring.", input, "name=sweep; start=0; end=2");
    out.push_back(std::move(f));
  }

  {  // S-5 make static
    std::string input =
        "class Meter {\n"
        "    int level;\n"
        "\n"
        "    int bump(int delta) {\n"
        "        level = level + delta;\n"
        "        return level;\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class Meter {\n"
        "    int level;\n"
        "\n"
        "    static int bump(Meter m, int delta) {\n"
        "        m.level = m.level + delta;\n"
        "        return m.level;\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = "Meter";
    f.input_src = input;
    f.report = make_report(
        "S-5", "Make static refactoring produces different signatures across engines",
        report_body("Steps:\n1. Open the class below.\n2. Make bump() static.",
                    "Meter", input,
                    "Different engines emit different parameter modifiers; behavior change "
                    "suspected."),
        1489000000);
    f.info_reply = seed_reply(
        "Make static", "Meter", input, refactored,
        "name=bump; type=method; position=class:Meter/method:bump",
        "Add the static modifier to bump() and rewrite instance accesses through a parameter.",
        "Behavior change between refactoring engines.", input, "");
    out.push_back(std::move(f));
  }

  // R-06..R-20: fifteen more resolved reports with embedded programs, keeping
  // the extraction corpus at twenty program-bearing reports.
  for (int n = 6; n <= 20; ++n) {
    std::string num = (n < 10 ? "0" : "") + std::to_string(n);
    std::string cls = "Widget" + num;
    std::string input =
        "class " + cls + " {\n"
        "    int level;\n"
        "\n"
        "    int scale(int v) {\n"
        "        level = level + v * " + std::to_string(n) + ";\n"
        "        return level;\n"
        "    }\n"
        "}\n";
    std::string refactored =
        "class " + cls + " {\n"
        "    int level;\n"
        "\n"
        "    static int scale(" + cls + " w, int v) {\n"
        "        w.level = w.level + v * " + std::to_string(n) + ";\n"
        "        return w.level;\n"
        "    }\n"
        "}\n";
    SeedFixture f;
    f.unit_name = cls;
    f.input_src = input;
    f.report = make_report(
        "R-" + num, "Make static refactoring breaks " + cls + " field access",
        report_body("Steps:\n1. Open the class below.\n2. Make scale() static.", cls, input,
                    "The refactored program does not compile."),
        1480000000 - n * 86400);
    f.info_reply = seed_reply(
        "Make static", cls, input, refactored,
        "name=scale; type=method; position=class:" + cls + "/method:scale",
        "Add the static modifier to scale() and rewrite instance accesses through a parameter.",
        "Compile error after the refactoring.", input, "");
    out.push_back(std::move(f));
  }

  {  // R-21: no embedded program
    SeedFixture f;
    f.report = make_report(
        "R-21", "Question about refactoring shortcuts",
        "Which keybinding triggers the rename refactoring? No code attached, just asking.\n",
        1470000000);
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Golden refactoring fixtures: input + hand-derived expected output.
// ---------------------------------------------------------------------------

struct Golden {
  std::string id;
  RefactoringType type;
  std::string profile = "ec-like";
  std::string unit_name;
  std::string input;
  std::string target;
  ParamMap params;
  std::string expected_status = "ok";
  std::string expected;
};

std::vector<Golden> build_goldens() {
  std::vector<Golden> g;

  g.push_back({"g01", RefactoringType::PullUp, "ec-like", "Kid",
               "class Base {\n"
               "}\n"
               "\n"
               "class Kid extends Base {\n"
               "    void greet() {\n"
               "        System.out.println(1);\n"
               "    }\n"
               "}\n",
               "class:Kid/method:greet", {{"destination", "Base"}}, "ok",
               "class Base {\n"
               "    void greet() {\n"
               "        System.out.println(1);\n"
               "    }\n"
               "}\n"
               "\n"
               "class Kid extends Base {\n"
               "}\n"});

  g.push_back({"g02", RefactoringType::PullUp, "ec-like", "Outer",
               "class Base {\n"
               "}\n"
               "\n"
               "class Outer {\n"
               "    class Kid extends Base {\n"
               "        int twice(int v) {\n"
               "            return v + v;\n"
               "        }\n"
               "    }\n"
               "}\n",
               "class:Outer/class:Kid/method:twice", {{"destination", "Base"}}, "ok",
               "class Base {\n"
               "    int twice(int v) {\n"
               "        return v + v;\n"
               "    }\n"
               "}\n"
               "\n"
               "class Outer {\n"
               "    class Kid extends Base {\n"
               "    }\n"
               "}\n"});

  g.push_back({"g03", RefactoringType::PullUp, "ec-like", "Kid",
               "class Base {\n"
               "}\n"
               "\n"
               "class Kid extends Base {\n"
               "    int area(int w, int h) {\n"
               "        int a = w * h;\n"
               "        return a;\n"
               "    }\n"
               "}\n",
               "class:Kid/method:area", {{"destination", "Base"}}, "ok",
               "class Base {\n"
               "    int area(int w, int h) {\n"
               "        int a = w * h;\n"
               "        return a;\n"
               "    }\n"
               "}\n"
               "\n"
               "class Kid extends Base {\n"
               "}\n"});

  g.push_back({"g04", RefactoringType::InlineMethod, "ec-like", "Calc",
               "class Calc {\n"
               "    int twice(int v) {\n"
               "        return v + v;\n"
               "    }\n"
               "\n"
               "    int run(int x) {\n"
               "        int out = twice(x) * 3;\n"
               "        return out;\n"
               "    }\n"
               "}\n",
               "class:Calc/method:twice", {}, "ok",
               "class Calc {\n"
               "    int run(int x) {\n"
               "        int out = (x + x) * 3;\n"
               "        return out;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g05", RefactoringType::InlineMethod, "ec-like", "Calc",
               "class Calc {\n"
               "    void log(int v) {\n"
               "        int msg = v + 1;\n"
               "        System.out.println(msg);\n"
               "    }\n"
               "\n"
               "    void run() {\n"
               "        int msg = 5;\n"
               "        log(msg);\n"
               "        System.out.println(msg);\n"
               "    }\n"
               "}\n",
               "class:Calc/method:log", {}, "ok",
               "class Calc {\n"
               "    void run() {\n"
               "        int msg = 5;\n"
               "        int msg_1 = msg + 1;\n"
               "        System.out.println(msg_1);\n"
               "        System.out.println(msg);\n"
               "    }\n"
               "}\n"});

  g.push_back({"g06", RefactoringType::InlineMethod, "ec-like", "Calc2",
               "class Calc2 {\n"
               "    int twice(int v) {\n"
               "        return v + v;\n"
               "    }\n"
               "\n"
               "    int run(int x) {\n"
               "        int out = twice(x + 1) * 3;\n"
               "        return out;\n"
               "    }\n"
               "}\n",
               "class:Calc2/method:twice", {}, "ok",
               "class Calc2 {\n"
               "    int run(int x) {\n"
               "        int out = ((x + 1) + (x + 1)) * 3;\n"
               "        return out;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g07", RefactoringType::ExtractVariable, "ec-like", "Price",
               "class Price {\n"
               "    int total(int price, int qty) {\n"
               "        int base = price * qty + price;\n"
               "        return base;\n"
               "    }\n"
               "}\n",
               "class:Price/method:total/stmt:0/expr:1",
               {{"name", "part"}, {"var_type", "int"}}, "ok",
               "class Price {\n"
               "    int total(int price, int qty) {\n"
               "        int part = price * qty;\n"
               "        int base = part + price;\n"
               "        return base;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g08", RefactoringType::ExtractVariable, "ec-like", "Area",
               "class Area {\n"
               "    int size(int w, int h) {\n"
               "        int pad = 2;\n"
               "        return w * h + pad;\n"
               "    }\n"
               "}\n",
               "class:Area/method:size/stmt:1/expr:1",
               {{"name", "core"}, {"var_type", "int"}}, "ok",
               "class Area {\n"
               "    int size(int w, int h) {\n"
               "        int pad = 2;\n"
               "        int core = w * h;\n"
               "        return core + pad;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g09", RefactoringType::ExtractVariable, "ec-like", "Disk",
               "class Disk {\n"
               "    int read() {\n"
               "        return 7;\n"
               "    }\n"
               "\n"
               "    int use() {\n"
               "        int total = read() + 1;\n"
               "        return total;\n"
               "    }\n"
               "}\n",
               "class:Disk/method:use/stmt:0/expr:1",
               {{"name", "got"}, {"var_type", "int"}}, "warning",
               "class Disk {\n"
               "    int read() {\n"
               "        return 7;\n"
               "    }\n"
               "\n"
               "    int use() {\n"
               "        int got = read();\n"
               "        int total = got + 1;\n"
               "        return total;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g10", RefactoringType::ExtractMethod, "ec-like", "Job",
               "class Job {\n"
               "    int render(int rows) {\n"
               "        int total = 0;\n"
               "        int row = 0;\n"
               "        while (row < rows) {\n"
               "            total = total + row;\n"
               "            row = row + 1;\n"
               "        }\n"
               "        return total;\n"
               "    }\n"
               "}\n",
               "class:Job/method:render",
               {{"name", "sweep"}, {"start", "0"}, {"end", "2"}}, "ok",
               "class Job {\n"
               "    int render(int rows) {\n"
               "        int total = sweep(rows);\n"
               "        return total;\n"
               "    }\n"
               "\n"
               "    private int sweep(int rows) {\n"
               "        int total = 0;\n"
               "        int row = 0;\n"
               "        while (row < rows) {\n"
               "            total = total + row;\n"
               "            row = row + 1;\n"
               "        }\n"
               "        return total;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g11", RefactoringType::ExtractMethod, "ec-like", "Log",
               "class Log {\n"
               "    void emit(int v) {\n"
               "        int a = v + 1;\n"
               "        System.out.println(a);\n"
               "        System.out.println(v);\n"
               "    }\n"
               "}\n",
               "class:Log/method:emit",
               {{"name", "shout"}, {"start", "0"}, {"end", "1"}}, "ok",
               "class Log {\n"
               "    void emit(int v) {\n"
               "        shout(v);\n"
               "        System.out.println(v);\n"
               "    }\n"
               "\n"
               "    private void shout(int v) {\n"
               "        int a = v + 1;\n"
               "        System.out.println(a);\n"
               "    }\n"
               "}\n"});

  g.push_back({"g12", RefactoringType::ExtractMethod, "ec-like", "Mix",
               "class Mix {\n"
               "    int blend(int x, int y) {\n"
               "        int sum = x + y;\n"
               "        int twice = sum + sum;\n"
               "        return twice;\n"
               "    }\n"
               "}\n",
               "class:Mix/method:blend",
               {{"name", "mash"}, {"start", "0"}, {"end", "1"}}, "ok",
               "class Mix {\n"
               "    int blend(int x, int y) {\n"
               "        int twice = mash(x, y);\n"
               "        return twice;\n"
               "    }\n"
               "\n"
               "    private int mash(int x, int y) {\n"
               "        int sum = x + y;\n"
               "        int twice = sum + sum;\n"
               "        return twice;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g13", RefactoringType::MakeStatic, "ec-like", "Pure",
               "class Pure {\n"
               "    int half(int v) {\n"
               "        return v - 2;\n"
               "    }\n"
               "}\n",
               "class:Pure/method:half", {}, "ok",
               "class Pure {\n"
               "    static int half(int v) {\n"
               "        return v - 2;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g14", RefactoringType::MakeStatic, "ec-like", "Meter",
               "class Meter {\n"
               "    int level;\n"
               "\n"
               "    int bump(int delta) {\n"
               "        level = level + delta;\n"
               "        return level;\n"
               "    }\n"
               "}\n",
               "class:Meter/method:bump", {}, "warning",
               "class Meter {\n"
               "    int level;\n"
               "\n"
               "    static int bump(Meter m, int delta) {\n"
               "        m.level = m.level + delta;\n"
               "        return m.level;\n"
               "    }\n"
               "}\n"});

  g.push_back({"g15", RefactoringType::MakeStatic, "idea-like", "Meter",
               "class Meter {\n"
               "    int level;\n"
               "\n"
               "    int bump(int delta) {\n"
               "        level = level + delta;\n"
               "        return level;\n"
               "    }\n"
               "}\n",
               "class:Meter/method:bump", {}, "warning",
               "class Meter {\n"
               "    int level;\n"
               "\n"
               "    static int bump(final Meter m, int delta) {\n"
               "        m.level = m.level + delta;\n"
               "        return m.level;\n"
               "    }\n"
               "}\n"});

  return g;
}

// ---------------------------------------------------------------------------
// Parser corpus
// ---------------------------------------------------------------------------

std::vector<std::string> build_parser_corpus() {
  std::vector<std::string> out;

  out.push_back("class Empty {\n}\n");

  out.push_back(
      "class Fields {\n"
      "    int a;\n"
      "    int b = 3;\n"
      "    static int c = 4;\n"
      "    String name = \"hello\";\n"
      "}\n");

  out.push_back(
      "class Branches {\n"
      "    int pick(int v) {\n"
      "        if (v < 0) {\n"
      "            return 0 - v;\n"
      "        } else {\n"
      "            return v;\n"
      "        }\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Loops {\n"
      "    int sum(int n) {\n"
      "        int total = 0;\n"
      "        for (int i = 0; i < n; i = i + 1) {\n"
      "            total = total + i;\n"
      "        }\n"
      "        while (total > 100) {\n"
      "            total = total - 10;\n"
      "        }\n"
      "        return total;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Lambdas {\n"
      "    void go() {\n"
      "        int seed = 7;\n"
      "        Runnable r = () -> {\n"
      "            System.out.println(seed);\n"
      "        };\n"
      "        r.run();\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Anon {\n"
      "    void go() {\n"
      "        Runnable r = new Runnable() {\n"
      "            public void run() {\n"
      "                System.out.println(\"anon\");\n"
      "            }\n"
      "        };\n"
      "        r.run();\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Box<T> {\n"
      "    T item;\n"
      "\n"
      "    T peek() {\n"
      "        return item;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Pairs<K, V> {\n"
      "    K key;\n"
      "    V value;\n"
      "}\n");

  out.push_back(
      "class UsesBox {\n"
      "    void go() {\n"
      "        Box<String> b = new Box<String>();\n"
      "        System.out.println(b.item);\n"
      "    }\n"
      "}\n"
      "\n"
      "class Box<T> {\n"
      "    T item;\n"
      "}\n");

  out.push_back(
      "class Outer {\n"
      "    int margin;\n"
      "\n"
      "    class Inner {\n"
      "        int pad() {\n"
      "            return Outer.this.margin + 1;\n"
      "        }\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Nesting {\n"
      "    class Mid {\n"
      "        class Leaf {\n"
      "            int depth() {\n"
      "                return 3;\n"
      "            }\n"
      "        }\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Comments {\n"
      "    // a line comment\n"
      "    int v = 1; // trailing\n"
      "\n"
      "    // another line comment\n"
      "    int w = 2;\n"
      "}\n");

  out.push_back(
      "class Calls {\n"
      "    int id(int v) {\n"
      "        return v;\n"
      "    }\n"
      "\n"
      "    int chain() {\n"
      "        return id(id(id(4)));\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Statics {\n"
      "    static int count;\n"
      "\n"
      "    static void tick() {\n"
      "        count = count + 1;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Supers extends Base {\n"
      "    void hook() {\n"
      "        System.out.println(\"kid\");\n"
      "    }\n"
      "}\n"
      "\n"
      "class Base {\n"
      "    void hook() {\n"
      "        System.out.println(\"base\");\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Finals {\n"
      "    int go(final int v) {\n"
      "        final int twice = v + v;\n"
      "        return twice;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Bools {\n"
      "    boolean both(boolean a, boolean b) {\n"
      "        return a && b || !a;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class Strings {\n"
      "    String greet(String name) {\n"
      "        String msg = \"hi, \" + name;\n"
      "        return msg;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class ThisUse {\n"
      "    int v;\n"
      "\n"
      "    void set(int v) {\n"
      "        this.v = v;\n"
      "    }\n"
      "}\n");

  out.push_back(
      "class NullUse {\n"
      "    String s = null;\n"
      "\n"
      "    boolean missing() {\n"
      "        return s == null;\n"
      "    }\n"
      "}\n");

  // Parameterized clones widen the corpus while keeping each program distinct.
  for (int i = 0; i < 10; ++i) {
    std::string n = std::to_string(i);
    out.push_back(
        "class Clone" + n + " {\n"
        "    int scale(int v) {\n"
        "        int bump = v * " + std::to_string(i + 2) + ";\n"
        "        if (bump > " + std::to_string(10 * (i + 1)) + ") {\n"
        "            bump = bump - " + n + ";\n"
        "        }\n"
        "        return bump;\n"
        "    }\n"
        "}\n");
  }
  for (int i = 0; i < 5; ++i) {
    std::string n = std::to_string(i);
    out.push_back(
        "class Lift" + n + " {\n"
        "    void go() {\n"
        "        int start = " + n + ";\n"
        "        Runnable r = () -> {\n"
        "            System.out.println(start + " + std::to_string(i * 3) + ");\n"
        "        };\n"
        "        r.run();\n"
        "    }\n"
        "}\n");
  }
  for (int i = 0; i < 5; ++i) {
    std::string n = std::to_string(i);
    out.push_back(
        "class Holder" + n + "<T> {\n"
        "    T item;\n"
        "\n"
        "    void stash(T v) {\n"
        "        item = v;\n"
        "    }\n"
        "}\n");
  }

  return out;
}

// ---------------------------------------------------------------------------
// Tracker pages for mining tests
// ---------------------------------------------------------------------------

void write_tracker_pages(const fs::path& dir) {
  auto rep = [](const std::string& id, const std::string& title, const std::string& body,
                const std::string& status, const std::string& resolution, std::int64_t fixed_at,
                bool dup) {
    nlohmann::json j;
    j["id"] = id;
    j["source"] = "fixture";
    j["title"] = title;
    j["body"] = body;
    j["status"] = status;
    j["resolution"] = resolution;
    j["fixed_at"] = fixed_at;
    j["url"] = "https://tracker.example/" + id;
    j["marked_duplicate"] = dup;
    j["matched_field"] = "";
    return j;
  };

  nlohmann::json page0 = nlohmann::json::array();
  page0.push_back(rep("M-01", "Inline refactor breaks lambda capture",
                      "Inlining a method whose body is spliced next to a lambda corrupts the "
                      "capture.",
                      "RESOLVED", "FIXED", 1500000000, false));
  page0.push_back(rep("M-02", "Editor hangs on large files",
                      "While refactoring the class the editor hangs for a minute.", "CLOSED",
                      "FIXED", 1400000000, false));
  page0.push_back(rep("M-03", "Formatter crash on enums",
                      "The formatter crashes when an enum has a trailing comma.", "RESOLVED",
                      "FIXED", 1550000000, false));
  page0.push_back(rep("M-04", "refactoring preview shows the wrong file",
                      "The preview pane renders a stale buffer.", "OPEN", "", 0, false));
  write_file_atomic(dir / "page-0.json", page0.dump(2) + "\n");

  nlohmann::json page1 = nlohmann::json::array();
  nlohmann::json malformed;  // empty body: parse_report must reject it
  malformed["id"] = "M-05";
  malformed["source"] = "fixture";
  malformed["title"] = "refactor loses comments";
  malformed["body"] = "";
  page1.push_back(malformed);
  page1.push_back(rep("M-06", "Duplicate: refactoring drops annotations",
                      "Same as an earlier report about the refactoring engine.", "RESOLVED",
                      "DUPLICATE", 1420000000, true));
  page1.push_back(rep("M-07", "refactoring breaks switch expressions",
                      "Recent regression in the refactoring engine.", "RESOLVED", "FIXED",
                      1900000000, false));
  page1.push_back(rep("M-08", "Pull up refactoring drops qualifiers",
                      "Moving a method to the superclass strips Outer.this qualifiers.",
                      "VERIFIED", "FIXED", 1450000000, false));
  write_file_atomic(dir / "page-1.json", page1.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Verification helpers
// ---------------------------------------------------------------------------

bool normalized_equal(const std::string& a, const std::string& b) {
  auto pa = javalite::parse_or_throw(a);
  auto pb = javalite::parse_or_throw(b);
  return javalite::ast_equal(pa, pb, javalite::EqualMode::Normalized, {});
}

void verify_golden(const Golden& g) {
  engine::RefactoringRequest req;
  req.type = g.type;
  req.units = {unit(g.unit_name, g.input)};
  auto loc = javalite::ElementLocator::parse(g.target);
  check(loc.has_value(), g.id + ": target locator parses");
  if (!loc) return;
  req.target = *loc;
  req.params = g.params;
  engine::Engine eng(engine::EngineConfig::for_profile(g.profile));
  auto resp = eng.apply(req);
  check(engine::wire_status(resp.status) == g.expected_status,
        g.id + ": status " + engine::wire_status(resp.status) + " != " + g.expected_status);
  check(resp.units.size() == 1, g.id + ": single output unit");
  if (resp.units.size() == 1)
    check(normalized_equal(resp.units[0].source, g.expected),
          g.id + ": output matches expected\n--- got ---\n" + resp.units[0].source +
              "--- want ---\n" + g.expected);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("fixtures");
  fs::create_directories(out);

  auto seeds_dir = out / "seeds";
  auto extract_cassettes = out / "cassettes" / "extract";
  auto mutate_cassettes = out / "cassettes" / "mutate";
  fs::create_directories(seeds_dir);
  fs::create_directories(extract_cassettes);
  fs::create_directories(mutate_cassettes);

  llm::CassetteStore extract_store(extract_cassettes);
  llm::CassetteStore mutate_store(mutate_cassettes);
  llm::Gateway gateway;

  // ---- extraction corpus, seeds, and extract cassettes ----
  auto fixtures = build_seed_fixtures();
  std::vector<BugReport> corpus;
  int seed_files = 0;
  for (const auto& f : fixtures) {
    corpus.push_back(f.report);
    bool has_program = !f.input_src.empty();
    {
      ScriptedTransport t;
      t.replies = {has_program ? program_block(f.unit_name, f.input_src)
                               : std::string("No input program found.\n")};
      llm::Session s("extract-program-" + f.report.id, llm::SessionMode::Record, &t,
                     &extract_store);
      auto units = gateway.extract_input_program(f.report, s);
      if (has_program) {
        check(units.size() == 1 && units[0].class_name == f.unit_name &&
                  units[0].source == f.input_src,
              f.report.id + ": program extraction round-trips");
        write_file_atomic(out / "expected" / (f.report.id + ".java"), f.input_src);
        auto diags = javalite::scope_check(javalite::parse_or_throw(f.input_src));
        check(diags.empty(), f.report.id + ": embedded program is scope-clean");
      } else {
        check(units.empty(), f.report.id + ": none-marker handled");
      }
    }
    if (!f.info_reply.empty()) {
      ScriptedTransport t;
      t.replies = {f.info_reply};
      llm::Session s("extract-info-" + f.report.id, llm::SessionMode::Record, &t, &extract_store);
      auto seed = gateway.extract_refactoring_info(f.report, s);
      check(seed.id == f.report.id, f.report.id + ": seed id matches");
      nlohmann::json j = seed;
      if (f.report.id[0] == 'S') {
        write_file_atomic(seeds_dir / (f.report.id + ".json"), j.dump(2) + "\n");
        ++seed_files;
      }
    }
  }
  check(seed_files == 5, "five campaign seed records written");
  persist_corpus(out / "corpus" / "reports.jsonl", corpus);

  // ---- tracker pages ----
  write_tracker_pages(out / "tracker_pages");

  // ---- mutation cassettes ----
  auto seeds = campaign::load_seeds(seeds_dir);
  check(seeds.size() == 5, "seed records load back");
  auto chars = campaign::default_characteristics();
  for (const auto& seed : seeds) {
    for (const auto& ch : chars) {
      for (int k = 0; k < 10; ++k) {
        auto spec = build_variant(seed.type, ch.id, k);
        ScriptedTransport t;
        t.replies = {variant_reply(spec)};
        std::string sid = "mutate-" + seed.id + "-" + ch.id + "-" + std::to_string(k);
        llm::Session s(sid, llm::SessionMode::Record, &t, &mutate_store);
        auto cand = gateway.generate_variant(seed, ch.id, ch.description, 22, true, s);
        check(cand.units.size() == 1, sid + ": one unit parsed");
        check(cand.target.to_string() == spec.target, sid + ": target round-trips");
      }
    }
  }

  // ---- parser corpus ----
  auto programs = build_parser_corpus();
  check(programs.size() == 40, "parser corpus has 40 programs, has " +
                                   std::to_string(programs.size()));
  for (size_t i = 0; i < programs.size(); ++i) {
    std::string name = "p" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1);
    try {
      auto ast = javalite::parse_or_throw(programs[i]);
      std::string printed = javalite::print(ast);
      auto ast2 = javalite::parse_or_throw(printed);
      check(javalite::ast_equal(ast, ast2, javalite::EqualMode::Strict),
            name + ": print/reparse preserves the AST");
      check(javalite::print(ast2) == printed, name + ": printing is stable");
    } catch (const std::exception& e) {
      check(false, name + ": parses (" + std::string(e.what()) + ")");
    }
    write_file_atomic(out / "parser" / (name + ".java"), programs[i]);
  }

  // ---- golden refactorings ----
  auto goldens = build_goldens();
  check(goldens.size() == 15, "golden set has 15 fixtures");
  for (const auto& g : goldens) {
    verify_golden(g);
    nlohmann::json j;
    j["id"] = g.id;
    j["type"] = to_string(g.type);
    j["profile"] = g.profile;
    j["units"] = nlohmann::json::array({{{"name", g.unit_name}, {"source", g.input}}});
    j["target"] = g.target;
    j["params"] = g.params;
    j["expected_status"] = g.expected_status;
    j["expected"] = nlohmann::json::array({{{"name", g.unit_name}, {"source", g.expected}}});
    write_file_atomic(out / "golden" / (g.id + ".json"), j.dump(2) + "\n");
  }

  // ---- enclosing-instance pull-up fixture ----
  {
    std::string src =
        "class BasePanel {\n"
        "}\n"
        "\n"
        "class Frame {\n"
        "    int margin;\n"
        "\n"
        "    class Panel extends BasePanel {\n"
        "        void arrange() {\n"
        "            int width = Frame.this.margin + 4;\n"
        "            System.out.println(width);\n"
        "        }\n"
        "    }\n"
        "}\n";
    write_file_atomic(out / "fig3" / "Frame.java", src);
    nlohmann::json j;
    j["type"] = "PullUp";
    j["unit"] = "Frame";
    j["target"] = "class:Frame/class:Panel/method:arrange";
    j["params"] = ParamMap{{"destination", "BasePanel"}};
    write_file_atomic(out / "fig3" / "request.json", j.dump(2) + "\n");

    engine::RefactoringRequest req;
    req.type = RefactoringType::PullUp;
    req.units = {unit("Frame", src)};
    req.target = *javalite::ElementLocator::parse(j["target"].get<std::string>());
    req.params = {{"destination", "BasePanel"}};
    engine::Engine pristine(engine::EngineConfig::for_profile("ec-like"));
    auto refusal = pristine.check_preconditions(req);
    check(refusal.has_value() &&
              refusal->find("enclosing instance") != std::string::npos,
          "fig3: pristine engine refuses the enclosing-instance pull-up");
    auto cfg = engine::EngineConfig::for_profile("ec-like");
    cfg.fault = engine::Fault::PullupDropOuterQualifier;
    auto resp = engine::Engine(cfg).apply(req);
    check(resp.status == engine::Status::Ok, "fig3: faulty engine claims success");
    bool unresolved = false;
    if (!resp.units.empty())
      for (const auto& d : javalite::scope_check(javalite::parse_or_throw(resp.units[0].source)))
        if (d.message.find("cannot find symbol: margin") != std::string::npos) unresolved = true;
    check(unresolved, "fig3: faulty output dangles the outer field");
  }

  // ---- make-static config divergence fixture ----
  {
    std::string src =
        "class Meter {\n"
        "    int level;\n"
        "\n"
        "    int bump(int delta) {\n"
        "        level = level + delta;\n"
        "        return level;\n"
        "    }\n"
        "}\n";
    write_file_atomic(out / "makestatic_pair" / "Meter.java", src);
    nlohmann::json j;
    j["type"] = "MakeStatic";
    j["unit"] = "Meter";
    j["target"] = "class:Meter/method:bump";
    j["params"] = ParamMap{};
    write_file_atomic(out / "makestatic_pair" / "request.json", j.dump(2) + "\n");

    engine::RefactoringRequest req;
    req.type = RefactoringType::MakeStatic;
    req.units = {unit("Meter", src)};
    req.target = *javalite::ElementLocator::parse("class:Meter/method:bump");
    auto ec = engine::Engine(engine::EngineConfig::for_profile("ec-like")).apply(req);
    auto idea = engine::Engine(engine::EngineConfig::for_profile("idea-like")).apply(req);
    check(ec.status == engine::Status::Warning && idea.status == engine::Status::Warning,
          "makestatic_pair: both profiles succeed with a signature warning");
    auto pa = javalite::parse_or_throw(ec.units[0].source);
    auto pb = javalite::parse_or_throw(idea.units[0].source);
    javalite::NormalizeOptions relaxed;
    relaxed.ignore_param_final = true;
    check(!javalite::ast_equal(pa, pb, javalite::EqualMode::Normalized, {}),
          "makestatic_pair: outputs differ under the strict normalizer");
    check(javalite::ast_equal(pa, pb, javalite::EqualMode::Normalized, relaxed),
          "makestatic_pair: outputs agree once final-parameter differences are discounted");
  }

  // ---- bundled campaign config ----
  std::string cfg_text =
      "# Bundled demonstration campaign. Runs fully offline from the recorded\n"
      "# cassettes; the faulty engine plants a known inline-method defect.\n"
      "seeds seeds\n"
      "characteristic lambda\n"
      "characteristic generics\n"
      "characteristic anonymous-class\n"
      "variants 10\n"
      "jdk 22\n"
      "use_template true\n"
      "cassettes cassettes/mutate\n"
      "dedup_threshold 0.5\n"
      "normalize_final_params true\n"
      "engine ref profile=ec-like\n"
      "engine idea profile=idea-like\n"
      "engine faulty profile=ec-like fault=inline-skip-name-freshening\n";
  write_file_atomic(out / "campaign.cfg", cfg_text);

  // ---- replay the whole campaign and verify the frozen ground truth ----
  {
    auto cfg = campaign::CampaignConfig::load(out / "campaign.cfg");
    auto scratch = fs::temp_directory_path() / "fixturegen-campaign-check";
    fs::remove_all(scratch);
    cfg.output_dir = scratch;
    campaign::Runner runner(cfg, llm::SessionMode::Replay);
    auto result = runner.run();

    struct RowTruth {
      std::string name;
      int tgv, cv, rpv, uc, ws, diff;
    };
    const std::vector<RowTruth> truth = {
        {"PullUp", 30, 24, 24, 0, 0, 0},          {"InlineMethod", 30, 27, 27, 4, 0, 0},
        {"ExtractVariable", 30, 30, 30, 0, 0, 0}, {"ExtractMethod", 30, 27, 27, 0, 0, 0},
        {"MakeStatic", 30, 27, 19, 0, 0, 4},
    };
    check(result.rows.size() == truth.size(), "campaign: five summary rows");
    for (size_t i = 0; i < truth.size() && i < result.rows.size(); ++i) {
      const auto& [key, r] = result.rows[i];
      const auto& t = truth[i];
      bool ok = key.first == t.name && r.tgv == t.tgv && r.cv == t.cv && r.rpv == t.rpv &&
                r.uc == t.uc && r.ws == t.ws && r.diff == t.diff;
      check(ok, "campaign row " + t.name + ": got " + key.first + " tgv=" +
                    std::to_string(r.tgv) + " cv=" + std::to_string(r.cv) + " rpv=" +
                    std::to_string(r.rpv) + " uc=" + std::to_string(r.uc) + " ws=" +
                    std::to_string(r.ws) + " diff=" + std::to_string(r.diff));
    }
    check(result.new_violation_count() == 4, "campaign: four new violations");
    int suppressed = 0, not_rpt = 0, uncompilable = 0;
    for (const auto& v : result.violations)
      if (v.verdict == oracles::Verdict::SuppressedConfig) ++suppressed;
    for (const auto& v : result.variants) {
      if (v.gate == campaign::GateStatus::NotRpt) ++not_rpt;
      if (v.gate == campaign::GateStatus::Uncompilable) ++uncompilable;
      check(v.gate != campaign::GateStatus::GenerationFailed, v.id + ": generation succeeded");
    }
    check(suppressed == 4, "campaign: four suppressed-config violations, got " +
                               std::to_string(suppressed));
    check(not_rpt == 8, "campaign: eight not-rpt variants, got " + std::to_string(not_rpt));
    check(uncompilable == 15,
          "campaign: fifteen uncompilable variants, got " + std::to_string(uncompilable));
    fs::remove_all(scratch);
  }

  // ---- frozen ground truth, written only after the checks above ----
  std::string ground_truth = R"({
  "totals": {"tgv": 150, "cv": 135, "rpv": 127, "uc": 4, "ws": 0, "diff": 4},
  "rows": [
    {"refactoring": "PullUp", "tgv": 30, "cv": 24, "rpv": 24, "uc": 0, "ws": 0, "diff": 0},
    {"refactoring": "InlineMethod", "tgv": 30, "cv": 27, "rpv": 27, "uc": 4, "ws": 0, "diff": 0},
    {"refactoring": "ExtractVariable", "tgv": 30, "cv": 30, "rpv": 30, "uc": 0, "ws": 0, "diff": 0},
    {"refactoring": "ExtractMethod", "tgv": 30, "cv": 27, "rpv": 27, "uc": 0, "ws": 0, "diff": 0},
    {"refactoring": "MakeStatic", "tgv": 30, "cv": 27, "rpv": 19, "uc": 0, "ws": 0, "diff": 4}
  ],
  "bugs": {"faulty": 4},
  "new_violations": 4,
  "suppressed_config_violations": 4,
  "not_rpt_variants": 8,
  "uncompilable_variants": 15,
  "engines": ["ref", "idea", "faulty"],
  "extraction_reports_with_programs": 20
}
)";
  write_file_atomic(out / "ground_truth.json", ground_truth);

  if (g_failures) {
    std::cerr << "fixturegen: " << g_failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "fixturegen: all fixtures written and verified under " << out << "\n";
  return 0;
}
