#pragma once

#include <functional>
#include <httplib.h>
#include <json.hpp>
#include <map>

#include "retest/common.hpp"
#include "retest/compile_gate.hpp"
#include "retest/corpus.hpp"
#include "retest/javalite.hpp"
#include "retest/refactoring.hpp"

namespace retest::llm {

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

enum class PromptKind { ExtractProgram, ExtractInfo, Mutate, MutateNoTemplate };

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_placeholders() {
  static const std::vector<std::string> p = {"Example",        "Format",   "Refactoring Type",
                                             "Definition",     "Characteristic", "Template",
                                             "Input Program",  "Version"};
  return p;
}

// The structured-reply contract: keyed lines, one fenced code region per
// program. Survives models that wrap payloads in prose.
inline std::string reply_format_description() {
  return "Reply with keyed lines. Each program is announced by a line `Class: <name>` followed "
         "by a fenced ```java code block. Other fields use `Key: value` lines. Report the "
         "absence of a program with the exact line `No input program found.`";
}

struct PromptTemplate {
  PromptKind kind;
  std::string text;
  std::vector<std::string> shots;

  static PromptTemplate load(PromptKind kind, const std::filesystem::path& file,
                             std::vector<std::string> shots = {}) {
    return {kind, read_file(file), std::move(shots)};
  }

  // Substitutes named placeholders; unbound or residual placeholders fail.
  std::string render(std::map<std::string, std::string> bindings) const {
    if (!bindings.count("Format")) bindings["Format"] = reply_format_description();
    if (!bindings.count("Example") && !shots.empty()) {
      std::string ex;
      for (size_t i = 0; i < shots.size(); ++i) {
        if (i) ex += "\n---\n";
        ex += shots[i];
      }
      bindings["Example"] = ex;
    }
    if (kind == PromptKind::Mutate && !bindings.count("Template"))
      throw RenderError("mutate prompt requires the Template placeholder bound");
    if (kind == PromptKind::MutateNoTemplate && !bindings.count("Input Program"))
      throw RenderError("mutate-no-template prompt requires the Input Program placeholder bound");

    std::string out = text;
    for (const auto& name : known_placeholders()) {
      std::string marker = "{" + name + "}";
      size_t pos;
      while ((pos = out.find(marker)) != std::string::npos) {
        auto it = bindings.find(name);
        if (it == bindings.end())
          throw RenderError("unbound placeholder {" + name + "}");
        out.replace(pos, marker.size(), it->second);
      }
    }
    for (const auto& name : known_placeholders())
      if (out.find("{" + name + "}") != std::string::npos)
        throw RenderError("residual placeholder {" + name + "} after rendering");
    return out;
  }
};

// Built-in template text, used when no template file is configured. The
// worked examples (shots) ship with the fixtures.
inline PromptTemplate default_template(PromptKind kind) {
  switch (kind) {
    case PromptKind::ExtractProgram:
      return {kind,
              "You are a software testing expert. I will give you historical refactoring engine "
              "bug reports in the following conversations. Extract the input programs together "
              "with their corresponding class names from each bug report. Return only the "
              "extracted programs, no prose. {Format}\nExamples:\n{Example}",
              {}};
    case PromptKind::ExtractInfo:
      return {kind,
              "You are a software testing expert. I will give you a historical refactoring "
              "engine bug report. Extract the following from it:\n"
              "1. Refactoring type;\n2. Input programs;\n3. Refactored programs;\n"
              "4. Refactored program elements information (element name, type, and positions);\n"
              "5. Refactoring procedures;\n6. Bug symptoms;\n7. Input program structure "
              "template.\nThe extracted information format should be {Format}\n"
              "The following is one example: {Example}",
              {}};
    case PromptKind::Mutate:
      return {kind,
              "Now, I will give the definition of the current refactoring, you need to "
              "understand it. You need to make sure the original refactoring could still be "
              "applied on the variant.\n"
              "1. {Refactoring Type}: {Definition}\n"
              "2. To expose more bugs in the refactoring engines, please generate edge case "
              "variant considering the {Characteristic} in current refactoring scenario. You "
              "need to generate the variant according to the Input Program Structure Template, "
              "it is {Template}.\n"
              "3. You should give me the variant, the program elements to be refactored, and "
              "the procedures to refactoring.\n"
              "4. The generated variant should not contain any syntax errors. The Java program "
              "you generated should conformance with the JDK {Version} standard.\n"
              "Please generate one edge case variant considering different edge usage scenarios "
              "of {Characteristic} based on the template. The variant format should be "
              "{Format}",
              {}};
    case PromptKind::MutateNoTemplate:
      return {kind,
              "Now, I will give the definition of the current refactoring, you need to "
              "understand it. You need to make sure the original refactoring could still be "
              "applied on the variant.\n"
              "1. {Refactoring Type}: {Definition}\n"
              "2. To expose more bugs in the refactoring engines, please generate edge case "
              "variant considering the {Characteristic} in current refactoring scenario. You "
              "need to generate the variant according to the Input Program, it is "
              "{Input Program}.\n"
              "3. You should give me the variant, the program elements to be refactored, and "
              "the procedures to refactoring.\n"
              "4. The generated variant should not contain any syntax errors. The Java program "
              "you generated should conformance with the JDK {Version} standard.\n"
              "Please generate one edge case variant considering different edge usage scenarios "
              "of {Characteristic} based on the Input Program. The variant format should be "
              "{Format}",
              {}};
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Transports and sessions
// ---------------------------------------------------------------------------

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

struct ModelConfig {
  std::string model = "gpt-4o-mini";
  std::optional<double> temperature;  // unset: provider default
  std::string api_base = "https://api.openai.com";
  std::string api_key_env = "RETEST_API_KEY";
};

class ReplayMissError : public std::runtime_error {
 public:
  ReplayMissError(const std::string& session, int turn, const std::string& detail)
      : std::runtime_error("replay miss in session '" + session + "' turn " +
                           std::to_string(turn) + ": " + detail) {}
};

struct CassetteTurn {
  std::string prompt_hash;  // content hash of the rendered prompt
  std::string prompt;
  std::string reply;
};

// One file per session, JSON, written atomically after every recorded turn.
class CassetteStore {
 public:
  explicit CassetteStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::vector<CassetteTurn> load(const std::string& session_id) const {
    auto path = file_for(session_id);
    if (!std::filesystem::exists(path))
      throw ReplayMissError(session_id, 0, "cassette file missing: " + path.string());
    auto doc = nlohmann::json::parse(read_file(path));
    std::vector<CassetteTurn> turns;
    for (const auto& t : doc.at("turns"))
      turns.push_back({t.at("hash"), t.value("prompt", ""), t.at("reply")});
    return turns;
  }

  void save(const std::string& session_id, const std::vector<CassetteTurn>& turns) const {
    nlohmann::json doc;
    doc["session"] = session_id;
    doc["turns"] = nlohmann::json::array();
    for (const auto& t : turns)
      doc["turns"].push_back({{"hash", t.prompt_hash}, {"prompt", t.prompt}, {"reply", t.reply}});
    write_file_atomic(file_for(session_id), doc.dump(2) + "\n");
  }

  bool exists(const std::string& session_id) const {
    return std::filesystem::exists(file_for(session_id));
  }

 private:
  std::filesystem::path file_for(const std::string& session_id) const {
    return dir_ / (session_id + ".json");
  }
  std::filesystem::path dir_;
};

// Chat-completions transport. Only constructed for live/record runs; replay
// never touches the network.
class HttpChatTransport : public Transport {
 public:
  explicit HttpChatTransport(ModelConfig cfg) : cfg_(std::move(cfg)) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (!key || !*key)
      throw EnvironmentError("API key environment variable " + cfg_.api_key_env + " is not set");
    api_key_ = key;
  }

  std::string complete(const std::string& prompt) override;

 private:
  ModelConfig cfg_;
  std::string api_key_;
};

enum class SessionMode { Live, Record, Replay };

// A strictly sequential conversation. One session per bug report during
// extraction; one per variant request during mutation.
class Session {
 public:
  Session(std::string id, SessionMode mode, Transport* transport, const CassetteStore* store)
      : id_(std::move(id)), mode_(mode), transport_(transport), store_(store) {
    if (mode_ == SessionMode::Replay) {
      if (!store_) throw UsageError("replay session requires a cassette store");
      recorded_ = store_->load(id_);
    }
    if (mode_ != SessionMode::Replay && !transport_)
      throw UsageError("live/record session requires a transport");
    if (mode_ == SessionMode::Record && !store_)
      throw UsageError("record session requires a cassette store");
  }

  const std::string& id() const { return id_; }
  SessionMode mode() const { return mode_; }
  const std::vector<std::pair<std::string, std::string>>& transcript() const {
    return transcript_;
  }

  std::string complete(const std::string& prompt) {
    std::string reply;
    if (mode_ == SessionMode::Replay) {
      if (turn_ >= static_cast<int>(recorded_.size()))
        throw ReplayMissError(id_, turn_, "no recorded turn");
      const auto& t = recorded_[turn_];
      if (t.prompt_hash != content_hash(prompt))
        throw ReplayMissError(id_, turn_,
                              "prompt hash mismatch (template or inputs changed since recording)");
      reply = t.reply;
    } else {
      reply = transport_->complete(prompt);
      if (mode_ == SessionMode::Record) {
        recorded_.push_back({content_hash(prompt), prompt, reply});
        store_->save(id_, recorded_);
      }
    }
    transcript_.emplace_back("user", prompt);
    transcript_.emplace_back("assistant", reply);
    ++turn_;
    return reply;
  }

 private:
  std::string id_;
  SessionMode mode_;
  Transport* transport_;
  const CassetteStore* store_;
  std::vector<CassetteTurn> recorded_;
  std::vector<std::pair<std::string, std::string>> transcript_;
  int turn_ = 0;
};

// ---------------------------------------------------------------------------
// Structured reply parsing
// ---------------------------------------------------------------------------

class ExtractionFormatError : public std::runtime_error {
 public:
  explicit ExtractionFormatError(const std::string& why, std::string raw)
      : std::runtime_error("unparseable extraction reply: " + why), raw_reply(std::move(raw)) {}
  std::string raw_reply;
};

class GenerationFormatError : public std::runtime_error {
 public:
  explicit GenerationFormatError(const std::string& why, std::string raw)
      : std::runtime_error("unparseable variant reply: " + why), raw_reply(std::move(raw)) {}
  std::string raw_reply;
};

class IncompleteSeedError : public std::runtime_error {
 public:
  explicit IncompleteSeedError(std::vector<std::string> missing)
      : std::runtime_error("extraction reply missing mandatory fields: " + join_(missing)),
        missing_fields(std::move(missing)) {}
  std::vector<std::string> missing_fields;

 private:
  static std::string join_(const std::vector<std::string>& v) { return join(v, ", "); }
};

namespace detail_reply {

// Scans `Class: <name>` headers each followed by a fenced code block.
inline std::vector<SourceUnit> parse_program_blocks(const std::string& reply) {
  std::vector<SourceUnit> units;
  auto lines = split(reply, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string t = trim(lines[i]);
    if (t.rfind("Class:", 0) != 0) continue;
    std::string name = trim(t.substr(6));
    // find the opening fence
    size_t j = i + 1;
    while (j < lines.size() && trim(lines[j]).rfind("```", 0) != 0) ++j;
    if (j >= lines.size()) continue;
    std::string code;
    for (size_t k = j + 1; k < lines.size(); ++k) {
      if (trim(lines[k]).rfind("```", 0) == 0) {
        units.push_back({name, code});
        i = k;
        break;
      }
      code += lines[k];
      code += '\n';
    }
  }
  return units;
}

// `Key: value` where the value may continue until the next known key or
// fenced block.
inline std::optional<std::string> find_field(const std::string& reply, const std::string& key,
                                             const std::vector<std::string>& all_keys) {
  auto lines = split(reply, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string t = trim(lines[i]);
    if (t.rfind(key + ":", 0) != 0) continue;
    std::string value = trim(t.substr(key.size() + 1));
    for (size_t j = i + 1; j < lines.size(); ++j) {
      std::string u = trim(lines[j]);
      bool is_key = u.rfind("```", 0) == 0 || u.rfind("Class:", 0) == 0;
      for (const auto& k : all_keys)
        if (u.rfind(k + ":", 0) == 0) is_key = true;
      if (is_key) break;
      if (!u.empty()) value += (value.empty() ? "" : "\n") + u;
    }
    return value;
  }
  return std::nullopt;
}

// Program blocks appearing after the line `<section>:` and before the next
// top-level key.
inline std::vector<SourceUnit> parse_section_programs(const std::string& reply,
                                                      const std::string& section,
                                                      const std::vector<std::string>& all_keys) {
  auto lines = split(reply, '\n');
  size_t start = lines.size();
  for (size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]) == section + ":") {
      start = i + 1;
      break;
    }
  }
  if (start >= lines.size()) return {};
  size_t end = lines.size();
  bool in_fence = false;
  for (size_t i = start; i < lines.size(); ++i) {
    std::string u = trim(lines[i]);
    if (u.rfind("```", 0) == 0) in_fence = !in_fence;
    if (in_fence) continue;
    for (const auto& k : all_keys) {
      if (u.rfind(k + ":", 0) == 0) {
        end = i;
        break;
      }
    }
    if (end != lines.size()) break;
  }
  std::string section_text = join(std::vector<std::string>(lines.begin() + start,
                                                           lines.begin() + end), "\n");
  return parse_program_blocks(section_text);
}

inline ParamMap parse_params(const std::string& text) {
  ParamMap out;
  for (const auto& kv : split(text, ';')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    out[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
  }
  return out;
}

}  // namespace detail_reply

// ---------------------------------------------------------------------------
// Seed records and variant candidates
// ---------------------------------------------------------------------------

struct SeedRecord {
  std::string id;
  RefactoringType type = RefactoringType::PullUp;
  std::vector<SourceUnit> input_units;
  std::vector<SourceUnit> refactored_units;
  std::string element_name;
  std::string element_type;  // "method", "expression", ...
  javalite::ElementLocator target;
  ParamMap params;  // engine parameters (destination class, new names, ranges)
  std::string procedure;
  std::string symptom;  // "compile-error", "behavior-change", ...
  std::string template_source;
};

inline void to_json(nlohmann::json& j, const SeedRecord& s) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : s.input_units) units.push_back({{"name", u.class_name}, {"source", u.source}});
  nlohmann::json runits = nlohmann::json::array();
  for (const auto& u : s.refactored_units)
    runits.push_back({{"name", u.class_name}, {"source", u.source}});
  j = {{"id", s.id},
       {"type", to_string(s.type)},
       {"input_units", units},
       {"refactored_units", runits},
       {"element_name", s.element_name},
       {"element_type", s.element_type},
       {"target", s.target.to_string()},
       {"params", s.params},
       {"procedure", s.procedure},
       {"symptom", s.symptom},
       {"template_source", s.template_source}};
}

inline void from_json(const nlohmann::json& j, SeedRecord& s) {
  s.id = j.at("id");
  auto t = parse_refactoring_type(j.at("type").get<std::string>());
  if (!t) throw std::runtime_error("unknown refactoring type in seed record");
  s.type = *t;
  s.input_units.clear();
  for (const auto& u : j.at("input_units")) s.input_units.push_back({u.at("name"), u.at("source")});
  s.refactored_units.clear();
  for (const auto& u : j.value("refactored_units", nlohmann::json::array()))
    s.refactored_units.push_back({u.at("name"), u.at("source")});
  s.element_name = j.value("element_name", "");
  s.element_type = j.value("element_type", "");
  auto loc = javalite::ElementLocator::parse(j.at("target").get<std::string>());
  if (!loc) throw std::runtime_error("bad target locator in seed record");
  s.target = *loc;
  s.params = j.value("params", ParamMap{});
  s.procedure = j.value("procedure", "");
  s.symptom = j.value("symptom", "");
  s.template_source = j.value("template_source", "");
}

struct VariantCandidate {
  std::vector<SourceUnit> units;
  javalite::ElementLocator target;
  ParamMap params;
  std::string procedure;
  std::string raw_reply;
};

// ---------------------------------------------------------------------------
// Extraction and mutation operations
// ---------------------------------------------------------------------------

struct Gateway {
  PromptTemplate extract_program_tpl = default_template(PromptKind::ExtractProgram);
  PromptTemplate extract_info_tpl = default_template(PromptKind::ExtractInfo);
  PromptTemplate mutate_tpl = default_template(PromptKind::Mutate);
  PromptTemplate mutate_no_template_tpl = default_template(PromptKind::MutateNoTemplate);

  std::vector<SourceUnit> extract_input_program(const BugReport& report, Session& session) const {
    std::string prompt = extract_program_tpl.render({{"Example", example_or_default(
                                                          extract_program_tpl)}});
    prompt += "\n\nBug report " + report.id + ":\n" + report.title + "\n" + report.body;
    std::string reply = session.complete(prompt);
    if (reply.find("No input program found.") != std::string::npos) return {};
    auto units = detail_reply::parse_program_blocks(reply);
    if (units.empty())
      throw ExtractionFormatError("no Class/code blocks and no explicit none-marker", reply);
    return units;
  }

  SeedRecord extract_refactoring_info(const BugReport& report, Session& session) const {
    std::string prompt =
        extract_info_tpl.render({{"Example", example_or_default(extract_info_tpl)}});
    prompt += "\n\nBug report " + report.id + ":\n" + report.title + "\n" + report.body;
    std::string reply = session.complete(prompt);
    return parse_seed_reply(reply, report.id);
  }

  VariantCandidate generate_variant(const SeedRecord& seed, const std::string& characteristic_id,
                                    const std::string& characteristic_desc, int jdk,
                                    bool use_template, Session& session) const {
    std::map<std::string, std::string> bind = {
        {"Refactoring Type", to_string(seed.type)},
        {"Definition", refactoring_definition(seed.type)},
        {"Characteristic", characteristic_id + " (" + characteristic_desc + ")"},
        {"Version", std::to_string(jdk)},
    };
    std::string prompt;
    if (use_template) {
      bind["Template"] = seed.template_source;
      prompt = mutate_tpl.render(bind);
    } else {
      std::string program;
      for (const auto& u : seed.input_units) {
        program += "Class: " + u.class_name + "\n```java\n" + u.source + "```\n";
      }
      bind["Input Program"] = program;
      prompt = mutate_no_template_tpl.render(bind);
    }
    std::string reply = session.complete(prompt);
    return parse_variant_reply(reply);
  }

  static SeedRecord parse_seed_reply(const std::string& reply, const std::string& report_id) {
    static const std::vector<std::string> keys = {
        "Refactoring type", "Input program",   "Refactored program",
        "Refactored element", "Procedure",     "Bug symptoms",
        "Structure template", "Parameters"};
    SeedRecord seed;
    seed.id = report_id;
    std::vector<std::string> missing;

    auto type_text = detail_reply::find_field(reply, "Refactoring type", keys);
    if (!type_text) missing.push_back("refactoring-type");
    else if (auto t = parse_refactoring_type(*type_text)) seed.type = *t;
    else missing.push_back("refactoring-type");

    seed.input_units = detail_reply::parse_section_programs(reply, "Input program", keys);
    if (seed.input_units.empty()) missing.push_back("input-program");
    seed.refactored_units = detail_reply::parse_section_programs(reply, "Refactored program", keys);
    if (seed.refactored_units.empty()) missing.push_back("refactored-program");

    auto element = detail_reply::find_field(reply, "Refactored element", keys);
    if (!element) {
      missing.push_back("element");
    } else {
      auto kv = detail_reply::parse_params(*element);
      seed.element_name = kv.count("name") ? kv["name"] : "";
      seed.element_type = kv.count("type") ? kv["type"] : "";
      if (kv.count("position")) {
        if (auto loc = javalite::ElementLocator::parse(kv["position"])) seed.target = *loc;
      }
      if (seed.element_name.empty() || seed.target.empty()) missing.push_back("element");
    }

    auto procedure = detail_reply::find_field(reply, "Procedure", keys);
    if (!procedure || procedure->empty()) missing.push_back("procedure");
    else seed.procedure = *procedure;

    auto symptom = detail_reply::find_field(reply, "Bug symptoms", keys);
    if (!symptom || symptom->empty()) missing.push_back("symptom");
    else seed.symptom = normalize_symptom(*symptom);

    auto tmpl = detail_reply::parse_section_programs(reply, "Structure template", keys);
    if (tmpl.empty()) missing.push_back("structure-template");
    else seed.template_source = tmpl[0].source;

    if (auto params = detail_reply::find_field(reply, "Parameters", keys))
      seed.params = detail_reply::parse_params(*params);

    if (!missing.empty()) throw IncompleteSeedError(missing);
    return seed;
  }

  static VariantCandidate parse_variant_reply(const std::string& reply) {
    static const std::vector<std::string> keys = {"Variant", "Target", "Procedure", "Parameters"};
    VariantCandidate v;
    v.raw_reply = reply;
    v.units = detail_reply::parse_program_blocks(reply);
    if (v.units.empty()) throw GenerationFormatError("reply contains no program", reply);
    auto target = detail_reply::find_field(reply, "Target", keys);
    if (!target) throw GenerationFormatError("reply contains no Target locator", reply);
    auto loc = javalite::ElementLocator::parse(*target);
    if (!loc) throw GenerationFormatError("bad Target locator: " + *target, reply);
    v.target = *loc;
    if (auto proc = detail_reply::find_field(reply, "Procedure", keys)) v.procedure = *proc;
    if (auto params = detail_reply::find_field(reply, "Parameters", keys))
      v.params = detail_reply::parse_params(*params);
    return v;
  }

  static std::string normalize_symptom(const std::string& s) {
    std::string t = to_lower(s);
    if (t.find("compile") != std::string::npos) return "compile-error";
    if (t.find("behavior") != std::string::npos || t.find("behaviour") != std::string::npos)
      return "behavior-change";
    if (t.find("fail") != std::string::npos) return "failed-refactoring";
    return trim(t);
  }

 private:
  static std::string example_or_default(const PromptTemplate& tpl) {
    if (tpl.shots.empty()) return "(worked examples elided)";
    std::string ex;
    for (size_t i = 0; i < tpl.shots.size(); ++i) {
      if (i) ex += "\n---\n";
      ex += tpl.shots[i];
    }
    return ex;
  }
};

inline std::string HttpChatTransport::complete(const std::string& prompt) {
  nlohmann::json body = {
      {"model", cfg_.model},
      {"messages", {{{"role", "user"}, {"content", prompt}}}},
  };
  if (cfg_.temperature) body["temperature"] = *cfg_.temperature;

  httplib::Client client(cfg_.api_base);
  client.set_read_timeout(120, 0);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
  if (!res)
    throw RetriableError("chat completion request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw RetriableError("chat completion HTTP " + std::to_string(res->status) + ": " + res->body);
  auto doc = nlohmann::json::parse(res->body);
  return doc.at("choices").at(0).at("message").at("content").get<std::string>();
}

}  // namespace retest::llm
