#pragma once

#include <json.hpp>
#include <map>
#include <set>

#include "retest/common.hpp"
#include "retest/compile_gate.hpp"
#include "retest/corpus.hpp"
#include "retest/engine.hpp"

namespace retest::oracles {

enum class ViolationKind { Uncompilable, WarningStatus, Differential };
enum class Verdict { New, SuspectedDuplicate, SuppressedConfig };

inline std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Uncompilable: return "uncompilable";
    case ViolationKind::WarningStatus: return "warning-status";
    case ViolationKind::Differential: return "differential";
  }
  return "uncompilable";
}

inline std::optional<ViolationKind> parse_violation_kind(const std::string& s) {
  if (s == "uncompilable") return ViolationKind::Uncompilable;
  if (s == "warning-status") return ViolationKind::WarningStatus;
  if (s == "differential") return ViolationKind::Differential;
  return std::nullopt;
}

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::New: return "new";
    case Verdict::SuspectedDuplicate: return "suspected-duplicate";
    case Verdict::SuppressedConfig: return "suppressed-config";
  }
  return "new";
}

inline std::optional<Verdict> parse_verdict(const std::string& s) {
  if (s == "new") return Verdict::New;
  if (s == "suspected-duplicate") return Verdict::SuspectedDuplicate;
  if (s == "suppressed-config") return Verdict::SuppressedConfig;
  return std::nullopt;
}

struct OracleViolation {
  ViolationKind kind = ViolationKind::Uncompilable;
  std::string variant_ref;
  RefactoringType type = RefactoringType::PullUp;
  std::string symptom;  // "compile-error", "warning-divergence", "output-divergence"
  std::map<std::string, engine::EngineResponse> responses;  // engine id → response
  std::string evidence;
  std::vector<std::string> dedup_matches;  // corpus report ids, best first
  Verdict verdict = Verdict::New;
};

// What the campaign knows about one engine's handling of one variant.
struct EngineOutcome {
  engine::EngineResponse response;
  std::optional<CompileResult> compile;  // present when the response produced units
};

using Outcomes = std::map<std::string, EngineOutcome>;

inline bool produced_output(const engine::EngineResponse& r) {
  return r.status == engine::Status::Ok || r.status == engine::Status::Warning;
}

// ---------------------------------------------------------------------------
// The three oracles
// ---------------------------------------------------------------------------

inline std::vector<OracleViolation> uncompilable_oracle(const std::string& variant_ref,
                                                        RefactoringType type,
                                                        const Outcomes& outcomes) {
  std::vector<OracleViolation> out;
  for (const auto& [id, o] : outcomes) {
    if (!produced_output(o.response)) continue;
    if (!o.compile || o.compile->accepted) continue;
    OracleViolation v;
    v.kind = ViolationKind::Uncompilable;
    v.variant_ref = variant_ref;
    v.type = type;
    v.symptom = "compile-error";
    v.responses[id] = o.response;
    std::string ev;
    for (const auto& d : o.compile->diagnostics)
      if (d.severity == "error")
        ev += d.file + ":" + std::to_string(d.line) + ": error: " + d.message + "\n";
    v.evidence = "engine " + id + " reported success but its output does not compile:\n" + ev;
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<OracleViolation> warning_status_oracle(const std::string& variant_ref,
                                                          RefactoringType type,
                                                          const Outcomes& outcomes) {
  if (outcomes.size() < 2) return {};
  // warning presence; refusal asymmetry (one engine refuses, another succeeds)
  // is reported here too, as a "failed refactoring" symptom
  std::set<bool> warn_bits, refuse_bits;
  for (const auto& [id, o] : outcomes) {
    if (o.response.status == engine::Status::Crashed) continue;
    refuse_bits.insert(o.response.status == engine::Status::Refused);
    if (produced_output(o.response))
      warn_bits.insert(o.response.status == engine::Status::Warning);
  }
  bool warn_diverges = warn_bits.size() > 1;
  bool refuse_diverges = refuse_bits.size() > 1;
  if (!warn_diverges && !refuse_diverges) return {};

  OracleViolation v;
  v.kind = ViolationKind::WarningStatus;
  v.variant_ref = variant_ref;
  v.type = type;
  v.symptom = refuse_diverges ? "failed-refactoring" : "warning-divergence";
  std::string ev = refuse_diverges ? "engines disagree on applicability:\n"
                                   : "engines disagree on warning status:\n";
  for (const auto& [id, o] : outcomes) {
    v.responses[id] = o.response;
    ev += "  " + id + ": " + engine::wire_status(o.response.status);
    for (const auto& w : o.response.warnings) ev += " [" + w + "]";
    if (o.response.status == engine::Status::Refused) ev += " (" + o.response.reason + ")";
    ev += "\n";
  }
  v.evidence = ev;
  return {std::move(v)};
}

// Config differences the harness knows how to discount.
struct NormalizerSet {
  bool final_parameter = false;  // make-static final-parameter default divergence
};

namespace detail {

inline std::string line_diff(const std::string& a_id, const std::string& a,
                             const std::string& b_id, const std::string& b) {
  auto la = split(a, '\n'), lb = split(b, '\n');
  std::string out;
  size_t n = std::max(la.size(), lb.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string ai = i < la.size() ? la[i] : "";
    const std::string bi = i < lb.size() ? lb[i] : "";
    if (ai == bi) continue;
    if (!ai.empty()) out += "  " + a_id + ": " + ai + "\n";
    if (!bi.empty()) out += "  " + b_id + ": " + bi + "\n";
  }
  return out;
}

}  // namespace detail

inline std::vector<OracleViolation> differential_oracle(const std::string& variant_ref,
                                                        RefactoringType type,
                                                        const Outcomes& outcomes,
                                                        const NormalizerSet& normalizers = {}) {
  // only engines that succeeded and whose output compiles participate
  std::vector<std::pair<std::string, const EngineOutcome*>> peers;
  for (const auto& [id, o] : outcomes)
    if (produced_output(o.response) && o.compile && o.compile->accepted)
      peers.emplace_back(id, &o);

  std::vector<OracleViolation> out;
  for (size_t i = 0; i < peers.size(); ++i) {
    for (size_t j = i + 1; j < peers.size(); ++j) {
      const auto& [ida, oa] = peers[i];
      const auto& [idb, ob] = peers[j];
      const auto& ua = oa->response.units;
      const auto& ub = ob->response.units;
      bool equal = ua.size() == ub.size();
      bool equal_modulo_config = equal;
      javalite::NormalizeOptions base, relaxed;
      relaxed.ignore_param_final = true;
      for (size_t k = 0; equal && k < ua.size(); ++k) {
        auto pa = javalite::parse_or_throw(ua[k].source);
        auto pb = javalite::parse_or_throw(ub[k].source);
        if (!javalite::ast_equal(pa, pb, javalite::EqualMode::Normalized, base)) equal = false;
        if (!javalite::ast_equal(pa, pb, javalite::EqualMode::Normalized, relaxed))
          equal_modulo_config = false;
      }
      if (equal) continue;

      OracleViolation v;
      v.kind = ViolationKind::Differential;
      v.variant_ref = variant_ref;
      v.type = type;
      v.symptom = "output-divergence";
      v.responses[ida] = oa->response;
      v.responses[idb] = ob->response;
      std::string ev = "normalized outputs differ between " + ida + " and " + idb + ":\n";
      for (size_t k = 0; k < std::max(ua.size(), ub.size()); ++k) {
        const std::string sa = k < ua.size() ? ua[k].source : "";
        const std::string sb = k < ub.size() ? ub[k].source : "";
        if (sa != sb) ev += detail::line_diff(ida, sa, idb, sb);
      }
      v.evidence = ev;
      if (normalizers.final_parameter && equal_modulo_config)
        v.verdict = Verdict::SuppressedConfig;
      out.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Duplicate search
// ---------------------------------------------------------------------------

struct DedupConfig {
  double threshold = 0.5;  // fraction of weighted query tokens matched
  int max_matches = 5;
};

namespace detail {

inline std::set<std::string> tokens(const std::string& text) {
  std::set<std::string> out;
  std::string cur;
  for (char c : to_lower(text)) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!cur.empty()) {
      out.insert(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

}  // namespace detail

// Keyword search over the corpus: refactoring-type terms count double, bug
// symptom terms once. Marks the violation suspected-duplicate when a report
// with the same symptom scores above the threshold.
inline std::vector<std::string> dedup_search(OracleViolation& violation,
                                             const std::vector<BugReport>& corpus,
                                             const DedupConfig& cfg = {}) {
  auto type_terms = detail::tokens(to_string(violation.type));
  auto symptom_terms = detail::tokens(violation.symptom);
  double denom = 2.0 * type_terms.size() + symptom_terms.size();
  if (denom == 0 || corpus.empty()) return {};

  std::vector<std::pair<double, const BugReport*>> scored;
  for (const auto& r : corpus) {
    auto body = detail::tokens(r.title + " " + r.body);
    double score = 0;
    for (const auto& t : type_terms)
      if (body.count(t)) score += 2;
    for (const auto& t : symptom_terms)
      if (body.count(t)) score += 1;
    score /= denom;
    if (score > 0) scored.emplace_back(score, &r);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<std::string> matches;
  bool duplicate = false;
  for (const auto& [score, r] : scored) {
    if (static_cast<int>(matches.size()) >= cfg.max_matches) break;
    matches.push_back(r->id);
    if (score >= cfg.threshold) duplicate = true;
  }
  violation.dedup_matches = matches;
  if (duplicate && violation.verdict == Verdict::New)
    violation.verdict = Verdict::SuspectedDuplicate;
  return matches;
}

// ---------------------------------------------------------------------------
// Violation records and tracker-ready reports
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const OracleViolation& v) {
  nlohmann::json resp = nlohmann::json::object();
  for (const auto& [id, r] : v.responses) {
    nlohmann::json units = nlohmann::json::array();
    for (const auto& u : r.units) units.push_back({{"name", u.class_name}, {"source", u.source}});
    resp[id] = {{"status", engine::wire_status(r.status)},
                {"warnings", r.warnings},
                {"units", units},
                {"reason", r.reason}};
  }
  j = {{"kind", to_string(v.kind)},
       {"variant", v.variant_ref},
       {"type", to_string(v.type)},
       {"symptom", v.symptom},
       {"responses", resp},
       {"evidence", v.evidence},
       {"dedup_matches", v.dedup_matches},
       {"verdict", to_string(v.verdict)}};
}

inline void from_json(const nlohmann::json& j, OracleViolation& v) {
  v.kind = *parse_violation_kind(j.at("kind"));
  v.variant_ref = j.at("variant");
  v.type = *parse_refactoring_type(j.at("type").get<std::string>());
  v.symptom = j.value("symptom", "");
  v.responses.clear();
  const nlohmann::json responses = j.value("responses", nlohmann::json::object());
  for (const auto& [id, r] : responses.items()) {
    engine::EngineResponse resp;
    resp.status = *engine::parse_status(r.at("status"));
    resp.warnings = r.value("warnings", std::vector<std::string>{});
    for (const auto& u : r.value("units", nlohmann::json::array()))
      resp.units.push_back({u.at("name"), u.at("source")});
    resp.reason = r.value("reason", "");
    v.responses[id] = resp;
  }
  v.evidence = j.value("evidence", "");
  v.dedup_matches = j.value("dedup_matches", std::vector<std::string>{});
  v.verdict = *parse_verdict(j.at("verdict"));
}

// A human-readable, machine-parseable report document. render/parse form a
// round trip so archived reports stay loadable.
struct ReportDoc {
  std::string title;
  std::string verdict;
  std::string kind;
  std::string variant_ref;
  std::string evidence;
  std::vector<SourceUnit> programs;
  std::vector<std::string> engine_lines;  // "id: status ..." per engine
  bool for_submission = true;
};

inline ReportDoc make_report(const OracleViolation& v, const std::vector<SourceUnit>& input) {
  ReportDoc doc;
  doc.title = to_string(v.type) + " refactoring: " + v.symptom;
  doc.verdict = to_string(v.verdict);
  doc.kind = to_string(v.kind);
  doc.variant_ref = v.variant_ref;
  doc.evidence = v.evidence;
  doc.programs = input;
  for (const auto& [id, r] : v.responses)
    doc.engine_lines.push_back(id + ": " + engine::wire_status(r.status));
  doc.for_submission = v.verdict == Verdict::New;
  return doc;
}

inline std::string render_report(const ReportDoc& doc) {
  std::string out;
  out += "Title: " + doc.title + "\n";
  out += "Verdict: " + doc.verdict + "\n";
  out += "Kind: " + doc.kind + "\n";
  out += "Variant: " + doc.variant_ref + "\n";
  out += "Submission: " + std::string(doc.for_submission ? "yes" : "no (verdict gate)") + "\n";
  out += "Engines:\n";
  for (const auto& l : doc.engine_lines) out += "  " + l + "\n";
  out += "Input program:\n";
  for (const auto& u : doc.programs) {
    out += "Class: " + u.class_name + "\n```java\n" + u.source;
    if (!u.source.empty() && u.source.back() != '\n') out += "\n";
    out += "```\n";
  }
  out += "Steps:\n";
  out += "  1. Load the input program.\n";
  out += "  2. Apply the refactoring named in the title to the listed variant target.\n";
  out += "  3. Compare the engine outcomes below.\n";
  out += "Evidence:\n";
  for (const auto& line : split(doc.evidence, '\n'))
    if (!line.empty()) out += "  | " + line + "\n";
  return out;
}

inline ReportDoc parse_report(const std::string& text) {
  ReportDoc doc;
  doc.for_submission = false;
  auto lines = split(text, '\n');
  std::string section;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    std::string t = trim(raw);
    auto starts = [&](const char* k) { return t.rfind(k, 0) == 0; };
    if (starts("Title: ")) doc.title = t.substr(7);
    else if (starts("Verdict: ")) doc.verdict = t.substr(9);
    else if (starts("Kind: ")) doc.kind = t.substr(6);
    else if (starts("Variant: ")) doc.variant_ref = t.substr(9);
    else if (starts("Submission: ")) doc.for_submission = t.substr(12).rfind("yes", 0) == 0;
    else if (t == "Engines:") section = "engines";
    else if (t == "Input program:") section = "programs";
    else if (t == "Steps:") section = "steps";
    else if (t == "Evidence:") section = "evidence";
    else if (section == "engines" && !t.empty()) doc.engine_lines.push_back(t);
    else if (section == "programs" && starts("Class: ")) {
      std::string name = t.substr(7);
      std::string code;
      size_t j = i + 1;
      if (j < lines.size() && trim(lines[j]).rfind("```", 0) == 0) {
        for (++j; j < lines.size() && trim(lines[j]).rfind("```", 0) != 0; ++j)
          code += lines[j] + "\n";
      }
      doc.programs.push_back({name, code});
      i = j;
    } else if (section == "evidence" && raw.rfind("  | ", 0) == 0) {
      doc.evidence += raw.substr(4) + "\n";
    }
  }
  return doc;
}

// One JSON record plus one readable report per violation, named by a stable
// hash so reruns overwrite rather than accumulate.
inline std::string archive_violation(const std::filesystem::path& dir, const OracleViolation& v,
                                     const std::vector<SourceUnit>& input) {
  nlohmann::json j = v;
  std::string stem = "violation-" + content_hash(j.dump());
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / (stem + ".json"), j.dump(2) + "\n");
  write_file_atomic(dir / (stem + ".report.txt"), render_report(make_report(v, input)));
  return stem;
}

}  // namespace retest::oracles
