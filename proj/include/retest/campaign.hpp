#pragma once

#include <chrono>
#include <iomanip>
#include <map>
#include <sstream>

#include "retest/adapter.hpp"
#include "retest/common.hpp"
#include "retest/compile_gate.hpp"
#include "retest/corpus.hpp"
#include "retest/engine.hpp"
#include "retest/llm.hpp"
#include "retest/oracles.hpp"

namespace retest::campaign {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Characteristic {
  std::string id;
  std::string description;
};

// The three most error-prone language features drive mutation.
inline std::vector<Characteristic> default_characteristics() {
  return {
      {"lambda", "lambda expressions capturing enclosing state"},
      {"generics", "generic types with bounded and wildcard type arguments"},
      {"anonymous-class", "anonymous class bodies overriding supertype methods"},
  };
}

struct EngineSpec {
  std::string id;
  std::string profile = "ec-like";
  engine::Fault fault = engine::Fault::None;
  std::vector<std::string> adapter_command;  // empty: in-process reference engine

  engine::EngineConfig config() const {
    auto cfg = engine::EngineConfig::for_profile(profile);
    cfg.fault = fault;
    return cfg;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Keyed text format: one `key value...` per line, `#` comments.
struct CampaignConfig {
  std::filesystem::path seeds_dir;
  std::vector<Characteristic> characteristics = default_characteristics();
  int variants_per_characteristic = 10;
  int jdk = 22;
  bool use_template = true;
  std::filesystem::path cassette_dir;
  std::vector<EngineSpec> engines;
  std::filesystem::path output_dir = "campaign-out";
  double dedup_threshold = 0.5;
  bool normalize_final_params = true;
  std::filesystem::path corpus_path;  // optional
  std::string javac;                  // optional explicit compiler path

  static CampaignConfig load(const std::filesystem::path& file) {
    CampaignConfig cfg;
    cfg.characteristics.clear();
    auto base = file.parent_path();
    auto resolve = [&](const std::string& p) -> std::filesystem::path {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    int lineno = 0;
    for (auto& raw : split(read_file(file), '\n')) {
      ++lineno;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      auto sp = line.find(' ');
      std::string key = line.substr(0, sp);
      std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
      if (key == "seeds") cfg.seeds_dir = resolve(rest);
      else if (key == "characteristic") {
        auto sp2 = rest.find(' ');
        Characteristic c;
        c.id = sp2 == std::string::npos ? rest : rest.substr(0, sp2);
        c.description = sp2 == std::string::npos ? "" : trim(rest.substr(sp2 + 1));
        if (c.description.empty())
          for (const auto& d : default_characteristics())
            if (d.id == c.id) c.description = d.description;
        cfg.characteristics.push_back(c);
      } else if (key == "variants") cfg.variants_per_characteristic = std::stoi(rest);
      else if (key == "jdk") cfg.jdk = std::stoi(rest);
      else if (key == "use_template") cfg.use_template = rest == "true" || rest == "yes";
      else if (key == "cassettes") cfg.cassette_dir = resolve(rest);
      else if (key == "output") cfg.output_dir = resolve(rest);
      else if (key == "dedup_threshold") cfg.dedup_threshold = std::stod(rest);
      else if (key == "normalize_final_params") cfg.normalize_final_params = rest == "true";
      else if (key == "corpus") cfg.corpus_path = resolve(rest);
      else if (key == "javac") cfg.javac = rest;
      else if (key == "engine") cfg.engines.push_back(parse_engine(rest, lineno));
      else
        throw ConfigError("unknown config key '" + key + "' at line " + std::to_string(lineno));
    }
    if (cfg.characteristics.empty()) cfg.characteristics = default_characteristics();
    if (cfg.engines.empty())
      throw ConfigError("config declares no engines");
    if (cfg.seeds_dir.empty()) throw ConfigError("config is missing the seeds directory");
    return cfg;
  }

 private:
  static EngineSpec parse_engine(const std::string& rest, int lineno) {
    EngineSpec spec;
    auto words = split(rest, ' ');
    if (words.empty() || words[0].empty())
      throw ConfigError("engine line without an id at line " + std::to_string(lineno));
    spec.id = words[0];
    for (size_t i = 1; i < words.size(); ++i) {
      const std::string& w = words[i];
      if (w.empty()) continue;
      if (w.rfind("profile=", 0) == 0) {
        spec.profile = w.substr(8);
      } else if (w.rfind("fault=", 0) == 0) {
        auto f = engine::parse_fault(w.substr(6));
        if (!f) throw ConfigError("unknown fault at line " + std::to_string(lineno));
        spec.fault = *f;
      } else if (w.rfind("adapter=", 0) == 0) {
        // the remainder of the line is the adapter command
        spec.adapter_command.push_back(w.substr(8));
        for (size_t j = i + 1; j < words.size(); ++j)
          if (!words[j].empty()) spec.adapter_command.push_back(words[j]);
        break;
      } else {
        throw ConfigError("unknown engine option '" + w + "' at line " + std::to_string(lineno));
      }
    }
    return spec;
  }
};

// ---------------------------------------------------------------------------
// Variants and results
// ---------------------------------------------------------------------------

enum class GateStatus { Accepted, Uncompilable, NotRpt, GenerationFailed };

inline std::string to_string(GateStatus g) {
  switch (g) {
    case GateStatus::Accepted: return "accepted";
    case GateStatus::Uncompilable: return "uncompilable";
    case GateStatus::NotRpt: return "not-rpt";
    case GateStatus::GenerationFailed: return "generation-failed";
  }
  return "generation-failed";
}

struct Variant {
  std::string id;
  std::string seed_id;
  std::string characteristic;
  RefactoringType type = RefactoringType::PullUp;
  std::vector<SourceUnit> units;
  javalite::ElementLocator target;
  ParamMap params;
  GateStatus gate = GateStatus::GenerationFailed;
  std::string gate_reason;
};

struct RowStats {
  int tgv = 0, cv = 0, rpv = 0;
  double et = 0, mt = 0;  // zero under replay: wall-clock breaks determinism
  int uc = 0, ws = 0, diff = 0;
  std::map<std::string, int> bugs;  // engine id → verdict=new violations
};

struct CampaignResult {
  std::vector<Variant> variants;
  std::vector<oracles::OracleViolation> violations;
  // ordered rows: (refactoring display name, template flag)
  std::vector<std::pair<std::pair<std::string, bool>, RowStats>> rows;
  std::vector<std::string> engine_ids;
  bool interrupted = false;

  RowStats& row(const std::string& name, bool tmpl) {
    for (auto& [k, v] : rows)
      if (k.first == name && k.second == tmpl) return v;
    rows.push_back({{name, tmpl}, RowStats{}});
    return rows.back().second;
  }

  int new_violation_count() const {
    int n = 0;
    for (const auto& v : violations)
      if (v.verdict == oracles::Verdict::New) ++n;
    return n;
  }
};

// ---------------------------------------------------------------------------
// RPT validation (Definition 1 operationalized)
// ---------------------------------------------------------------------------

struct RptResult {
  bool ok = false;
  std::string reason;  // empty when ok
};

inline RptResult validate_rpt(const Variant& variant, const llm::SeedRecord& seed) {
  engine::RefactoringRequest req;
  req.type = seed.type;
  req.units = variant.units;
  req.target = variant.target;
  req.params = seed.params;
  for (const auto& [k, v] : variant.params) req.params[k] = v;  // variant overrides
  engine::Engine pristine(engine::EngineConfig::for_profile("ec-like"));
  auto reason = pristine.check_preconditions(req);
  if (!reason) return {true, ""};
  if (reason->rfind("target method not found", 0) == 0)
    return {false, "not-rpt:target-missing"};
  return {false, "not-rpt:" + *reason};
}

// ---------------------------------------------------------------------------
// The campaign runner
// ---------------------------------------------------------------------------

inline std::vector<llm::SeedRecord> load_seeds(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir))
    throw EnvironmentError("seed directory not found: " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<llm::SeedRecord> seeds;
  for (const auto& f : files)
    seeds.push_back(nlohmann::json::parse(read_file(f)).get<llm::SeedRecord>());
  return seeds;
}

class Runner {
 public:
  Runner(CampaignConfig cfg, llm::SessionMode mode, llm::Transport* transport = nullptr)
      : cfg_(std::move(cfg)),
        mode_(mode),
        transport_(transport),
        cassettes_(cfg_.cassette_dir),
        gate_(make_gate_options()) {}

  CampaignResult run() {
    CampaignResult result;
    auto seeds = load_seeds(cfg_.seeds_dir);
    for (const auto& e : cfg_.engines) result.engine_ids.push_back(e.id);

    std::vector<BugReport> corpus;
    if (!cfg_.corpus_path.empty() && std::filesystem::exists(cfg_.corpus_path))
      corpus = load_corpus(cfg_.corpus_path);

    bool live = mode_ != llm::SessionMode::Replay;
    for (const auto& seed : seeds) {
      auto& row = result.row(to_string(seed.type), cfg_.use_template);
      auto started = std::chrono::steady_clock::now();
      for (const auto& ch : cfg_.characteristics) {
        for (int k = 0; k < cfg_.variants_per_characteristic; ++k) {
          Variant v = generate_one(seed, ch, k);
          EventLog::instance().emit("campaign.variant",
                                    {{"id", v.id}, {"gate", to_string(v.gate)}});
          ++row.tgv;
          if (v.gate == GateStatus::Accepted || v.gate == GateStatus::NotRpt) ++row.cv;
          if (v.gate == GateStatus::Accepted) {
            ++row.rpv;
            evaluate(v, seed, corpus, result, row);
          }
          result.variants.push_back(std::move(v));
        }
      }
      if (live) {
        row.mt += std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                      .count();
      }
    }
    for (auto& c : adapters_) c.second->close();
    return result;
  }

 private:
  GateOptions make_gate_options() const {
    GateOptions opt;
    if (!cfg_.javac.empty()) opt.javac_path = cfg_.javac;
    return opt;
  }

  // One candidate = one single-turn session, so every candidate replays
  // independently of its siblings.
  Variant generate_one(const llm::SeedRecord& seed, const Characteristic& ch, int k) {
    Variant v;
    v.seed_id = seed.id;
    v.characteristic = ch.id;
    v.type = seed.type;
    v.id = seed.id + "-" + ch.id + "-" + std::to_string(k) + (cfg_.use_template ? "" : "-nt");
    try {
      llm::Session session("mutate-" + v.id, mode_, transport_, &cassettes_);
      auto cand = gateway_.generate_variant(seed, ch.id, ch.description, cfg_.jdk,
                                            cfg_.use_template, session);
      v.units = cand.units;
      v.target = cand.target;
      v.params = cand.params;
    } catch (const llm::ReplayMissError&) {
      throw;  // configuration problem, not a candidate problem
    } catch (const std::exception& e) {
      v.gate = GateStatus::GenerationFailed;
      v.gate_reason = e.what();
      return v;
    }
    try {
      auto cr = gate_.compile(v.units, cfg_.jdk);
      if (!cr.accepted) {
        v.gate = GateStatus::Uncompilable;
        v.gate_reason = cr.diagnostics.empty() ? "rejected by compiler"
                                               : cr.diagnostics[0].message;
        return v;
      }
    } catch (const std::exception& e) {
      v.gate = GateStatus::GenerationFailed;
      v.gate_reason = std::string("compile gate failed: ") + e.what();
      return v;
    }
    auto rpt = validate_rpt(v, seed);
    if (!rpt.ok) {
      v.gate = GateStatus::NotRpt;
      v.gate_reason = rpt.reason;
      return v;
    }
    v.gate = GateStatus::Accepted;
    return v;
  }

  void evaluate(const Variant& v, const llm::SeedRecord& seed, std::vector<BugReport>& corpus,
                CampaignResult& result, RowStats& row) {
    engine::RefactoringRequest req;
    req.type = seed.type;
    req.units = v.units;
    req.target = v.target;
    req.params = seed.params;
    for (const auto& [k, val] : v.params) req.params[k] = val;

    oracles::Outcomes outcomes;
    for (const auto& spec : cfg_.engines) {
      oracles::EngineOutcome o;
      o.response = invoke(spec, req);
      if (oracles::produced_output(o.response)) {
        try {
          o.compile = gate_.compile(o.response.units, cfg_.jdk);
        } catch (const std::exception& e) {
          o.response.status = engine::Status::Crashed;
          o.response.reason = std::string("output compile check failed: ") + e.what();
        }
      }
      outcomes[spec.id] = std::move(o);
    }

    oracles::NormalizerSet normalizers;
    normalizers.final_parameter = cfg_.normalize_final_params;
    std::vector<oracles::OracleViolation> found;
    for (auto& viol : oracles::uncompilable_oracle(v.id, seed.type, outcomes)) {
      ++row.uc;
      found.push_back(std::move(viol));
    }
    for (auto& viol : oracles::warning_status_oracle(v.id, seed.type, outcomes)) {
      ++row.ws;
      found.push_back(std::move(viol));
    }
    for (auto& viol : oracles::differential_oracle(v.id, seed.type, outcomes, normalizers)) {
      ++row.diff;
      found.push_back(std::move(viol));
    }

    for (auto& viol : found) {
      if (!corpus.empty())
        oracles::dedup_search(viol, corpus, {cfg_.dedup_threshold, 5});
      if (viol.verdict == oracles::Verdict::New)
        for (const auto& [eid, r] : viol.responses) ++row.bugs[eid];
      if (!cfg_.output_dir.empty())
        oracles::archive_violation(cfg_.output_dir / "violations", viol, v.units);
      EventLog::instance().emit("campaign.violation",
                                {{"variant", viol.variant_ref},
                                 {"kind", oracles::to_string(viol.kind)},
                                 {"verdict", oracles::to_string(viol.verdict)}});
      result.violations.push_back(std::move(viol));
    }
  }

  engine::EngineResponse invoke(const EngineSpec& spec, const engine::RefactoringRequest& req) {
    try {
      if (spec.adapter_command.empty()) return engine::Engine(spec.config()).apply(req);
      auto it = adapters_.find(spec.id);
      if (it == adapters_.end())
        it = adapters_
                 .emplace(spec.id, std::make_unique<adapter::AdapterClient>(spec.adapter_command))
                 .first;
      return it->second->apply(req, spec.config());
    } catch (const std::exception& e) {
      engine::EngineResponse resp;
      resp.status = engine::Status::Crashed;
      resp.reason = e.what();
      return resp;
    }
  }

  CampaignConfig cfg_;
  llm::SessionMode mode_;
  llm::Transport* transport_;
  llm::CassetteStore cassettes_;
  CompileGate gate_;
  llm::Gateway gateway_;
  std::map<std::string, std::unique_ptr<adapter::AdapterClient>> adapters_;
};

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

inline std::string summarize(const CampaignResult& result) {
  std::vector<std::string> headers = {"Refactoring", "Template", "ET (s)", "TGV",
                                      "MT (s)",      "CV",       "RPV",    "UC",
                                      "WS",          "Diff."};
  for (const auto& id : result.engine_ids) headers.push_back("Bugs(" + id + ")");

  auto fmt_d = [](double d) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << d;
    return o.str();
  };
  std::vector<std::vector<std::string>> body;
  RowStats total;
  for (const auto& [key, r] : result.rows) {
    std::vector<std::string> row = {key.first,
                                    key.second ? "Y" : "N",
                                    fmt_d(r.et),
                                    std::to_string(r.tgv),
                                    fmt_d(r.mt),
                                    std::to_string(r.cv),
                                    std::to_string(r.rpv),
                                    std::to_string(r.uc),
                                    std::to_string(r.ws),
                                    std::to_string(r.diff)};
    for (const auto& id : result.engine_ids) {
      auto it = r.bugs.find(id);
      row.push_back(std::to_string(it == r.bugs.end() ? 0 : it->second));
    }
    body.push_back(std::move(row));
    total.tgv += r.tgv;
    total.cv += r.cv;
    total.rpv += r.rpv;
    total.et += r.et;
    total.mt += r.mt;
    total.uc += r.uc;
    total.ws += r.ws;
    total.diff += r.diff;
    for (const auto& [id, n] : r.bugs) total.bugs[id] += n;
  }
  size_t nrows = result.rows.size();
  auto avg = [&](double v) { return nrows ? v / static_cast<double>(nrows) : 0.0; };
  std::vector<std::string> avg_row = {"Average",
                                      "-",
                                      fmt_d(avg(total.et)),
                                      fmt_d(avg(total.tgv)),
                                      fmt_d(avg(total.mt)),
                                      fmt_d(avg(total.cv)),
                                      fmt_d(avg(total.rpv)),
                                      "-",
                                      "-",
                                      "-"};
  std::vector<std::string> total_row = {"Total",
                                        "-",
                                        fmt_d(total.et),
                                        std::to_string(total.tgv),
                                        fmt_d(total.mt),
                                        std::to_string(total.cv),
                                        std::to_string(total.rpv),
                                        std::to_string(total.uc),
                                        std::to_string(total.ws),
                                        std::to_string(total.diff)};
  for (const auto& id : result.engine_ids) {
    avg_row.push_back("-");
    auto it = total.bugs.find(id);
    total_row.push_back(std::to_string(it == total.bugs.end() ? 0 : it->second));
  }
  body.push_back(avg_row);
  body.push_back(total_row);

  std::vector<size_t> widths(headers.size());
  for (size_t i = 0; i < headers.size(); ++i) widths[i] = headers[i].size();
  for (const auto& row : body)
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

  auto render_row = [&](const std::vector<std::string>& row) {
    std::string line = "|";
    for (size_t i = 0; i < row.size(); ++i) {
      line += " " + row[i] + std::string(widths[i] - row[i].size(), ' ') + " |";
    }
    return line + "\n";
  };
  std::string sep = "|";
  for (size_t w : widths) sep += std::string(w + 2, '-') + "|";
  sep += "\n";

  std::string out = render_row(headers) + sep;
  for (size_t i = 0; i < body.size(); ++i) {
    if (i + 2 == body.size()) out += sep;  // before Average/Total
    out += render_row(body[i]);
  }
  if (result.interrupted) out += "(interrupted: partial results)\n";
  return out;
}

inline nlohmann::json summary_record(const CampaignResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, r] : result.rows) {
    rows.push_back({{"refactoring", key.first},
                    {"template", key.second},
                    {"et_s", r.et},
                    {"tgv", r.tgv},
                    {"mt_s", r.mt},
                    {"cv", r.cv},
                    {"rpv", r.rpv},
                    {"uc", r.uc},
                    {"ws", r.ws},
                    {"diff", r.diff},
                    {"bugs", r.bugs}});
  }
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& v : result.variants)
    variants.push_back({{"id", v.id},
                        {"seed", v.seed_id},
                        {"characteristic", v.characteristic},
                        {"gate", to_string(v.gate)},
                        {"reason", v.gate_reason}});
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : result.violations) violations.push_back(nlohmann::json(v));
  return {{"rows", rows},
          {"variants", variants},
          {"violations", violations},
          {"interrupted", result.interrupted}};
}

inline void write_summary(const CampaignResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "summary.txt", summarize(result));
  write_file_atomic(dir / "summary.json", summary_record(result).dump(2) + "\n");
}

}  // namespace retest::campaign
