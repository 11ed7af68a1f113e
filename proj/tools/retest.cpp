// retest: mine bug reports, extract seeds, mutate, gate, run campaigns,
// apply oracles, and render reports. One verb per pipeline stage.

#include <CLI11.hpp>
#include <iostream>

#include "retest/retest.hpp"

namespace {

using namespace retest;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

llm::SessionMode pick_mode(bool replay, bool record, bool live) {
  int chosen = int(replay) + int(record) + int(live);
  if (chosen > 1) throw UsageError("--replay, --record and --live are mutually exclusive");
  if (record) return llm::SessionMode::Record;
  if (live) return llm::SessionMode::Live;
  return llm::SessionMode::Replay;  // offline by default
}

std::unique_ptr<llm::Transport> make_transport(llm::SessionMode mode) {
  if (mode == llm::SessionMode::Replay) return nullptr;  // never touches the network
  llm::ModelConfig cfg;
  cfg.model = env_or("RETEST_MODEL", cfg.model);
  cfg.api_base = env_or("RETEST_API_BASE", cfg.api_base);
  return std::make_unique<llm::HttpChatTransport>(cfg);
}

// ---- mine ----

int cmd_mine(const std::string& pages_dir, std::vector<std::string> keywords,
             std::int64_t cutoff, int cap, const std::string& out) {
  FixtureTracker tracker(pages_dir);
  if (keywords.empty()) keywords = {"refactoring", "refactor"};
  auto reports =
      fetch_reports(tracker, keywords, cutoff, cap > 0 ? static_cast<size_t>(cap) : SIZE_MAX);
  reports = filter_fixed(reports);
  persist_corpus(out, reports);
  EventLog::instance().emit("mine.done",
                            {{"reports", std::to_string(reports.size())}, {"out", out}});
  std::cout << "mined " << reports.size() << " fixed reports -> " << out << "\n";
  return kExitOk;
}

// ---- extract ----

int cmd_extract(const std::string& corpus_path, const std::string& cassette_dir,
                const std::string& out_dir, llm::SessionMode mode, llm::Transport* transport) {
  auto reports = load_corpus(corpus_path);
  llm::CassetteStore store(cassette_dir);
  llm::Gateway gateway;
  std::filesystem::create_directories(out_dir);
  CompileGate gate{GateOptions{env_or("RETEST_JAVAC", "")}};

  int seeds = 0, skipped = 0;
  for (const auto& report : reports) {
    try {
      llm::Session programs_session("extract-program-" + report.id, mode, transport, &store);
      auto units = gateway.extract_input_program(report, programs_session);
      if (units.empty()) {
        EventLog::instance().emit("extract.no_program", {{"report", report.id}});
        ++skipped;
        continue;
      }
      auto cr = gate.compile(units, 22);
      if (!cr.accepted) {
        EventLog::instance().emit("extract.uncompilable", {{"report", report.id}});
        ++skipped;
        continue;
      }
      llm::Session info_session("extract-info-" + report.id, mode, transport, &store);
      auto seed = gateway.extract_refactoring_info(report, info_session);
      nlohmann::json j = seed;
      write_file_atomic(std::filesystem::path(out_dir) / (report.id + ".json"),
                        j.dump(2) + "\n");
      ++seeds;
      EventLog::instance().emit("extract.seed", {{"report", report.id}});
    } catch (const llm::ReplayMissError&) {
      throw;
    } catch (const std::exception& e) {
      EventLog::instance().emit("extract.skip",
                                {{"report", report.id}, {"reason", e.what()}});
      ++skipped;
    }
  }
  std::cout << "extracted " << seeds << " seeds (" << skipped << " skipped) -> " << out_dir
            << "\n";
  return kExitOk;
}

// ---- mutate ----

int cmd_mutate(const std::string& seed_path, const std::string& characteristic, int n,
               const std::string& cassette_dir, const std::string& out_dir, bool no_template,
               int jdk, llm::SessionMode mode, llm::Transport* transport) {
  auto seed = nlohmann::json::parse(read_file(seed_path)).get<llm::SeedRecord>();
  llm::CassetteStore store(cassette_dir);
  llm::Gateway gateway;
  std::filesystem::create_directories(out_dir);
  std::string desc = characteristic;
  for (const auto& c : campaign::default_characteristics())
    if (c.id == characteristic) desc = c.description;

  for (int k = 0; k < n; ++k) {
    std::string id =
        seed.id + "-" + characteristic + "-" + std::to_string(k) + (no_template ? "-nt" : "");
    llm::Session session("mutate-" + id, mode, transport, &store);
    try {
      auto cand = gateway.generate_variant(seed, characteristic, desc, jdk, !no_template, session);
      nlohmann::json j;
      j["id"] = id;
      j["target"] = cand.target.to_string();
      j["params"] = cand.params;
      j["units"] = nlohmann::json::array();
      for (const auto& u : cand.units)
        j["units"].push_back({{"name", u.class_name}, {"source", u.source}});
      write_file_atomic(std::filesystem::path(out_dir) / (id + ".json"), j.dump(2) + "\n");
      EventLog::instance().emit("mutate.variant", {{"id", id}});
    } catch (const llm::ReplayMissError&) {
      throw;
    } catch (const std::exception& e) {
      EventLog::instance().emit("mutate.failed", {{"id", id}, {"reason", e.what()}});
    }
  }
  std::cout << "wrote variants -> " << out_dir << "\n";
  return kExitOk;
}

// ---- gate ----

int cmd_gate(const std::vector<std::string>& files, int jdk, const std::string& javac) {
  std::vector<SourceUnit> units;
  for (const auto& f : files) {
    std::filesystem::path p(f);
    units.push_back({p.stem().string(), read_file(p)});
  }
  CompileGate gate{GateOptions{javac.empty() ? env_or("RETEST_JAVAC", "") : javac}};
  auto cr = gate.compile(units, jdk);
  for (const auto& d : cr.diagnostics)
    std::cout << d.file << ":" << d.line << ": " << d.severity << ": " << d.message << "\n";
  std::cout << (cr.accepted ? "accepted" : "rejected") << " (" << cr.compiler_version << ")\n";
  return cr.accepted ? kExitOk : kExitViolations;
}

// ---- run ----

int cmd_run(const std::string& config_path, const std::string& replay_dir,
            llm::SessionMode mode, llm::Transport* transport) {
  auto cfg = campaign::CampaignConfig::load(config_path);
  if (!replay_dir.empty()) cfg.cassette_dir = replay_dir;
  if (const char* j = std::getenv("RETEST_JAVAC"); j && *j && cfg.javac.empty()) cfg.javac = j;
  campaign::Runner runner(cfg, mode, transport);
  auto result = runner.run();
  campaign::write_summary(result, cfg.output_dir);
  std::cout << campaign::summarize(result);
  int new_violations = result.new_violation_count();
  std::cout << "new violations: " << new_violations << "\n";
  return new_violations > 0 ? kExitViolations : kExitOk;
}

// ---- oracle ----

int cmd_oracle(const std::string& results_dir, const std::string& corpus_path) {
  std::vector<BugReport> corpus;
  if (!corpus_path.empty()) corpus = load_corpus(corpus_path);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(results_dir))
    if (e.path().extension() == ".json" &&
        e.path().filename().string().rfind("violation-", 0) == 0)
      files.push_back(e.path());
  std::sort(files.begin(), files.end());

  int fresh = 0;
  for (const auto& f : files) {
    auto v = nlohmann::json::parse(read_file(f)).get<oracles::OracleViolation>();
    if (!corpus.empty()) oracles::dedup_search(v, corpus);
    std::cout << f.filename().string() << ": " << oracles::to_string(v.kind) << " verdict="
              << oracles::to_string(v.verdict) << "\n";
    if (v.verdict == oracles::Verdict::New) ++fresh;
  }
  std::cout << "new violations: " << fresh << "\n";
  return fresh > 0 ? kExitViolations : kExitOk;
}

// ---- report ----

int cmd_report(const std::string& violation_path, const std::string& out) {
  auto v = nlohmann::json::parse(read_file(violation_path)).get<oracles::OracleViolation>();
  // use the first engine response's units as the displayed program
  std::vector<SourceUnit> units;
  for (const auto& [id, r] : v.responses)
    if (!r.units.empty()) {
      units = r.units;
      break;
    }
  std::string doc = oracles::render_report(oracles::make_report(v, units));
  if (out.empty()) std::cout << doc;
  else write_file_atomic(out, doc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"testing harness for source-to-source refactoring engines"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "emit key=value progress events on stderr");

  // mine
  auto* mine = app.add_subcommand("mine", "mine refactoring bug reports into a corpus");
  std::string mine_pages, mine_out = "corpus.jsonl";
  std::vector<std::string> mine_keywords;
  std::int64_t mine_cutoff = 0;
  int mine_cap = 0;
  mine->add_option("--pages", mine_pages, "directory of tracker page fixtures")->required();
  mine->add_option("--keyword", mine_keywords, "search keyword (repeatable)");
  mine->add_option("--cutoff", mine_cutoff, "drop reports fixed at/after this epoch time");
  mine->add_option("--cap", mine_cap, "maximum number of reports");
  mine->add_option("--out", mine_out, "corpus output path");

  // extract
  auto* extract = app.add_subcommand("extract", "extract seeds from a mined corpus");
  std::string ex_corpus, ex_cassettes, ex_out = "seeds";
  bool ex_replay = false, ex_record = false, ex_live = false;
  extract->add_option("--corpus", ex_corpus)->required();
  extract->add_option("--cassettes", ex_cassettes)->required();
  extract->add_option("--out", ex_out);
  extract->add_flag("--replay", ex_replay, "replay recorded responses (default)");
  extract->add_flag("--record", ex_record, "call the live model and record cassettes");
  extract->add_flag("--live", ex_live, "call the live model without recording");

  // mutate
  auto* mutate = app.add_subcommand("mutate", "generate variants for one seed");
  std::string mu_seed, mu_char = "lambda", mu_cassettes, mu_out = "variants";
  int mu_n = 10, mu_jdk = 22;
  bool mu_no_template = false, mu_replay = false, mu_record = false, mu_live = false;
  mutate->add_option("--seed", mu_seed)->required();
  mutate->add_option("--characteristic", mu_char);
  mutate->add_option("--n", mu_n, "variants to generate");
  mutate->add_option("--jdk", mu_jdk);
  mutate->add_option("--cassettes", mu_cassettes)->required();
  mutate->add_option("--out", mu_out);
  mutate->add_flag("--no-template", mu_no_template, "mutate from the raw program");
  mutate->add_flag("--replay", mu_replay);
  mutate->add_flag("--record", mu_record);
  mutate->add_flag("--live", mu_live);

  // gate
  auto* gate = app.add_subcommand("gate", "run the compile gate over source files");
  std::vector<std::string> gate_files;
  std::string gate_javac;
  int gate_jdk = 22;
  gate->add_option("files", gate_files, "Java source files")->required();
  gate->add_option("--jdk", gate_jdk);
  gate->add_option("--javac", gate_javac, "compiler path (default: $RETEST_JAVAC, then PATH)");

  // run
  auto* run = app.add_subcommand("run", "run a mutation campaign");
  std::string run_config, run_replay_dir;
  bool run_record = false, run_live = false;
  run->add_option("--config", run_config)->required();
  run->add_option("--replay", run_replay_dir, "cassette directory for offline replay");
  run->add_flag("--record", run_record);
  run->add_flag("--live", run_live);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "re-examine archived violations");
  std::string or_results, or_corpus;
  oracle->add_option("--results", or_results)->required();
  oracle->add_option("--corpus", or_corpus);

  // report
  auto* report = app.add_subcommand("report", "render a tracker-ready violation report");
  std::string rp_violation, rp_out;
  report->add_option("--violation", rp_violation)->required();
  report->add_option("--out", rp_out);

  // adapter-serve
  app.add_subcommand("adapter-serve", "expose the reference engine over stdio NDJSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  EventLog::instance().set_enabled(verbose);

  try {
    if (mine->parsed())
      return cmd_mine(mine_pages, mine_keywords, mine_cutoff, mine_cap, mine_out);
    if (extract->parsed()) {
      auto mode = pick_mode(ex_replay, ex_record, ex_live);
      auto transport = make_transport(mode);
      return cmd_extract(ex_corpus, ex_cassettes, ex_out, mode, transport.get());
    }
    if (mutate->parsed()) {
      auto mode = pick_mode(mu_replay, mu_record, mu_live);
      auto transport = make_transport(mode);
      return cmd_mutate(mu_seed, mu_char, mu_n, mu_cassettes, mu_out, mu_no_template, mu_jdk,
                        mode, transport.get());
    }
    if (gate->parsed()) return cmd_gate(gate_files, gate_jdk, gate_javac);
    if (run->parsed()) {
      auto mode = pick_mode(!run_replay_dir.empty() || (!run_record && !run_live), run_record,
                            run_live);
      auto transport = make_transport(mode);
      return cmd_run(run_config, run_replay_dir, mode, transport.get());
    }
    if (oracle->parsed()) return cmd_oracle(or_results, or_corpus);
    if (report->parsed()) return cmd_report(rp_violation, rp_out);
    if (app.get_subcommand("adapter-serve")->parsed()) {
      adapter::serve(std::cin, std::cout);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const campaign::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnvironmentError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const llm::ReplayMissError& e) {
    std::cerr << "replay error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitUsage;
}
