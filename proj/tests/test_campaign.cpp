#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "retest/campaign.hpp"

namespace fs = std::filesystem;
using namespace retest;
using campaign::CampaignConfig;
using campaign::CampaignResult;
using campaign::GateStatus;
using campaign::Runner;

static const fs::path kFixtures = RETEST_FIXTURES;

namespace {

CampaignConfig bundled_config(const fs::path& output_dir = {}) {
  auto cfg = CampaignConfig::load(kFixtures / "campaign.cfg");
  cfg.output_dir = output_dir;
  return cfg;
}

CampaignResult replay_campaign(const fs::path& output_dir = {}) {
  Runner runner(bundled_config(output_dir), llm::SessionMode::Replay);
  return runner.run();
}

std::string write_config(const std::string& body) {
  auto path = fs::temp_directory_path() / "retest-campaign-cfg-test.cfg";
  write_file_atomic(path, body);
  return path.string();
}

}  // namespace

TEST_CASE("the bundled campaign config loads with paths resolved") {
  auto cfg = CampaignConfig::load(kFixtures / "campaign.cfg");
  CHECK(cfg.seeds_dir == kFixtures / "seeds");
  CHECK(cfg.cassette_dir == kFixtures / "cassettes" / "mutate");
  CHECK(cfg.variants_per_characteristic == 10);
  CHECK(cfg.jdk == 22);
  CHECK(cfg.use_template);
  CHECK(cfg.normalize_final_params);
  CHECK(cfg.dedup_threshold == doctest::Approx(0.5));
  CHECK(cfg.corpus_path.empty());

  REQUIRE(cfg.characteristics.size() == 3);
  CHECK(cfg.characteristics[0].id == "lambda");
  CHECK(cfg.characteristics[1].id == "generics");
  CHECK(cfg.characteristics[2].id == "anonymous-class");
  CHECK_FALSE(cfg.characteristics[0].description.empty());  // backfilled from defaults

  REQUIRE(cfg.engines.size() == 3);
  CHECK(cfg.engines[0].id == "ref");
  CHECK(cfg.engines[0].profile == "ec-like");
  CHECK(cfg.engines[0].fault == engine::Fault::None);
  CHECK(cfg.engines[1].id == "idea");
  CHECK(cfg.engines[1].profile == "idea-like");
  CHECK(cfg.engines[2].id == "faulty");
  CHECK(cfg.engines[2].fault == engine::Fault::InlineSkipNameFreshening);
}

TEST_CASE("config errors are loud and specific") {
  CHECK_THROWS_AS(CampaignConfig::load(write_config("banana split\nseeds s\nengine e\n")),
                  campaign::ConfigError);
  CHECK_THROWS_AS(CampaignConfig::load(write_config("seeds s\n")), campaign::ConfigError);
  CHECK_THROWS_AS(CampaignConfig::load(write_config("engine e\n")), campaign::ConfigError);
  CHECK_THROWS_AS(CampaignConfig::load(write_config("seeds s\nengine e fault=weird\n")),
                  campaign::ConfigError);
  // profile names are validated when the engine is instantiated
  auto lazy = CampaignConfig::load(write_config("seeds s\nengine e profile=weird\n"));
  CHECK_THROWS_AS(lazy.engines[0].config(), UsageError);
}

TEST_CASE("seeds load sorted with the expected refactoring types") {
  auto seeds = campaign::load_seeds(kFixtures / "seeds");
  REQUIRE(seeds.size() == 5);
  CHECK(seeds[0].id == "S-1");
  CHECK(seeds[0].type == RefactoringType::PullUp);
  CHECK(seeds[1].type == RefactoringType::InlineMethod);
  CHECK(seeds[2].type == RefactoringType::ExtractVariable);
  CHECK(seeds[3].type == RefactoringType::ExtractMethod);
  CHECK(seeds[4].type == RefactoringType::MakeStatic);
  for (const auto& s : seeds) {
    CHECK_FALSE(s.input_units.empty());
    CHECK_FALSE(s.template_source.empty());
    CHECK_FALSE(s.symptom.empty());
  }
  CHECK_THROWS_AS(campaign::load_seeds(kFixtures / "no-such-dir"), EnvironmentError);
}

TEST_CASE("the bundled replay campaign reproduces the frozen ground truth") {
  auto truth = nlohmann::json::parse(read_file(kFixtures / "ground_truth.json"));
  auto result = replay_campaign();

  CHECK(result.engine_ids == truth.at("engines").get<std::vector<std::string>>());
  REQUIRE(result.rows.size() == truth.at("rows").size());
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const auto& want = truth.at("rows")[i];
    const auto& [key, r] = result.rows[i];
    CAPTURE(key.first);
    CHECK(key.first == want.at("refactoring"));
    CHECK(key.second == true);  // template-guided
    CHECK(r.tgv == want.at("tgv"));
    CHECK(r.cv == want.at("cv"));
    CHECK(r.rpv == want.at("rpv"));
    CHECK(r.uc == want.at("uc"));
    CHECK(r.ws == want.at("ws"));
    CHECK(r.diff == want.at("diff"));
    CHECK(r.rpv <= r.cv);
    CHECK(r.cv <= r.tgv);
    CHECK(r.et == 0.0);  // replay reports no wall-clock time
    CHECK(r.mt == 0.0);
  }

  CHECK(result.new_violation_count() == truth.at("new_violations"));
  int suppressed = 0, not_rpt = 0, uncompilable = 0, genfail = 0;
  for (const auto& v : result.violations)
    if (v.verdict == oracles::Verdict::SuppressedConfig) ++suppressed;
  for (const auto& v : result.variants) {
    if (v.gate == GateStatus::NotRpt) ++not_rpt;
    if (v.gate == GateStatus::Uncompilable) ++uncompilable;
    if (v.gate == GateStatus::GenerationFailed) ++genfail;
  }
  CHECK(suppressed == truth.at("suppressed_config_violations"));
  CHECK(not_rpt == truth.at("not_rpt_variants"));
  CHECK(uncompilable == truth.at("uncompilable_variants"));
  CHECK(genfail == 0);

  std::map<std::string, int> bugs;
  for (const auto& [key, r] : result.rows)
    for (const auto& [id, n] : r.bugs) bugs[id] += n;
  CHECK(bugs == truth.at("bugs").get<std::map<std::string, int>>());
}

TEST_CASE("every accepted variant is a reproducible pristine transformation") {
  auto result = replay_campaign();
  auto seeds = campaign::load_seeds(kFixtures / "seeds");
  std::map<std::string, const llm::SeedRecord*> by_id;
  for (const auto& s : seeds) by_id[s.id] = &s;

  int accepted = 0, rejected = 0;
  for (const auto& v : result.variants) {
    if (v.gate == GateStatus::GenerationFailed) continue;
    auto rpt = campaign::validate_rpt(v, *by_id.at(v.seed_id));
    if (v.gate == GateStatus::Accepted) {
      ++accepted;
      CHECK(rpt.ok);
    } else if (v.gate == GateStatus::NotRpt) {
      ++rejected;
      CHECK_FALSE(rpt.ok);
      CHECK(rpt.reason.rfind("not-rpt:", 0) == 0);
    }
  }
  CHECK(accepted == 127);
  CHECK(rejected == 8);
}

TEST_CASE("make-static cells reject already-static candidates as not-rpt") {
  auto result = replay_campaign();
  int already_static = 0;
  for (const auto& v : result.variants) {
    if (v.seed_id != "S-5" || v.gate != GateStatus::NotRpt) continue;
    CHECK(v.gate_reason.find("already static") != std::string::npos);
    ++already_static;
  }
  CHECK(already_static == 8);
}

TEST_CASE("replay is deterministic byte for byte") {
  auto out1 = fs::temp_directory_path() / "retest-campaign-run1";
  auto out2 = fs::temp_directory_path() / "retest-campaign-run2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  auto r1 = replay_campaign(out1);
  auto r2 = replay_campaign(out2);

  CHECK(campaign::summarize(r1) == campaign::summarize(r2));
  CHECK(campaign::summary_record(r1).dump(2) == campaign::summary_record(r2).dump(2));

  std::map<std::string, std::string> files1, files2;
  for (const auto& e : fs::recursive_directory_iterator(out1))
    if (e.is_regular_file())
      files1[fs::relative(e.path(), out1).string()] = read_file(e.path());
  for (const auto& e : fs::recursive_directory_iterator(out2))
    if (e.is_regular_file())
      files2[fs::relative(e.path(), out2).string()] = read_file(e.path());
  CHECK_FALSE(files1.empty());
  CHECK(files1 == files2);

  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("the summary table carries the full column set") {
  auto result = replay_campaign();
  auto table = campaign::summarize(result);
  for (const char* column : {"Refactoring", "Template", "ET (s)", "TGV", "MT (s)", "CV", "RPV",
                             "UC", "WS", "Diff.", "Bugs(ref)", "Bugs(idea)", "Bugs(faulty)"})
    CHECK(table.find(column) != std::string::npos);
  CHECK(table.find("Average") != std::string::npos);
  CHECK(table.find("Total") != std::string::npos);
  CHECK(table.find("| 150 ") != std::string::npos);  // total TGV

  auto record = campaign::summary_record(result);
  CHECK(record.at("rows").size() == 5);
  CHECK(record.at("variants").size() == 150);
}
