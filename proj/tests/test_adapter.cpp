#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "retest/adapter.hpp"

using namespace retest;
using adapter::decode_request;
using adapter::decode_response;
using adapter::encode_request;
using adapter::encode_response;
using engine::EngineConfig;
using engine::EngineResponse;
using engine::Fault;
using engine::RefactoringRequest;
using engine::Status;

namespace {

RefactoringRequest sample_request() {
  RefactoringRequest req;
  req.type = RefactoringType::MakeStatic;
  req.units = {{"T", "class T {\n    int level;\n\n    int m() {\n        return level + 1;\n    }\n}\n"}};
  req.target = *javalite::ElementLocator::parse("class:T/method:m");
  req.params = {{"name", "part"}};
  return req;
}

}  // namespace

TEST_CASE("request encoding round-trips including the engine config") {
  auto req = sample_request();
  EngineConfig cfg{"idea-like", true, Fault::InlineSkipNameFreshening};
  auto wire = encode_request(7, req, cfg);
  CHECK(wire.at("id") == 7);

  auto [back, back_cfg] = decode_request(wire);
  CHECK(back.type == req.type);
  REQUIRE(back.units.size() == 1);
  CHECK(back.units[0].class_name == "T");
  CHECK(back.units[0].source == req.units[0].source);
  CHECK(back.target.to_string() == "class:T/method:m");
  CHECK(back.params == req.params);
  CHECK(back_cfg.profile == "idea-like");
  CHECK(back_cfg.final_params == true);
  CHECK(back_cfg.fault == Fault::InlineSkipNameFreshening);
}

TEST_CASE("malformed requests are protocol errors") {
  auto req = sample_request();
  auto wire = encode_request(1, req, {});
  SUBCASE("unknown refactoring") {
    wire["refactoring"] = "rename-everything";
    CHECK_THROWS_AS(decode_request(wire), adapter::ProtocolError);
  }
  SUBCASE("bad locator") {
    wire["target"] = "???";
    CHECK_THROWS_AS(decode_request(wire), adapter::ProtocolError);
  }
  SUBCASE("unknown fault") {
    wire["config"]["fault"] = "melt-the-cpu";
    CHECK_THROWS_AS(decode_request(wire), adapter::ProtocolError);
  }
}

TEST_CASE("response encoding round-trips and polices the id") {
  EngineResponse resp;
  resp.status = Status::Warning;
  resp.units = {{"T", "class T {\n}\n"}};
  resp.warnings = {"signature changed: instance parameter t added"};
  auto wire = encode_response(42, resp);

  auto back = decode_response(wire, 42);
  CHECK(back.status == Status::Warning);
  REQUIRE(back.units.size() == 1);
  CHECK(back.units[0].source == resp.units[0].source);
  CHECK(back.warnings == resp.warnings);

  CHECK_THROWS_AS(decode_response(wire, 43), adapter::ProtocolError);
  wire.erase("id");
  CHECK_THROWS_AS(decode_response(wire, 42), adapter::ProtocolError);
  wire["id"] = "42";
  CHECK_THROWS_AS(decode_response(wire, 42), adapter::ProtocolError);
}

TEST_CASE("serve answers requests and degrades gracefully on garbage") {
  auto req = sample_request();
  std::ostringstream feed;
  feed << encode_request(1, req, {}).dump() << "\n";
  feed << "this is not json\n";
  feed << "\n";  // blank lines are skipped outright
  feed << encode_request(3, req, EngineConfig{"idea-like", true, Fault::None}).dump() << "\n";

  std::istringstream in(feed.str());
  std::ostringstream out;
  adapter::serve(in, out);

  std::istringstream replies(out.str());
  std::string line;

  REQUIRE(std::getline(replies, line));
  auto r1 = decode_response(nlohmann::json::parse(line), 1);
  CHECK(r1.status == Status::Warning);  // make-static warns about the new parameter
  REQUIRE(r1.units.size() == 1);
  CHECK(r1.units[0].source.find("static int m(T t)") != std::string::npos);

  REQUIRE(std::getline(replies, line));
  auto j2 = nlohmann::json::parse(line);
  CHECK(j2.at("id") == 0);  // garbage carries no id
  CHECK(j2.at("status") == "crashed");
  CHECK_FALSE(j2.at("reason").get<std::string>().empty());

  REQUIRE(std::getline(replies, line));
  auto r3 = decode_response(nlohmann::json::parse(line), 3);
  CHECK(r3.status == Status::Warning);
  CHECK(r3.units[0].source.find("final T t") != std::string::npos);

  CHECK_FALSE(std::getline(replies, line));  // exactly three replies
}
