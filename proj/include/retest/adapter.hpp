#pragma once

#include <istream>
#include <json.hpp>
#include <ostream>

#include "retest/engine.hpp"
#include "retest/proc.hpp"

namespace retest::adapter {

using engine::EngineConfig;
using engine::EngineResponse;
using engine::RefactoringRequest;
using engine::Status;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Wire encoding (newline-delimited JSON over stdio)
// ---------------------------------------------------------------------------

inline nlohmann::json encode_request(int id, const RefactoringRequest& req,
                                     const EngineConfig& cfg) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : req.units) units.push_back({{"name", u.class_name}, {"source", u.source}});
  return {{"id", id},
          {"refactoring", to_string(req.type)},
          {"units", units},
          {"target", req.target.to_string()},
          {"params", req.params},
          {"config",
           {{"profile", cfg.profile},
            {"final_params", cfg.final_params},
            {"fault", engine::to_string(cfg.fault)}}}};
}

inline nlohmann::json encode_response(int id, const EngineResponse& resp) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : resp.units) units.push_back({{"name", u.class_name}, {"source", u.source}});
  return {{"id", id},
          {"status", engine::wire_status(resp.status)},
          {"warnings", resp.warnings},
          {"units", units},
          {"reason", resp.reason}};
}

inline std::pair<RefactoringRequest, EngineConfig> decode_request(const nlohmann::json& j) {
  RefactoringRequest req;
  auto type = parse_refactoring_type(j.at("refactoring").get<std::string>());
  if (!type) throw ProtocolError("unknown refactoring: " + j.at("refactoring").dump());
  req.type = *type;
  for (const auto& u : j.at("units")) req.units.push_back({u.at("name"), u.at("source")});
  auto loc = javalite::ElementLocator::parse(j.at("target").get<std::string>());
  if (!loc) throw ProtocolError("bad target locator: " + j.at("target").dump());
  req.target = *loc;
  req.params = j.value("params", ParamMap{});

  EngineConfig cfg;
  if (j.contains("config")) {
    const auto& c = j.at("config");
    cfg.profile = c.value("profile", cfg.profile);
    cfg.final_params = c.value("final_params", cfg.final_params);
    if (c.contains("fault")) {
      auto f = engine::parse_fault(c.at("fault").get<std::string>());
      if (!f) throw ProtocolError("unknown fault: " + c.at("fault").dump());
      cfg.fault = *f;
    }
  }
  return {std::move(req), cfg};
}

inline EngineResponse decode_response(const nlohmann::json& j, int expect_id) {
  if (!j.contains("id") || !j.at("id").is_number_integer() ||
      j.at("id").get<int>() != expect_id)
    throw ProtocolError("response id does not match request id");
  EngineResponse resp;
  auto st = engine::parse_status(j.value("status", ""));
  if (!st) throw ProtocolError("unknown status in adapter response: " + j.value("status", ""));
  resp.status = *st;
  for (const auto& u : j.value("units", nlohmann::json::array()))
    resp.units.push_back({u.at("name"), u.at("source")});
  resp.warnings = j.value("warnings", std::vector<std::string>{});
  resp.reason = j.value("reason", "");
  return resp;
}

// ---------------------------------------------------------------------------
// Server loop: reads requests from `in`, applies them, writes replies
// ---------------------------------------------------------------------------

inline void serve(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    int id = 0;
    nlohmann::json reply;
    try {
      auto j = nlohmann::json::parse(line);
      id = j.value("id", 0);
      auto [req, cfg] = decode_request(j);
      reply = encode_response(id, engine::Engine(cfg).apply(req));
    } catch (const std::exception& e) {
      EngineResponse crashed;
      crashed.status = Status::Crashed;
      crashed.reason = e.what();
      reply = encode_response(id, crashed);
    }
    out << reply.dump() << "\n" << std::flush;
  }
}

// ---------------------------------------------------------------------------
// Client: one subprocess, one in-flight request at a time
// ---------------------------------------------------------------------------

class AdapterClient {
 public:
  explicit AdapterClient(std::vector<std::string> command, int timeout_ms = 30000)
      : command_(std::move(command)), timeout_ms_(timeout_ms) {
    if (command_.empty()) throw UsageError("adapter command is empty");
  }

  // Timeouts and dead subprocesses map to status=crashed; garbage on the
  // wire is a ProtocolError (the adapter is broken, not the refactoring).
  EngineResponse apply(const RefactoringRequest& req, const EngineConfig& cfg) {
    ensure_started();
    int id = next_id_++;
    proc_->write_line(encode_request(id, req, cfg).dump());
    auto line = proc_->read_line(std::chrono::milliseconds(timeout_ms_));
    if (!line) {
      proc_.reset();  // kill and relaunch on next call
      EngineResponse resp;
      resp.status = Status::Crashed;
      resp.reason = "adapter did not reply within " + std::to_string(timeout_ms_) + "ms";
      return resp;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(*line);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("adapter reply is not JSON: ") + e.what());
    }
    return decode_response(j, id);
  }

  void close() {
    if (proc_) proc_->close_and_wait();
    proc_.reset();
  }

 private:
  void ensure_started() {
    if (!proc_) proc_ = std::make_unique<Subprocess>(command_);
  }

  std::vector<std::string> command_;
  int timeout_ms_;
  int next_id_ = 1;
  std::unique_ptr<Subprocess> proc_;
};

}  // namespace retest::adapter
