// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dualsql/service.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

using json = nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    EngineConfig cfg;
    cfg.enumeration.max_candidates = 20;
    cfg.enumeration.timeout = std::chrono::milliseconds(20000);
    cfg.max_tasks = 2;
    service_ = std::make_unique<Service>(testkit::movies(), cfg);
    port_ = service_->start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override { service_->stop(); }

  json motivating_body() const {
    return {{"nlq", std::string(testkit::kMotivatingNlq)},
            {"literals", {{{"type", "text"}, {"value", "male"}},
                          {{"type", "number"}, {"value", 1995}},
                          {{"type", "number"}, {"value", 2000}}}},
            {"tsq", json::parse(tsq_to_json(testkit::motivating_sketch()))}};
  }

  std::string submit(const json& body) {
    auto res = client_->Post("/api/tasks", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body).at("task_id").get<std::string>();
  }

  json wait_done(const std::string& id) {
    for (int i = 0; i < 400; ++i) {
      auto res = client_->Get("/api/tasks/" + id + "/candidates");
      json j = json::parse(res->body);
      if (j["state"] != "running") return j;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    ADD_FAILURE() << "task did not finish";
    return {};
  }

  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(ServiceTest, SubmitPollAndPreview) {
  std::string id = submit(motivating_body());
  json done = wait_done(id);
  EXPECT_EQ(done["state"], "done");
  ASSERT_EQ(done["candidates"].size(), 20u);
  EXPECT_EQ(done["candidates"][0]["rank"], 1);

  auto later = json::parse(client_->Get("/api/tasks/" + id + "/candidates?after=15")->body);
  EXPECT_EQ(later["candidates"].size(), 5u);
  EXPECT_EQ(later["candidates"][0]["rank"], 16);

  auto prev = client_->Get("/api/tasks/" + id + "/candidates/1/preview");
  ASSERT_EQ(prev->status, 200);
  json p = json::parse(prev->body);
  EXPECT_LE(p["rows"].size(), 20u);
  EXPECT_EQ(p["columns"].size(), 3u);
  EXPECT_NE(p["sql"].get<std::string>().find("LIMIT 20"), std::string::npos);

  auto full = json::parse(client_->Get("/api/tasks/" + id + "/candidates/1/preview?mode=full")->body);
  EXPECT_GE(full["rows"].size(), p["rows"].size());
  EXPECT_EQ(client_->Get("/api/tasks/" + id + "/candidates/99/preview")->status, 404);
  EXPECT_EQ(client_->Get("/api/tasks/" + id + "/candidates/1/preview?mode=odd")->status, 400);
}

TEST_F(ServiceTest, StopHaltsTask) {
  json body = motivating_body();
  body.erase("tsq");
  std::string id = submit(body);
  auto res = client_->Post("/api/tasks/" + id + "/stop", "", "application/json");
  ASSERT_EQ(res->status, 200);
  std::string state = json::parse(res->body)["state"];
  EXPECT_TRUE(state == "stopped" || state == "done") << state;
}

TEST_F(ServiceTest, RejectsMalformedRequests) {
  EXPECT_EQ(client_->Post("/api/tasks", "{", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/tasks", R"({"nlq": "  "})", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/tasks", R"({"nlq": "x", "tsq": {"types": ["blob"]}})", "application/json")->status,
            400);
  EXPECT_EQ(client_->Post("/api/tasks", R"({"nlq": "x", "literals": [{"type": "date", "value": "1"}]})",
                          "application/json")
                ->status,
            400);
  EXPECT_EQ(client_->Get("/api/tasks/nope/candidates")->status, 404);
  EXPECT_EQ(client_->Post("/api/tasks/nope/stop", "", "application/json")->status, 404);
  std::string id = submit(motivating_body());
  EXPECT_EQ(client_->Get("/api/tasks/" + id + "/candidates?after=x")->status, 400);
}

TEST_F(ServiceTest, CapacityLimit) {
  json body = motivating_body();
  body.erase("tsq");
  std::vector<std::string> ids;
  ids.push_back(submit(body));
  ids.push_back(submit(body));
  auto third = client_->Post("/api/tasks", body.dump(), "application/json");
  // Both earlier tasks may already be finished on a fast machine.
  EXPECT_TRUE(third->status == 409 || third->status == 201) << third->status;
  for (const auto& id : ids) client_->Post("/api/tasks/" + id + "/stop", "", "application/json");
}

TEST_F(ServiceTest, AutocompleteAndSchema) {
  auto ac = client_->Get("/api/autocomplete?q=tom&limit=5");
  ASSERT_EQ(ac->status, 200);
  json a = json::parse(ac->body);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0]["value"], "Tom Hanks");
  EXPECT_EQ(a[0]["occurrences"][0]["table"], "actor");
  EXPECT_EQ(client_->Get("/api/autocomplete?q=t&limit=0")->status, 400);

  json s = json::parse(client_->Get("/api/schema")->body);
  EXPECT_EQ(s["tables"].size(), 3u);
  EXPECT_EQ(s["foreign_keys"].size(), 2u);
}

}  // namespace
}  // namespace dualsql
