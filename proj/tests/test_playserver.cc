// Copyright 2026 The ArenaLadder Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "arenaladder/playserver.h"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <fstream>

#include "arenaladder/presets.h"
#include "doctest.h"
#include "json.hpp"

namespace arenaladder {
namespace {

using json = nlohmann::json;

std::shared_ptr<TabularPolicy> deterministic_agent(const EngineConfig& cfg) {
  QLearner q(cfg, Side::kRight, LearnConfig{});
  q.train(Opponent::single(std::make_shared<ScriptedCPU>(4, cfg)), 5000);
  return std::make_shared<TabularPolicy>(q.policy());
}

SessionOptions options(const EngineConfig& cfg, PolicyPtr agent, Side human = Side::kLeft) {
  SessionOptions o;
  o.config = cfg;
  o.agent_id = {"MA", other(human), 1};
  o.agent = std::move(agent);
  o.human_side = human;
  o.seed = 5;
  return o;
}

std::string input_line(const HumanAction& h, std::int64_t seq) {
  json b = json::array();
  for (bool x : h.buttons) b.push_back(x);
  return json{{"type", "input"}, {"buttons", b}, {"seq", seq}}.dump();
}

TEST_CASE("hello returns the config and the first snapshot") {
  EngineConfig cfg;
  Session s("s1", options(cfg, std::make_shared<ScriptedCPU>(3, cfg)));
  CHECK(json::parse(s.handle(R"({"type":"input","buttons":[],"seq":1})")[0])["type"] == "error");
  const auto out = s.handle(R"({"type":"hello","client":"test"})");
  REQUIRE(out.size() == 2);
  // Field order is part of the protocol.
  CHECK(out[0].rfind(R"({"type":"config","session":"s1","arena_width":)" + std::to_string(cfg.arena_width), 0) == 0);
  const json snap = json::parse(out[1]);
  CHECK(snap["type"] == "snapshot");
  CHECK(snap["tick"] == 0);
  CHECK(snap["hp"] == json::array({cfg.max_hp, cfg.max_hp}));
  CHECK(snap["grid"].size() == 3);
  CHECK(out[1].rfind(R"({"type":"snapshot","match":0,"tick":0,"grid":)", 0) == 0);
}

TEST_CASE("malformed lines produce errors and the session survives") {
  EngineConfig cfg;
  Session s("s1", options(cfg, std::make_shared<ScriptedCPU>(3, cfg)));
  s.handle(R"({"type":"hello"})");
  for (std::string_view bad : {"not json", "[1,2]", R"({"kind":"input"})", R"({"type":"dance"})",
                               R"({"type":"input","buttons":[true],"seq":1})",
                               R"({"type":"input","buttons":[0,0,0,0,0,0,0,0,0,0,0,0],"seq":1})",
                               R"({"type":"input","buttons":[false,false,false,false,false,false,false,false,false,false,false,false],"seq":-1})"}) {
    const auto out = s.handle(bad);
    REQUIRE(out.size() == 1);
    CHECK(json::parse(out[0])["type"] == "error");
  }
  CHECK(s.live());
  CHECK(s.tick().size() == 1);
}

TEST_CASE("latest input wins and stale inputs are ignored") {
  EngineConfig cfg;
  auto agent = std::make_shared<TabularPolicy>(
      TabularPolicy::point_mass(static_cast<int>(cfg.legal_actions().size()), 0));
  Session s("s1", options(cfg, agent));
  s.handle(R"({"type":"hello"})");
  // No input: the human plays noop.
  s.tick();
  CHECK(s.trace().back().first == TransAction::noop());
  HumanAction fwd;
  fwd.press(HumanAction::kRight);
  HumanAction punch;
  punch.press(HumanAction::kZ);
  s.handle(input_line(punch, 3));
  s.handle(input_line(fwd, 4));
  s.handle(input_line(punch, 2));  // stale
  s.tick();
  CHECK(s.trace().back().first == encode_action(fwd, Facing::kRight));
  // The slot is consumed by the tick.
  s.tick();
  CHECK(s.trace().back().first == TransAction::noop());
}

TEST_CASE("tick-aligned inputs reproduce the offline engine") {
  EngineConfig cfg = tiny_config();
  const auto agent = deterministic_agent(cfg);
  for (Side human : {Side::kLeft, Side::kRight}) {
    Session s("s1", options(cfg, agent, human));
    s.handle(R"({"type":"hello"})");
    Rng rng(static_cast<std::uint64_t>(human) + 10);
    std::vector<std::optional<HumanAction>> sent;
    std::int64_t seq = 0;
    while (s.live()) {
      std::optional<HumanAction> h;
      if (rng.below(4) != 0) {
        h.emplace();
        for (bool& b : h->buttons) b = rng.below(5) == 0;
        s.handle(input_line(*h, ++seq));
      }
      sent.push_back(h);
      s.tick();
    }
    // Offline: same inputs at the same ticks through the engine directly.
    GameState g = reset(cfg);
    const auto acts = cfg.legal_actions();
    for (const auto& h : sent) {
      TransAction ha = h ? encode_action(*h, g.fighter(human).facing) : TransAction::noop();
      if (!cfg.is_legal(ha)) ha = cfg.is_legal(TransAction::noop()) ? TransAction::noop() : acts[0];
      const auto& d = agent->get(observe(g, other(human), cfg).key());
      const TransAction aa = acts[std::max_element(d.begin(), d.end()) - d.begin()];
      g = human == Side::kLeft ? advance(g, ha, aa, cfg) : advance(g, aa, ha, cfg);
    }
    CHECK(g == s.state());
    REQUIRE(s.results().size() == 1);
    CHECK(s.results()[0].tag == "human");
    CHECK(s.results()[0].outcome == *g.winner);
  }
}

TEST_CASE("results, score and rematch") {
  EngineConfig cfg = tiny_config();
  Session s("s1", options(cfg, std::make_shared<ScriptedCPU>(8, cfg), Side::kRight));
  s.handle(R"({"type":"hello"})");
  CHECK(json::parse(s.handle(R"({"type":"rematch"})")[0])["type"] == "error");
  std::vector<std::string> last;
  while (s.live()) last = s.tick();
  REQUIRE(last.size() == 2);
  const json res = json::parse(last[1]);
  CHECK(res["type"] == "result");
  CHECK(res["final_hp"] == json::array({s.state().fighters[0].hp, s.state().fighters[1].hp}));
  const int total = s.score()[0] + s.score()[1];
  CHECK(total == (res["winner"] == "draw" ? 0 : 1));
  CHECK(s.tick().empty());
  const auto again = s.handle(R"({"type":"rematch"})");
  REQUIRE(again.size() == 1);
  CHECK(json::parse(again[0])["match"] == 1);
  CHECK(json::parse(again[0])["tick"] == 0);
  CHECK(s.live());
  s.handle(R"({"type":"quit"})");
  CHECK(s.closed());
  CHECK(!s.live());
}

TEST_CASE("session options are validated") {
  EngineConfig cfg;
  SessionOptions o = options(cfg, std::make_shared<ScriptedCPU>(3, cfg));
  o.tick_rate = 31;
  CHECK_THROWS_AS(Session("x", o), UsageError);
  o.tick_rate = 8;
  o.agent = std::make_shared<TabularPolicy>(3);
  CHECK_THROWS_AS(Session("x", o), UsageError);
}

// ---------------------------------------------------------------------------
// Network

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

http::response<http::string_body> get(unsigned short port, const std::string& target) {
  asio::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  http::request<http::empty_body> req(http::verb::get, target, 11);
  req.set(http::field::host, "127.0.0.1");
  http::write(stream, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(stream, buf, res);
  return res;
}

TEST_CASE("static assets are served") {
  const auto dir = std::filesystem::temp_directory_path() / ("arenaladder_static_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>client</html>";
  std::ofstream(dir / "app.js") << "console.log(1);";
  EngineConfig cfg = tiny_config();
  PlayServerOptions o;
  o.session = options(cfg, std::make_shared<ScriptedCPU>(3, cfg));
  o.static_dir = dir;
  PlayServer server(o);
  const unsigned short port = server.start();
  auto r = get(port, "/");
  CHECK(r.result() == http::status::ok);
  CHECK(r.body() == "<html>client</html>");
  r = get(port, "/app.js");
  CHECK(r[http::field::content_type] == "text/javascript; charset=utf-8");
  CHECK(get(port, "/missing.css").result() == http::status::not_found);
  CHECK(get(port, "/../etc/passwd").result() == http::status::bad_request);
  server.stop();
  std::filesystem::remove_all(dir);
  CHECK(mime_type("a.css") == "text/css; charset=utf-8");
}

TEST_CASE("a websocket client plays a full match") {
  const auto dir = std::filesystem::temp_directory_path() / ("arenaladder_ws_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  EngineConfig cfg = tiny_config();
  PlayServerOptions o;
  o.session = options(cfg, deterministic_agent(cfg));
  o.session.tick_rate = 30;
  o.match_log = dir / "matches.log";
  o.replay_dir = dir / "replays";
  PlayServer server(o);
  const unsigned short port = server.start();

  asio::io_context ioc;
  websocket::stream<tcp::socket> ws(ioc);
  ws.next_layer().connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  ws.handshake("127.0.0.1", "/ws");
  ws.text(true);
  const auto send = [&](const std::string& line) { ws.write(asio::buffer(line + "\n")); };
  beast::flat_buffer buf;
  const auto recv = [&] {
    buf.clear();
    ws.read(buf);
    std::string s = beast::buffers_to_string(buf.data());
    REQUIRE(!s.empty());
    CHECK(s.back() == '\n');
    return json::parse(s);
  };

  send(R"({"type":"hello","client":"doctest"})");
  const json config = recv();
  CHECK(config["type"] == "config");
  CHECK(config["arena_width"] == cfg.arena_width);
  CHECK(recv()["type"] == "snapshot");
  send("garbage");
  HumanAction punch;
  punch.press(HumanAction::kZ);
  int seq = 0;
  int last_tick = 0;
  int errors = 0;
  json result;
  while (true) {
    const json m = recv();
    if (m["type"] == "error") {
      ++errors;
      continue;
    }
    if (m["type"] == "result") {
      result = m;
      break;
    }
    REQUIRE(m["type"] == "snapshot");
    CHECK(m["tick"] == last_tick + 1);
    last_tick = m["tick"];
    send(input_line(punch, ++seq));
  }
  CHECK(errors == 1);
  CHECK(last_tick <= cfg.horizon);
  send(R"({"type":"rematch"})");
  const json fresh = recv();
  CHECK(fresh["match"] == 1);
  CHECK(fresh["tick"] == 0);
  send(R"({"type":"quit"})");
  beast::error_code ec;
  ws.read(buf, ec);  // the server closes
  CHECK(ec == websocket::error::closed);
  server.stop();

  const auto log = read_matches(o.match_log);
  REQUIRE(log.size() == 1);
  CHECK(log[0].tag == "human");
  CHECK(to_string(log[0].outcome) == result["winner"].get<std::string>());
  const Replay rep = load_replay(o.replay_dir / (config["session"].get<std::string>() + "_0.replay"));
  const GameState end = verify_replay(rep);
  CHECK(json::array({end.fighters[0].hp, end.fighters[1].hp}) == result["final_hp"]);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace arenaladder
