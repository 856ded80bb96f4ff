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
#include <chrono>
#include <deque>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace arenaladder {

using ojson = nlohmann::ordered_json;

Session::Session(std::string id, SessionOptions opts)
    : id_(std::move(id)), opts_(std::move(opts)), rng_(0) {
  if (opts_.tick_rate < 1 || opts_.tick_rate > 30) {
    throw UsageError("tick rate must be in [1, 30] (got " + std::to_string(opts_.tick_rate) + ")");
  }
  if (!opts_.agent) throw UsageError("a play session needs an agent policy");
  opts_.config.validate();
  actions_ = opts_.config.legal_actions();
  if (opts_.agent->num_actions() != static_cast<int>(actions_.size())) {
    throw UsageError("agent has " + std::to_string(opts_.agent->num_actions()) +
                     " actions, config has " + std::to_string(actions_.size()));
  }
  state_ = reset(opts_.config);
}

std::string Session::error(std::string_view message) const {
  return ojson{{"type", "error"}, {"message", message}}.dump();
}

std::string Session::config_message() const {
  ojson buttons = ojson::array();
  for (auto name : HumanAction::kNames) buttons.push_back(name);
  return ojson{{"type", "config"},
               {"session", id_},
               {"arena_width", opts_.config.arena_width},
               {"max_hp", opts_.config.max_hp},
               {"horizon", opts_.config.horizon},
               {"tick_rate", opts_.tick_rate},
               {"human_side", to_string(opts_.human_side)},
               {"agent", opts_.agent_id.name()},
               {"buttons", buttons}}
      .dump();
}

std::string Session::snapshot_message() const {
  ojson projectiles = ojson::array();
  for (const Projectile& p : state_.projectiles) {
    projectiles.push_back({{"pos", p.pos}, {"dir", p.dir}, {"owner", to_string(p.owner)}});
  }
  const auto& l = state_.fighters[0];
  const auto& r = state_.fighters[1];
  return ojson{{"type", "snapshot"},
               {"match", match_},
               {"tick", tick_},
               {"grid", observe_grid(state_, Side::kLeft, opts_.config)},
               {"hp", {l.hp, r.hp}},
               {"timer", state_.timer},
               {"phases", {to_string(l.phase), to_string(r.phase)}},
               {"blocking", {l.blocking, r.blocking}},
               {"projectiles", projectiles}}
      .dump();
}

void Session::start_match() {
  state_ = reset(opts_.config);
  rng_ = Rng(derive_seed(opts_.seed, static_cast<std::uint64_t>(match_)));
  tick_ = 0;
  pending_.reset();
  trace_.clear();
}

TransAction Session::legal_or_noop(TransAction a) const {
  if (opts_.config.is_legal(a)) return a;
  if (opts_.config.is_legal(TransAction::noop())) return TransAction::noop();
  return actions_.front();
}

std::vector<std::string> Session::handle(std::string_view line) {
  if (closed_) return {error("session is closed")};
  ojson msg;
  try {
    msg = ojson::parse(line);
  } catch (const ojson::exception& e) {
    return {error(std::string("malformed message: ") + e.what())};
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return {error("message needs a string 'type'")};
  }
  const std::string type = msg["type"];
  if (type == "hello") {
    if (!started_) {
      started_ = true;
      start_match();
    }
    return {config_message(), snapshot_message()};
  }
  if (type == "quit") {
    closed_ = true;
    return {};
  }
  if (!started_) return {error("send hello first")};
  if (type == "input") {
    const auto b = msg.find("buttons");
    const auto s = msg.find("seq");
    if (b == msg.end() || !b->is_array() || b->size() != HumanAction::kNumButtons) {
      return {error("input needs 'buttons': an array of 12 booleans")};
    }
    if (s == msg.end() || !s->is_number_integer() || s->get<std::int64_t>() < 0) {
      return {error("input needs a nonnegative integer 'seq'")};
    }
    HumanAction h;
    for (int i = 0; i < HumanAction::kNumButtons; ++i) {
      if (!(*b)[i].is_boolean()) return {error("input buttons must be booleans")};
      h.buttons[i] = (*b)[i].get<bool>();
    }
    const std::int64_t seq = s->get<std::int64_t>();
    if (seq <= last_seq_) return {};  // stale
    last_seq_ = seq;
    pending_ = h;
    return {};
  }
  if (type == "rematch") {
    if (live()) return {error("match in progress")};
    ++match_;
    start_match();
    return {snapshot_message()};
  }
  return {error("unknown message type '" + type + "'")};
}

std::vector<std::string> Session::tick() {
  if (!live()) return {};
  const Side human = opts_.human_side;
  const Side agent = other(human);
  const TransAction h =
      pending_ ? legal_or_noop(encode_action(*pending_, state_.fighter(human).facing))
               : legal_or_noop(TransAction::noop());
  pending_.reset();
  const TransAction a = actions_[opts_.agent->act(observe(state_, agent, opts_.config), rng_)];
  const TransAction left = human == Side::kLeft ? h : a;
  const TransAction right = human == Side::kLeft ? a : h;
  state_ = advance(state_, left, right, opts_.config);
  trace_.emplace_back(left, right);
  ++tick_;
  std::vector<std::string> out{snapshot_message()};
  if (state_.terminal) {
    const Outcome o = *state_.winner;
    if (o == Outcome::kLeftWin) ++score_[0];
    if (o == Outcome::kRightWin) ++score_[1];
    const PolicyId human_id{"HUMAN", human, 0};
    MatchResult r;
    r.outcome = o;
    r.final_hp = {state_.fighters[0].hp, state_.fighters[1].hp};
    r.length = tick_;
    r.seed = derive_seed(opts_.seed, static_cast<std::uint64_t>(match_));
    r.dense = {Rational(0), Rational(0)};
    results_.push_back(MatchRecord::from(
        match_, human == Side::kLeft ? human_id : opts_.agent_id,
        human == Side::kLeft ? opts_.agent_id : human_id, r, "human"));
    out.push_back(ojson{{"type", "result"},
                        {"match", match_},
                        {"winner", to_string(o)},
                        {"final_hp", {state_.fighters[0].hp, state_.fighters[1].hp}},
                        {"score", score_}}
                      .dump());
  }
  return out;
}

std::string_view mime_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

// ---------------------------------------------------------------------------
// Network front end

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

constexpr std::string_view kStubPage =
    "<!doctype html><title>ArenaLadder</title>"
    "<p>ArenaLadder play server. Connect a client to <code>/ws</code>.</p>\n";

struct Shared {
  PlayServerOptions opts;
  std::mutex mu;  // match log and replay files
  int next_session = 1;

  void record(const Session& s) {
    if (opts.match_log.empty() && opts.replay_dir.empty()) return;
    std::lock_guard lock(mu);
    const MatchRecord& rec = s.results().back();
    if (!opts.match_log.empty()) append_match(opts.match_log, rec);
    if (!opts.replay_dir.empty()) {
      Replay r{s.options().config, rec.left, rec.right, s.trace(),
               hex64(state_digest(s.state()))};
      save_replay(opts.replay_dir / (s.id() + "_" + std::to_string(rec.match_id) + ".replay"), r);
    }
  }
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, std::shared_ptr<Shared> shared)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        shared_(std::move(shared)),
        session_("s" + std::to_string(shared_->next_session++), shared_->opts.session) {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->read();
      self->next_tick_ = std::chrono::steady_clock::now();
      self->schedule();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      std::size_t start = 0;
      while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        const std::string_view line(text.data() + start, nl - start);
        start = nl + 1;
        if (line.find_first_not_of(" \r\t") == std::string_view::npos) continue;
        for (auto& m : self->session_.handle(line)) self->send(std::move(m));
      }
      if (self->session_.closed()) return self->close();
      self->read();
    });
  }

  void schedule() {
    const auto period = std::chrono::microseconds(1'000'000 / session_.options().tick_rate);
    next_tick_ += period;
    timer_.expires_at(next_tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->done_) return;
      if (self->session_.live()) {
        for (auto& m : self->session_.tick()) self->send(std::move(m));
        if (self->session_.state().terminal) self->shared_->record(self->session_);
      }
      self->schedule();
    });
  }

  void send(std::string msg) {
    if (done_) return;
    queue_.push_back(std::move(msg) + "\n");
    if (queue_.size() == 1) write();
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) return self->shutdown();
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->write();
                    });
  }

  void close() {
    done_ = true;
    timer_.cancel();
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {});
  }

  void shutdown() {
    done_ = true;
    timer_.cancel();
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::shared_ptr<Shared> shared_;
  Session session_;
  std::chrono::steady_clock::time_point next_tick_;
  bool done_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, std::shared_ptr<Shared> shared)
      : stream_(std::move(socket)), shared_(std::move(shared)) {}

  void start() { read(); }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->dispatch();
                     });
  }

  void dispatch() {
    if (websocket::is_upgrade(req_)) {
      if (req_.target() != "/ws") return respond(http::status::not_found, "text/plain", "no such endpoint\n");
      stream_.expires_never();
      try {
        std::make_shared<WsSession>(stream_.release_socket(), shared_)->start(std::move(req_));
      } catch (const Error&) {
        // Misconfigured session template; nothing to upgrade.
      }
      return;
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return respond(http::status::method_not_allowed, "text/plain", "GET only\n");
    }
    std::string target(req_.target());
    if (auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
      return respond(http::status::bad_request, "text/plain", "bad path\n");
    }
    if (target == "/") target = "/index.html";
    const auto& dir = shared_->opts.static_dir;
    if (dir.empty()) {
      if (target == "/index.html") return respond(http::status::ok, "text/html; charset=utf-8", std::string(kStubPage));
      return respond(http::status::not_found, "text/plain", "not found\n");
    }
    const std::filesystem::path file = dir / target.substr(1);
    std::error_code fec;
    if (!std::filesystem::is_regular_file(file, fec)) {
      return respond(http::status::not_found, "text/plain", "not found\n");
    }
    respond(http::status::ok, mime_type(file), read_file(file));
  }

  void respond(http::status status, std::string_view type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::server, "arenaladder");
    res->set(http::field::content_type, std::string(type));
    res->keep_alive(req_.keep_alive());
    if (req_.method() == http::verb::head) {
      res->content_length(body.size());
    } else {
      res->body() = std::move(body);
      res->prepare_payload();
    }
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (res->keep_alive()) return self->read();
                        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<Shared> shared_;
};

}  // namespace

struct PlayServer::Impl {
  asio::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::shared_ptr<Shared> shared;
  std::thread thread;
  unsigned short port = 0;

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(s), shared)->start();
      accept();
    });
  }
};

PlayServer::PlayServer(PlayServerOptions opts) : impl_(std::make_unique<Impl>()) {
  // Validates the template before any client connects.
  Session probe("probe", opts.session);
  impl_->shared = std::make_shared<Shared>();
  impl_->shared->opts = std::move(opts);
}

PlayServer::~PlayServer() { stop(); }

unsigned short PlayServer::start() {
  const auto& o = impl_->shared->opts;
  beast::error_code ec;
  const tcp::endpoint ep(asio::ip::make_address(o.address, ec), o.port);
  if (ec) throw UsageError("bad listen address '" + o.address + "'");
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep, ec);
  if (ec) throw Error("cannot bind " + o.address + ":" + std::to_string(o.port) + ": " + ec.message());
  impl_->acceptor.listen();
  impl_->port = impl_->acceptor.local_endpoint().port();
  impl_->accept();
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
  return impl_->port;
}

void PlayServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  asio::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    impl_->ioc.stop();
  });
  impl_->thread.join();
}

unsigned short PlayServer::port() const { return impl_->port; }

}  // namespace arenaladder
