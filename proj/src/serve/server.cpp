#include "sf/serve.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <random>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "sf/errors.hpp"
#include "sf/protocol.hpp"

namespace sf {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Session {
 public:
  Session(websocket::stream<tcp::socket>& ws, Env& env, bool lockstep)
      : ws_(ws), env_(env), lockstep_(lockstep), timer_(ws.get_executor()) {}

  void start() {
    send(protocol::hello_message(env_, lockstep_));
    send(protocol::frame_message(env_));
    read();
    if (!lockstep_) {
      next_tick_ = std::chrono::steady_clock::now();
      schedule_tick();
    }
  }

  bool finished_episode() const { return !env_.running(); }

 private:
  void send(std::string msg) {
    queue_.push_back(std::move(msg));
    if (queue_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [this](beast::error_code ec, std::size_t) {
      if (ec) {
        abort();
        return;
      }
      queue_.pop_front();
      if (!queue_.empty()) {
        write_next();
      } else if (closing_) {
        ws_.async_close(websocket::close_code::normal, [](beast::error_code) {});
      }
    });
  }

  void read() {
    ws_.async_read(buffer_, [this](beast::error_code ec, std::size_t) {
      if (ec) {
        abort();
        return;
      }
      const std::string text = beast::buffers_to_string(buffer_.data());
      buffer_.consume(buffer_.size());
      on_message(text);
      if (!ended_) read();
    });
  }

  void on_message(const std::string& text) {
    if (ended_) return;
    protocol::InputMessage in;
    try {
      in = protocol::parse_input(text);
    } catch (const FormatError& e) {
      send(protocol::error_message(e.what()));
      return;
    }
    if (!is_valid_action(env_.config().sim.game_version, in.action)) {
      send(protocol::error_message("action id " + std::to_string(in.action) + " is not valid"));
      return;
    }
    if (lockstep_) {
      if (in.frame != env_.state().frame) {
        send(protocol::error_message("expected input for frame " +
                                     std::to_string(env_.state().frame)));
        return;
      }
      advance(in.action);
    } else {
      held_action_ = in.action;
    }
  }

  void schedule_tick() {
    const auto period = std::chrono::nanoseconds(1'000'000'000LL / env_.config().sim.fps);
    next_tick_ += period;
    timer_.expires_at(next_tick_);
    timer_.async_wait([this](beast::error_code ec) {
      if (ec || ended_) return;
      advance(held_action_);
      if (!ended_) schedule_tick();
    });
  }

  void advance(int action) {
    const StepResult r = env_.step(action);
    send(protocol::frame_message(env_));
    if (r.done) {
      ended_ = true;
      timer_.cancel();
      const ReplayReport rep = replay(env_.log());
      verified_ = rep.exact;
      send(protocol::end_message(env_, verified_));
      closing_ = true;
    }
  }

  void abort() {
    if (ended_ && closing_) return;
    ended_ = true;
    timer_.cancel();
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).close(ignored);
  }

 public:
  bool verified_ = false;

 private:
  websocket::stream<tcp::socket>& ws_;
  Env& env_;
  bool lockstep_;
  asio::steady_timer timer_;
  std::chrono::steady_clock::time_point next_tick_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  int held_action_ = 0;
  bool ended_ = false;
  bool closing_ = false;
};

}  // namespace

struct SessionServer::Impl {
  ServeOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::uint64_t sessions = 0;
};

SessionServer::SessionServer(ServeOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->options.env.sim.validate();
  const tcp::endpoint ep(asio::ip::make_address(impl_->options.address), impl_->options.port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen();
}

SessionServer::~SessionServer() = default;

unsigned short SessionServer::port() const { return impl_->acceptor.local_endpoint().port(); }

SessionResult SessionServer::serve_one() {
  Impl& m = *impl_;
  tcp::socket socket(m.ioc);
  m.acceptor.accept(socket);
  websocket::stream<tcp::socket> ws(std::move(socket));
  ws.accept();

  std::uint64_t seed;
  if (m.options.seed) {
    seed = m.sessions == 0 ? *m.options.seed : mix_seed(*m.options.seed, m.sessions);
  } else {
    seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  }
  ++m.sessions;

  Env env(m.options.env);
  env.set_recording(true);
  env.reset(seed);
  Session session(ws, env, m.options.lockstep);
  session.start();
  m.ioc.restart();
  m.ioc.run();

  SessionResult result;
  result.log = env.log();
  result.complete = result.log.header.complete;
  result.final_score = env.info().display_score;
  result.verified = session.verified_;
  std::filesystem::create_directories(m.options.log_dir);
  result.log_path = m.options.log_dir / ("session_" + std::to_string(seed) + ".jsonl");
  std::ofstream os(result.log_path);
  if (!os) throw std::runtime_error("cannot open " + result.log_path.string());
  result.log.write(os);
  return result;
}

}  // namespace sf
