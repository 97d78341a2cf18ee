#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nims/store.hpp"
#include "nims/wire.hpp"

namespace nims {

class NetError : public Error {
 public:
  explicit NetError(const std::string& msg) : Error(msg) {}
};
class ConnectError : public NetError {
 public:
  explicit ConnectError(const std::string& msg) : NetError(msg) {}
};
class TimeoutError : public NetError {
 public:
  explicit TimeoutError(const std::string& msg) : NetError(msg) {}
};
// Peer spoke the protocol wrong, or answered a request with an error
// frame (code and message are folded into what()).
class ProtocolError : public NetError {
 public:
  explicit ProtocolError(const std::string& msg) : NetError(msg) {}
};

// Blocking TCP server, one thread per connection. One writer at a time
// owns mutations; after each durable apply it publishes a fresh immutable
// snapshot of the database by atomic pointer swap. Searches and pings
// grab the current snapshot and never block a writer (or each other), so
// a search sees either the pre-add or post-add store, never a mix.
class Server {
 public:
  // addr is "host:port"; port 0 binds an ephemeral port.
  Server(ServerStore& store, const std::string& addr);
  ~Server();

  uint16_t port() const { return port_; }

  // Accept loop; returns after stop(). Call from the owning thread.
  void serve();
  // Signal-safe shutdown trigger: unblocks serve(), which then closes
  // connections, joins workers, and snapshots the store.
  void stop();

 private:
  void handle_connection(int fd);
  Frame dispatch(const Frame& req);
  std::shared_ptr<const EncryptedDatabase> snapshot() const;
  void publish_snapshot();

  ServerStore& store_;
  std::mutex write_mu_;  // serializes mutations and snapshot publication
  std::shared_ptr<const EncryptedDatabase> snap_;
  mutable std::mutex snap_mu_;  // guards the snap_ pointer swap itself
  int listen_fd_ = -1;
  int wake_fd_ = -1;        // poll()ed read end of the self-pipe
  int wake_write_fd_ = -1;  // written by stop() to unblock poll
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::vector<int> conn_fds_;
};

// Blocking client for one server. Calls are serialized per connection.
class Client {
 public:
  explicit Client(const std::string& addr,
                  std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  // Lazily connects. Throws ConnectError / TimeoutError / ProtocolError.
  Frame call(MsgType type, const Bytes& body);

  // call() + type check; unwraps an error frame into ProtocolError.
  Bytes expect(MsgType req_type, const Bytes& body, MsgType want);

 private:
  void connect();
  std::string host_;
  uint16_t port_ = 0;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
};

// "host:port" split with validation.
std::pair<std::string, uint16_t> parse_addr(const std::string& addr);

}  // namespace nims
