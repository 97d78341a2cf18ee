#include "nims/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace nims {

namespace {

void send_all(int fd, const Bytes& data) {
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK)
        throw TimeoutError("send timed out");
      throw NetError(std::string("send failed: ") + std::strerror(errno));
    }
    off += size_t(n);
  }
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::pair<std::string, uint16_t> parse_addr(const std::string& addr) {
  size_t colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size())
    throw ParamError("address must be host:port: " + addr);
  std::string host = addr.substr(0, colon);
  std::string port_s = addr.substr(colon + 1);
  unsigned long port = 0;
  for (char c : port_s) {
    if (c < '0' || c > '9') throw ParamError("bad port in address: " + addr);
    port = port * 10 + unsigned(c - '0');
    if (port > 65535) throw ParamError("port out of range: " + addr);
  }
  return {host, static_cast<uint16_t>(port)};
}

Server::Server(ServerStore& store, const std::string& addr) : store_(store) {
  auto [host, port] = parse_addr(addr);

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0)
    throw ConnectError("cannot resolve " + host + ": " + gai_strerror(rc));

  listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (listen_fd_ < 0) {
    ::freeaddrinfo(res);
    throw NetError("socket() failed");
  }
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  rc = ::bind(listen_fd_, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc != 0 || ::listen(listen_fd_, 64) != 0) {
    int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ConnectError("cannot listen on " + addr + ": " + std::strerror(err));
  }
  sockaddr_in bound{};
  socklen_t blen = sizeof(bound);
  if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &blen) == 0)
    port_ = ntohs(bound.sin_port);

  int pipefd[2];
  if (::pipe(pipefd) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("pipe() failed");
  }
  wake_fd_ = pipefd[0];
  wake_write_fd_ = pipefd[1];

  publish_snapshot();
}

Server::~Server() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  if (wake_fd_ >= 0) ::close(wake_fd_);
  if (wake_write_fd_ >= 0) ::close(wake_write_fd_);
}

std::shared_ptr<const EncryptedDatabase> Server::snapshot() const {
  std::lock_guard<std::mutex> g(snap_mu_);
  return snap_;
}

void Server::publish_snapshot() {
  auto fresh = std::make_shared<const EncryptedDatabase>(store_.edb());
  std::lock_guard<std::mutex> g(snap_mu_);
  snap_ = std::move(fresh);
}

void Server::serve() {
  while (!stopping_.load()) {
    pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_fd_, POLLIN, 0}};
    int rc = ::poll(fds, 2, -1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (fds[1].revents) break;  // stop() woke us
    if (!(fds[0].revents & POLLIN)) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    std::lock_guard<std::mutex> g(workers_mu_);
    size_t slot = conn_fds_.size();
    conn_fds_.push_back(fd);
    workers_.emplace_back([this, fd, slot] {
      handle_connection(fd);
      std::lock_guard<std::mutex> g2(workers_mu_);
      conn_fds_[slot] = -1;
      ::close(fd);
    });
  }

  // Drain: refuse new connections, unblock readers, join, then make the
  // on-disk snapshot current.
  {
    std::lock_guard<std::mutex> g(workers_mu_);
    for (int fd : conn_fds_)
      if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> g(workers_mu_);
    workers.swap(workers_);
  }
  for (std::thread& t : workers) t.join();
  std::lock_guard<std::mutex> g(write_mu_);
  store_.snapshot();
}

void Server::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) return;
  if (wake_write_fd_ >= 0) {
    uint8_t b = 1;
    [[maybe_unused]] ssize_t n = ::write(wake_write_fd_, &b, 1);
  }
}

void Server::handle_connection(int fd) {
  Bytes buf;
  uint8_t chunk[64 * 1024];
  for (;;) {
    // Serve every complete frame already buffered.
    for (;;) {
      std::optional<DecodedFrame> dec;
      try {
        dec = try_decode_frame(buf);
      } catch (const ParseError& e) {
        // Framing is broken; reply once and drop the connection.
        try {
          send_all(fd, encode_frame(
                           {MsgType::kError,
                            encode_error(ErrCode::kMalformed, e.what())}));
        } catch (const NetError&) {
        }
        return;
      }
      if (!dec) break;
      buf.erase(buf.begin(), buf.begin() + dec->consumed);
      Frame reply = dispatch(dec->frame);
      try {
        send_all(fd, encode_frame(reply));
      } catch (const NetError&) {
        return;
      }
    }
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return;  // peer closed or connection failed
    }
    buf.insert(buf.end(), chunk, chunk + n);
  }
}

Frame Server::dispatch(const Frame& req) {
  const SchemeParams& params = store_.edb().params;  // fixed after construction
  try {
    switch (req.type) {
      case MsgType::kAdd: {
        AddBatch batch = decode_add(req.body, params);
        std::lock_guard<std::mutex> g(write_mu_);
        store_.apply_add(batch);
        publish_snapshot();
        return {MsgType::kAddOk,
                encode_add_ok(static_cast<uint32_t>(batch.dic_entries.size()),
                              static_cast<uint32_t>(batch.new_mat.size()))};
      }
      case MsgType::kDelete: {
        Bytes eid = decode_delete(req.body, params);
        std::lock_guard<std::mutex> g(write_mu_);
        bool found = store_.apply_delete(eid);
        publish_snapshot();
        return {MsgType::kDeleteOk, encode_delete_ok(found)};
      }
      case MsgType::kSearch: {
        HiddenToken token = decode_search(req.body, params);
        auto snap = snapshot();
        SystemRng rng;
        return {MsgType::kResults, encode_results(server_search(*snap, token, rng))};
      }
      case MsgType::kPing: {
        auto snap = snapshot();
        PongInfo info{snap->epoch_ts, static_cast<uint32_t>(snap->mat.size()),
                      snap->cdb.size()};
        return {MsgType::kPong, encode_pong(info)};
      }
      default:
        return {MsgType::kError,
                encode_error(ErrCode::kUnknownType, "unknown message type")};
    }
  } catch (const DuplicateAddressError& e) {
    return {MsgType::kError, encode_error(ErrCode::kDuplicateAddress, e.what())};
  } catch (const BrokenChainError& e) {
    return {MsgType::kError, encode_error(ErrCode::kBrokenChain, e.what())};
  } catch (const ParseError& e) {
    return {MsgType::kError, encode_error(ErrCode::kMalformed, e.what())};
  } catch (const ParamError& e) {
    return {MsgType::kError, encode_error(ErrCode::kMalformed, e.what())};
  } catch (const Error& e) {
    return {MsgType::kError, encode_error(ErrCode::kInternal, e.what())};
  }
}

Client::Client(const std::string& addr, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  std::tie(host_, port_) = parse_addr(addr);
  if (port_ == 0) throw ParamError("client needs a concrete port: " + addr);
}

Client::~Client() {
  if (fd_ >= 0) ::close(fd_);
}

void Client::connect() {
  if (fd_ >= 0) return;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(host_.c_str(), std::to_string(port_).c_str(), &hints, &res);
  if (rc != 0)
    throw ConnectError("cannot resolve " + host_ + ": " + gai_strerror(rc));

  int fd = -1;
  int err = 0;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    err = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0)
    throw ConnectError("cannot connect to " + host_ + ":" +
                       std::to_string(port_) + ": " + std::strerror(err));
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout_.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout_.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
  set_nodelay(fd);
  fd_ = fd;
}

Frame Client::call(MsgType type, const Bytes& body) {
  connect();
  try {
    send_all(fd_, encode_frame({type, body}));
    Bytes buf;
    uint8_t chunk[64 * 1024];
    for (;;) {
      std::optional<DecodedFrame> dec;
      try {
        dec = try_decode_frame(buf);
      } catch (const ParseError& e) {
        throw ProtocolError(std::string("bad frame from server: ") + e.what());
      }
      if (dec) {
        if (dec->consumed != buf.size())
          throw ProtocolError("unsolicited trailing bytes from server");
        return dec->frame;
      }
      ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      if (n == 0) throw ProtocolError("server closed connection mid-call");
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK)
          throw TimeoutError("no reply within timeout");
        throw NetError(std::string("recv failed: ") + std::strerror(errno));
      }
      buf.insert(buf.end(), chunk, chunk + n);
    }
  } catch (...) {
    // One request, one response: any failure invalidates the stream.
    ::close(fd_);
    fd_ = -1;
    throw;
  }
}

Bytes Client::expect(MsgType req_type, const Bytes& body, MsgType want) {
  Frame reply = call(req_type, body);
  if (reply.type == MsgType::kError) {
    WireError e = decode_error(reply.body);
    throw ProtocolError("server error " + std::to_string(int(e.code)) + ": " +
                        e.message);
  }
  if (reply.type != want) throw ProtocolError("unexpected reply type");
  return reply.body;
}

}  // namespace nims
