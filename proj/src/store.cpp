#include "nims/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "nims/wire.hpp"

namespace nims {

namespace {

constexpr std::string_view kSnapMagic = "NIMS-EDB\n";
constexpr std::string_view kLogMagic = "NIMS-LOG\n";
constexpr uint8_t kStoreVersion = 1;
constexpr uint8_t kRecAdd = 1;
constexpr uint8_t kRecDelete = 2;
constexpr uint64_t kSnapshotLogBytes = 8ull << 20;
constexpr uint64_t kSnapshotRecords = 256;

constexpr uint8_t kTagHandle = 1;
constexpr uint8_t kTagChain = 2;

void fsync_dir(const std::filesystem::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;  // best effort; not all filesystems allow it
  ::fsync(fd);
  ::close(fd);
}

void write_all(int fd, const uint8_t* data, size_t n, const char* what) {
  size_t off = 0;
  while (off < n) {
    ssize_t w = ::write(fd, data + off, n - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw CorruptStoreError(std::string(what) + ": write failed: " +
                              std::strerror(errno));
    }
    off += size_t(w);
  }
}

}  // namespace

Bytes encode_snapshot(const EncryptedDatabase& edb) {
  Bytes out(kSnapMagic.begin(), kSnapMagic.end());
  out.push_back(kStoreVersion);
  encode_params(out, edb.params);
  put_u64_be(out, edb.epoch_ts);
  put_u32_be(out, static_cast<uint32_t>(edb.mat.size()));
  for (const IntMatrix& m : edb.mat) m.encode(out);
  put_u64_be(out, edb.cdb.size());
  size_t id_len = edb.params.id_len();
  for (const auto& [addr, val] : edb.cdb) {  // map order: canonical bytes
    if (addr.size() == id_len) {
      out.push_back(kTagHandle);
    } else if (addr.size() == 2 * id_len) {
      out.push_back(kTagChain);
    } else {
      throw CorruptStoreError("snapshot: entry with bad address width");
    }
    out.insert(out.end(), addr.begin(), addr.end());
    put_u32_be(out, static_cast<uint32_t>(val.size()));
    out.insert(out.end(), val.begin(), val.end());
  }
  return out;
}

EncryptedDatabase decode_snapshot(BytesView blob) {
  try {
    ByteReader r(blob);
    Bytes magic = r.bytes(kSnapMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kSnapMagic.begin(), kSnapMagic.end()))
      throw CorruptStoreError("snapshot: bad magic");
    if (r.u8() != kStoreVersion)
      throw CorruptStoreError("snapshot: unsupported version");
    EncryptedDatabase edb;
    edb.params = decode_params(r);
    edb.epoch_ts = r.u64();
    uint32_t mats = r.u32();
    edb.mat.reserve(mats);
    for (uint32_t i = 0; i < mats; ++i) {
      edb.mat.push_back(IntMatrix::decode(r));
      if (edb.mat.back().dim() != edb.params.dim())
        throw CorruptStoreError("snapshot: matrix dimension mismatch");
    }
    uint64_t entries = r.u64();
    size_t id_len = edb.params.id_len();
    const Bytes* prev = nullptr;
    for (uint64_t i = 0; i < entries; ++i) {
      uint8_t tag = r.u8();
      size_t addr_len = tag == kTagHandle   ? id_len
                        : tag == kTagChain ? 2 * id_len
                                           : throw CorruptStoreError("snapshot: bad tag");
      Bytes addr = r.bytes(addr_len);
      uint32_t vlen = r.u32();
      if (prev && !(*prev < addr))
        throw CorruptStoreError("snapshot: entries not in canonical order");
      auto [it, fresh] = edb.cdb.emplace(std::move(addr), r.bytes(vlen));
      if (!fresh) throw CorruptStoreError("snapshot: duplicate address");
      prev = &it->first;
    }
    r.expect_done();
    return edb;
  } catch (const ParseError& e) {
    throw CorruptStoreError(std::string("snapshot: ") + e.what());
  }
}

ServerStore::ServerStore(std::filesystem::path dir, const SchemeParams& params)
    : dir_(std::move(dir)) {
  params.validate();
  std::filesystem::create_directories(dir_);
  edb_.params = params;
  load();
  open_log_for_append();
}

ServerStore::~ServerStore() {
  try {
    close();
  } catch (...) {
    // Destructor path: a snapshot failure must not terminate; the intent
    // log still holds everything applied since the last good snapshot.
  }
}

void ServerStore::load() {
  auto snap_path = dir_ / "edb.snap";
  auto log_path = dir_ / "edb.log";

  if (std::filesystem::exists(snap_path)) {
    EncryptedDatabase loaded = decode_snapshot(read_file(snap_path.string()));
    if (!(loaded.params == edb_.params))
      throw CorruptStoreError("store: snapshot parameters disagree with configuration");
    edb_ = std::move(loaded);
  }

  if (!std::filesystem::exists(log_path)) return;
  Bytes log = read_file(log_path.string());
  size_t good = 0;  // how much of the log is intact
  if (log.size() < kLogMagic.size() + 1) {
    good = 0;  // torn header: treat as empty
  } else if (!std::equal(kLogMagic.begin(), kLogMagic.end(), log.begin()) ||
             log[kLogMagic.size()] != kStoreVersion) {
    throw CorruptStoreError("store: intent log has bad header");
  } else {
    size_t pos = kLogMagic.size() + 1;
    good = pos;
    while (log.size() - pos >= 5) {
      uint8_t type = log[pos];
      uint32_t len = 0;
      for (int i = 0; i < 4; ++i) len = (len << 8) | log[pos + 1 + i];
      if (log.size() - pos - 5 < len) break;  // torn final record
      BytesView body(log.data() + pos + 5, len);
      try {
        if (type == kRecAdd) {
          AddBatch batch = decode_add(body, edb_.params);
          try {
            server_apply_add(edb_, batch);
          } catch (const DuplicateAddressError&) {
            // Already merged: the previous run snapshotted after this
            // append but died before resetting the log. Batches apply
            // atomically, so a duplicate means the whole record is stale.
          }
        } else if (type == kRecDelete) {
          server_apply_delete(edb_, decode_delete(body, edb_.params));
        } else {
          throw CorruptStoreError("store: unknown log record type");
        }
      } catch (const ParseError& e) {
        throw CorruptStoreError(std::string("store: bad log record: ") + e.what());
      }
      pos += 5 + len;
      good = pos;
    }
  }
  if (good < log.size()) {
    if (::truncate(log_path.c_str(), static_cast<off_t>(good)) != 0)
      throw CorruptStoreError("store: cannot trim torn log tail");
  }
}

void ServerStore::open_log_for_append() {
  auto log_path = dir_ / "edb.log";
  bool fresh = !std::filesystem::exists(log_path) ||
               std::filesystem::file_size(log_path) == 0;
  log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0600);
  if (log_fd_ < 0)
    throw CorruptStoreError("store: cannot open intent log: " +
                            std::string(std::strerror(errno)));
  if (fresh) {
    Bytes header(kLogMagic.begin(), kLogMagic.end());
    header.push_back(kStoreVersion);
    write_all(log_fd_, header.data(), header.size(), "log header");
    if (::fsync(log_fd_) != 0) throw CorruptStoreError("store: log header fsync");
    fsync_dir(dir_);
  }
  log_bytes_ = std::filesystem::file_size(log_path);
}

void ServerStore::append_record(uint8_t type, const Bytes& body) {
  Bytes rec;
  rec.reserve(5 + body.size());
  rec.push_back(type);
  put_u32_be(rec, static_cast<uint32_t>(body.size()));
  rec.insert(rec.end(), body.begin(), body.end());
  write_all(log_fd_, rec.data(), rec.size(), "log record");
  if (::fdatasync(log_fd_) != 0)
    throw CorruptStoreError("store: log fsync failed");
  log_bytes_ += rec.size();
  ++records_since_snapshot_;
}

void ServerStore::apply_add(const AddBatch& batch) {
  validate_add(edb_, batch);  // refuse before logging
  append_record(kRecAdd, encode_add(batch, edb_.params));
  server_apply_add(edb_, batch);
  if (log_bytes_ > kSnapshotLogBytes || records_since_snapshot_ >= kSnapshotRecords)
    snapshot();
}

bool ServerStore::apply_delete(const Bytes& eid) {
  if (eid.size() != edb_.params.id_len())
    throw ParamError("apply_delete: bad handle width");
  append_record(kRecDelete, eid);
  bool found = server_apply_delete(edb_, eid);
  if (log_bytes_ > kSnapshotLogBytes || records_since_snapshot_ >= kSnapshotRecords)
    snapshot();
  return found;
}

void ServerStore::snapshot() {
  auto snap_path = dir_ / "edb.snap";
  write_file_atomic(snap_path.string(), encode_snapshot(edb_));
  fsync_dir(dir_);
  // Log reset only after the snapshot is durable; a crash in between is
  // handled by the idempotent replay above.
  if (log_fd_ >= 0) ::close(log_fd_);
  if (::truncate((dir_ / "edb.log").c_str(), 0) != 0)
    throw CorruptStoreError("store: cannot reset intent log");
  log_fd_ = -1;
  records_since_snapshot_ = 0;
  open_log_for_append();
}

void ServerStore::close() {
  if (closed_) return;
  snapshot();
  if (log_fd_ >= 0) {
    ::close(log_fd_);
    log_fd_ = -1;
  }
  closed_ = true;
}

}  // namespace nims
