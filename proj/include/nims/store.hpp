#pragma once

#include <filesystem>

#include "nims/roles.hpp"

namespace nims {

// Persisted server state failed to parse or failed an integrity check.
class CorruptStoreError : public Error {
 public:
  explicit CorruptStoreError(const std::string& msg) : Error(msg) {}
};

// Durable server store: a snapshot file plus an append-only intent log.
// Mutations are validated, appended to the log, fsynced, and only then
// applied in memory; acknowledgements therefore never outrun the disk.
// Opening replays the log over the snapshot, truncating a torn final
// record (the one failure a crash mid-append can leave behind).
//
// Not internally synchronized; the network layer serializes writers and
// snapshots around its own lock.
class ServerStore {
 public:
  // dir will hold "edb.snap", "edb.log", and a transient ".tmp" sibling.
  ServerStore(std::filesystem::path dir, const SchemeParams& params);
  ~ServerStore();

  ServerStore(const ServerStore&) = delete;
  ServerStore& operator=(const ServerStore&) = delete;

  const EncryptedDatabase& edb() const { return edb_; }

  // Durable apply. Throws DuplicateAddressError (store unchanged, nothing
  // logged) on address reuse.
  void apply_add(const AddBatch& batch);
  bool apply_delete(const Bytes& eid);

  // Write a fresh snapshot atomically (temp file + rename + dir fsync)
  // and reset the log. Called automatically once the log grows past a
  // threshold, and on clean close.
  void snapshot();

  // Snapshot and release file handles.
  void close();

  uint64_t log_bytes() const { return log_bytes_; }

 private:
  void load();
  void open_log_for_append();
  void append_record(uint8_t type, const Bytes& body);

  std::filesystem::path dir_;
  EncryptedDatabase edb_;
  int log_fd_ = -1;
  uint64_t log_bytes_ = 0;
  uint64_t records_since_snapshot_ = 0;
  bool closed_ = false;
};

// Snapshot blob codec, exposed for white-box tests.
Bytes encode_snapshot(const EncryptedDatabase& edb);
EncryptedDatabase decode_snapshot(BytesView blob);

}  // namespace nims
