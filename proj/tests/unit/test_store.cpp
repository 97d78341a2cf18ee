#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "nims/store.hpp"

using namespace nims;
using nims::testutil::TmpDir;
namespace fs = std::filesystem;

namespace {
const SchemeParams kP{256, 8, 4, 0};

void copy_dir(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  for (const auto& e : fs::directory_iterator(from))
    fs::copy_file(e.path(), to / e.path().filename(),
                  fs::copy_options::overwrite_existing);
}

bool same_edb(const EncryptedDatabase& a, const EncryptedDatabase& b) {
  return a.params == b.params && a.cdb == b.cdb && a.mat == b.mat &&
         a.epoch_ts == b.epoch_ts;
}
}  // namespace

TEST_CASE("fresh store starts empty and accepts adds durably") {
  TmpDir tmp;
  SeededRng rng(71);
  auto [owner, edb0] = owner_setup(kP, rng);

  ServerStore store(tmp.path, kP);
  CHECK(store.edb().cdb.empty());
  store.apply_add(owner_add(owner, {{"a", {"alpha", "beta"}}}, 3, rng));
  store.apply_add(owner_add(owner, {{"b", {"alpha"}}}, 5, rng));
  CHECK(store.edb().cdb.size() == 5 + 4);
  CHECK(store.edb().mat.size() == 2);
  CHECK(store.log_bytes() > 0);
  EncryptedDatabase live = store.edb();
  store.close();

  ServerStore back(tmp.path, kP);
  CHECK(same_edb(back.edb(), live));
}

TEST_CASE("log replay reconstructs state after a simulated crash") {
  TmpDir tmp;
  SeededRng rng(72);
  auto [owner, edb0] = owner_setup(kP, rng);
  EncryptedDatabase live;
  TmpDir crashed;
  {
    ServerStore store(tmp.path, kP);
    store.apply_add(owner_add(owner, {{"a", {"alpha"}}}, 3, rng));
    store.apply_add(owner_add(owner, {{"b", {"beta"}}}, 4, rng));
    store.apply_delete(owner_delete(owner.msk, "a"));
    live = store.edb();
    // Snapshot the *files* while the store is still open: what a crash
    // right now would leave on disk (log only, no fresh snapshot).
    copy_dir(tmp.path, crashed.path);
  }
  ServerStore replayed(crashed.path, kP);
  CHECK(same_edb(replayed.edb(), live));
}

TEST_CASE("torn final log record is dropped, prefix survives") {
  TmpDir tmp;
  SeededRng rng(73);
  auto [owner, edb0] = owner_setup(kP, rng);
  EncryptedDatabase live;
  TmpDir crashed;
  {
    ServerStore store(tmp.path, kP);
    store.apply_add(owner_add(owner, {{"a", {"alpha"}}}, 3, rng));
    live = store.edb();
    copy_dir(tmp.path, crashed.path);
  }
  {
    // a record header promising more bytes than the file holds
    std::ofstream log(crashed.path / "edb.log",
                      std::ios::binary | std::ios::app);
    const char torn[] = {1, 0, 0, 1, 0, 'x', 'y'};
    log.write(torn, sizeof torn);
  }
  ServerStore replayed(crashed.path, kP);
  CHECK(same_edb(replayed.edb(), live));
  // and the tail was actually trimmed, so appends keep working
  replayed.apply_add(owner_add(owner, {{"b", {"alpha"}}}, 4, rng));
  EncryptedDatabase grown = replayed.edb();
  replayed.close();
  ServerStore again(crashed.path, kP);
  CHECK(same_edb(again.edb(), grown));
}

TEST_CASE("snapshot blob round trips and rejects corruption") {
  SeededRng rng(74);
  auto [owner, edb] = owner_setup(kP, rng);
  server_apply_add(edb, owner_add(owner, {{"a", {"alpha", "gamma"}}}, 7, rng));
  Bytes blob = encode_snapshot(edb);
  CHECK(same_edb(decode_snapshot(blob), edb));

  Bytes bad_magic = blob;
  bad_magic[0] ^= 1;
  CHECK_THROWS_AS(decode_snapshot(bad_magic), CorruptStoreError);
  Bytes truncated(blob.begin(), blob.end() - 5);
  CHECK_THROWS_AS(decode_snapshot(truncated), CorruptStoreError);
  Bytes trailing = blob;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_snapshot(trailing), CorruptStoreError);
}

TEST_CASE("explicit snapshot truncates the log and survives reopen") {
  TmpDir tmp;
  SeededRng rng(75);
  auto [owner, edb0] = owner_setup(kP, rng);
  ServerStore store(tmp.path, kP);
  store.apply_add(owner_add(owner, {{"a", {"alpha"}}}, 3, rng));
  CHECK(store.log_bytes() > 0);
  uint64_t logged = store.log_bytes();
  store.snapshot();
  CHECK(store.log_bytes() < logged);  // back to the bare header
  EncryptedDatabase live = store.edb();
  store.apply_delete(owner_delete(owner.msk, "a"));
  EncryptedDatabase after = store.edb();
  store.close();
  ServerStore back(tmp.path, kP);
  CHECK(same_edb(back.edb(), after));
  CHECK_FALSE(same_edb(back.edb(), live));
}

TEST_CASE("store refuses foreign parameters and corrupt snapshots") {
  TmpDir tmp;
  SeededRng rng(76);
  auto [owner, edb0] = owner_setup(kP, rng);
  {
    ServerStore store(tmp.path, kP);
    store.apply_add(owner_add(owner, {{"a", {"alpha"}}}, 3, rng));
  }
  SchemeParams other = kP;
  other.iota = 16;
  CHECK_THROWS_AS(ServerStore(tmp.path, other), CorruptStoreError);

  // structural damage: bad magic, then a truncated tail
  fs::path snap = tmp.path / "edb.snap";
  Bytes raw = read_file(snap);
  Bytes bad = raw;
  bad[0] ^= 1;
  write_file_atomic(snap, bad);
  CHECK_THROWS_AS(ServerStore(tmp.path, kP), CorruptStoreError);
  write_file_atomic(snap, Bytes(raw.begin(), raw.end() - 3));
  CHECK_THROWS_AS(ServerStore(tmp.path, kP), CorruptStoreError);
}

TEST_CASE("duplicate batch is rejected without being logged") {
  TmpDir tmp;
  SeededRng rng(77);
  auto [owner, edb0] = owner_setup(kP, rng);
  ServerStore store(tmp.path, kP);
  AddBatch batch = owner_add(owner, {{"a", {"alpha"}}}, 3, rng);
  store.apply_add(batch);
  uint64_t logged = store.log_bytes();
  CHECK_THROWS_AS(store.apply_add(batch), DuplicateAddressError);
  CHECK(store.log_bytes() == logged);
  CHECK(store.edb().cdb.size() == 3);
}

TEST_CASE("deletes of unknown handles are remembered as not found") {
  TmpDir tmp;
  SeededRng rng(78);
  ServerStore store(tmp.path, kP);
  Bytes ghost(kP.id_len(), 0x5a);
  CHECK_FALSE(store.apply_delete(ghost));
  CHECK_THROWS_AS(store.apply_delete(Bytes(3)), ParamError);
}
