#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nims/crypto.hpp"
#include "nims/hk.hpp"
#include "nims/lsc.hpp"
#include "nims/params.hpp"
#include "nims/rng.hpp"

namespace nims {

// Epoch timestamps have run past 2^kappa; the index cannot accept more
// additions under these parameters.
class EpochExhaustedError : public Error {
 public:
  explicit EpochExhaustedError(const std::string& msg) : Error(msg) {}
};

// An addition tried to claim an address the store already holds.
class DuplicateAddressError : public Error {
 public:
  explicit DuplicateAddressError(const std::string& msg) : Error(msg) {}
};

// Secret material shared by the owner and every authorized data user:
// master key (with its derived subkeys) and the masking matrices.
struct MasterSecret {
  SchemeParams params;
  Bytes k;
  SubKeys sub;  // derived from k, not serialized
  HkMasks masks;
};

// Owner-only state on top of the shared secret: the epoch counter, the
// high-water timestamp, and the keyword set. Deliberately independent of
// how many documents were ever indexed.
struct OwnerState {
  MasterSecret msk;
  uint64_t ctr = 0;      // epochs completed
  uint64_t last_ts = 0;  // latest epoch timestamp issued
  std::set<std::string> keywords;
};

struct Document {
  std::string ind;                    // identifier, nonempty UTF-8
  std::vector<std::string> keywords;  // duplicates tolerated
};

// One epoch's worth of server updates: new storage-chain and payload
// entries, plus the replacement set of hidden index matrices (one per
// keyword the owner has ever indexed).
struct AddBatch {
  uint64_t epoch_ts = 0;
  std::vector<std::pair<Bytes, Bytes>> dic_entries;
  std::vector<IntMatrix> new_mat;
};

// Server-side state. cdb holds chain blocks (2*lambda-bit addresses) and
// encrypted payloads (lambda-bit handles); mat is the current epoch's
// hidden indices, replaced wholesale on every addition.
struct EncryptedDatabase {
  SchemeParams params;
  std::map<Bytes, Bytes> cdb;
  std::vector<IntMatrix> mat;
  uint64_t epoch_ts = 0;
};

struct SearchStats {
  size_t probes = 0;       // token-element / matrix trace evaluations
  size_t chain_steps = 0;  // chain blocks decoded
  bool matched = false;
};

MasterSecret master_setup(const SchemeParams& params, Rng& rng);

// Fresh owner state plus the (empty) database the server should start from.
std::pair<OwnerState, EncryptedDatabase> owner_setup(const SchemeParams& params,
                                                     Rng& rng);

// Head key of keyword w's chain as of epoch ctr. The PRF output is
// re-derived with a varied suffix in the (2^-lambda) event its integer
// value is zero, since zero is the chain terminator and also unusable as
// a probe result.
Bytes epoch_head_key(const MasterSecret& msk, uint64_t ctr, std::string_view w);

// Index a batch of documents as one epoch. Extends each touched keyword's
// chain, closes every known keyword's chain with a fresh sentinel block,
// and rebuilds all hidden index matrices at this epoch's timestamp.
// clock is epoch seconds; the timestamp is max(clock - genesis, last_ts),
// so a regressing clock degrades to the high-water mark rather than
// breaking monotonicity. Throws EpochExhaustedError when the timestamp
// no longer fits kappa bits, ParamError on duplicate identifiers within
// the batch or empty identifiers/keywords.
AddBatch owner_add(OwnerState& st, const std::vector<Document>& docs,
                   int64_t clock, Rng& rng);

// Handle of ind's payload entry; removing it from the store un-indexes
// the document everywhere without touching any chain.
Bytes owner_delete(const MasterSecret& msk, std::string_view ind);

// Range token for keyword w covering timestamps [0, clock - genesis].
// Requires clock >= genesis and the range top to fit kappa bits.
HiddenToken user_search_token(const MasterSecret& msk, std::string_view w,
                              int64_t clock, Rng& rng);

// Validate then merge: every entry address must be fresh (within the
// batch and against the store) or the whole batch is rejected with
// DuplicateAddressError and no state change. Matrices replace mat.
// validate_add is the check half, exposed so persistence can refuse a
// batch before committing it to the intent log.
void validate_add(const EncryptedDatabase& edb, const AddBatch& batch);
void server_apply_add(EncryptedDatabase& edb, const AddBatch& batch);

// Remove a payload entry. Returns false if the handle is unknown.
bool server_apply_delete(EncryptedDatabase& edb, const Bytes& eid);

// Probe matrices in random order, element by element, stopping at the
// first hit; walk that chain and collect the payload ciphertexts of
// handles still present, skipping epoch sentinels. Results are shuffled.
std::vector<Bytes> server_search(const EncryptedDatabase& edb,
                                 const HiddenToken& token, Rng& rng,
                                 SearchStats* stats = nullptr);

// Decrypt, dedupe, and sort recovered identifiers.
std::vector<std::string> user_decrypt_results(const MasterSecret& msk,
                                              const std::vector<Bytes>& cts);

// Serialized state. Owner blobs start "NIMS-OWNER\n", shared-secret blobs
// "NIMS-MSK\n"; both carry a version byte and the scheme parameters.
Bytes save_owner_state(const OwnerState& st);
OwnerState load_owner_state(BytesView blob);
Bytes save_master_secret(const MasterSecret& msk);
MasterSecret load_master_secret(BytesView blob);

}  // namespace nims
