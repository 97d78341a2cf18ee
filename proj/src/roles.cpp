#include "nims/roles.hpp"

#include <algorithm>
#include <set>

namespace nims {

namespace {

constexpr std::string_view kOwnerMagic = "NIMS-OWNER\n";
constexpr std::string_view kMskMagic = "NIMS-MSK\n";
constexpr uint8_t kStateVersion = 1;

bool all_zero(BytesView b) {
  return std::all_of(b.begin(), b.end(), [](uint8_t x) { return x == 0; });
}

uint64_t epoch_delta(const SchemeParams& params, int64_t clock) {
  return clock <= params.genesis ? 0 : uint64_t(clock - params.genesis);
}

bool fits_kappa(uint64_t ts, uint32_t kappa) {
  return kappa >= 64 || (ts >> kappa) == 0;
}

Bytes fresh_block_key(const SchemeParams& params, Rng& rng) {
  for (;;) {
    Bytes k = rng.bytes(params.id_len());
    if (!all_zero(k)) return k;  // zero is the chain terminator
  }
}

void encode_secret_body(Bytes& out, const MasterSecret& msk) {
  encode_params(out, msk.params);
  out.insert(out.end(), msk.k.begin(), msk.k.end());
  msk.masks.m1.encode(out);
  msk.masks.m2.encode(out);
  msk.masks.m1_inv.encode(out);
  msk.masks.m2_inv.encode(out);
}

MasterSecret decode_secret_body(ByteReader& r) {
  MasterSecret msk;
  msk.params = decode_params(r);
  msk.k = r.bytes(msk.params.id_len());
  msk.sub = derive_subkeys(msk.k, msk.params.lambda);
  msk.masks.m1 = IntMatrix::decode(r);
  msk.masks.m2 = IntMatrix::decode(r);
  msk.masks.m1_inv = IntMatrix::decode(r);
  msk.masks.m2_inv = IntMatrix::decode(r);
  uint32_t n = msk.params.dim();
  for (const IntMatrix* m :
       {&msk.masks.m1, &msk.masks.m2, &msk.masks.m1_inv, &msk.masks.m2_inv})
    if (m->dim() != n) throw ParseError("mask dimension disagrees with params");
  if (mul(msk.masks.m1, msk.masks.m1_inv) != IntMatrix::identity(n) ||
      mul(msk.masks.m2, msk.masks.m2_inv) != IntMatrix::identity(n))
    throw IntegrityError("mask inverses do not multiply to identity");
  return msk;
}

void check_magic(ByteReader& r, std::string_view magic, const char* what) {
  Bytes got = r.bytes(magic.size());
  if (!std::equal(got.begin(), got.end(), magic.begin(), magic.end()))
    throw ParseError(std::string(what) + ": bad magic");
  if (r.u8() != kStateVersion)
    throw ParseError(std::string(what) + ": unsupported version");
}

}  // namespace

MasterSecret master_setup(const SchemeParams& params, Rng& rng) {
  params.validate();
  MasterSecret msk;
  msk.params = params;
  msk.k = rng.bytes(params.id_len());
  msk.sub = derive_subkeys(msk.k, params.lambda);
  msk.masks = gen_masks(params.dim(), rng);
  return msk;
}

std::pair<OwnerState, EncryptedDatabase> owner_setup(const SchemeParams& params,
                                                     Rng& rng) {
  OwnerState st;
  st.msk = master_setup(params, rng);
  EncryptedDatabase edb;
  edb.params = params;
  return {std::move(st), std::move(edb)};
}

Bytes epoch_head_key(const MasterSecret& msk, uint64_t ctr, std::string_view w) {
  Bytes h = prf_f1(msk.sub.k_f1, ctr, w, msk.params.lambda);
  // Zero is reserved (chain terminator; probe result must be positive).
  // Re-derive deterministically on that 2^-lambda event.
  for (unsigned attempt = 1; all_zero(h); ++attempt) {
    std::string varied(w);
    varied.push_back('\0');
    varied.push_back(static_cast<char>(attempt & 0xFF));
    h = prf_f1(msk.sub.k_f1, ctr, varied, msk.params.lambda);
  }
  return h;
}

AddBatch owner_add(OwnerState& st, const std::vector<Document>& docs,
                   int64_t clock, Rng& rng) {
  const SchemeParams& params = st.msk.params;
  if (docs.empty()) throw ParamError("owner_add: empty batch");

  // Validate up front; state must not move if anything is rejected.
  std::set<std::string> batch_inds;
  std::vector<std::vector<std::string>> doc_kws(docs.size());
  for (size_t i = 0; i < docs.size(); ++i) {
    const Document& d = docs[i];
    if (d.ind.empty()) throw ParamError("owner_add: empty identifier");
    if (!batch_inds.insert(d.ind).second)
      throw ParamError("owner_add: duplicate identifier in batch: " + d.ind);
    std::set<std::string> kws(d.keywords.begin(), d.keywords.end());
    if (kws.empty()) throw ParamError("owner_add: document has no keywords");
    for (const std::string& w : kws)
      if (w.empty()) throw ParamError("owner_add: empty keyword");
    doc_kws[i].assign(kws.begin(), kws.end());
  }
  uint64_t ts = std::max(epoch_delta(params, clock), st.last_ts);
  if (!fits_kappa(ts, params.kappa))
    throw EpochExhaustedError("owner_add: timestamp exceeds kappa bits");

  st.ctr += 1;

  // Rolling chain heads: existing keywords resume at the previous epoch's
  // sentinel key; keywords first seen now start at the terminator.
  std::map<std::string, Bytes> key;
  for (const std::string& w : st.keywords)
    key[w] = epoch_head_key(st.msk, st.ctr - 1, w);

  AddBatch batch;
  batch.epoch_ts = ts;

  std::vector<size_t> order(docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_vec(order, rng);
  for (size_t i : order) {
    const Document& doc = docs[i];
    Bytes eid = prf_f2(st.msk.sub.k_f2, to_bytes(doc.ind), params.lambda);
    batch.dic_entries.emplace_back(
        eid, aead_encrypt(st.msk.sub.k_se, to_bytes(doc.ind), rng));
    std::vector<std::string> kws = doc_kws[i];
    shuffle_vec(kws, rng);
    for (const std::string& w : kws) {
      auto [it, fresh] = key.try_emplace(w, chain_terminator(params.id_len()));
      if (fresh) st.keywords.insert(w);
      Bytes block_key = fresh_block_key(params, rng);
      ChainBlock blk = encrypt_block(block_key, eid, it->second);
      batch.dic_entries.emplace_back(std::move(blk.addr), std::move(blk.val));
      it->second = std::move(block_key);
    }
  }

  // Every known keyword gets a fresh head: a sentinel block closing this
  // epoch's chain segment, and a hidden index carrying the head key.
  Bytes sentinel = chain_sentinel(params.id_len());
  for (const std::string& w : st.keywords) {
    Bytes head = epoch_head_key(st.msk, st.ctr, w);
    ChainBlock blk = encrypt_block(head, sentinel, key.at(w));
    batch.dic_entries.emplace_back(std::move(blk.addr), std::move(blk.val));
    batch.new_mat.push_back(
        hk_data(st.msk.masks, params, w, ts, head, rng).mat);
  }

  shuffle_vec(batch.dic_entries, rng);
  shuffle_vec(batch.new_mat, rng);
  st.last_ts = ts;
  return batch;
}

Bytes owner_delete(const MasterSecret& msk, std::string_view ind) {
  return prf_f2(msk.sub.k_f2, to_bytes(ind), msk.params.lambda);
}

HiddenToken user_search_token(const MasterSecret& msk, std::string_view w,
                              int64_t clock, Rng& rng) {
  if (clock < msk.params.genesis)
    throw ParamError("user_search_token: clock precedes genesis");
  uint64_t hi = epoch_delta(msk.params, clock);
  return hk_token(msk.masks, msk.params, w, 0, hi, rng);
}

void validate_add(const EncryptedDatabase& edb, const AddBatch& batch) {
  const SchemeParams& params = edb.params;
  size_t id_len = params.id_len();
  for (const IntMatrix& m : batch.new_mat)
    if (m.dim() != params.dim())
      throw ParamError(
          "apply_add: batch matrices are " + std::to_string(m.dim()) + "x" +
          std::to_string(m.dim()) + " but this database expects " +
          std::to_string(params.dim()) + "x" + std::to_string(params.dim()) +
          " (iota/kappa disagree between owner setup and server)");

  std::set<Bytes> fresh;
  for (const auto& [addr, val] : batch.dic_entries) {
    if (addr.size() == id_len) {
      if (val.size() < kAeadOverhead)
        throw ParamError("apply_add: payload entry too short");
    } else if (addr.size() == 2 * id_len) {
      if (val.size() != 2 * id_len)
        throw ParamError("apply_add: chain entry has bad width");
    } else {
      throw ParamError("apply_add: bad address width");
    }
    if (!fresh.insert(addr).second || edb.cdb.count(addr))
      throw DuplicateAddressError("apply_add: address already present");
  }
}

void server_apply_add(EncryptedDatabase& edb, const AddBatch& batch) {
  validate_add(edb, batch);
  for (const auto& [addr, val] : batch.dic_entries) edb.cdb[addr] = val;
  edb.mat = batch.new_mat;
  edb.epoch_ts = batch.epoch_ts;
}

bool server_apply_delete(EncryptedDatabase& edb, const Bytes& eid) {
  if (eid.size() != edb.params.id_len())
    throw ParamError("apply_delete: bad handle width");
  return edb.cdb.erase(eid) > 0;
}

std::vector<Bytes> server_search(const EncryptedDatabase& edb,
                                 const HiddenToken& token, Rng& rng,
                                 SearchStats* stats) {
  SearchStats local;
  SearchStats& s = stats ? *stats : local;
  s = SearchStats{};

  std::vector<Bytes> results;
  std::vector<size_t> order(edb.mat.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_vec(order, rng);

  size_t id_len = edb.params.id_len();
  Bytes sentinel = chain_sentinel(id_len);
  for (size_t j : order) {
    HkQueryResult hit =
        hk_query(HiddenIndex{edb.mat[j]}, token, edb.params.lambda);
    s.probes += hit.probes;
    if (!hit.flag) continue;
    s.matched = true;
    auto lookup = [&](const Bytes& addr) -> const Bytes* {
      auto it = edb.cdb.find(addr);
      return it == edb.cdb.end() ? nullptr : &it->second;
    };
    std::vector<Bytes> fields =
        walk_chain(lookup, hit.key, id_len, edb.cdb.size() + 1, &s.chain_steps);
    for (const Bytes& data : fields) {
      if (data == sentinel) continue;
      auto it = edb.cdb.find(data);
      if (it != edb.cdb.end()) results.push_back(it->second);
    }
    break;  // one keyword matches at most one current-epoch matrix
  }
  shuffle_vec(results, rng);
  return results;
}

std::vector<std::string> user_decrypt_results(const MasterSecret& msk,
                                              const std::vector<Bytes>& cts) {
  std::set<std::string> inds;
  for (size_t i = 0; i < cts.size(); ++i) {
    try {
      Bytes pt = aead_decrypt(msk.sub.k_se, cts[i]);
      inds.insert(to_string(pt));
    } catch (const AuthError& e) {
      throw IntegrityError("result " + std::to_string(i) +
                           " failed authentication: " + e.what());
    }
  }
  return {inds.begin(), inds.end()};
}

Bytes save_owner_state(const OwnerState& st) {
  Bytes out(kOwnerMagic.begin(), kOwnerMagic.end());
  out.push_back(kStateVersion);
  encode_secret_body(out, st.msk);
  put_u64_be(out, st.ctr);
  put_u64_be(out, st.last_ts);
  put_u32_be(out, static_cast<uint32_t>(st.keywords.size()));
  for (const std::string& w : st.keywords) {  // set order: sorted, canonical
    put_u32_be(out, static_cast<uint32_t>(w.size()));
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

OwnerState load_owner_state(BytesView blob) {
  ByteReader r(blob);
  check_magic(r, kOwnerMagic, "owner state");
  OwnerState st;
  st.msk = decode_secret_body(r);
  st.ctr = r.u64();
  st.last_ts = r.u64();
  uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t len = r.u32();
    Bytes w = r.bytes(len);
    if (!st.keywords.insert(to_string(w)).second)
      throw ParseError("owner state: duplicate keyword");
  }
  r.expect_done();
  return st;
}

Bytes save_master_secret(const MasterSecret& msk) {
  Bytes out(kMskMagic.begin(), kMskMagic.end());
  out.push_back(kStateVersion);
  encode_secret_body(out, msk);
  return out;
}

MasterSecret load_master_secret(BytesView blob) {
  ByteReader r(blob);
  check_magic(r, kMskMagic, "master secret");
  MasterSecret msk = decode_secret_body(r);
  r.expect_done();
  return msk;
}

}  // namespace nims
