#include "nims/fuzz.hpp"

#include <cstdio>
#include <memory>
#include <set>

#include "nims/crypto.hpp"
#include "nims/net.hpp"
#include "nims/oracle.hpp"
#include "nims/roles.hpp"

namespace nims {
namespace {

// The driver is transport-agnostic: same op stream against the in-process
// engine or a live server.
struct Engine {
  virtual ~Engine() = default;
  virtual void add(const AddBatch& batch) = 0;
  virtual bool del(const Bytes& eid) = 0;
  virtual std::vector<Bytes> search(const HiddenToken& token) = 0;
};

struct LocalEngine : Engine {
  EncryptedDatabase edb;
  SystemRng rng;
  explicit LocalEngine(EncryptedDatabase e) : edb(std::move(e)) {}
  void add(const AddBatch& batch) override { server_apply_add(edb, batch); }
  bool del(const Bytes& eid) override { return server_apply_delete(edb, eid); }
  std::vector<Bytes> search(const HiddenToken& token) override {
    return server_search(edb, token, rng);
  }
};

struct WireEngine : Engine {
  Client client;
  SchemeParams params;
  WireEngine(const std::string& addr, const SchemeParams& p)
      : client(addr), params(p) {}
  void add(const AddBatch& batch) override {
    client.expect(MsgType::kAdd, encode_add(batch, params), MsgType::kAddOk);
  }
  bool del(const Bytes& eid) override {
    return decode_delete_ok(
        client.expect(MsgType::kDelete, encode_delete(eid), MsgType::kDeleteOk));
  }
  std::vector<Bytes> search(const HiddenToken& token) override {
    return decode_results(
        client.expect(MsgType::kSearch, encode_search(token), MsgType::kResults));
  }
};

// Distinct fingerprints, so plaintext keyword equality and index-side
// equality coincide and the oracle comparison is exact.
std::vector<std::string> make_vocab(int n, uint32_t iota) {
  std::vector<std::string> out;
  std::set<std::vector<uint8_t>> seen;
  for (int i = 0; int(out.size()) < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "kw-%03d", i);
    std::string w = buf;
    if (seen.insert(hash_keyword(w, iota)).second) out.push_back(std::move(w));
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

}  // namespace

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  cfg.params.validate();
  SeededRng rng(cfg.seed);
  auto [owner, edb0] = owner_setup(cfg.params, rng);

  std::unique_ptr<Engine> eng;
  if (cfg.server_addr.empty())
    eng = std::make_unique<LocalEngine>(std::move(edb0));
  else
    eng = std::make_unique<WireEngine>(cfg.server_addr, cfg.params);

  std::vector<std::string> vocab = make_vocab(cfg.vocab, cfg.params.iota);
  OracleIndex oracle;
  FuzzReport rep;
  std::vector<std::string> live;
  uint64_t next_doc = 0;

  auto note_mismatch = [&](const std::string& what) {
    rep.mismatches += 1;
    if (rep.first_mismatch.empty()) rep.first_mismatch = what;
    if (cfg.verbose) std::fprintf(stderr, "fuzz MISMATCH %s\n", what.c_str());
  };

  for (int op = 0; op < cfg.ops; ++op) {
    // Strictly advancing clock: every op lands in a fresh or equal epoch
    // and searches always cover everything written so far.
    uint64_t clock = cfg.params.genesis + 1 + uint64_t(op);
    uint64_t roll = rng.below(100);

    if (roll < 30) {
      int ndocs = 1 + int(rng.below(3));
      std::vector<Document> docs;
      for (int d = 0; d < ndocs; ++d) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "doc-%06llu",
                      static_cast<unsigned long long>(next_doc++));
        Document doc;
        doc.ind = buf;
        size_t nk = 1 + rng.below(uint64_t(cfg.max_kws_per_doc));
        std::set<std::string> kws;
        while (kws.size() < nk) kws.insert(vocab[rng.below(vocab.size())]);
        doc.keywords.assign(kws.begin(), kws.end());
        docs.push_back(std::move(doc));
      }
      AddBatch batch = owner_add(owner, docs, clock, rng);
      eng->add(batch);
      for (const Document& d : docs) {
        oracle.add(d.ind, d.keywords);
        live.push_back(d.ind);
      }
      rep.adds += 1;
      if (cfg.verbose)
        std::fprintf(stderr, "fuzz op %d: add %d docs\n", op, ndocs);
    } else if (roll < 55 && !live.empty()) {
      size_t pick = rng.below(live.size());
      std::string ind = live[pick];
      live.erase(live.begin() + ptrdiff_t(pick));
      bool found = eng->del(owner_delete(owner.msk, ind));
      bool expected = oracle.remove(ind);
      if (found != expected)
        note_mismatch("op " + std::to_string(op) + " delete " + ind +
                      ": server found=" + std::to_string(found) +
                      " oracle=" + std::to_string(expected));
      rep.deletes += 1;
      if (cfg.verbose) std::fprintf(stderr, "fuzz op %d: del %s\n", op, ind.c_str());
    } else {
      const std::string& w = vocab[rng.below(vocab.size())];
      HiddenToken token = user_search_token(owner.msk, w, clock, rng);
      std::vector<std::string> got =
          user_decrypt_results(owner.msk, eng->search(token));
      std::vector<std::string> want = oracle.search(w);
      if (got != want)
        note_mismatch("op " + std::to_string(op) + " search '" + w +
                      "': got [" + join(got) + "] want [" + join(want) + "]");
      rep.searches += 1;
      if (cfg.verbose)
        std::fprintf(stderr, "fuzz op %d: search %s -> %zu\n", op, w.c_str(),
                     got.size());
    }
  }
  oracle.self_check();
  return rep;
}

}  // namespace nims
