// Command-line front end: owner-side indexing, user-side search, the
// storage server, a micro-benchmark, and a self test.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "nims/fuzz.hpp"
#include "nims/net.hpp"
#include "nims/roles.hpp"
#include "nims/store.hpp"
#include "nims/tokenize.hpp"

namespace fs = std::filesystem;
using namespace nims;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

OwnerState load_owner(const std::string& path) {
  return load_owner_state(read_file(path));
}

// ind<TAB>w1,w2,... per line; '#' comments and blank lines skipped.
std::vector<Document> read_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pairs file: " + path);
  std::vector<Document> docs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno += 1;
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("pairs file line " + std::to_string(lineno) +
                  ": expected ind<TAB>keywords");
    Document d;
    d.ind = line.substr(0, tab);
    std::istringstream ks(line.substr(tab + 1));
    std::string w;
    while (std::getline(ks, w, ','))
      if (!w.empty()) d.keywords.push_back(w);
    docs.push_back(std::move(d));
  }
  return docs;
}

// One document per regular file: identifier = file name, keywords = its
// tokenized content. Files with no usable words are skipped.
std::vector<Document> read_docs_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  for (const fs::path& p : files) {
    Bytes raw = read_file(p.string());
    Document d;
    d.ind = p.filename().string();
    d.keywords = tokenize_document(std::string(raw.begin(), raw.end()));
    if (d.keywords.empty()) {
      std::cerr << "nims: skipping " << d.ind << ": no indexable words\n";
      continue;
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::atomic<Server*> g_server{nullptr};
void handle_stop_signal(int) {
  if (Server* s = g_server.load()) s->stop();
}

int cmd_setup(const std::string& out, const std::string& msk_out,
              uint32_t iota, uint32_t kappa, int64_t genesis) {
  SchemeParams params{256, iota, kappa, genesis};
  params.validate();
  SystemRng rng;
  auto [owner, edb] = owner_setup(params, rng);
  write_file_atomic(out, save_owner_state(owner));
  write_file_atomic(msk_out, save_master_secret(owner.msk));
  std::cout << "nims: wrote owner state to " << out << " and shared secret to "
            << msk_out << " (iota=" << iota << " kappa=" << kappa
            << " genesis=" << genesis << ")\n";
  return 0;
}

int cmd_add(const std::string& state_path, const std::string& docs_dir,
            const std::string& pairs_path, const std::string& server_addr) {
  OwnerState owner = load_owner(state_path);
  std::vector<Document> docs = pairs_path.empty() ? read_docs_dir(docs_dir)
                                                  : read_pairs_file(pairs_path);
  if (docs.empty()) throw Error("nothing to index");
  SystemRng rng;
  AddBatch batch = owner_add(owner, docs, ::time(nullptr), rng);
  Client client(server_addr);
  auto [entries, mats] = decode_add_ok(client.expect(
      MsgType::kAdd, encode_add(batch, owner.msk.params), MsgType::kAddOk));
  // The server holds the batch now; persist the advanced epoch state.
  // If this write fails, the next add will be refused as a duplicate
  // rather than silently corrupting anything.
  write_file_atomic(state_path, save_owner_state(owner));
  std::cout << "nims: indexed " << docs.size() << " documents (" << entries
            << " entries, " << mats << " index matrices, epoch "
            << owner.ctr << ")\n";
  return 0;
}

int cmd_del(const std::string& state_path, const std::string& ind,
            const std::string& server_addr) {
  OwnerState owner = load_owner(state_path);
  Client client(server_addr);
  bool found = decode_delete_ok(
      client.expect(MsgType::kDelete, encode_delete(owner_delete(owner.msk, ind)),
                    MsgType::kDeleteOk));
  std::cout << (found ? "nims: deleted " : "nims: not present: ") << ind << "\n";
  return 0;
}

int cmd_search(const std::string& msk_path, const std::string& keyword,
               const std::string& server_addr, int64_t at) {
  MasterSecret msk = load_master_secret(read_file(msk_path));
  SystemRng rng;
  HiddenToken token = user_search_token(msk, keyword, at, rng);
  Client client(server_addr);
  std::vector<std::string> inds = user_decrypt_results(
      msk, decode_results(client.expect(MsgType::kSearch, encode_search(token),
                                        MsgType::kResults)));
  for (const std::string& ind : inds) std::cout << ind << "\n";
  return 0;
}

int cmd_serve(const std::string& store_dir, const std::string& listen,
              uint32_t iota, uint32_t kappa) {
  SchemeParams params{256, iota, kappa, 0};
  // An existing snapshot is authoritative for the parameters; the flags
  // only shape a brand-new store.
  fs::path snap = fs::path(store_dir) / "edb.snap";
  if (fs::exists(snap)) params = decode_snapshot(read_file(snap.string())).params;
  params.validate();

  ServerStore store(store_dir, params);
  Server server(store, listen);
  g_server.store(&server);
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);

  auto [host, port] = parse_addr(listen);
  (void)port;
  std::cout << "nims: listening on " << host << ":" << server.port() << "\n";
  std::cout << "nims: store " << store_dir << " (iota=" << params.iota
            << " kappa=" << params.kappa << ", "
            << store.edb().cdb.size() << " entries)\n";
  std::cout.flush();
  server.serve();
  g_server.store(nullptr);
  store.close();
  std::cout << "nims: shut down cleanly\n";
  return 0;
}

int cmd_bench(const std::string& profile, int pairs, int keywords,
              const std::string& out_path) {
  if (pairs < 1 || keywords < 1) throw Error("bench: pairs and keywords must be positive");
  SchemeParams params;  // production dimensions
  SeededRng rng(20240601);
  auto [owner, edb] = owner_setup(params, rng);

  std::ostringstream tsv;
  tsv << "op\tn\tms\twire_bytes\towner_state_bytes\n";
  auto row = [&](const std::string& op, uint64_t n, double ms,
                 uint64_t wire_bytes) {
    tsv << op << "\t" << n << "\t" << std::fixed << std::setprecision(3) << ms
        << "\t" << wire_bytes << "\t" << save_owner_state(owner).size() << "\n";
  };

  // Shared corpus: `pairs` postings spread over `keywords` keywords,
  // 10 per document, indexed in four epochs.
  int per_doc = std::min(10, keywords);
  int docs_total = std::max(1, pairs / per_doc);
  int batches = 4;
  int next_kw = 0, next_doc = 0;
  for (int b = 0; b < batches; ++b) {
    int quota = docs_total / batches + (b < docs_total % batches ? 1 : 0);
    if (quota == 0) continue;
    std::vector<Document> docs;
    for (int d = 0; d < quota; ++d) {
      Document doc;
      doc.ind = "doc-" + std::to_string(next_doc++);
      for (int j = 0; j < per_doc; ++j)
        doc.keywords.push_back("kw-" + std::to_string(next_kw++ % keywords));
      docs.push_back(std::move(doc));
    }
    auto t0 = std::chrono::steady_clock::now();
    AddBatch batch = owner_add(owner, docs, params.genesis + 1 + b, rng);
    uint64_t wire = encode_add(batch, params).size();
    server_apply_add(edb, batch);
    double ms = ms_since(t0);
    if (profile == "add") row("add", uint64_t(quota) * per_doc, ms, wire);
  }

  if (profile == "search") {
    for (int i = 0; i < keywords; i += std::max(1, keywords / 8)) {
      std::string w = "kw-" + std::to_string(i);
      HiddenToken tok = user_search_token(owner.msk, w, params.genesis + batches, rng);
      auto t0 = std::chrono::steady_clock::now();
      std::vector<Bytes> cts = server_search(edb, tok, rng);
      double ms = ms_since(t0);
      row("search", cts.size(), ms,
          encode_search(tok).size() + encode_results(cts).size());
    }
  } else if (profile == "delete") {
    int n = std::min(docs_total, 200);
    auto t0 = std::chrono::steady_clock::now();
    uint64_t wire = 0;
    for (int i = 0; i < n; ++i) {
      Bytes eid = owner_delete(owner.msk, "doc-" + std::to_string(i));
      wire += encode_delete(eid).size();
      server_apply_delete(edb, eid);
    }
    row("delete", uint64_t(n), ms_since(t0), wire);
  } else if (profile == "storage") {
    row("storage", uint64_t(pairs), 0.0, encode_snapshot(edb).size());
  } else if (profile != "add") {
    throw Error("bench: unknown profile: " + profile);
  }

  std::string text = tsv.str();
  write_file_atomic(out_path, Bytes(text.begin(), text.end()));
  std::cout << text;
  std::cout << "nims: wrote " << out_path << "\n";
  return 0;
}

int cmd_selftest() {
  FuzzConfig cfg;
  cfg.seed = uint64_t(::time(nullptr));
  FuzzReport local = run_fuzz(cfg);
  std::cout << "nims: in-process fuzz (seed " << cfg.seed << "): " << local.adds
            << " adds, " << local.deletes << " deletes, " << local.searches
            << " searches, " << local.mismatches << " mismatches\n";

  std::string dir = "/tmp/nims-selftest-" + std::to_string(::getpid());
  ServerStore store(dir, cfg.params);
  Server server(store, "127.0.0.1:0");
  std::thread runner([&] { server.serve(); });
  cfg.server_addr = "127.0.0.1:" + std::to_string(server.port());
  cfg.seed += 1;
  FuzzReport wire = run_fuzz(cfg);
  server.stop();
  runner.join();
  store.close();
  fs::remove_all(dir);
  std::cout << "nims: wire fuzz (seed " << cfg.seed << "): " << wire.adds
            << " adds, " << wire.deletes << " deletes, " << wire.searches
            << " searches, " << wire.mismatches << " mismatches\n";

  if (!local.ok() || !wire.ok()) {
    std::cerr << "nims: SELFTEST FAILED: "
              << (local.ok() ? wire.first_mismatch : local.first_mismatch)
              << "\n";
    return 1;
  }
  std::cout << "nims: selftest passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-interactive multi-client encrypted keyword search"};
  app.require_subcommand(1);

  auto* setup = app.add_subcommand("setup", "create owner state and the shared secret");
  std::string out, msk_out;
  uint32_t iota = 64, kappa = 32;
  int64_t genesis = ::time(nullptr);
  setup->add_option("--out", out, "owner state file")->required();
  setup->add_option("--export-msk", msk_out, "shared secret file for data users")->required();
  setup->add_option("--iota", iota, "keyword fingerprint bits (default 64)");
  setup->add_option("--kappa", kappa, "timestamp bits (default 32)");
  setup->add_option("--genesis", genesis, "epoch origin, seconds (default: now)");

  auto* add = app.add_subcommand("add", "index documents on the server");
  std::string state_path, docs_dir, pairs_path, server_addr;
  add->add_option("--state", state_path, "owner state file")->required();
  auto* docs_opt = add->add_option("--docs", docs_dir, "directory of text documents");
  auto* pairs_opt = add->add_option("--pairs", pairs_path, "file of ind<TAB>w1,w2,... lines");
  docs_opt->excludes(pairs_opt);
  add->add_option("--server", server_addr, "server host:port")
      ->envname("NIMS_SERVER_ADDR")
      ->required();

  auto* del = app.add_subcommand("del", "remove one document from the index");
  std::string del_state, del_ind, del_server;
  del->add_option("--state", del_state, "owner state file")->required();
  del->add_option("--ind", del_ind, "document identifier")->required();
  del->add_option("--server", del_server, "server host:port")
      ->envname("NIMS_SERVER_ADDR")
      ->required();

  auto* search = app.add_subcommand("search", "query by keyword, print identifiers");
  std::string msk_path, keyword, search_server;
  int64_t at = ::time(nullptr);
  search->add_option("--msk", msk_path, "shared secret file")->required();
  search->add_option("--keyword", keyword, "keyword to search")->required();
  search->add_option("--server", search_server, "server host:port")
      ->envname("NIMS_SERVER_ADDR")
      ->required();
  search->add_option("--at", at, "clock for the token, epoch seconds (default: now)");

  auto* serve = app.add_subcommand("serve", "run the storage server");
  std::string store_dir, listen;
  uint32_t srv_iota = 64, srv_kappa = 32;
  serve->add_option("--store", store_dir, "store directory")->required();
  serve->add_option("--listen", listen, "host:port (port 0 = ephemeral)")->required();
  serve->add_option("--iota", srv_iota,
                    "fingerprint bits for a brand-new store (default 64)");
  serve->add_option("--kappa", srv_kappa,
                    "timestamp bits for a brand-new store (default 32)");

  auto* bench = app.add_subcommand("bench", "in-process micro-benchmark, TSV report");
  std::string profile, bench_out = "report.tsv";
  int bench_pairs = 10000, bench_keywords = 100;
  bench->add_option("--profile", profile, "add | search | delete | storage")
      ->required()
      ->check(CLI::IsMember({"add", "search", "delete", "storage"}));
  bench->add_option("--pairs", bench_pairs, "keyword/document pairs (default 10000)");
  bench->add_option("--keywords", bench_keywords, "vocabulary size (default 100)");
  bench->add_option("--out", bench_out, "report path (default report.tsv)");

  app.add_subcommand("selftest", "fuzz the whole stack against a plaintext oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (setup->parsed()) return cmd_setup(out, msk_out, iota, kappa, genesis);
    if (add->parsed()) {
      if (docs_dir.empty() && pairs_path.empty())
        throw Error("add: need --docs or --pairs");
      return cmd_add(state_path, docs_dir, pairs_path, server_addr);
    }
    if (del->parsed()) return cmd_del(del_state, del_ind, del_server);
    if (search->parsed()) return cmd_search(msk_path, keyword, search_server, at);
    if (serve->parsed()) return cmd_serve(store_dir, listen, srv_iota, srv_kappa);
    if (bench->parsed()) return cmd_bench(profile, bench_pairs, bench_keywords, bench_out);
    return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "nims: error: " << e.what() << "\n";
    return 1;
  }
}
