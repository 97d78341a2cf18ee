// Python bindings. Everything that crosses the boundary travels as the
// same byte encodings the TCP protocol uses, so the Python surface stays
// small: Owner mints batches and delete tokens, User mints search tokens
// and decrypts, Database is an in-process server.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "nims/oracle.hpp"
#include "nims/roles.hpp"
#include "nims/tokenize.hpp"
#include "nims/wire.hpp"

namespace py = pybind11;
using namespace nims;

namespace {

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }
py::bytes from_bytes(const Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::unique_ptr<Rng> make_rng(std::optional<uint64_t> seed) {
  if (seed) return std::make_unique<SeededRng>(*seed);
  return std::make_unique<SystemRng>();
}

struct PyOwner {
  OwnerState st;

  static PyOwner create(const SchemeParams& params, std::optional<uint64_t> seed) {
    auto rng = make_rng(seed);
    auto [owner, edb] = owner_setup(params, *rng);
    (void)edb;
    return PyOwner{std::move(owner)};
  }

  py::bytes add(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                int64_t clock, std::optional<uint64_t> seed) {
    std::vector<Document> ds;
    ds.reserve(docs.size());
    for (const auto& [ind, kws] : docs) ds.push_back(Document{ind, kws});
    auto rng = make_rng(seed);
    AddBatch batch = owner_add(st, ds, clock, *rng);
    return from_bytes(encode_add(batch, st.msk.params));
  }

  py::bytes delete_token(const std::string& ind) const {
    return from_bytes(owner_delete(st.msk, ind));
  }

  py::bytes save() const { return from_bytes(save_owner_state(st)); }
  py::bytes export_secret() const { return from_bytes(save_master_secret(st.msk)); }
};

struct PyUser {
  MasterSecret msk;

  explicit PyUser(const std::string& secret_blob)
      : msk(load_master_secret(to_bytes(secret_blob))) {}

  py::bytes token(const std::string& keyword, int64_t clock,
                  std::optional<uint64_t> seed) const {
    auto rng = make_rng(seed);
    return from_bytes(encode_search(user_search_token(msk, keyword, clock, *rng)));
  }

  std::vector<std::string> decrypt(const std::string& results_blob) const {
    return user_decrypt_results(msk, decode_results(to_bytes(results_blob)));
  }
};

struct PyDatabase {
  EncryptedDatabase edb;
  SearchStats last_stats;

  explicit PyDatabase(const SchemeParams& params) { edb.params = params; }

  std::pair<uint32_t, uint32_t> apply_add(const std::string& blob) {
    AddBatch batch = decode_add(to_bytes(blob), edb.params);
    server_apply_add(edb, batch);
    return {uint32_t(batch.dic_entries.size()), uint32_t(batch.new_mat.size())};
  }

  bool apply_delete(const std::string& token) {
    return server_apply_delete(edb, to_bytes(token));
  }

  py::bytes search(const std::string& token_blob, std::optional<uint64_t> seed) {
    HiddenToken token = decode_search(to_bytes(token_blob), edb.params);
    auto rng = make_rng(seed);
    std::vector<Bytes> cts = server_search(edb, token, *rng, &last_stats);
    return from_bytes(encode_results(cts));
  }
};

}  // namespace

PYBIND11_MODULE(_nims, m) {
  m.doc() = "forward/backward-private multi-client encrypted keyword search";

  py::register_exception<Error>(m, "NimsError");

  py::class_<SchemeParams>(m, "Params")
      .def(py::init([](uint32_t iota, uint32_t kappa, int64_t genesis) {
             SchemeParams p{256, iota, kappa, genesis};
             p.validate();
             return p;
           }),
           py::arg("iota") = 64, py::arg("kappa") = 32, py::arg("genesis") = 0)
      .def_readonly("lambda_", &SchemeParams::lambda)
      .def_readonly("iota", &SchemeParams::iota)
      .def_readonly("kappa", &SchemeParams::kappa)
      .def_readonly("genesis", &SchemeParams::genesis)
      .def_property_readonly("dim", &SchemeParams::dim)
      .def("__repr__", [](const SchemeParams& p) {
        return "Params(iota=" + std::to_string(p.iota) +
               ", kappa=" + std::to_string(p.kappa) +
               ", genesis=" + std::to_string(p.genesis) + ")";
      });

  py::class_<PyOwner>(m, "Owner")
      .def(py::init(&PyOwner::create), py::arg("params"),
           py::arg("seed") = py::none())
      .def_static("load",
                  [](const std::string& blob) {
                    return PyOwner{load_owner_state(to_bytes(blob))};
                  },
                  py::arg("blob"))
      .def("add", &PyOwner::add, py::arg("docs"), py::arg("clock"),
           py::arg("seed") = py::none(),
           "Index documents: [(ind, [keyword, ...]), ...] -> wire batch")
      .def("delete_token", &PyOwner::delete_token, py::arg("ind"))
      .def("save", &PyOwner::save)
      .def("export_secret", &PyOwner::export_secret)
      .def_property_readonly("epoch", [](const PyOwner& o) { return o.st.ctr; })
      .def_property_readonly("params", [](const PyOwner& o) { return o.st.msk.params; });

  py::class_<PyUser>(m, "User")
      .def(py::init<const std::string&>(), py::arg("secret_blob"))
      .def("token", &PyUser::token, py::arg("keyword"), py::arg("clock"),
           py::arg("seed") = py::none(),
           "Mint a search token usable for timestamps up to `clock`")
      .def("decrypt", &PyUser::decrypt, py::arg("results_blob"))
      .def_property_readonly("params", [](const PyUser& u) { return u.msk.params; });

  py::class_<PyDatabase>(m, "Database")
      .def(py::init<const SchemeParams&>(), py::arg("params"))
      .def("apply_add", &PyDatabase::apply_add, py::arg("blob"),
           "Merge a wire batch; returns (entries, matrices)")
      .def("apply_delete", &PyDatabase::apply_delete, py::arg("token"))
      .def("search", &PyDatabase::search, py::arg("token_blob"),
           py::arg("seed") = py::none())
      .def_property_readonly("entries",
                             [](const PyDatabase& d) { return d.edb.cdb.size(); })
      .def_property_readonly("matrices",
                             [](const PyDatabase& d) { return d.edb.mat.size(); })
      .def_property_readonly("epoch",
                             [](const PyDatabase& d) { return d.edb.epoch_ts; })
      .def_property_readonly("last_probes",
                             [](const PyDatabase& d) { return d.last_stats.probes; })
      .def_property_readonly("last_chain_steps", [](const PyDatabase& d) {
        return d.last_stats.chain_steps;
      });

  m.def("tokenize", &tokenize_document, py::arg("text"),
        "Lowercase, split on non-alphanumerics, drop words under 3 chars");
}
