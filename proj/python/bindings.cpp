#include "dbtrail/dblp.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/eval.hpp"
#include "dbtrail/index_store.hpp"
#include "dbtrail/query.hpp"
#include "dbtrail/response.hpp"
#include "dbtrail/service.hpp"
#include "dbtrail/vdoc.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace dbtrail;

namespace {

py::object to_py(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::dict reply_dict(const HttpReply& r) {
    py::dict d;
    d["status"] = r.status;
    d["content_type"] = r.content_type;
    d["body"] = r.body;
    return d;
}

} // namespace

PYBIND11_MODULE(_dbtrail, m) {
    m.doc() = "Keyword search over relational data, returning trails of linked rows";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());

    m.def("tokenize", [](std::string_view text) { return tokenize_words(text); }, py::arg("text"));
    m.def("normalize_query", [](std::string_view text) { return parse_query(text).to_string(); }, py::arg("text"));

    m.def(
        "convert_dblp",
        [](const std::filesystem::path& xml, const std::filesystem::path& out) {
            py::gil_scoped_release release;
            return dblp::convert_file(xml, out).warnings;
        },
        py::arg("xml_path"), py::arg("out_dir"), "Writes schema.json and CSVs; returns conversion warnings.");

    m.def(
        "build_index",
        [](const std::filesystem::path& data, const std::filesystem::path& out) {
            IndexBundle b = [&] {
                py::gil_scoped_release release;
                return build_index_directory(data, out);
            }();
            py::dict d;
            d["nodes"] = b.registry.size();
            d["terms"] = b.index.term_count();
            d["pairs"] = b.index.pair_count();
            d["fk_edges"] = b.graph.fk_edges().size();
            return d;
        },
        py::arg("data_dir"), py::arg("index_dir"));

    py::class_<Service>(m, "Engine")
        .def(py::init([](const std::filesystem::path& index_dir, std::optional<std::filesystem::path> config) {
                 return open_service(index_dir, config);
             }),
             py::arg("index_dir"), py::arg("config") = std::nullopt)
        .def(
            "search",
            [](const Service& s, std::string_view q, std::optional<std::uint64_t> seed, std::optional<std::size_t> k,
               bool timings) {
                SearchOptions o{seed, k};
                SearchResult r = [&] {
                    py::gil_scoped_release release;
                    return s.engine().search(q, o);
                }();
                return to_py(search_response_json(r, timings));
            },
            py::arg("query"), py::arg("seed") = std::nullopt, py::arg("k") = std::nullopt, py::arg("timings") = false)
        .def(
            "row", [](const Service& s, std::string_view path, bool xml) { return reply_dict(s.row(path, xml)); },
            py::arg("path"), py::arg("xml") = false)
        .def(
            "backlinks", [](const Service& s, std::string_view path) { return reply_dict(s.backlinks(path)); },
            py::arg("path"))
        .def("stats", [](const Service& s) { return reply_dict(s.stats()); })
        .def(
            "eval",
            [](const Service& s, const std::filesystem::path& queries, std::optional<std::uint64_t> seed,
               bool timings) {
                auto items = load_known_items(queries);
                EvalReport r = [&] {
                    py::gil_scoped_release release;
                    return run_eval(s.engine(), items, seed);
                }();
                return to_py(eval_report_json(r, timings));
            },
            py::arg("queries"), py::arg("seed") = std::nullopt, py::arg("timings") = false)
        .def(
            "row_store_access",
            [](const Service& s) {
                auto a = s.rows().access_stats();
                return py::make_tuple(a.keyed_lookups, a.scans);
            },
            "(keyed lookups, scans) since the engine was opened.");
}
