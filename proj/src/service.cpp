#include "dbtrail/service.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/response.hpp"
#include "dbtrail/util.hpp"
#include "dbtrail/vdoc.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>

namespace dbtrail {

using json = nlohmann::ordered_json;

namespace {

HttpReply json_reply(int status, const json& body) {
    return HttpReply{status, body.dump() + "\n", "application/json; charset=utf-8"};
}

HttpReply error_reply(int status, const std::string& message) {
    return json_reply(status, json{{"error", message}});
}

template <typename T>
bool parse_param(const std::map<std::string, std::string>& params, const char* name, std::optional<T>& out) {
    auto it = params.find(name);
    if (it == params.end() || it->second.empty()) return true;
    T v{};
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return false;
    out = v;
    return true;
}

json row_ref(const RowKey& key) {
    return json{{"table", key.table}, {"key", key.pk_values}, {"url", row_url(key)}};
}

} // namespace

Service::Service(SearchEngine engine, Dataset rows)
    : engine_(std::move(engine)), rows_(std::move(rows)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() = default;

HttpReply Service::search(const std::map<std::string, std::string>& params) const {
    auto q = params.find("q");
    if (q == params.end() || trim(q->second).empty()) return error_reply(400, "missing or empty query parameter q");
    SearchOptions opts;
    std::optional<std::size_t> k;
    if (!parse_param(params, "k", k) || (k && *k == 0)) return error_reply(400, "k must be a positive integer");
    if (!parse_param(params, "seed", opts.seed)) return error_reply(400, "seed must be an unsigned integer");
    opts.page_size = k;
    try {
        SearchResult result = engine_.search(q->second, opts);
        return json_reply(200, search_response_json(result));
    } catch (const ParseError& e) {
        return error_reply(400, e.what());
    }
}

HttpReply Service::row(std::string_view path, bool want_xml) const {
    RowKey key;
    try {
        key = RowKey::from_path(path);
    } catch (const ParseError& e) {
        return error_reply(400, e.what());
    }
    const Row* row = rows_.find(key);
    if (!row) return error_reply(404, "no row " + key.to_path());

    const SchemaDescriptor& schema = rows_.schema();
    const TableDef& t = schema.table(row->table);
    key = rows_.key_of(*row);
    if (want_xml) {
        return HttpReply{200, build_virtual_document(schema, *row).to_xml(), "application/xml; charset=utf-8"};
    }

    const auto& registry = engine_.bundle().registry;
    json columns = json::array();
    json outlinks = json::array();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        json col;
        col["name"] = t.columns[i].name;
        col["value"] = row->values[i] ? json(*row->values[i]) : json(nullptr);
        for (const auto& fk : t.foreign_keys) {
            if (fk.source_columns[0] != t.columns[i].name || !row->values[i]) continue;
            RowKey target{schema.table(fk.target_table).name, {*row->values[i]}};
            if (registry.find(target)) {
                col["link"] = row_url(target);
                outlinks.push_back(json{{"column", t.columns[i].name}, {"url", row_url(target)}});
            }
        }
        columns.push_back(std::move(col));
    }
    json body;
    body["table"] = key.table;
    body["key"] = key.pk_values;
    body["url"] = row_url(key);
    body["columns"] = std::move(columns);
    body["outlinks"] = std::move(outlinks);
    body["backlinks"] = "/backlinks/" + key.to_path();
    if (auto node = registry.find(key)) body["node_id"] = node->value;
    return json_reply(200, body);
}

HttpReply Service::backlinks(std::string_view path) const {
    RowKey key;
    try {
        key = RowKey::from_path(path);
    } catch (const ParseError& e) {
        return error_reply(400, e.what());
    }
    const auto& bundle = engine_.bundle();
    if (auto idx = rows_.schema().table_index(key.table)) key.table = rows_.schema().table(*idx).name;
    auto node = bundle.registry.find(key);
    if (!node) return error_reply(404, "no row " + key.to_path());
    json refs = json::array();
    for (NodeId n : bundle.graph.backlinks(*node)) refs.push_back(row_ref(bundle.registry.resolve_node(n)));
    return json_reply(200, json{{"row", row_url(key)}, {"backlinks", std::move(refs)}});
}

HttpReply Service::stats() const {
    const auto& b = engine_.bundle();
    json body;
    body["nodes"] = b.registry.size();
    body["documents"] = b.index.doc_count();
    body["terms"] = b.index.term_count();
    body["pairs"] = b.index.pair_count();
    body["fk_edges"] = b.graph.fk_edges().size();
    body["adjacency_entries"] = b.graph.directed_entry_count();
    return json_reply(200, body);
}

void Service::install_routes() {
    auto send = [](httplib::Response& res, const HttpReply& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server_->set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            send(res, error_reply(500, e.what()));
        } catch (...) {
            send(res, error_reply(500, "internal error"));
        }
    });
    // Paths are taken from the raw request target: httplib decodes req.path,
    // which would turn an encoded '/' inside a key into a separator.
    auto raw_suffix = [](const httplib::Request& req, std::string_view prefix) {
        std::string_view target = req.target;
        if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
        target.remove_prefix(std::min(prefix.size(), target.size()));
        return std::string(target);
    };

    server_->Get("/search", [this, send](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> params;
        for (const auto& [k, v] : req.params) params.emplace(k, v);
        send(res, search(params));
    });
    server_->Get(R"(/row/.+)", [this, send, raw_suffix](const httplib::Request& req, httplib::Response& res) {
        bool xml = req.get_header_value("Accept").find("application/xml") != std::string::npos;
        send(res, row(raw_suffix(req, "/row/"), xml));
    });
    server_->Get(R"(/backlinks/.+)", [this, send, raw_suffix](const httplib::Request& req, httplib::Response& res) {
        send(res, backlinks(raw_suffix(req, "/backlinks/")));
    });
    server_->Get("/stats", [this, send](const httplib::Request&, httplib::Response& res) { send(res, stats()); });
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

std::unique_ptr<Service> open_service(const std::filesystem::path& index_dir,
                                      const std::optional<std::filesystem::path>& config_path) {
    SearchEngine engine = open_engine(index_dir, config_path);
    SchemaDescriptor schema = load_schema(index_dir / "data" / "schema.json");
    Dataset rows = load_dataset(schema, index_dir / "data");
    rows.reset_access_stats();
    return std::make_unique<Service>(std::move(engine), std::move(rows));
}

} // namespace dbtrail
