#include "dbtrail/dblp.hpp"
#include "dbtrail/engine.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/eval.hpp"
#include "dbtrail/index_store.hpp"
#include "dbtrail/response.hpp"
#include "dbtrail/service.hpp"
#include "dbtrail/util.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace dbtrail;

namespace {

Service* g_service = nullptr;

void on_signal(int) {
    if (g_service) g_service->stop();
}

int cmd_index(const fs::path& data, const fs::path& out) {
    IndexBundle bundle = build_index_directory(data, out);
    std::cout << "indexed " << bundle.registry.size() << " rows, " << bundle.index.term_count() << " terms, "
              << bundle.graph.fk_edges().size() << " links into " << out.string() << "\n";
    return 0;
}

int cmd_query(const fs::path& index, const std::optional<fs::path>& config, const std::string& q, bool as_json,
              std::optional<std::uint64_t> seed, std::optional<std::size_t> k) {
    SearchEngine engine = open_engine(index, config);
    SearchResult result = engine.search(q, SearchOptions{seed, k});
    if (as_json) {
        std::cout << search_response_json(result).dump(2) << "\n";
    } else {
        std::cout << render_search_text(result);
    }
    return 0;
}

int cmd_serve(fs::path index, const std::optional<fs::path>& config, const std::string& host, int port) {
    if (index.empty()) {
        const char* env = std::getenv("DBTRAIL_INDEX_DIR");
        if (!env || !*env) throw ValidationError("no index directory: pass --index or set DBTRAIL_INDEX_DIR");
        index = env;
    }
    auto service = open_service(index, config);
    g_service = service.get();
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving " << index.string() << " on http://" << host << ":" << port << "\n";
    bool ok = service->listen(host, port);
    g_service = nullptr;
    if (!ok) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

int cmd_eval(const fs::path& index, const std::optional<fs::path>& config, const fs::path& queries,
             std::optional<std::uint64_t> seed, bool as_json, bool timings) {
    SearchEngine engine = open_engine(index, config);
    EvalReport report = run_eval(engine, load_known_items(queries), seed);
    if (as_json) {
        std::cout << eval_report_json(report, timings).dump(2) << "\n";
    } else {
        std::cout << render_eval_text(report, timings);
    }
    return 0;
}

int cmd_convert(const fs::path& in, const fs::path& out) {
    auto result = dblp::convert_file(in, out);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    const auto& schema = result.dataset.schema();
    std::cout << "wrote " << result.dataset.size() << " rows (";
    for (std::size_t t = 0; t < schema.tables().size(); ++t) {
        if (t) std::cout << ", ";
        std::cout << schema.table(t).name << " " << result.dataset.table_size(t);
    }
    std::cout << ") to " << out.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keyword search and trail discovery over relational data"};
    app.require_subcommand(1);

    fs::path data, out, index, queries, in;
    std::optional<fs::path> config;
    std::string q, host = "127.0.0.1";
    bool as_json = false, timings = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    int port = 8080;

    auto* idx = app.add_subcommand("index", "Build an index directory from schema.json + CSV files");
    idx->add_option("--data", data, "Dataset directory")->required();
    idx->add_option("--out", out, "Index directory (replaced atomically)")->required();

    auto* qry = app.add_subcommand("query", "Run one query and print ranked trails");
    qry->add_option("--index", index, "Index directory")->required();
    qry->add_option("--config", config, "Engine config file");
    qry->add_option("--seed", seed, "RNG seed");
    qry->add_option("-k,--k", k, "Trails per page")->check(CLI::PositiveNumber);
    qry->add_flag("--json", as_json, "Emit the JSON search response");
    qry->add_option("query", q, "Query string")->required();

    auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
    srv->add_option("--index", index, "Index directory (default: $DBTRAIL_INDEX_DIR)");
    srv->add_option("--config", config, "Engine config file");
    srv->add_option("--host", host, "Bind address");
    srv->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));

    auto* ev = app.add_subcommand("eval", "Known-item evaluation (reciprocal rank)");
    ev->add_option("--index", index, "Index directory")->required();
    ev->add_option("--config", config, "Engine config file");
    ev->add_option("--queries", queries, "TSV of query, table, pk...")->required();
    ev->add_option("--seed", seed, "RNG seed");
    ev->add_flag("--json", as_json, "Emit JSON");
    ev->add_flag("--timings", timings, "Include per-stage timings (not reproducible)");

    auto* conv = app.add_subcommand("convert-dblp", "Convert DBLP XML into schema.json + CSV files");
    conv->add_option("--in", in, "DBLP XML file")->required();
    conv->add_option("--out", out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*idx) return cmd_index(data, out);
        if (*qry) return cmd_query(index, config, q, as_json, seed, k);
        if (*srv) return cmd_serve(index, config, host, port);
        if (*ev) return cmd_eval(index, config, queries, seed, as_json, timings);
        if (*conv) return cmd_convert(in, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
