#include "dbtrail/index_store.hpp"

#include "dbtrail/binio.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <json.hpp>

#include <system_error>

namespace dbtrail {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kRegistryHeader = "#dbtrail-registry\t1";
constexpr std::string_view kLexiconHeader = "#dbtrail-lexicon\t1";
constexpr std::string_view kPostingsMagic = "DBTPOST1";
constexpr std::string_view kPairsMagic = "DBTPAIR1";

std::string tsv_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string tsv_unescape(std::string_view s, const char* file) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (++i == s.size()) throw ParseError(std::string(file) + ": dangling escape");
        switch (s[i]) {
        case '\\': out.push_back('\\'); break;
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        default: throw ParseError(std::string(file) + ": bad escape");
        }
    }
    return out;
}

std::vector<std::string> tsv_lines(std::string_view text, std::string_view header, const char* file) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != header) {
        throw ParseError(std::string(file) + ": missing or unsupported header");
    }
    lines.erase(lines.begin());
    return lines;
}

void write_postings(binio::Writer& w, const PostingList& list) {
    for (const auto& p : list) {
        w.u32(p.node.value);
        w.f64(p.weight);
    }
}

PostingList read_postings(binio::Reader& r, std::size_t count) {
    PostingList list;
    list.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        NodeId id(r.u32());
        double w = r.f64();
        if (!list.empty() && !(list.back().node < id)) throw ParseError("posting list not strictly sorted");
        list.push_back({id, w});
    }
    return list;
}

} // namespace

IndexBundle build_index(const Dataset& dataset) {
    IndexBundle bundle;
    IndexBuilder builder;
    dataset.for_each_row([&](const Row& row) {
        VirtualDocument doc = build_virtual_document(dataset.schema(), row);
        NodeId id = bundle.registry.register_node(doc.row_key);
        builder.index_document(doc, id);
        bundle.docs.add(id, doc);
    });
    bundle.index = builder.finalize();
    bundle.graph = build_link_graph(dataset, bundle.registry);
    return bundle;
}

void save_index(const IndexBundle& b, const fs::path& dir) {
    fs::create_directories(dir);

    std::string reg(kRegistryHeader);
    reg.push_back('\n');
    for (std::size_t i = 0; i < b.registry.size(); ++i) {
        const RowKey& k = b.registry.resolve_node(NodeId(static_cast<std::uint32_t>(i)));
        reg += std::to_string(i) + "\t" + tsv_escape(k.table);
        for (const auto& v : k.pk_values) reg += "\t" + tsv_escape(v);
        reg.push_back('\n');
    }
    write_file(dir / "registry.tsv", reg);

    std::string lex(kLexiconHeader);
    lex.push_back('\n');
    binio::Writer post;
    post.bytes(kPostingsMagic);
    std::uint64_t offset = 0;
    for (const auto& [term, list] : b.index.terms()) {
        lex += tsv_escape(term) + "\t" + std::to_string(offset) + "\t" + std::to_string(list.size()) + "\n";
        write_postings(post, list);
        offset += list.size();
    }
    post.u32(static_cast<std::uint32_t>(b.index.doc_norms().size()));
    for (double n : b.index.doc_norms()) post.f64(n);
    write_file(dir / "lexicon.tsv", lex);
    write_file(dir / "postings.bin", post.data());

    binio::Writer pairs;
    pairs.bytes(kPairsMagic);
    pairs.u32(static_cast<std::uint32_t>(b.index.pairs().size()));
    for (const auto& [key, list] : b.index.pairs()) {
        pairs.str(key.first);
        pairs.str(key.second);
        pairs.u32(static_cast<std::uint32_t>(list.size()));
        write_postings(pairs, list);
    }
    write_file(dir / "pairs.bin", pairs.data());

    write_file(dir / "graph.bin", b.graph.serialize());
    write_file(dir / "docs.bin", b.docs.serialize());

    nlohmann::ordered_json stats;
    stats["format"] = "dbtrail-index";
    stats["version"] = kIndexFormatVersion;
    stats["doc_count"] = b.index.doc_count();
    stats["node_count"] = b.registry.size();
    stats["term_count"] = b.index.term_count();
    stats["pair_count"] = b.index.pair_count();
    stats["fk_edge_count"] = b.graph.fk_edges().size();
    stats["adjacency_entries"] = b.graph.directed_entry_count();
    write_file(dir / "stats.json", stats.dump(2) + "\n");
}

IndexBundle load_index(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw NotFoundError("index directory not found: " + dir.string());
    nlohmann::json stats;
    try {
        stats = nlohmann::json::parse(read_file(dir / "stats.json"));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("stats.json: ") + e.what());
    }
    if (stats.value("format", "") != "dbtrail-index" || stats.value("version", 0) != kIndexFormatVersion) {
        throw ParseError("stats.json: unsupported index format");
    }

    IndexBundle b;
    for (const auto& line : tsv_lines(read_file(dir / "registry.tsv"), kRegistryHeader, "registry.tsv")) {
        auto cols = split(line, '\t');
        if (cols.size() < 2) throw ParseError("registry.tsv: short line");
        RowKey key;
        key.table = tsv_unescape(cols[1], "registry.tsv");
        for (std::size_t i = 2; i < cols.size(); ++i) key.pk_values.push_back(tsv_unescape(cols[i], "registry.tsv"));
        NodeId id = b.registry.register_node(key);
        if (std::to_string(id.value) != cols[0]) throw ParseError("registry.tsv: ids not dense");
    }

    std::string post_bytes = read_file(dir / "postings.bin");
    binio::Reader post(post_bytes, "postings.bin");
    post.expect_magic(kPostingsMagic);
    std::map<std::string, PostingList> terms;
    std::uint64_t expected_offset = 0;
    for (const auto& line : tsv_lines(read_file(dir / "lexicon.tsv"), kLexiconHeader, "lexicon.tsv")) {
        auto cols = split(line, '\t');
        if (cols.size() != 3) throw ParseError("lexicon.tsv: expected 3 columns");
        std::uint64_t offset = std::stoull(cols[1]);
        std::size_t count = std::stoull(cols[2]);
        if (offset != expected_offset) throw ParseError("lexicon.tsv: offsets out of sequence");
        terms.emplace(tsv_unescape(cols[0], "lexicon.tsv"), read_postings(post, count));
        expected_offset += count;
    }
    std::vector<double> norms(post.u32());
    for (auto& n : norms) n = post.f64();
    post.expect_end();

    std::string pair_bytes = read_file(dir / "pairs.bin");
    binio::Reader pr(pair_bytes, "pairs.bin");
    pr.expect_magic(kPairsMagic);
    std::map<std::pair<std::string, std::string>, PostingList> pairs;
    std::uint32_t n_pairs = pr.u32();
    for (std::uint32_t i = 0; i < n_pairs; ++i) {
        std::string attr = pr.str();
        std::string term = pr.str();
        std::uint32_t count = pr.u32();
        pairs.emplace(std::make_pair(std::move(attr), std::move(term)), read_postings(pr, count));
    }
    pr.expect_end();

    b.index = InvertedIndex(std::move(terms), std::move(pairs), stats.at("doc_count").get<std::size_t>(),
                            std::move(norms));
    b.graph = LinkGraph::deserialize(read_file(dir / "graph.bin"));
    b.docs = DocStore::deserialize(read_file(dir / "docs.bin"));
    if (b.graph.node_count() != b.registry.size() || b.docs.size() != b.registry.size()) {
        throw ParseError("index files disagree on node count");
    }
    return b;
}

IndexBundle build_index_directory(const fs::path& data_dir, const fs::path& index_dir) {
    SchemaDescriptor schema = load_schema(data_dir / "schema.json");
    Dataset dataset = load_dataset(schema, data_dir);
    IndexBundle bundle = build_index(dataset);

    fs::path target = fs::absolute(index_dir).lexically_normal();
    if (target.filename().empty()) target = target.parent_path();
    fs::path staging = target;
    staging += ".tmp";
    fs::path retired = target;
    retired += ".old";
    fs::remove_all(staging);
    fs::remove_all(retired);

    save_index(bundle, staging);
    write_dataset(dataset, staging / "data");
    if (fs::exists(data_dir / "engine.conf")) {
        fs::copy_file(data_dir / "engine.conf", staging / "engine.conf");
    }
    if (fs::exists(target)) fs::rename(target, retired);
    fs::rename(staging, target);
    fs::remove_all(retired);
    return bundle;
}

} // namespace dbtrail
