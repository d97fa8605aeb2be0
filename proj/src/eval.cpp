#include "dbtrail/eval.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <algorithm>
#include <cstdio>

namespace dbtrail {

using json = nlohmann::ordered_json;

std::vector<KnownItem> parse_known_items(std::string_view text) {
    std::vector<KnownItem> items;
    std::size_t line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() < 3 || trim(fields[0]).empty() || fields[1].empty()) {
            throw ParseError("known-item line " + std::to_string(line_no) +
                             ": expected query<TAB>table<TAB>pk");
        }
        KnownItem item;
        item.query = fields[0];
        item.target.table = fields[1];
        item.target.pk_values.assign(fields.begin() + 2, fields.end());
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<KnownItem> load_known_items(const std::filesystem::path& path) {
    return parse_known_items(read_file(path));
}

double EvalReport::mean_reciprocal_rank() const {
    if (entries.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : entries) sum += e.reciprocal_rank;
    return sum / static_cast<double>(entries.size());
}

double EvalReport::mean_total_ms() const {
    if (entries.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : entries) sum += e.total_ms;
    return sum / static_cast<double>(entries.size());
}

StageTimings EvalReport::stage_shares() const {
    StageTimings sum;
    double total = 0.0;
    for (const auto& e : entries) {
        sum.score_ms += e.timings.score_ms;
        sum.trail_ms += e.timings.trail_ms;
        sum.filter_ms += e.timings.filter_ms;
        sum.summarize_ms += e.timings.summarize_ms;
        total += e.total_ms;
    }
    if (total <= 0.0) return {};
    return StageTimings{100.0 * sum.score_ms / total, 100.0 * sum.trail_ms / total,
                        100.0 * sum.filter_ms / total, 100.0 * sum.summarize_ms / total};
}

EvalReport run_eval(const SearchEngine& engine, const std::vector<KnownItem>& items,
                    std::optional<std::uint64_t> seed) {
    EvalReport report;
    report.page_size = engine.config().page_size;
    report.seed = seed.value_or(engine.config().best_trail.seed);
    const auto& registry = engine.bundle().registry;

    for (const KnownItem& item : items) {
        RowKey key = item.target;
        auto node = registry.find(key);
        if (!node) {
            for (std::size_t t = 0; t < registry.size() && !node; ++t) {
                // Table names are matched case-insensitively.
                const RowKey& k = registry.resolve_node(NodeId(static_cast<std::uint32_t>(t)));
                if (iequals(k.table, key.table) && k.pk_values == key.pk_values) node = NodeId(static_cast<std::uint32_t>(t));
            }
        }
        if (!node) throw NotFoundError("unknown target row " + key.to_path() + " for query '" + item.query + "'");

        SearchOptions opts;
        opts.seed = report.seed;
        opts.page_size = report.page_size;
        SearchResult result = engine.search(item.query, opts);

        EvalEntry entry;
        entry.item = item;
        entry.trails = result.trails.size();
        entry.timings = result.timings;
        entry.total_ms = result.total_ms;
        for (std::size_t r = 0; r < result.trails.size(); ++r) {
            const auto& nodes = result.trails[r].trail.nodes;
            if (std::find(nodes.begin(), nodes.end(), *node) != nodes.end()) {
                entry.rank = r + 1;
                entry.reciprocal_rank = 1.0 / static_cast<double>(r + 1);
                break;
            }
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

namespace {

json timings_json(const StageTimings& t) {
    return json{{"score", t.score_ms}, {"trail", t.trail_ms}, {"filter", t.filter_ms}, {"summarize", t.summarize_ms}};
}

} // namespace

json eval_report_json(const EvalReport& report, bool include_timings) {
    json queries = json::array();
    for (const auto& e : report.entries) {
        json q;
        q["query"] = e.item.query;
        q["target"] = e.item.target.to_path();
        q["rank"] = e.rank;
        q["reciprocal_rank"] = e.reciprocal_rank;
        q["trails"] = e.trails;
        if (include_timings) {
            q["total_ms"] = e.total_ms;
            q["stage_ms"] = timings_json(e.timings);
        }
        queries.push_back(std::move(q));
    }
    json out;
    out["seed"] = report.seed;
    out["page_size"] = report.page_size;
    out["queries"] = std::move(queries);
    json agg;
    agg["count"] = report.entries.size();
    agg["mean_reciprocal_rank"] = report.mean_reciprocal_rank();
    if (include_timings) {
        agg["mean_total_ms"] = report.mean_total_ms();
        agg["stage_share_percent"] = timings_json(report.stage_shares());
    }
    out["aggregate"] = std::move(agg);
    return out;
}

std::string render_eval_text(const EvalReport& report, bool include_timings) {
    std::string out;
    char buf[512];
    std::size_t width = 5;
    for (const auto& e : report.entries) width = std::max(width, e.item.query.size());

    std::snprintf(buf, sizeof buf, "%-*s  %6s  %6s", static_cast<int>(width), "query", "rank", "1/rank");
    out += buf;
    if (include_timings) out += "  total_ms";
    out += '\n';
    for (const auto& e : report.entries) {
        std::string rank = e.rank ? std::to_string(e.rank) : "-";
        std::snprintf(buf, sizeof buf, "%-*s  %6s  %6.3f", static_cast<int>(width), e.item.query.c_str(), rank.c_str(),
                      e.reciprocal_rank);
        out += buf;
        if (include_timings) {
            std::snprintf(buf, sizeof buf, "  %8.2f", e.total_ms);
            out += buf;
        }
        out += '\n';
    }
    std::snprintf(buf, sizeof buf, "\nqueries: %zu  seed: %llu  page: %zu\nmean 1/rank: %.4f\n", report.entries.size(),
                  static_cast<unsigned long long>(report.seed), report.page_size, report.mean_reciprocal_rank());
    out += buf;
    if (include_timings) {
        StageTimings s = report.stage_shares();
        std::snprintf(buf, sizeof buf,
                      "mean time: %.2f ms\nstage share: score %.1f%%, trail %.1f%%, filter %.1f%%, summarize %.1f%%\n",
                      report.mean_total_ms(), s.score_ms, s.trail_ms, s.filter_ms, s.summarize_ms);
        out += buf;
    }
    return out;
}

} // namespace dbtrail
