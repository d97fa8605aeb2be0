#pragma once

#include "dbtrail/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

struct KnownItem {
    std::string query;
    RowKey target;
};

/// TSV lines `query<TAB>table<TAB>pk[<TAB>pk...]`; blank lines and lines
/// starting with '#' are ignored.
std::vector<KnownItem> parse_known_items(std::string_view text);
std::vector<KnownItem> load_known_items(const std::filesystem::path& path);

struct EvalEntry {
    KnownItem item;
    std::size_t rank = 0; ///< 1-based rank of the first trail holding the target; 0 if absent
    double reciprocal_rank = 0.0;
    std::size_t trails = 0;
    StageTimings timings;
    double total_ms = 0.0;
};

struct EvalReport {
    std::vector<EvalEntry> entries;
    std::size_t page_size = 10;
    std::uint64_t seed = 0;

    double mean_reciprocal_rank() const;
    double mean_total_ms() const;
    /// Percentage of summed wall time spent in each stage, in StageTimings order.
    StageTimings stage_shares() const;
};

/// Runs each query in order with `seed` and the engine's page size as the
/// first result page. Throws NotFoundError for a target absent from the index.
EvalReport run_eval(const SearchEngine& engine, const std::vector<KnownItem>& items,
                    std::optional<std::uint64_t> seed = std::nullopt);

/// Timings vary run to run, so they are only emitted on request.
nlohmann::ordered_json eval_report_json(const EvalReport& report, bool include_timings = false);
std::string render_eval_text(const EvalReport& report, bool include_timings = false);

} // namespace dbtrail
