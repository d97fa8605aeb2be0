#pragma once

#include "dbtrail/best_trail.hpp"
#include "dbtrail/index_store.hpp"
#include "dbtrail/link_graph.hpp"
#include "dbtrail/query.hpp"
#include "dbtrail/summary.hpp"
#include "dbtrail/trail.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

struct EngineConfig {
    BestTrailParams best_trail;
    TrailScoreParams trail_score;
    PotentialGainParams potential_gain;
    std::size_t page_size = 10;
    TitleColumns titles;

    void validate() const;
};

/// Parses key = value lines ('#' starts a comment). Recognised keys:
///   repetitions, explore_iterations, converge_iterations, discrimination,
///   start_points, max_tree, seed, length_constant, position_discount,
///   repetition_discount, pg_gamma, pg_max_length, page_size,
///   title.<table> = column[,column...]
/// Unknown keys and unparsable values throw ParseError.
EngineConfig parse_engine_config(std::string_view text, EngineConfig base = {});
EngineConfig load_engine_config(const std::filesystem::path& path, EngineConfig base = {});

struct StageTimings {
    double score_ms = 0.0;
    double trail_ms = 0.0;
    double filter_ms = 0.0;
    double summarize_ms = 0.0;

    double sum() const { return score_ms + trail_ms + filter_ms + summarize_ms; }
};

struct ResultNode {
    NodeId node;
    RowKey key;
    Summary summary;
    std::vector<std::string> matched_terms;
    double score = 0.0;
};

struct ResultTrail {
    Trail trail;
    std::vector<ResultNode> nodes;
};

struct SearchResult {
    Query query;
    std::vector<NodeId> starting_points;
    std::vector<ResultTrail> trails; ///< first page, in rank order
    std::size_t total_trails = 0;   ///< trails ranked before paging
    StageTimings timings;
    double total_ms = 0.0;
};

struct SearchOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> page_size;
};

/// Query pipeline over an immutable index: parse, score nodes, pick starting
/// points, grow trails, filter and rank, summarize. Never reads the row store.
/// search() is const and safe to call concurrently.
class SearchEngine {
public:
    SearchEngine(IndexBundle bundle, EngineConfig config);

    /// Throws ParseError for an empty or malformed query.
    SearchResult search(std::string_view query_text, const SearchOptions& options = {}) const;

    const IndexBundle& bundle() const { return bundle_; }
    const EngineConfig& config() const { return config_; }
    const std::vector<double>& potential_gains() const { return potential_gain_; }

private:
    IndexBundle bundle_;
    EngineConfig config_;
    std::vector<double> potential_gain_;
};

/// Loads index files plus `engine.conf` from the index directory when present.
SearchEngine open_engine(const std::filesystem::path& index_dir,
                         const std::optional<std::filesystem::path>& config_path = std::nullopt);

} // namespace dbtrail
