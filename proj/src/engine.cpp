#include "dbtrail/engine.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/node_scoring.hpp"
#include "dbtrail/util.hpp"

#include <charconv>
#include <chrono>

namespace dbtrail {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
        std::string s(value);
        std::size_t used = 0;
        try {
            out = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) {
            throw ParseError("engine config: bad number for '" + std::string(key) + "'");
        }
    } else {
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            throw ParseError("engine config: bad integer for '" + std::string(key) + "'");
        }
    }
    return out;
}

} // namespace

void EngineConfig::validate() const {
    best_trail.validate();
    trail_score.validate();
    potential_gain.validate();
    if (page_size < 1) throw ValidationError("engine config: page_size must be >= 1");
}

EngineConfig parse_engine_config(std::string_view text, EngineConfig cfg) {
    std::size_t line_no = 0;
    for (const auto& raw_line : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw_line;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("engine config: line " + std::to_string(line_no) + " is not key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

        if (key == "repetitions") cfg.best_trail.repetitions = parse_number<std::size_t>(key, value);
        else if (key == "explore_iterations") cfg.best_trail.explore_iterations = parse_number<std::size_t>(key, value);
        else if (key == "converge_iterations") cfg.best_trail.converge_iterations = parse_number<std::size_t>(key, value);
        else if (key == "discrimination") cfg.best_trail.discrimination = parse_number<double>(key, value);
        else if (key == "start_points") cfg.best_trail.start_points = parse_number<std::size_t>(key, value);
        else if (key == "max_tree") cfg.best_trail.max_tree = parse_number<std::size_t>(key, value);
        else if (key == "seed") cfg.best_trail.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "length_constant") cfg.trail_score.length_constant = parse_number<double>(key, value);
        else if (key == "position_discount") cfg.trail_score.position_discount = parse_number<double>(key, value);
        else if (key == "repetition_discount") cfg.trail_score.repetition_discount = parse_number<double>(key, value);
        else if (key == "pg_gamma") cfg.potential_gain.gamma = parse_number<double>(key, value);
        else if (key == "pg_max_length") cfg.potential_gain.max_length = parse_number<int>(key, value);
        else if (key == "page_size") cfg.page_size = parse_number<std::size_t>(key, value);
        else if (key.starts_with("title.") && key.size() > 6) {
            std::vector<std::string> cols;
            for (const auto& c : split(value, ',')) {
                auto t = trim(c);
                if (!t.empty()) cols.emplace_back(t);
            }
            cfg.titles[key.substr(6)] = std::move(cols);
        } else {
            throw ParseError("engine config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

EngineConfig load_engine_config(const std::filesystem::path& path, EngineConfig base) {
    return parse_engine_config(read_file(path), std::move(base));
}

SearchEngine::SearchEngine(IndexBundle bundle, EngineConfig config)
    : bundle_(std::move(bundle)), config_(std::move(config)) {
    config_.validate();
    potential_gain_ = dbtrail::potential_gains(bundle_.graph, config_.potential_gain);
}

SearchResult SearchEngine::search(std::string_view query_text, const SearchOptions& options) const {
    const auto t0 = Clock::now();
    SearchResult result;
    result.query = parse_query(query_text);

    BestTrailParams params = config_.best_trail;
    if (options.seed) params.seed = *options.seed;
    const std::size_t page = options.page_size.value_or(config_.page_size);

    NodeScores scores = score_nodes(result.query, bundle_);
    result.starting_points = select_starting_points(scores, potential_gain_, params.start_points);
    const auto t1 = Clock::now();

    std::vector<Trail> candidates =
        run_best_trail(result.starting_points, bundle_.graph, scores, params, config_.trail_score);
    const auto t2 = Clock::now();

    std::vector<Trail> trails = filter_trails(std::move(candidates), bundle_.graph, bundle_.docs, config_.trail_score);
    const std::uint64_t required = result.query.required_mask();
    std::erase_if(trails, [required](const Trail& t) { return (t.terms_union() & required) != required; });
    rank_trails(trails);
    result.total_trails = trails.size();
    if (trails.size() > page) trails.resize(page);
    const auto t3 = Clock::now();

    for (auto& t : trails) {
        ResultTrail rt;
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            ResultNode rn;
            rn.node = t.nodes[i];
            rn.key = bundle_.registry.resolve_node(rn.node);
            rn.summary = summarize_node(rn.node, result.query, bundle_, config_.titles);
            rn.score = t.node_scores[i];
            for (std::size_t b = 0; b < result.query.terms.size(); ++b) {
                if (t.node_terms[i] & (std::uint64_t{1} << b)) rn.matched_terms.push_back(result.query.terms[b].to_string());
            }
            rt.nodes.push_back(std::move(rn));
        }
        rt.trail = std::move(t);
        result.trails.push_back(std::move(rt));
    }
    const auto t4 = Clock::now();

    result.timings = {elapsed_ms(t0, t1), elapsed_ms(t1, t2), elapsed_ms(t2, t3), elapsed_ms(t3, t4)};
    result.total_ms = elapsed_ms(t0, t4);
    return result;
}

SearchEngine open_engine(const std::filesystem::path& index_dir,
                         const std::optional<std::filesystem::path>& config_path) {
    IndexBundle bundle = load_index(index_dir);
    EngineConfig cfg;
    if (std::filesystem::exists(index_dir / "engine.conf")) cfg = load_engine_config(index_dir / "engine.conf");
    if (config_path) cfg = load_engine_config(*config_path, cfg);
    return SearchEngine(std::move(bundle), std::move(cfg));
}

} // namespace dbtrail
