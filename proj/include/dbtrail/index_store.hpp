#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/doc_store.hpp"
#include "dbtrail/index.hpp"
#include "dbtrail/link_graph.hpp"

#include <filesystem>

namespace dbtrail {

/// Everything a query needs, built once from a dataset and then read-only.
struct IndexBundle {
    NodeRegistry registry;
    InvertedIndex index;
    LinkGraph graph;
    DocStore docs;
};

/// Registers every row (table order, then row order), indexes its virtual
/// document, and builds the link graph.
IndexBundle build_index(const Dataset& dataset);

inline constexpr int kIndexFormatVersion = 1;

/// Writes registry.tsv, lexicon.tsv, postings.bin, pairs.bin, graph.bin,
/// docs.bin and stats.json into `dir` (created if needed).
void save_index(const IndexBundle& bundle, const std::filesystem::path& dir);

IndexBundle load_index(const std::filesystem::path& dir);

/// Builds an index for the dataset under `data_dir` and atomically replaces
/// `index_dir`. A copy of the rows goes to `index_dir/data` for row display,
/// and `data_dir/engine.conf` is carried over when present.
IndexBundle build_index_directory(const std::filesystem::path& data_dir,
                                  const std::filesystem::path& index_dir);

} // namespace dbtrail
