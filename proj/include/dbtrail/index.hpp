#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/node_id.hpp"
#include "dbtrail/vdoc.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dbtrail {

/// Two-step lookup between surrogate node numbers and row keys.
class NodeRegistry {
public:
    /// Throws ValidationError if `key` is already registered.
    NodeId register_node(const RowKey& key);
    /// Throws NotFoundError for an unassigned id.
    const RowKey& resolve_node(NodeId id) const;
    std::optional<NodeId> find(const RowKey& key) const;

    std::size_t size() const { return forward_.size(); }
    bool contains(NodeId id) const { return id.index() < forward_.size(); }

private:
    std::vector<RowKey> forward_;
    std::unordered_map<RowKey, NodeId, RowKeyHash> backward_;
};

struct Posting {
    NodeId node;
    double weight = 0.0;

    bool operator==(const Posting&) const = default;
};

using PostingList = std::vector<Posting>;

/// Finalized, immutable inverted file.
///
/// Keyword postings hold normalized tf.idf weights
///   w(t,d) = (1 + ln tf) * ln(1 + N / n_t) / |d|
/// where |d| makes each document's keyword vector unit length. Pair postings
/// map (container, token) to the token's keyword weight in that document; the
/// containers of a token are its column (attribute) and the row's table.
class InvertedIndex {
public:
    InvertedIndex() = default;
    InvertedIndex(std::map<std::string, PostingList> terms,
                  std::map<std::pair<std::string, std::string>, PostingList> pairs,
                  std::size_t doc_count, std::vector<double> doc_norms);

    /// Sorted by NodeId; empty for an unknown term.
    std::span<const Posting> postings_for_term(std::string_view term) const;
    std::span<const Posting> postings_for_pair(std::string_view attribute, std::string_view term) const;

    std::size_t doc_count() const { return doc_count_; }
    std::size_t term_count() const { return terms_.size(); }
    std::size_t pair_count() const { return pairs_.size(); }
    /// Pre-normalization vector length of a document; 0 for an empty document.
    double doc_norm(NodeId id) const;
    const std::vector<double>& doc_norms() const { return doc_norms_; }

    const std::map<std::string, PostingList>& terms() const { return terms_; }
    const std::map<std::pair<std::string, std::string>, PostingList>& pairs() const { return pairs_; }

    /// Sum of squared keyword weights per node (1 for every non-empty document).
    std::vector<double> squared_weight_sums() const;

    /// Weight of `node` in a sorted posting list, or nullopt.
    static std::optional<double> find(std::span<const Posting> list, NodeId node);

private:
    std::map<std::string, PostingList> terms_;
    std::map<std::pair<std::string, std::string>, PostingList> pairs_;
    std::size_t doc_count_ = 0;
    std::vector<double> doc_norms_;
};

/// Two-phase builder: collect term frequencies, then compute idf and norms in finalize().
class IndexBuilder {
public:
    /// Adds every value token, every attribute name (tf 1 per element) and the
    /// table name as keyword terms, plus (attribute, token) and (table, token) pairs.
    /// Throws ValidationError when `id` was already indexed.
    void index_document(const VirtualDocument& doc, NodeId id);

    InvertedIndex finalize() const;

private:
    struct DocTerms {
        std::map<std::string, std::uint32_t> tf;
        std::vector<std::pair<std::string, std::string>> pairs;
    };
    std::map<NodeId, DocTerms> docs_;
};

/// (1 + ln tf) * ln(1 + N / n_t), before document normalization.
double raw_term_weight(std::uint32_t tf, std::size_t doc_count, std::size_t doc_freq);

} // namespace dbtrail
