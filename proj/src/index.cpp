#include "dbtrail/index.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dbtrail {

NodeId NodeRegistry::register_node(const RowKey& key) {
    if (forward_.size() >= UINT32_MAX) throw Error("node registry exhausted");
    NodeId id(static_cast<std::uint32_t>(forward_.size()));
    if (!backward_.try_emplace(key, id).second) {
        throw ValidationError("row already registered: " + key.to_path());
    }
    forward_.push_back(key);
    return id;
}

const RowKey& NodeRegistry::resolve_node(NodeId id) const {
    if (!contains(id)) throw NotFoundError("unknown node " + std::to_string(id.value));
    return forward_[id.index()];
}

std::optional<NodeId> NodeRegistry::find(const RowKey& key) const {
    auto it = backward_.find(key);
    if (it == backward_.end()) return std::nullopt;
    return it->second;
}

InvertedIndex::InvertedIndex(std::map<std::string, PostingList> terms,
                             std::map<std::pair<std::string, std::string>, PostingList> pairs,
                             std::size_t doc_count, std::vector<double> doc_norms)
    : terms_(std::move(terms)), pairs_(std::move(pairs)), doc_count_(doc_count),
      doc_norms_(std::move(doc_norms)) {}

std::span<const Posting> InvertedIndex::postings_for_term(std::string_view term) const {
    auto it = terms_.find(std::string(term));
    if (it == terms_.end()) return {};
    return it->second;
}

std::span<const Posting> InvertedIndex::postings_for_pair(std::string_view attribute,
                                                          std::string_view term) const {
    auto it = pairs_.find({std::string(attribute), std::string(term)});
    if (it == pairs_.end()) return {};
    return it->second;
}

double InvertedIndex::doc_norm(NodeId id) const {
    return id.index() < doc_norms_.size() ? doc_norms_[id.index()] : 0.0;
}

std::vector<double> InvertedIndex::squared_weight_sums() const {
    std::vector<double> sums(doc_norms_.size(), 0.0);
    for (const auto& [term, list] : terms_) {
        for (const auto& p : list) {
            if (p.node.index() >= sums.size()) sums.resize(p.node.index() + 1, 0.0);
            sums[p.node.index()] += p.weight * p.weight;
        }
    }
    return sums;
}

std::optional<double> InvertedIndex::find(std::span<const Posting> list, NodeId node) {
    auto it = std::lower_bound(list.begin(), list.end(), node,
                               [](const Posting& p, NodeId n) { return p.node < n; });
    if (it == list.end() || it->node != node) return std::nullopt;
    return it->weight;
}

double raw_term_weight(std::uint32_t tf, std::size_t doc_count, std::size_t doc_freq) {
    return (1.0 + std::log(static_cast<double>(tf))) *
           std::log(1.0 + static_cast<double>(doc_count) / static_cast<double>(doc_freq));
}

void IndexBuilder::index_document(const VirtualDocument& doc, NodeId id) {
    auto [it, inserted] = docs_.try_emplace(id);
    if (!inserted) throw ValidationError("node " + std::to_string(id.value) + " indexed twice");
    DocTerms& d = it->second;
    std::string table = to_lower(doc.row_key.table);
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : doc.elements) {
        std::string attr = to_lower(e.attribute);
        for (auto& tok : tokenize(e.text)) {
            ++d.tf[tok.text];
            pairs.emplace(attr, tok.text);
            pairs.emplace(table, tok.text);
        }
        for (auto& tok : tokenize(e.attribute)) ++d.tf[tok.text];
    }
    for (auto& tok : tokenize(doc.row_key.table)) ++d.tf[tok.text];
    d.pairs.assign(pairs.begin(), pairs.end());
}

InvertedIndex IndexBuilder::finalize() const {
    const std::size_t n_docs = docs_.size();
    std::map<std::string, std::size_t> df;
    for (const auto& [id, d] : docs_) {
        for (const auto& [term, tf] : d.tf) ++df[term];
    }

    std::size_t max_node = docs_.empty() ? 0 : docs_.rbegin()->first.index() + 1;
    std::vector<double> norms(max_node, 0.0);
    std::map<std::string, PostingList> terms;
    std::map<std::pair<std::string, std::string>, PostingList> pairs;

    // docs_ iterates in NodeId order, so every list is appended already sorted.
    for (const auto& [id, d] : docs_) {
        double sq = 0.0;
        std::map<std::string_view, double> raw;
        for (const auto& [term, tf] : d.tf) {
            double w = raw_term_weight(tf, n_docs, df.at(term));
            raw.emplace(term, w);
            sq += w * w;
        }
        double norm = std::sqrt(sq);
        norms[id.index()] = norm;
        if (norm == 0.0) continue;
        std::map<std::string_view, double> normalized;
        for (const auto& [term, w] : raw) {
            double nw = w / norm;
            normalized.emplace(term, nw);
            terms[std::string(term)].push_back({id, nw});
        }
        for (const auto& pr : d.pairs) {
            pairs[pr].push_back({id, normalized.at(pr.second)});
        }
    }
    return InvertedIndex(std::move(terms), std::move(pairs), n_docs, std::move(norms));
}

} // namespace dbtrail
