#pragma once

#include "dbtrail/node_id.hpp"
#include "dbtrail/vdoc.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

/// Index-side copy of each node's document text, used for summaries and
/// duplicate detection so that queries never read the row store.
class DocStore {
public:
    struct Entry {
        std::vector<VirtualDocument::Element> elements;
        std::uint64_t digest = 0; ///< FNV-1a of the serialized virtual document
    };

    /// Documents must arrive in NodeId order (dense from 0).
    void add(NodeId id, const VirtualDocument& doc);

    const Entry& get(NodeId id) const;
    std::size_t size() const { return entries_.size(); }

    std::string serialize() const;
    static DocStore deserialize(std::string_view bytes);

private:
    std::vector<Entry> entries_;
};

} // namespace dbtrail
