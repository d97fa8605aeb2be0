#include "dbtrail/doc_store.hpp"

#include "dbtrail/binio.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

namespace dbtrail {

namespace {
constexpr std::string_view kDocsMagic = "DBTDOCS1";
}

void DocStore::add(NodeId id, const VirtualDocument& doc) {
    if (id.index() != entries_.size()) {
        throw ValidationError("doc store: node " + std::to_string(id.value) + " added out of order");
    }
    entries_.push_back({doc.elements, fnv1a64(doc.to_xml())});
}

const DocStore::Entry& DocStore::get(NodeId id) const {
    if (id.index() >= entries_.size()) throw NotFoundError("doc store: unknown node " + std::to_string(id.value));
    return entries_[id.index()];
}

std::string DocStore::serialize() const {
    binio::Writer w;
    w.bytes(kDocsMagic);
    w.u32(static_cast<std::uint32_t>(entries_.size()));
    for (const auto& e : entries_) {
        w.u64(e.digest);
        w.u32(static_cast<std::uint32_t>(e.elements.size()));
        for (const auto& el : e.elements) {
            w.str(el.attribute);
            w.str(el.text);
        }
    }
    return w.take();
}

DocStore DocStore::deserialize(std::string_view bytes) {
    binio::Reader r(bytes, "docs.bin");
    r.expect_magic(kDocsMagic);
    DocStore store;
    std::uint32_t n = r.u32();
    store.entries_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Entry e;
        e.digest = r.u64();
        std::uint32_t count = r.u32();
        for (std::uint32_t j = 0; j < count; ++j) {
            std::string attr = r.str();
            std::string text = r.str();
            e.elements.push_back({std::move(attr), std::move(text)});
        }
        store.entries_.push_back(std::move(e));
    }
    r.expect_end();
    return store;
}

} // namespace dbtrail
