#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/schema.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail::dblp {

/// The four-table bibliography schema: publication, author, writes, citation.
SchemaDescriptor schema();

struct ConversionResult {
    Dataset dataset;
    std::vector<std::string> warnings;
};

/// Converts a DBLP XML dump into rows of the bibliography schema.
///
/// One publication row per record element, one author row per distinct full
/// name (ids assigned from 1 in first-seen order), one writes row per distinct
/// (author, publication) pair, and one citation row per <cite> whose target
/// key is a converted publication. Record types other than article,
/// inproceedings, proceedings, book, incollection, phdthesis and
/// mastersthesis are skipped with a warning.
ConversionResult convert(std::string_view xml_text);

/// Reads `xml_path`, converts it, and writes schema.json plus CSVs into `out_dir`.
ConversionResult convert_file(const std::filesystem::path& xml_path,
                              const std::filesystem::path& out_dir);

} // namespace dbtrail::dblp
