#pragma once

#include <filesystem>
#include <string>

#include "hyopf/grid.hpp"

namespace hyopf {

/// Malformed grid document; the message names the offending field.
class DocumentError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kDocumentVersion = "1";

/// Parses a JSON grid document (schema version "1"). Fields the schema does
/// not know are kept as raw JSON in the entity's annotations.
Grid read_document(const std::string& text);
/// Serializes a grid; numbers use the shortest round-trip representation.
std::string write_document(const Grid& grid);

Grid load_document(const std::filesystem::path& path);
void save_document(const Grid& grid, const std::filesystem::path& path);

/// Whole file as a string; throws Error when it cannot be read.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hyopf
