#pragma once

#include <filesystem>
#include <string>

namespace plangen {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temp file then renames over the target, so a failed
// run never leaves a partially written file behind.
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content);

}  // namespace plangen
