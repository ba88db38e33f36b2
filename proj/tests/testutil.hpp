#pragma once

#include <filesystem>
#include <string>

#include "plangen/fsio.hpp"

#ifndef PLANGEN_FIXTURE_DIR
#error "PLANGEN_FIXTURE_DIR must be defined by the build"
#endif

namespace testutil {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(PLANGEN_FIXTURE_DIR);
}

inline std::string fixture(const std::string& rel) {
  return plangen::read_text_file(fixture_dir() / rel);
}

}  // namespace testutil
