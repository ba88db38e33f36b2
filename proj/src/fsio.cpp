#include "plangen/fsio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "plangen/errors.hpp"

namespace plangen {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(Errc::io_failure, "read failed: " + path.string());
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content) {
  std::error_code ec;
  auto parent = path.parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent, ec);
    if (ec) fail(Errc::io_failure, "cannot create directory: " + parent.string());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_failure, "cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.string().c_str());
      fail(Errc::io_failure, "write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.string().c_str());
    fail(Errc::io_failure, "rename failed: " + path.string());
  }
}

}  // namespace plangen
