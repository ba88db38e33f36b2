#pragma once

#include <string>

namespace plangen {

struct RunResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

// Runs `command` through /bin/sh, capturing stdout and stderr. A timeout
// <= 0 means no limit; on expiry the process group is killed.
RunResult run_command(const std::string& command, double timeout_sec);

}  // namespace plangen
