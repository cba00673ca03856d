#pragma once

#include <string>
#include <string_view>

namespace gnt::subprocess {

struct Result {
  int exit_status = -1;  // -1 if killed or not exited normally
  bool timed_out = false;
  std::string out;
  std::string err;
};

// Runs `/bin/sh -c command`, feeds `input` on stdin and collects both
// output streams. The child is killed once `timeout_seconds` elapse.
Result run(const std::string& command, std::string_view input, double timeout_seconds);

}  // namespace gnt::subprocess
