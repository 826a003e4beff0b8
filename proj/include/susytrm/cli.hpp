// Command-line driver: parse one job description, run the requested
// construction, and emit CSV samples / JSON reports for external plotting.
#pragma once

#include <string>
#include <vector>

namespace susytrm::cli {

// Runs one job described by command-line arguments (program name excluded)
// and returns the process exit code:
//   0 ok, 2 bad configuration, 3 seed/transformation rule violation,
//   4 verification mismatch, 5 numerical failure.
// Library failures are reported as a one-line JSON document on stderr with
// an "error" field, so scripted callers never have to scrape prose.
int run_cli(std::vector<std::string> args);

}  // namespace susytrm::cli
