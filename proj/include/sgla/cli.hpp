#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgla::cli {

// Entry point of the `sgla` tool. Subcommands: integrate, cluster, embed,
// eval, synth. Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgla::cli
