#pragma once

#include <cstddef>
#include <iosfwd>

#include "config.hpp"

namespace chirp::cli {

// Each command writes its files under config.out_dir and a short report to
// `log`. Return value is the process exit code for a completed run.

int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_wigner(const RunConfig& config, std::ostream& log);
int cmd_threshold(const RunConfig& config, std::size_t threads, std::ostream& log);
int cmd_isomorphism(const RunConfig& config, std::ostream& log);
int cmd_classical(const RunConfig& config, std::size_t threads, std::ostream& log);

}  // namespace chirp::cli
