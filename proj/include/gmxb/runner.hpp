#pragma once

#include <string>

#include "gmxb/config.hpp"

namespace gmxb {

// Exit codes shared with the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCertificationRefused = 3;
inline constexpr int kExitNumericalFailure = 4;

// Executes one subcommand (price, control-maps, slice, verify, converge) and
// writes its output files under config.output_dir. Throws ConfigError,
// CertificationError or std::runtime_error; the front end maps these to exit
// codes. Identical config and seed produce byte-identical files.
void run_subcommand(const RunConfig& config, const std::string& subcommand);

} // namespace gmxb
