#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace qrm {

/// Command-line entry: subcommands fix, cycles, classify, moduli, convert,
/// per, degen, render, audit. Returns 0 on success, 2 on validation or
/// usage errors, 3 on numeric failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout);

}  // namespace qrm
