#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "snspm/params.hpp"

namespace snspm {

/// Parses a JSON configuration document with one key per parameter field.
/// Unknown keys are rejected. The sending probability is given either as
/// "epsilon" or as the triple "epsilon0"/"epsilon_max"/"L_max".
ProtocolParams params_from_json_text(const std::string& text);
ProtocolParams load_params(const std::string& path);

/// Applies "key=value" overrides on top of a loaded configuration. Unknown
/// keys are rejected.
void apply_override(ProtocolParams& p, const std::string& key_value);

/// Entry point behind the `snspm` binary. Exit codes: 0 success, 2 parameter
/// domain error, 3 numerical degeneracy, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

} // namespace snspm
