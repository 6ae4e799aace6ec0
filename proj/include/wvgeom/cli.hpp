#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wvgeom::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMathDomain = 2;
inline constexpr int kExitPartialGeometry = 3;
inline constexpr int kExitParse = 64;
inline constexpr int kExitValidation = 65;

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or the -o file), diagnostics and error JSON to `err`. Returns the exit
/// code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wvgeom::cli
