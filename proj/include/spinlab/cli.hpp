#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spinlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

/// Inclusive grid a, a + step, ..., <= b (with 1e-9 relative slack at the end).
/// Throws ValidationError unless step > 0 and a <= b.
std::vector<double> parse_range(const std::string& spec);

/// args excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinlab::cli
