#pragma once

#include <string>

namespace islmusic {

// Shortest decimal text that round-trips to the same double. Non-finite
// values print as nan / inf / -inf.
std::string format_double(double value);

}  // namespace islmusic
