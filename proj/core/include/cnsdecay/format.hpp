#pragma once

#include <string>

namespace cnsdecay {

/// Shortest round-trip decimal form of x (std::to_chars); "nan", "inf" and
/// "-inf" for non-finite values. Independent of the C locale.
std::string format_double(double x);

}  // namespace cnsdecay
