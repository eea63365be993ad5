#pragma once

#include <string>
#include <string_view>

namespace nlstrap::csv {

/// Scientific notation with 12 significant decimals; "nan"/"inf" spelled out.
std::string num(double v);
/// RFC-4180 quoting when the field holds a comma, quote or newline.
std::string field(std::string_view s);

}  // namespace nlstrap::csv
