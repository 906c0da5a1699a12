#pragma once

#include <string>
#include <string_view>

#include "nullctl/certify.hpp"

namespace nullctl {

// 12 significant digits; infinities print as "inf" / "-inf".
[[nodiscard]] std::string format_real(double v);

// Flat JSON object keyed by the certificate field names. Notes are not written.
[[nodiscard]] std::string certificate_to_json(const Certificate& c, int indent = 2);

// Throws ParseError on malformed input and InvalidArgument on missing fields.
[[nodiscard]] Certificate certificate_from_json(std::string_view text);

} // namespace nullctl
