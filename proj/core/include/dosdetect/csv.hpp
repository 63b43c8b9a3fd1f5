#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace dosdetect::csv {

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

/// Writes one CSV row followed by '\n'. Fields are escaped.
template <class... Fields>
void write_row(std::ostream& out, const Fields&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) out << ',';
    first = false;
    if constexpr (std::is_convertible_v<decltype(f), std::string_view>) {
      out << escape(std::string_view(f));
    } else if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>) {
      out << format_double(f);
    } else {
      out << f;
    }
  };
  (put(fields), ...);
  out << '\n';
}

}  // namespace dosdetect::csv
