#pragma once

#include <string>

namespace mosqdyn {

/// Scientific notation with 17 significant digits; parses back to the same double.
std::string format_real(double v);

/// Writes content to a temporary sibling file and renames it over path, so a
/// failed run never leaves a partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace mosqdyn
