#include "lineage_forge/diagnostics.hpp"

#include <algorithm>

namespace lineage_forge {

const char* to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

void Diagnostics::warn(std::string code, std::string message, std::string query) {
  items_.push_back({Severity::Warning, std::move(code), std::move(message), std::move(query)});
}

void Diagnostics::error(std::string code, std::string message, std::string query) {
  items_.push_back({Severity::Error, std::move(code), std::move(message), std::move(query)});
}

void Diagnostics::append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool Diagnostics::has_errors() const {
  return std::any_of(items_.begin(), items_.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

bool Diagnostics::has_code(std::string_view code) const { return count(code) > 0; }

std::size_t Diagnostics::count(std::string_view code) const {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

}  // namespace lineage_forge
