#pragma once

#include <stdexcept>
#include <string>

namespace erbench {

// Bad user input: unreadable files, malformed lines, invariant violations in
// loaded data. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Prefixes `what` with "path:line: ".
InputError input_error_at(const std::string& path, size_t line,
                          const std::string& what);

}  // namespace erbench
