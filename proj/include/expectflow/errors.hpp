#pragma once

#include <stdexcept>
#include <string>

namespace expectflow {

/// Data or configuration that fails a contract (bad dates, gaps, bounds).
/// Mapped to exit code 1 by the CLI.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / parse-level failures. Mapped to exit code 2 by the CLI.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace expectflow
