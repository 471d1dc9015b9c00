#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fci {

/// Error with a module-scoped code, e.g. ("lattice", "SelfInteraction").
/// The CLI surfaces these as machine-readable records with code
/// "<module>.<code>".
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string code, const std::string& message)
        : std::runtime_error(module + "." + code + ": " + message),
          module_(std::move(module)),
          code_(std::move(code)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& code() const noexcept { return code_; }

private:
    std::string module_;
    std::string code_;
};

}  // namespace fci
