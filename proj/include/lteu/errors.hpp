#pragma once

#include <stdexcept>
#include <string>

namespace lteu {

/// Invalid or inconsistent run configuration (bad key, malformed value, unknown layout).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A numeric precondition was violated.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

} // namespace lteu
