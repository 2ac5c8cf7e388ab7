#pragma once

#include <stdexcept>
#include <string>

namespace ragloop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or usage detected before any work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File system failure (missing file, unreadable, unwritable).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ragloop
