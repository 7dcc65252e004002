#pragma once

#include <stdexcept>
#include <string>

namespace hybrid {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failures.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NonDecaying : public Error {
public:
    using Error::Error;
};

// Analysis failures.
class NoSolution : public Error {
public:
    using Error::Error;
};

class WindowTooNarrow : public Error {
public:
    using Error::Error;
};

class NoBracket : public Error {
public:
    using Error::Error;
};

/// Configuration is structurally or semantically invalid.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Schema violation; `path()` is a JSON pointer to the offending element.
class SchemaError : public ConfigError {
public:
    SchemaError(std::string path, const std::string& what)
        : ConfigError(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class DuplicateMode : public ConfigError {
public:
    explicit DuplicateMode(std::string name)
        : ConfigError("duplicate mode name '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnknownModeInCoupling : public ConfigError {
public:
    explicit UnknownModeInCoupling(std::string name)
        : ConfigError("coupling references unknown mode '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hybrid
