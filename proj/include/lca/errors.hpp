#pragma once

#include <stdexcept>
#include <string>

namespace lca {

// Every failure surfaced by the library derives from Error; the kind maps
// 1:1 onto a CLI exit code (see tools/lca.cpp).
enum class ErrorKind {
    shape,         // tensor dimension mismatch
    contract,      // precondition violated by the caller
    index,         // out-of-range id / class index
    parse,         // malformed input file (carries a line number)
    format,        // structurally valid file with inconsistent content
    config,        // bad hyperparameter / unknown key
    io,            // missing or unreadable path
    divergence,    // NaN/Inf loss during training
    incompatible,  // checkpoint version mismatch
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(ErrorKind::shape, msg) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& msg) : Error(ErrorKind::contract, msg) {}
};

struct IndexError : Error {
    explicit IndexError(const std::string& msg) : Error(ErrorKind::index, msg) {}
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& msg)
        : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(ErrorKind::format, msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorKind::config, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorKind::io, msg) {}
};

struct DivergenceError : Error {
    explicit DivergenceError(const std::string& msg) : Error(ErrorKind::divergence, msg) {}
};

struct IncompatibleError : Error {
    explicit IncompatibleError(const std::string& msg) : Error(ErrorKind::incompatible, msg) {}
};

}  // namespace lca
