#ifndef TRAJ_ERROR_HPP
#define TRAJ_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace traj {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A value failed a domain invariant (bad polygon, reversed interval, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A caller passed an unusable argument (empty list, unknown kind, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A referenced entity does not exist in the store.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A referenced entity exists but points at something unregistered.
class DanglingReferenceError : public Error {
public:
    using Error::Error;
};

/// File could not be opened or read/written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Snapshot carries an unknown magic/version.
class SnapshotVersionError : public Error {
public:
    using Error::Error;
};

/// Snapshot bytes do not match their trailing checksum (truncation, corruption).
class SnapshotChecksumError : public Error {
public:
    using Error::Error;
};

/// A query could not be evaluated (missing presentation, type mismatch, ...).
class QueryError : public Error {
public:
    using Error::Error;
};

/// Query text rejected by the parser, with position information.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::size_t line, std::size_t column, const std::string& expected)
        : Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column)
                + ": " + expected),
          offset_(offset),
          line_(line),
          column_(column),
          expected_(expected) {}

    std::size_t offset() const { return offset_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
};

} // namespace traj

#endif // TRAJ_ERROR_HPP
