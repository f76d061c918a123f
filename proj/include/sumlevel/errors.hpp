#pragma once

#include <stdexcept>
#include <string>

namespace sumlevel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A binary code that does not describe a single continued-fraction cylinder.
class UntranslatableCode : public DomainError {
public:
    using DomainError::DomainError;
};

/// Requested level exceeds the configured enumeration / summation guard.
class LevelTooLarge : public Error {
public:
    LevelTooLarge(const std::string& what, long long level, long long guard)
        : Error(what + ": level " + std::to_string(level) + " exceeds guard " + std::to_string(guard)),
          level_(level), guard_(guard) {}

    long long level() const noexcept { return level_; }
    long long guard() const noexcept { return guard_; }

private:
    long long level_;
    long long guard_;
};

/// Not enough continued-fraction digits to evaluate a statistic.
class InsufficientDepth : public Error {
public:
    using Error::Error;
};

/// Checkpoint file is unreadable or belongs to a different run configuration.
class CheckpointError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sumlevel
