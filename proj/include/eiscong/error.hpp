#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace eiscong {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DomainMismatch : public Error {
public:
    using Error::Error;
};

/// A rational coefficient whose denominator vanishes modulo the target prime.
class DenominatorClash : public Error {
public:
    DenominatorClash(std::size_t index, std::uint64_t prime)
        : Error("denominator of coefficient " + std::to_string(index) + " is divisible by " +
                std::to_string(prime)),
          index_(index), prime_(prime) {}

    std::size_t index() const noexcept { return index_; }
    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::size_t index_;
    std::uint64_t prime_;
};

class InsufficientPrecision : public Error {
public:
    using Error::Error;
};

class PrecisionTooSmall : public Error {
public:
    using Error::Error;
};

class SpecViolation : public Error {
public:
    using Error::Error;
};

class SingularCurve : public Error {
public:
    using Error::Error;
};

class NotSemistable : public Error {
public:
    explicit NotSemistable(std::uint64_t prime)
        : Error("additive reduction at " + std::to_string(prime) + ": curve is not semistable"),
          prime_(prime) {}

    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::uint64_t prime_;
};

class OffCurve : public Error {
public:
    using Error::Error;
};

class BadPrimeQuery : public Error {
public:
    using Error::Error;
};

/// Raised when a computed invariant falls outside a range that theory forbids.
class InternalError : public Error {
public:
    using Error::Error;
};

/// A level-lowering difference with a nonzero coefficient off the q^s lattice.
class SupportViolation : public Error {
public:
    explicit SupportViolation(std::size_t index)
        : Error("difference has nonzero coefficient at index " + std::to_string(index) +
                " which is not a multiple of the lowering prime"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The lowered stream is not special at the lower level.
class SpecialityViolation : public Error {
public:
    SpecialityViolation(std::size_t index, std::uint64_t level)
        : Error("lowered stream is not special at level " + std::to_string(level) +
                ": first mismatch at index " + std::to_string(index)),
          index_(index), level_(level) {}

    std::size_t index() const noexcept { return index_; }
    std::uint64_t level() const noexcept { return level_; }

private:
    std::size_t index_;
    std::uint64_t level_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    ValidationError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace eiscong
