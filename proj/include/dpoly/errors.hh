#pragma once

#include <stdexcept>
#include <string>

namespace dpoly
{
    /// Precondition violated by the caller (bad n, mismatched sizes, out-of-range index).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    /// An instance is too large for the requested method.
    class CapacityError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input text. line() is 1-based; 0 means "not line specific".
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string & what, std::size_t line) :
            std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
            _line(line)
        {
        }

        auto line() const noexcept -> std::size_t { return _line; }

    private:
        std::size_t _line;
    };
}
