#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfs
{

struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Malformed problem, formula or model (unknown atom, duplicate name, ...).
struct StructuralError : Error
{
    using Error::Error;
};

/// A guard or budget was exceeded. Never a silent truncation.
struct ResourceError : Error
{
    using Error::Error;
};

/// A caller violated an operation's precondition.
struct ContractError : Error
{
    using Error::Error;
};

struct ParseError : Error
{
    std::string reason;
    std::size_t position;

    ParseError( const std::string& message, std::size_t pos )
            : Error( message + " at position " + std::to_string( pos ) ), reason{ message }, position{ pos }
    {
    }
};

} // namespace cfs
