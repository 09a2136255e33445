#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stopir {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data. Carries a location (byte offset or line number,
/// depending on the format) when one is known.
class ParseError : public Error {
  public:
    enum class Unit { none, byte, line };

    explicit ParseError(std::string const& what) : Error(what) {}
    ParseError(std::string const& what, Unit unit, std::size_t location)
        : Error(what + (unit == Unit::byte ? " (at byte " : " (at line ") + std::to_string(location)
                + ")"),
          m_unit(unit),
          m_location(location) {}

    [[nodiscard]] auto unit() const noexcept -> Unit { return m_unit; }
    [[nodiscard]] auto location() const noexcept -> std::size_t { return m_location; }

  private:
    Unit m_unit = Unit::none;
    std::size_t m_location = 0;
};

/// Inputs that are well-formed but violate a contract (duplicate docno,
/// mismatched query sets, ...).
class DataError : public Error {
  public:
    using Error::Error;
};

/// Invalid parameter values or argument combinations.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

}  // namespace stopir
