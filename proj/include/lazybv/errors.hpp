#ifndef LAZYBV_ERRORS_HPP
#define LAZYBV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lazybv {

/** Base of every error the library reports. */
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Children violate an operator signature, or substitution changes a sort.
class SortError : public Error
{
public:
  using Error::Error;
};

/// Malformed indices, extension amounts or constants.
class InvalidAttrError : public Error
{
public:
  using Error::Error;
};

class UnboundSymbolError : public Error
{
public:
  using Error::Error;
};

class SyntaxError : public Error
{
public:
  SyntaxError(const std::string &what, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column)
  {}
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedFeatureError : public Error
{
public:
  using Error::Error;
};

class UndeclaredSymbolError : public Error
{
public:
  using Error::Error;
};

/// External process died or replied with something unparsable.
class BackendProtocolError : public Error
{
public:
  using Error::Error;
};

class OracleCapacityError : public Error
{
public:
  using Error::Error;
};

/// get_value without a preceding sat answer.
class NotSatError : public Error
{
public:
  using Error::Error;
};

class MissingAssignmentError : public Error
{
public:
  using Error::Error;
};

/// The same hbs index was requested twice for one instance; the refinement
/// policy let an already-excluded model recur.
class IndexAlreadyAssertedError : public Error
{
public:
  using Error::Error;
};

class BenchmarkSetMismatchError : public Error
{
public:
  using Error::Error;
};

}// namespace lazybv

#endif
