#pragma once

#include <stdexcept>
#include <string>

namespace dixlab {

/// Base class for all dixlab errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitian : public Error {
  public:
    using Error::Error;
};
class NoConvergence : public Error {
  public:
    using Error::Error;
};
class NotNormal : public Error {
  public:
    using Error::Error;
};
class NotSquareZero : public Error {
  public:
    using Error::Error;
};
class NotNilpotent : public Error {
  public:
    using Error::Error;
};
class NotSelfadjoint : public Error {
  public:
    using Error::Error;
};
class NotDensity : public Error {
  public:
    using Error::Error;
};
class EmptyRegion : public Error {
  public:
    using Error::Error;
};
class ShapeMismatch : public Error {
  public:
    using Error::Error;
};
class NotInY : public Error {
  public:
    using Error::Error;
};
class DimensionOne : public Error {
  public:
    using Error::Error;
};
class UnknownFixture : public Error {
  public:
    using Error::Error;
};
class BadParams : public Error {
  public:
    using Error::Error;
};
class UnsupportedBase : public Error {
  public:
    using Error::Error;
};
class InfeasibleAtAnyStep : public Error {
  public:
    using Error::Error;
};
class RenderError : public Error {
  public:
    using Error::Error;
};

/// Schema violations carry a JSON-pointer style path to the offending node.
class SchemaError : public Error {
  public:
    SchemaError(const std::string& what, std::string path)
        : Error(what + " (at " + path + ")"), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

} // namespace dixlab
