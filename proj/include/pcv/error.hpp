#pragma once

#include <stdexcept>
#include <string>

namespace pcv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A GridSpec that cannot be tiled into square cells.
class GridError : public Error {
public:
    using Error::Error;
};

/// Input arrays whose shapes do not agree with each other or with a grid.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numeric argument outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace pcv
