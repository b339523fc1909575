#pragma once

#include <stdexcept>
#include <string>

namespace areagraph {

/// Base of every error thrown by the library. `stage()` names the pipeline
/// step that failed so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Too few / collinear sites, or any other input the geometry kernel
/// cannot triangulate.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class NoArea : public Error {
 public:
  using Error::Error;
};

}  // namespace areagraph
