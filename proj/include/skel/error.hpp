#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Concrete syntax error. `line` is 0 when the text was not read from a file.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, std::size_t line = 0)
      : Error(format(position, expected, line)),
        position_(position),
        line_(line),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }
  const std::string& expected() const { return expected_; }

 private:
  static std::string format(std::size_t pos, const std::string& exp, std::size_t line) {
    std::string s = "syntax error";
    if (line != 0) s += " at line " + std::to_string(line);
    s += " column " + std::to_string(pos + 1) + ": expected " + exp;
    return s;
  }

  std::size_t position_;
  std::size_t line_;
  std::string expected_;
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(std::string name)
      : Error("unknown atomic proposition '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class PartitionMismatch : public Error {
 public:
  PartitionMismatch() : Error("letters are defined over different proposition partitions") {}
};

class InputSubstitution : public Error {
 public:
  explicit InputSubstitution(const std::string& prop)
      : Error("cannot substitute input proposition '" + prop + "'") {}
};

class AlphabetMismatch : public Error {
 public:
  AlphabetMismatch() : Error("automata are defined over different alphabets") {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error("resource limit exceeded: " + what) {}
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& msg)
      : Error("schema error at " + path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class NotActuallyBad : public Error {
 public:
  NotActuallyBad() : Error("no bad prefix found in a lasso claimed to violate min") {}
};

class EmptySafety : public Error {
 public:
  EmptySafety() : Error("initial state pruned: conjecture claims an empty safety language") {}
};

class InputIncomplete : public Error {
 public:
  InputIncomplete(int state, unsigned input)
      : Error("state " + std::to_string(state) + " has no transition for input " + std::to_string(input)),
        state_(state), input_(input) {}
  int state() const { return state_; }
  unsigned input() const { return input_; }

 private:
  int state_;
  unsigned input_;
};

}  // namespace skel
