#ifndef ADLENS_ERROR_H_
#define ADLENS_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adlens {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kValidation = 2,
  kData = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &message)
      : Error(ErrorKind::kValidation, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::kData, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string &message)
      : Error(ErrorKind::kNumeric, message) {}
};

// A malformed record. File and line are filled in by whoever knows them;
// record-level parsers only know the field.
class ParseError : public DataError {
 public:
  ParseError(std::string field, std::string detail, std::string file = {},
             std::size_t line = 0)
      : DataError(Format(file, line, field, detail)),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)),
        detail_(std::move(detail)) {}

  const std::string &file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string &field() const { return field_; }
  const std::string &detail() const { return detail_; }

  // Returns a copy of this error located at file:line.
  ParseError At(const std::string &file, std::size_t line) const {
    return ParseError(field_, detail_, file, line);
  }

 private:
  static std::string Format(const std::string &file, std::size_t line,
                            const std::string &field,
                            const std::string &detail) {
    std::string out;
    if (!file.empty()) out += file + ":";
    if (line > 0) out += std::to_string(line) + ": ";
    else if (!file.empty()) out += " ";
    if (!field.empty()) out += "field '" + field + "': ";
    out += detail;
    return out;
  }

  std::string file_;
  std::size_t line_;
  std::string field_;
  std::string detail_;
};

}  // namespace adlens

#endif  // ADLENS_ERROR_H_
