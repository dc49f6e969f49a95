#ifndef ADLENS_DELIMITED_H_
#define ADLENS_DELIMITED_H_

#include <string>
#include <vector>

namespace adlens {

struct DelimitedRow {
  std::size_t line = 0;
  std::vector<std::string> cols;  // trimmed
};

// Reads a delimiter-separated file whose first non-comment line is a header
// equal to `header`. '#' comment lines and blank lines are skipped. Throws
// ParseError with file and line on a malformed row.
std::vector<DelimitedRow> read_delimited(const std::string &path, char delimiter,
                                         const std::vector<std::string> &header);

// Parses a finite double; throws ParseError naming `field` otherwise.
double parse_number(const std::string &text, const std::string &field,
                    const std::string &path, std::size_t line);

// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (abs(sum_) >= abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  static double abs(double v) { return v < 0 ? -v : v; }
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace adlens

#endif  // ADLENS_DELIMITED_H_
