#include "adlens/delimited.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens {

std::vector<DelimitedRow> read_delimited(const std::string &path, char delimiter,
                                         const std::vector<std::string> &header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<DelimitedRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<std::string> cols;
    for (auto &c : split(body, delimiter)) cols.emplace_back(trim(c));
    if (!seen_header) {
      if (cols != header)
        throw ParseError("", "expected header '" + join(header, std::string(1, delimiter)) + "'",
                         path, line_no);
      seen_header = true;
      continue;
    }
    if (cols.size() != header.size())
      throw ParseError("", "expected " + std::to_string(header.size()) + " columns, got " +
                               std::to_string(cols.size()),
                       path, line_no);
    rows.push_back({line_no, std::move(cols)});
  }
  if (!seen_header) throw ParseError("", "missing header row", path);
  return rows;
}

double parse_number(const std::string &text, const std::string &field, const std::string &path,
                    std::size_t line) {
  char *end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw ParseError(field, "not a number: '" + text + "'", path, line);
  return v;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace adlens
