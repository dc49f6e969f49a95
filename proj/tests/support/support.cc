#include "support.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "adlens/random.h"
#include "adlens/text.h"
#include "json.hpp"

namespace adlens::testing {

namespace fs = std::filesystem;

std::string data_path(const std::string &relative) {
  return (fs::path(ADLENS_TEST_DATA_DIR) / relative).string();
}

TempDir::TempDir(const std::string &tag) {
  static std::atomic<int> counter{0};
  const fs::path base = fs::temp_directory_path();
  for (;;) {
    fs::path candidate = base / ("adlens-" + tag + "-" + std::to_string(::getpid()) + "-" +
                                 std::to_string(counter++));
    if (fs::create_directories(candidate)) {
      path_ = candidate.string();
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string TempDir::file(const std::string &name) const {
  return (fs::path(path_) / name).string();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<CorpusDoc> read_stance_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<CorpusDoc> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const std::string label = j.at("label").get<std::string>();
    CorpusDoc d;
    d.id = j.at("id").get<std::string>();
    d.text = j.at("text").get<std::string>();
    if (label == "pro") d.label = stance::StanceLabel::kPro;
    else if (label == "anti") d.label = stance::StanceLabel::kAnti;
    else if (label == "irrelevant") d.label = stance::StanceLabel::kNeutralOrIrrelevant;
    else throw std::runtime_error("unknown corpus label " + label);
    docs.push_back(std::move(d));
  }
  return docs;
}

AdRecord make_ad(const std::string &id, Date start, Date stop, std::uint64_t lower,
                 std::optional<std::uint64_t> upper) {
  AdRecord ad;
  ad.id = id;
  ad.page_id = "p" + id;
  ad.text = "ad " + id;
  ad.created = DateTime(static_cast<std::int64_t>(start.days()) * 86400);
  ad.delivery_start = start;
  ad.delivery_stop = stop;
  ad.impressions = RangedValue{lower, upper};
  ad.snapshot_time = ad.created;
  return ad;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    row_open = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      row_open = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (row_open) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string xml_unescape(const std::string &s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const std::size_t semi = s.find(';', i);
    const std::string entity = s.substr(i + 1, semi - i - 1);
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos" || entity == "#39") out += '\'';
    else throw std::runtime_error("unknown entity &" + entity + ";");
    i = semi;
  }
  return out;
}

std::map<std::string, std::string> parse_attributes(const std::string &svg, std::size_t pos) {
  std::map<std::string, std::string> attrs;
  for (;;) {
    while (pos < svg.size() && std::isspace(static_cast<unsigned char>(svg[pos]))) ++pos;
    if (pos >= svg.size() || svg[pos] == '>' || svg[pos] == '/') break;
    const std::size_t eq = svg.find('=', pos);
    const std::string name = svg.substr(pos, eq - pos);
    const std::size_t open = eq + 1;
    if (svg[open] != '"') throw std::runtime_error("unquoted attribute " + name);
    const std::size_t close = svg.find('"', open + 1);
    attrs[name] = xml_unescape(svg.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return attrs;
}

}  // namespace

std::vector<std::map<std::string, std::string>> svg_elements(const std::string &svg,
                                                             const std::string &tag) {
  std::vector<std::map<std::string, std::string>> out;
  const std::string needle = "<" + tag;
  for (std::size_t pos = svg.find(needle); pos != std::string::npos;
       pos = svg.find(needle, pos + 1)) {
    const char next = svg[pos + needle.size()];
    if (next != ' ' && next != '>' && next != '/') continue;
    out.push_back(parse_attributes(svg, pos + needle.size()));
  }
  return out;
}

std::map<std::string, std::string> svg_root(const std::string &svg) {
  const auto roots = svg_elements(svg, "svg");
  if (roots.empty()) throw std::runtime_error("no <svg> element");
  return roots.front();
}

std::vector<double> parse_number_list(const std::string &text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    for (const auto &piece : split(token, ',')) {
      if (!piece.empty()) out.push_back(std::stod(piece));
    }
  }
  return out;
}

std::optional<OracleAlpha> alpha_by_pairs(const ReliabilityMatrix &m, AlphaMetric metric) {
  std::vector<std::vector<double>> units;
  for (std::size_t i = 0; i < m.items(); ++i) {
    std::vector<double> values;
    for (std::size_t a = 0; a < m.annotators(); ++a) {
      if (m.at(i, a)) values.push_back(*m.at(i, a));
    }
    if (values.size() >= 2) units.push_back(std::move(values));
  }
  if (units.size() < 2) return std::nullopt;

  std::vector<double> pooled;
  for (const auto &u : units) pooled.insert(pooled.end(), u.begin(), u.end());
  const double n = static_cast<double>(pooled.size());

  std::map<double, double> frequency;
  for (double v : pooled) frequency[v] += 1.0;

  auto delta = [&](double c, double k) {
    switch (metric) {
      case AlphaMetric::kNominal:
        return c == k ? 0.0 : 1.0;
      case AlphaMetric::kInterval:
        return (c - k) * (c - k);
      case AlphaMetric::kOrdinal: {
        if (c == k) return 0.0;
        const double lo = std::min(c, k);
        const double hi = std::max(c, k);
        double between = 0.0;
        for (const auto &[g, f] : frequency) {
          if (g >= lo && g <= hi) between += f;
        }
        const double d = between - (frequency[c] + frequency[k]) / 2.0;
        return d * d;
      }
    }
    return 0.0;
  };

  double observed = 0.0;
  for (const auto &u : units) {
    double within = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j) within += delta(u[i], u[j]);
      }
    }
    observed += within / static_cast<double>(u.size() - 1);
  }
  observed /= n;

  double expected = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i != j) expected += delta(pooled[i], pooled[j]);
    }
  }
  expected /= n * (n - 1.0);

  if (expected == 0.0) return OracleAlpha{1.0, true};
  return OracleAlpha{1.0 - observed / expected, false};
}

Eigen::VectorXd normal_equations_beta(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
  const Eigen::MatrixXd gram = x.transpose() * x;
  return gram.inverse() * (x.transpose() * y);
}

std::vector<double> granger_f_oracle(const std::vector<double> &cause,
                                     const std::vector<double> &effect, int max_lag) {
  std::vector<double> out;
  const int len = static_cast<int>(effect.size());
  for (int lag = 1; lag <= max_lag; ++lag) {
    const int n = len - lag;
    Eigen::MatrixXd restricted(n, 1 + lag);
    Eigen::MatrixXd full(n, 1 + 2 * lag);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
      const int t = r + lag;
      y(r) = effect[t];
      restricted(r, 0) = 1.0;
      full(r, 0) = 1.0;
      for (int j = 1; j <= lag; ++j) {
        restricted(r, j) = effect[t - j];
        full(r, j) = effect[t - j];
        full(r, lag + j) = cause[t - j];
      }
    }
    const double rss_r = (y - restricted * normal_equations_beta(restricted, y)).squaredNorm();
    const double rss_u = (y - full * normal_equations_beta(full, y)).squaredNorm();
    const double df2 = n - 2.0 * lag - 1.0;
    out.push_back(((rss_r - rss_u) / lag) / (rss_u / df2));
  }
  return out;
}

std::pair<TimeSeries, TimeSeries> planted_granger_pair(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = rng.normal();
  for (std::size_t t = 0; t < n; ++t) y[t] = (t > 0 ? 0.8 * x[t - 1] : 0.0) + rng.normal();
  const Date start = Date::FromYmd(2019, 9, 1);
  return {TimeSeries("x", start, std::move(x)), TimeSeries("y", start, std::move(y))};
}

stance::SparseMatrix sparse_rows(const std::vector<std::vector<double>> &dense) {
  stance::SparseMatrix out;
  for (const auto &row : dense) {
    stance::SparseVector v;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) {
        v.index.push_back(static_cast<std::uint32_t>(j));
        v.value.push_back(row[j]);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<NaiveBayesCase> naive_bayes_cases() {
  std::vector<NaiveBayesCase> cases;
  {
    // Smoothed likelihoods: class 0 (4/7, 2/7, 1/7), class 1 (1/7, 2/7, 4/7);
    // equal priors. Query (2, 0, 1): joint 16/686 vs 4/686.
    NaiveBayesCase c;
    c.x = sparse_rows({{2, 1, 0}, {1, 0, 0}, {0, 1, 2}, {0, 0, 1}});
    c.y = {0, 0, 1, 1};
    c.features = 3;
    c.alpha = 1.0;
    c.query = sparse_rows({{2, 0, 1}})[0];
    c.log_posterior = {std::log(0.8), std::log(0.2)};
    cases.push_back(std::move(c));
  }
  {
    // alpha 0.5: class 0 (7/13, 5/13, 1/13), class 1 (1/9, 3/9, 5/9); priors
    // 3/4 and 1/4. Query (1, 0, 1): joint 21/676 vs 5/324.
    NaiveBayesCase c;
    c.x = sparse_rows({{2, 1, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 2}});
    c.y = {0, 0, 0, 1};
    c.features = 3;
    c.alpha = 0.5;
    c.query = sparse_rows({{1, 0, 1}})[0];
    const double a = 21.0 / 676.0;
    const double b = 5.0 / 324.0;
    c.log_posterior = {std::log(a / (a + b)), std::log(b / (a + b))};
    cases.push_back(std::move(c));
  }
  return cases;
}

double logistic_gradient_error(const stance::LogisticLoss &loss,
                               const std::vector<double> &point, double step) {
  std::vector<double> grad(loss.dimension());
  loss.gradient(point, grad);
  double diff2 = 0.0;
  double norm2 = 0.0;
  std::vector<double> probe = point;
  for (std::size_t k = 0; k < point.size(); ++k) {
    probe[k] = point[k] + step;
    const double up = loss.value(probe);
    probe[k] = point[k] - step;
    const double down = loss.value(probe);
    probe[k] = point[k];
    const double numeric = (up - down) / (2.0 * step);
    diff2 += (numeric - grad[k]) * (numeric - grad[k]);
    norm2 += grad[k] * grad[k];
  }
  return std::sqrt(diff2 / norm2);
}

}  // namespace adlens::testing
