#ifndef ADLENS_TESTS_SUPPORT_H_
#define ADLENS_TESTS_SUPPORT_H_

// Helpers and independent reference implementations shared by the unit and
// acceptance tests.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adlens/agenda.h"
#include "adlens/annotation.h"
#include "adlens/ingest.h"
#include "adlens/stance/models.h"
#include "adlens/stance/pipeline.h"

namespace adlens::testing {

// Absolute path of a file under the bundled data directory.
std::string data_path(const std::string &relative);

// Fresh empty directory under the system temp dir; removed by the destructor.
class TempDir {
 public:
  explicit TempDir(const std::string &tag);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::string &path() const { return path_; }
  std::string file(const std::string &name) const;

 private:
  std::string path_;
};

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

struct CorpusDoc {
  std::string id;
  std::string text;
  stance::StanceLabel label;
};

// JSON lines {"id", "text", "label"} with label pro, anti or irrelevant.
std::vector<CorpusDoc> read_stance_corpus(const std::string &path);

// Minimal ad with a closed delivery window and no breakdowns.
AdRecord make_ad(const std::string &id, Date start, Date stop, std::uint64_t lower,
                 std::optional<std::uint64_t> upper);

// RFC 4180-style CSV rows (quoted fields supported).
std::vector<std::vector<std::string>> parse_csv(const std::string &text);

// Attributes of every <tag ...> element in an SVG document, in order.
std::vector<std::map<std::string, std::string>> svg_elements(const std::string &svg,
                                                             const std::string &tag);
std::map<std::string, std::string> svg_root(const std::string &svg);
std::vector<double> parse_number_list(const std::string &text);

// Krippendorff's alpha computed from pairwise disagreements over units rather
// than a coincidence matrix. nullopt when fewer than two units are pairable.
struct OracleAlpha {
  double alpha;
  bool degenerate;
};
std::optional<OracleAlpha> alpha_by_pairs(const ReliabilityMatrix &m, AlphaMetric metric);

// Least squares through the explicitly inverted normal equations.
Eigen::VectorXd normal_equations_beta(const Eigen::MatrixXd &x, const Eigen::VectorXd &y);

// Granger F statistic per lag, built from normal-equation fits.
std::vector<double> granger_f_oracle(const std::vector<double> &cause,
                                     const std::vector<double> &effect, int max_lag);

// x white noise, y_t = 0.8 x_{t-1} + e_t, both of length n, on one grid.
std::pair<TimeSeries, TimeSeries> planted_granger_pair(std::uint64_t seed, std::size_t n = 300);

// Four-document count corpora whose naive Bayes posteriors were worked out by
// hand as ratios of small fractions.
struct NaiveBayesCase {
  stance::SparseMatrix x;
  std::vector<int> y;
  std::size_t features;
  double alpha;
  stance::SparseVector query;
  std::array<double, 2> log_posterior;
};
std::vector<NaiveBayesCase> naive_bayes_cases();

// |analytic - central difference| / |analytic| over the full gradient of the
// logistic loss at `point`.
double logistic_gradient_error(const stance::LogisticLoss &loss,
                               const std::vector<double> &point, double step = 1e-6);

// Dense count rows to sparse rows.
stance::SparseMatrix sparse_rows(const std::vector<std::vector<double>> &dense);

}  // namespace adlens::testing

#endif  // ADLENS_TESTS_SUPPORT_H_
