#ifndef ADLENS_AGENDA_H_
#define ADLENS_AGENDA_H_

// Daily attention series and Granger-causality tests between them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "adlens/date.h"
#include "adlens/ingest.h"
#include "adlens/stance/pipeline.h"
#include "adlens/store.h"

namespace adlens {

// Values on a contiguous daily grid starting at start().
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string name, Date start, std::vector<double> values);
  // All-zero series covering [first, last].
  static TimeSeries Zeros(std::string name, Date first, Date last);

  const std::string &name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  Date start() const { return start_; }
  // Last covered day; only meaningful when !empty().
  Date end() const { return start_ + static_cast<std::int32_t>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool covers(Date d) const { return !empty() && start_ <= d && d <= end(); }

  Date date(std::size_t i) const { return start_ + static_cast<std::int32_t>(i); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double> &values() const { return values_; }

  // Throws ValidationError when `d` lies outside the grid.
  double at(Date d) const;
  void add(Date d, double v);

  // Restriction to [first, last] intersected with the grid.
  TimeSeries slice(Date first, Date last) const;
  // x_t - x_{t-1}, starting one day later.
  TimeSeries difference() const;
  double sum() const;

  // "date,<name>" header, one row per day.
  std::string ToCsv() const;
  static TimeSeries FromCsv(const std::string &text, const std::string &source = {});

  bool operator==(const TimeSeries &) const = default;

 private:
  std::string name_;
  Date start_;
  std::vector<double> values_;
};

// News(t): per day, the sum over that day's articles of migration-theme
// occurrences over total theme occurrences. The grid spans `grid` when given
// (articles outside it are ignored), else the article date range.
TimeSeries news_series(const std::vector<NewsArticle> &articles, const ThemeCatalog &catalog,
                       std::optional<PeriodFilter> grid = std::nullopt);

using StanceAssignments = std::map<std::string, stance::StanceLabel>;

// Each ad spreads estimated_impressions evenly over its delivery days. The
// grid spans `grid` when given (mass outside it is dropped), else the union of
// the delivery windows.
TimeSeries impressions_series(const std::vector<AdRecord> &ads,
                              std::optional<PeriodFilter> grid = std::nullopt,
                              Date collection_date = kDefaultCollectionDate);

// Same, restricted to ads labelled `keep`. Throws ValidationError when an ad
// has no label.
TimeSeries impressions_series(const std::vector<AdRecord> &ads, const StanceAssignments &labels,
                              stance::StanceLabel keep, std::optional<PeriodFilter> grid = std::nullopt,
                              Date collection_date = kDefaultCollectionDate);

struct OlsFit {
  Eigen::VectorXd coefficients;
  double rss = 0.0;
};

// Least squares by column-pivoted QR. Requires rows > cols; throws
// NumericError naming the dependent columns on rank deficiency.
OlsFit ols_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
               const std::vector<std::string> &column_names = {});

struct GrangerLag {
  int lag = 0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  double rss_restricted = 0.0;
  double rss_unrestricted = 0.0;
  std::size_t observations = 0;  // series length - lag
  int df_numerator = 0;
  int df_denominator = 0;
  bool significant = false;

  bool operator==(const GrangerLag &) const = default;
};

struct GrangerOptions {
  int max_lag = 10;
  double significance = 0.01;
  bool first_difference = false;
};

struct GrangerResult {
  std::string cause;
  std::string effect;
  GrangerOptions options;
  std::vector<GrangerLag> lags;  // lag 1..max_lag

  std::vector<int> flagged_lags() const;
  std::string ToCsv() const;
  nlohmann::json to_json() const;

  bool operator==(const GrangerResult &other) const {
    return cause == other.cause && effect == other.effect && lags == other.lags;
  }
};

// Does the history of `cause` improve prediction of `effect`? Both series
// must share the same grid, be non-constant and have length > 3*max_lag + 1.
GrangerResult granger_test(const TimeSeries &cause, const TimeSeries &effect,
                           const GrangerOptions &options = {});

// F-distribution upper tail P(F(d1, d2) > f).
double f_survival(double f, double d1, double d2);

}  // namespace adlens

#endif  // ADLENS_AGENDA_H_
