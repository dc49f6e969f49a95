#include "adlens/agenda.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/fisher_f.hpp>

#include "adlens/delimited.h"
#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens {

TimeSeries::TimeSeries(std::string name, Date start, std::vector<double> values)
    : name_(std::move(name)), start_(start), values_(std::move(values)) {}

TimeSeries TimeSeries::Zeros(std::string name, Date first, Date last) {
  if (last < first) throw ValidationError("series end precedes start");
  return TimeSeries(std::move(name), first,
                    std::vector<double>(static_cast<std::size_t>(last - first + 1), 0.0));
}

double TimeSeries::at(Date d) const {
  if (!covers(d)) throw ValidationError("date " + d.ToString() + " outside series " + name_);
  return values_[static_cast<std::size_t>(d - start_)];
}

void TimeSeries::add(Date d, double v) {
  if (!covers(d)) throw ValidationError("date " + d.ToString() + " outside series " + name_);
  values_[static_cast<std::size_t>(d - start_)] += v;
}

TimeSeries TimeSeries::slice(Date first, Date last) const {
  if (empty()) return TimeSeries(name_, first, {});
  const Date lo = std::max(first, start_);
  const Date hi = std::min(last, end());
  if (hi < lo) return TimeSeries(name_, lo, {});
  const auto b = values_.begin() + (lo - start_);
  return TimeSeries(name_, lo, std::vector<double>(b, b + (hi - lo + 1)));
}

TimeSeries TimeSeries::difference() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < values_.size(); ++i) d.push_back(values_[i] - values_[i - 1]);
  return TimeSeries(name_, start_ + 1, std::move(d));
}

double TimeSeries::sum() const {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value();
}

std::string TimeSeries::ToCsv() const {
  std::string out = "date," + (name_.empty() ? std::string("value") : name_) + "\n";
  for (std::size_t i = 0; i < values_.size(); ++i)
    out += date(i).ToString() + "," + format_number(values_[i]) + "\n";
  return out;
}

TimeSeries TimeSeries::FromCsv(const std::string &text, const std::string &source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::string name;
  std::optional<Date> start;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cols = split(trim(line), ',');
    if (cols.size() != 2) throw ParseError("", "expected 2 columns", source, line_no);
    if (line_no == 1) {
      if (cols[0] != "date") throw ParseError("date", "missing header", source, line_no);
      name = cols[1];
      continue;
    }
    auto d = Date::Parse(cols[0]);
    if (!d) throw ParseError("date", "bad date '" + cols[0] + "'", source, line_no);
    if (!start) start = *d;
    if (*d != *start + static_cast<std::int32_t>(values.size()))
      throw ParseError("date", "dates must be contiguous days", source, line_no);
    values.push_back(parse_number(cols[1], "value", source, line_no));
  }
  return TimeSeries(name, start.value_or(Date()), std::move(values));
}

// ---------------------------------------------------------------------------
// Series construction.

TimeSeries news_series(const std::vector<NewsArticle> &articles, const ThemeCatalog &catalog,
                       std::optional<PeriodFilter> grid) {
  if (!grid) {
    if (articles.empty()) return TimeSeries("news", Date(), {});
    auto [lo, hi] = std::minmax_element(
        articles.begin(), articles.end(),
        [](const NewsArticle &a, const NewsArticle &b) { return a.date() < b.date(); });
    grid.emplace(lo->date(), hi->date());
  }
  TimeSeries s = TimeSeries::Zeros("news", grid->start_date, grid->end_date);
  for (const auto &a : articles) {
    if (!grid->contains(a.date())) continue;
    const ThemeCount c = migration_theme_count(a, catalog);
    if (c.total_count == 0) continue;
    s.add(a.date(), static_cast<double>(c.migration_count) / static_cast<double>(c.total_count));
  }
  return s;
}

namespace {

Date delivery_end(const AdRecord &ad, Date collection_date) {
  return ad.delivery_start + (delivery_days(ad, collection_date) - 1);
}

TimeSeries spread(const std::vector<const AdRecord *> &ads, std::optional<PeriodFilter> grid,
                  Date collection_date) {
  if (!grid) {
    if (ads.empty()) return TimeSeries("impressions", Date(), {});
    Date lo = ads.front()->delivery_start, hi = delivery_end(*ads.front(), collection_date);
    for (const AdRecord *ad : ads) {
      lo = std::min(lo, ad->delivery_start);
      hi = std::max(hi, delivery_end(*ad, collection_date));
    }
    grid.emplace(lo, hi);
  }
  const std::size_t n = static_cast<std::size_t>(grid->end_date - grid->start_date + 1);
  std::vector<CompensatedSum> sums(n);
  for (const AdRecord *ad : ads) {
    const std::int32_t days = delivery_days(*ad, collection_date);
    const double per_day = estimated_impressions(*ad, collection_date) / days;
    const Date first = std::max(ad->delivery_start, grid->start_date);
    const Date last = std::min(delivery_end(*ad, collection_date), grid->end_date);
    for (Date d = first; d <= last; d = d + 1)
      sums[static_cast<std::size_t>(d - grid->start_date)].add(per_day);
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = sums[i].value();
  return TimeSeries("impressions", grid->start_date, std::move(values));
}

}  // namespace

TimeSeries impressions_series(const std::vector<AdRecord> &ads, std::optional<PeriodFilter> grid,
                              Date collection_date) {
  std::vector<const AdRecord *> ptrs;
  for (const auto &ad : ads) ptrs.push_back(&ad);
  return spread(ptrs, grid, collection_date);
}

TimeSeries impressions_series(const std::vector<AdRecord> &ads, const StanceAssignments &labels,
                              stance::StanceLabel keep, std::optional<PeriodFilter> grid,
                              Date collection_date) {
  std::vector<const AdRecord *> ptrs;
  for (const auto &ad : ads) {
    auto it = labels.find(ad.id);
    if (it == labels.end()) throw ValidationError("ad " + ad.id + " has no stance label");
    if (it->second == keep) ptrs.push_back(&ad);
  }
  TimeSeries s = spread(ptrs, grid, collection_date);
  s.set_name("impressions_" + std::string(to_string(keep)));
  return s;
}

// ---------------------------------------------------------------------------
// Regression.

OlsFit ols_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
               const std::vector<std::string> &column_names) {
  if (x.rows() != y.size()) throw ValidationError("design matrix and response differ in rows");
  if (x.rows() <= x.cols())
    throw ValidationError("least squares needs more rows (" + std::to_string(x.rows()) +
                          ") than columns (" + std::to_string(x.cols()) + ")");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    std::vector<std::string> dependent;
    const auto &perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
      const auto c = static_cast<std::size_t>(perm[i]);
      dependent.push_back(c < column_names.size() ? column_names[c] : "column " + std::to_string(c));
    }
    std::sort(dependent.begin(), dependent.end());
    throw NumericError("design matrix is rank deficient; dependent columns: " +
                       join(dependent, ", "));
  }
  OlsFit fit;
  fit.coefficients = qr.solve(y);
  fit.rss = (y - x * fit.coefficients).squaredNorm();
  return fit;
}

double f_survival(double f, double d1, double d2) {
  if (!(f > 0.0)) return 1.0;
  boost::math::fisher_f_distribution<double> dist(d1, d2);
  return std::clamp(boost::math::cdf(boost::math::complement(dist, f)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Granger causality.

namespace {

bool is_constant(const std::vector<double> &v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

GrangerResult granger_test(const TimeSeries &cause_in, const TimeSeries &effect_in,
                           const GrangerOptions &options) {
  if (options.max_lag < 1) throw ValidationError("max_lag must be at least 1");
  if (!(options.significance > 0.0 && options.significance < 1.0))
    throw ValidationError("significance must lie in (0, 1)");
  if (cause_in.start() != effect_in.start() || cause_in.size() != effect_in.size())
    throw ValidationError("series " + cause_in.name() + " and " + effect_in.name() +
                          " are not on the same date grid");
  const TimeSeries cause = options.first_difference ? cause_in.difference() : cause_in;
  const TimeSeries effect = options.first_difference ? effect_in.difference() : effect_in;
  const std::size_t len = cause.size();
  const std::size_t max_lag = static_cast<std::size_t>(options.max_lag);
  if (len <= 3 * max_lag + 1)
    throw ValidationError("series length " + std::to_string(len) + " too short for max_lag " +
                          std::to_string(max_lag) + " (need > " +
                          std::to_string(3 * max_lag + 1) + ")");
  for (const TimeSeries *s : {&cause, &effect}) {
    if (is_constant(s->values())) throw NumericError("series " + s->name() + " is constant");
  }

  GrangerResult result;
  result.cause = cause.name();
  result.effect = effect.name();
  result.options = options;
  const auto &x = cause.values();
  const auto &y = effect.values();
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    const auto n = static_cast<Eigen::Index>(len - lag);
    const auto k = static_cast<Eigen::Index>(lag);
    Eigen::MatrixXd design(n, 1 + 2 * k);
    Eigen::VectorXd response(n);
    std::vector<std::string> names = {"intercept"};
    for (std::size_t j = 1; j <= lag; ++j) names.push_back(effect.name() + "[t-" + std::to_string(j) + "]");
    for (std::size_t j = 1; j <= lag; ++j) names.push_back(cause.name() + "[t-" + std::to_string(j) + "]");
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::size_t t = static_cast<std::size_t>(r) + lag;
      response(r) = y[t];
      design(r, 0) = 1.0;
      for (Eigen::Index j = 1; j <= k; ++j) {
        design(r, j) = y[t - static_cast<std::size_t>(j)];
        design(r, k + j) = x[t - static_cast<std::size_t>(j)];
      }
    }
    const OlsFit restricted = ols_fit(design.leftCols(1 + k), response,
                                      std::vector<std::string>(names.begin(), names.begin() + 1 + k));
    const OlsFit unrestricted = ols_fit(design, response, names);

    GrangerLag g;
    g.lag = static_cast<int>(lag);
    g.observations = static_cast<std::size_t>(n);
    g.df_numerator = static_cast<int>(lag);
    g.df_denominator = static_cast<int>(n - 2 * k - 1);
    g.rss_restricted = restricted.rss;
    g.rss_unrestricted = unrestricted.rss;
    if (!(unrestricted.rss > 0.0))
      throw NumericError("unrestricted model fits " + effect.name() + " exactly at lag " +
                         std::to_string(lag));
    const double gain = std::max(0.0, restricted.rss - unrestricted.rss);
    g.f_statistic = (gain / g.df_numerator) / (unrestricted.rss / g.df_denominator);
    g.p_value = f_survival(g.f_statistic, g.df_numerator, g.df_denominator);
    g.significant = g.p_value < options.significance;
    result.lags.push_back(g);
  }
  return result;
}

std::vector<int> GrangerResult::flagged_lags() const {
  std::vector<int> out;
  for (const auto &g : lags)
    if (g.significant) out.push_back(g.lag);
  return out;
}

std::string GrangerResult::ToCsv() const {
  std::string out =
      "cause,effect,lag,f_statistic,p_value,rss_restricted,rss_unrestricted,observations,"
      "df_numerator,df_denominator,significant\n";
  for (const auto &g : lags) {
    out += cause + "," + effect + "," + std::to_string(g.lag) + "," + format_number(g.f_statistic) +
           "," + format_number(g.p_value) + "," + format_number(g.rss_restricted) + "," +
           format_number(g.rss_unrestricted) + "," + std::to_string(g.observations) + "," +
           std::to_string(g.df_numerator) + "," + std::to_string(g.df_denominator) + "," +
           (g.significant ? "1" : "0") + "\n";
  }
  return out;
}

nlohmann::json GrangerResult::to_json() const {
  nlohmann::json lags_json = nlohmann::json::array();
  for (const auto &g : lags) {
    lags_json.push_back({{"lag", g.lag},
                         {"f_statistic", g.f_statistic},
                         {"p_value", g.p_value},
                         {"rss_restricted", g.rss_restricted},
                         {"rss_unrestricted", g.rss_unrestricted},
                         {"observations", g.observations},
                         {"df_numerator", g.df_numerator},
                         {"df_denominator", g.df_denominator},
                         {"significant", g.significant}});
  }
  return {{"cause", cause},
          {"effect", effect},
          {"max_lag", options.max_lag},
          {"significance", options.significance},
          {"first_difference", options.first_difference},
          {"lags", lags_json}};
}

}  // namespace adlens
