#include "adlens/charts.h"

#include <algorithm>
#include <cstdio>

#include "adlens/delimited.h"
#include "adlens/error.h"

namespace adlens {

namespace {

constexpr const char *kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400",
                                    "#2c3e50"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

std::string header(double width, double height, const std::string &kind,
                   const std::string &extra) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
         px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) +
         "\" data-chart=\"" + kind + "\"" + extra + ">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
         "\" fill=\"#ffffff\"/>\n";
}

std::string text(double x, double y, const std::string &s, const std::string &anchor = "start",
                 int size = 12) {
  return "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + xml_escape(s) +
         "</text>\n";
}

}  // namespace

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<EventMarker> read_event_markers(const std::string &path) {
  std::vector<EventMarker> out;
  for (const auto &row : read_delimited(path, ',', {"date", "label"})) {
    auto d = Date::Parse(row.cols[0]);
    if (!d) throw ParseError("date", "bad date '" + row.cols[0] + "'", path, row.line);
    out.push_back({*d, row.cols[1]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EventMarker &a, const EventMarker &b) { return a.date < b.date; });
  return out;
}

std::string render_pyramid(const ImpressionMatrix &m, const std::string &title) {
  constexpr double kWidth = 720, kCentre = 360, kHalf = 300, kTop = 50, kRow = 40, kBar = 30;
  const double height = kTop + 7 * kRow + 40;
  double peak = 0.0;
  for (Gender g : {Gender::kMale, Gender::kFemale})
    for (AgeBucket a : kAgeBuckets) peak = std::max(peak, m.at(g, a));
  if (!(peak > 0.0)) throw ValidationError("pyramid needs at least one positive cell");
  const double scale = kHalf / peak;

  std::string out = header(kWidth, height, "pyramid",
                           " data-scale=\"" + format_number(scale) + "\" data-centre=\"" +
                               px(kCentre) + "\"");
  out += text(kCentre, 24, title, "middle", 16);
  out += text(kCentre - kHalf, kTop - 8, "male");
  out += text(kCentre + kHalf, kTop - 8, "female", "end");
  for (AgeBucket a : kAgeBuckets) {
    const double row = 6 - static_cast<int>(a);
    const double y = kTop + row * kRow + (kRow - kBar) / 2;
    for (Gender g : {Gender::kMale, Gender::kFemale}) {
      const double v = m.at(g, a);
      if (!(v > 0.0)) continue;
      const double w = v * scale;
      const double x = g == Gender::kMale ? kCentre - w : kCentre;
      out += "<rect class=\"bar\" data-gender=\"" + std::string(to_string(g)) +
             "\" data-age=\"" + std::string(to_string(a)) + "\" data-value=\"" +
             format_number(v) + "\" x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) +
             "\" height=\"" + px(kBar) + "\" fill=\"" +
             (g == Gender::kMale ? kPalette[0] : kPalette[1]) + "\"/>\n";
    }
    out += text(8, y + kBar * 0.7, std::string(to_string(a)));
  }
  out += "<line x1=\"" + px(kCentre) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(kCentre) +
         "\" y2=\"" + px(kTop + 7 * kRow) + "\" stroke=\"#000000\"/>\n";
  out += "</svg>\n";
  return out;
}

std::string render_series(const std::vector<TimeSeries> &series,
                          const std::vector<EventMarker> &events, const std::string &title) {
  constexpr double kWidth = 900, kHeight = 420, kX0 = 60, kX1 = 860, kY0 = 50, kY1 = 350;
  if (series.empty() || series.front().empty())
    throw ValidationError("series chart needs at least one non-empty series");
  const Date start = series.front().start();
  const std::size_t n = series.front().size();
  for (const auto &s : series) {
    if (s.start() != start || s.size() != n)
      throw ValidationError("series " + s.name() + " is not on the shared grid");
  }
  auto x_of = [&](std::size_t i) {
    return n == 1 ? (kX0 + kX1) / 2 : kX0 + (kX1 - kX0) * static_cast<double>(i) / (n - 1);
  };

  std::string out = header(kWidth, kHeight, "series",
                           " data-start=\"" + start.ToString() + "\" data-days=\"" +
                               std::to_string(n) + "\"");
  out += text(kWidth / 2, 24, title, "middle", 16);
  out += "<rect x=\"" + px(kX0) + "\" y=\"" + px(kY0) + "\" width=\"" + px(kX1 - kX0) +
         "\" height=\"" + px(kY1 - kY0) + "\" fill=\"none\" stroke=\"#888888\"/>\n";
  out += text(kX0, kY1 + 18, start.ToString());
  out += text(kX1, kY1 + 18, series.front().end().ToString(), "end");

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto &s = series[k];
    const auto [lo_it, hi_it] = std::minmax_element(s.values().begin(), s.values().end());
    const double lo = std::min(0.0, *lo_it), hi = *hi_it;
    const double span = hi > lo ? hi - lo : 1.0;
    std::string values, points;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) {
        values += ' ';
        points += ' ';
      }
      values += format_number(s[i]);
      points += px(x_of(i)) + "," + px(kY1 - (kY1 - kY0) * (s[i] - lo) / span);
    }
    const char *colour = kPalette[k % std::size(kPalette)];
    out += "<polyline class=\"series\" data-series=\"" + xml_escape(s.name()) +
           "\" data-min=\"" + format_number(lo) + "\" data-max=\"" + format_number(hi) +
           "\" data-values=\"" + values + "\" points=\"" + points + "\" fill=\"none\" stroke=\"" +
           colour + "\"/>\n";
    out += text(kX1 - 200, kY0 + 16 + 16 * static_cast<double>(k),
                s.name() + " (max " + format_number(hi) + ")");
  }
  for (const auto &e : events) {
    if (!series.front().covers(e.date)) continue;
    const double x = x_of(static_cast<std::size_t>(e.date - start));
    out += "<line class=\"event\" data-date=\"" + e.date.ToString() + "\" data-label=\"" +
           xml_escape(e.label) + "\" x1=\"" + px(x) + "\" y1=\"" + px(kY0) + "\" x2=\"" + px(x) +
           "\" y2=\"" + px(kY1) + "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
    out += text(x + 3, kY0 + 12, e.label, "start", 10);
  }
  out += "</svg>\n";
  return out;
}

std::string render_granger(const std::vector<GrangerResult> &results, const std::string &title) {
  constexpr double kWidth = 720, kHeight = 420, kX0 = 60, kX1 = 660, kY0 = 50, kY1 = 350;
  if (results.empty() || results.front().lags.empty())
    throw ValidationError("Granger chart needs at least one result");
  int max_lag = 0;
  double peak = 0.0;
  for (const auto &r : results) {
    for (const auto &g : r.lags) {
      max_lag = std::max(max_lag, g.lag);
      peak = std::max(peak, g.f_statistic);
    }
  }
  const double span = peak > 0.0 ? peak : 1.0;
  auto x_of = [&](int lag) {
    return max_lag == 1 ? (kX0 + kX1) / 2
                        : kX0 + (kX1 - kX0) * static_cast<double>(lag - 1) / (max_lag - 1);
  };
  auto y_of = [&](double f) { return kY1 - (kY1 - kY0) * f / span; };

  std::string out = header(kWidth, kHeight, "granger", " data-max=\"" + format_number(peak) + "\"");
  out += text(kWidth / 2, 24, title, "middle", 16);
  out += "<rect x=\"" + px(kX0) + "\" y=\"" + px(kY0) + "\" width=\"" + px(kX1 - kX0) +
         "\" height=\"" + px(kY1 - kY0) + "\" fill=\"none\" stroke=\"#888888\"/>\n";
  for (int lag = 1; lag <= max_lag; ++lag) out += text(x_of(lag), kY1 + 18, std::to_string(lag), "middle");
  out += text((kX0 + kX1) / 2, kY1 + 36, "lag (days)", "middle");

  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto &r = results[k];
    const std::string direction = r.cause + "->" + r.effect;
    const char *colour = kPalette[k % std::size(kPalette)];
    std::string lags, values, points, markers;
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
      const auto &g = r.lags[i];
      if (i) {
        lags += ' ';
        values += ' ';
        points += ' ';
      }
      lags += std::to_string(g.lag);
      values += format_number(g.f_statistic);
      points += px(x_of(g.lag)) + "," + px(y_of(g.f_statistic));
      if (g.significant) {
        markers += "<circle class=\"significant\" data-direction=\"" + xml_escape(direction) +
                   "\" data-lag=\"" + std::to_string(g.lag) + "\" cx=\"" + px(x_of(g.lag)) +
                   "\" cy=\"" + px(y_of(g.f_statistic)) + "\" r=\"4\" fill=\"" + colour + "\"/>\n";
      }
    }
    out += "<polyline class=\"granger\" data-direction=\"" + xml_escape(direction) +
           "\" data-lags=\"" + lags + "\" data-values=\"" + values + "\" points=\"" + points +
           "\" fill=\"none\" stroke=\"" + colour + "\"/>\n";
    out += markers;
    out += text(kX1 - 220, kY0 + 16 + 16 * static_cast<double>(k), direction);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace adlens
