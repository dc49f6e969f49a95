#ifndef ADLENS_CHARTS_H_
#define ADLENS_CHARTS_H_

// Deterministic SVG charts. Every drawn element carries its source numbers in
// data-* attributes (shortest round-trip decimal form), and the pixel geometry
// is derived from those numbers through the scale recorded on the root
// element.

#include <string>
#include <vector>

#include "adlens/agenda.h"
#include "adlens/audience.h"
#include "adlens/date.h"

namespace adlens {

struct EventMarker {
  Date date;
  std::string label;

  bool operator==(const EventMarker &) const = default;
};

// CSV "date,label". Labels may not contain commas.
std::vector<EventMarker> read_event_markers(const std::string &path);

// Male bars extend left of the centre line, female bars right, one row per age
// bucket (oldest on top). Zero cells draw no bar. Root attribute data-scale is
// pixels per impression.
std::string render_pyramid(const ImpressionMatrix &m, const std::string &title);

// One polyline per series, each scaled to its own maximum (data-max), plus a
// labelled vertical line per event inside the plotted range. Series must share
// one grid.
std::string render_series(const std::vector<TimeSeries> &series,
                          const std::vector<EventMarker> &events, const std::string &title);

// F statistic by lag, one polyline per direction; significant lags get a
// circle marker.
std::string render_granger(const std::vector<GrangerResult> &results, const std::string &title);

std::string xml_escape(std::string_view s);

}  // namespace adlens

#endif  // ADLENS_CHARTS_H_
