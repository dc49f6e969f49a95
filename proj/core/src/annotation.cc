#include "adlens/annotation.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>

#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens {

LikertLabel LikertLabel::Score(int score) {
  if (score < 1 || score > 5)
    throw ValidationError("Likert score outside 1..5: " + std::to_string(score));
  return LikertLabel(score);
}

std::optional<LikertLabel> LikertLabel::Parse(std::string_view text) {
  text = trim(text);
  if (text == "irrelevant") return Irrelevant();
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '5') return LikertLabel(text[0] - '0');
  return std::nullopt;
}

std::string LikertLabel::ToString() const {
  return irrelevant() ? "irrelevant" : std::to_string(value_);
}

std::vector<AnnotationRecord> read_annotations(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open annotation file: " + path);
  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = split(body, '|');
    if (line_no == 1 && trim(cols[0]) == "ad_id") continue;
    if (cols.size() != 3)
      throw ParseError("", "expected ad_id|annotator_id|label", path, line_no);
    auto label = LikertLabel::Parse(cols[2]);
    if (!label) throw ParseError("label", "invalid label '" + cols[2] + "'", path, line_no);
    AnnotationRecord r{std::string(trim(cols[0])), std::string(trim(cols[1])), *label};
    if (!seen.emplace(r.ad_id, r.annotator_id).second)
      throw ParseError("annotator_id", "duplicate annotation for ad " + r.ad_id, path, line_no);
    out.push_back(std::move(r));
  }
  return out;
}

void write_annotations(const std::string &path,
                       const std::vector<AnnotationRecord> &annotations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write annotation file: " + path);
  out << "ad_id|annotator_id|label\n";
  for (const auto &a : annotations)
    out << a.ad_id << '|' << a.annotator_id << '|' << a.label.ToString() << '\n';
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha.

AlphaResult krippendorff_alpha(const ReliabilityMatrix &m, AlphaMetric metric) {
  // Distinct values in ascending order; categories are indices into it.
  std::vector<double> values;
  std::size_t pairable_items = 0;
  for (std::size_t i = 0; i < m.items(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < m.annotators(); ++j) count += m.at(i, j).has_value();
    if (count < 2) continue;
    ++pairable_items;
    for (std::size_t j = 0; j < m.annotators(); ++j) {
      if (m.at(i, j)) values.push_back(*m.at(i, j));
    }
  }
  if (pairable_items < 2)
    throw ValidationError("alpha needs at least two items with two or more labels");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t k = values.size();
  auto category = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) -
                                    values.begin());
  };

  // Coincidence matrix: each ordered pair of values within an item, weighted
  // by 1/(m_u - 1).
  std::vector<double> o(k * k, 0.0);
  std::vector<std::size_t> unit;
  for (std::size_t i = 0; i < m.items(); ++i) {
    unit.clear();
    for (std::size_t j = 0; j < m.annotators(); ++j) {
      if (m.at(i, j)) unit.push_back(category(*m.at(i, j)));
    }
    if (unit.size() < 2) continue;
    const double w = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t a = 0; a < unit.size(); ++a) {
      for (std::size_t b = 0; b < unit.size(); ++b) {
        if (a != b) o[unit[a] * k + unit[b]] += w;
      }
    }
  }
  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += o[c * k + d];
    n += marginal[c];
  }

  auto delta2 = [&](std::size_t c, std::size_t d) -> double {
    if (c == d) return 0.0;
    switch (metric) {
      case AlphaMetric::kNominal:
        return 1.0;
      case AlphaMetric::kInterval: {
        const double diff = values[c] - values[d];
        return diff * diff;
      }
      case AlphaMetric::kOrdinal: {
        const std::size_t lo = std::min(c, d), hi = std::max(c, d);
        double s = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) s += marginal[g];
        s -= (marginal[c] + marginal[d]) / 2.0;
        return s * s;
      }
    }
    return 0.0;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      const double dd = delta2(c, d);
      observed += o[c * k + d] * dd;
      expected += marginal[c] * marginal[d] * dd;
    }
  }

  AlphaResult r;
  r.pairable_items = pairable_items;
  r.pairable_values = n;
  if (expected == 0.0) {
    r.alpha = 1.0;
    r.degenerate = true;
    return r;
  }
  r.alpha = 1.0 - (n - 1.0) * observed / expected;
  return r;
}

// ---------------------------------------------------------------------------
// Label aggregation.

Consensus relevance_consensus(std::span<const LikertLabel> labels) {
  const auto irrelevant = std::count_if(labels.begin(), labels.end(),
                                        [](const LikertLabel &l) { return l.irrelevant(); });
  return irrelevant >= 2 ? Consensus::kDrop : Consensus::kKeep;
}

LikertLabel majority_label(std::span<const LikertLabel> labels, TieBreak tie) {
  if (labels.empty()) throw ValidationError("majority of an empty label set");
  std::array<int, 6> counts{};
  for (const auto &l : labels) ++counts[static_cast<std::size_t>(l.score())];
  const int best = *std::max_element(counts.begin(), counts.end());
  // Rank candidates: scores by distance to 3, then the tie direction;
  // irrelevant last.
  std::optional<int> winner;
  auto better = [&](int a, int b) {
    if (a == 0) return false;
    if (b == 0) return true;
    const int da = std::abs(a - 3), db = std::abs(b - 3);
    if (da != db) return da < db;
    return tie == TieBreak::kTowardLower ? a < b : a > b;
  };
  for (int v = 0; v <= 5; ++v) {
    if (counts[static_cast<std::size_t>(v)] != best) continue;
    if (!winner || better(v, *winner)) winner = v;
  }
  if (!winner) throw DataError("majority label unresolved");
  return *winner == 0 ? LikertLabel::Irrelevant() : LikertLabel::Score(*winner);
}

std::string_view to_string(Relevance r) {
  return r == Relevance::kRelevant ? "relevant" : "irrelevant";
}

std::string_view to_string(Leaning l) { return l == Leaning::kPro ? "pro" : "anti"; }

namespace {

std::map<std::string, std::vector<LikertLabel>> group_by_ad(
    const std::vector<AnnotationRecord> &annotations) {
  std::map<std::string, std::vector<LikertLabel>> by_ad;
  for (const auto &a : annotations) by_ad[a.ad_id].push_back(a.label);
  return by_ad;
}

}  // namespace

TrainingSets build_training_sets(const std::vector<AnnotationRecord> &annotations,
                                 const std::map<std::string, std::string> &ad_texts,
                                 const std::vector<std::string> &extra_irrelevant,
                                 TieBreak tie) {
  TrainingSets sets;
  for (const auto &[ad_id, labels] : group_by_ad(annotations)) {
    auto text = ad_texts.find(ad_id);
    if (text == ad_texts.end()) throw DataError("annotated ad has no text: " + ad_id);
    const LikertLabel m = majority_label(labels, tie);
    if (m.irrelevant() || m.score() == 3) {
      sets.relevance_set.emplace_back(text->second, Relevance::kIrrelevant);
      continue;
    }
    sets.relevance_set.emplace_back(text->second, Relevance::kRelevant);
    sets.leaning_set.emplace_back(text->second, m.score() <= 2 ? Leaning::kPro : Leaning::kAnti);
  }
  for (const auto &t : extra_irrelevant) sets.relevance_set.emplace_back(t, Relevance::kIrrelevant);
  return sets;
}

AgreementReport agreement_report(const std::vector<AnnotationRecord> &annotations) {
  AgreementReport report;
  std::map<std::string, std::size_t> annotator_index;
  for (const auto &a : annotations) annotator_index.emplace(a.annotator_id, 0);
  std::size_t next = 0;
  for (auto &[id, idx] : annotator_index) idx = next++;

  const auto by_ad = group_by_ad(annotations);
  report.ads_total = by_ad.size();
  std::vector<std::string> kept;
  for (const auto &[ad_id, labels] : by_ad) {
    if (relevance_consensus(labels) == Consensus::kDrop) ++report.ads_dropped;
    else kept.push_back(ad_id);
  }

  std::map<std::string, std::size_t> item_index;
  for (std::size_t i = 0; i < kept.size(); ++i) item_index[kept[i]] = i;

  ReliabilityMatrix five(kept.size(), annotator_index.size());
  ReliabilityMatrix polarity(kept.size(), annotator_index.size());
  std::set<std::size_t> polar_items;
  for (const auto &a : annotations) {
    auto it = item_index.find(a.ad_id);
    if (it == item_index.end() || a.label.irrelevant()) continue;
    const std::size_t col = annotator_index[a.annotator_id];
    const int s = a.label.score();
    five.set(it->second, col, static_cast<double>(s));
    if (s != 3) {
      polarity.set(it->second, col, s <= 2 ? 0.0 : 1.0);
      polar_items.insert(it->second);
    }
  }
  report.five_label = krippendorff_alpha(five, AlphaMetric::kOrdinal);
  report.polarity_items = polar_items.size();
  report.polarity = krippendorff_alpha(polarity, AlphaMetric::kNominal);
  return report;
}

}  // namespace adlens
