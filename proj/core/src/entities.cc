#include "adlens/entities.h"

#include <array>
#include <fstream>
#include <tuple>

#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens {
namespace {

constexpr std::array<std::string_view, 9> kActorNames = {
    "party",  "politician",   "ngo",   "university", "trade_union",
    "journalist_or_news", "fact_checker", "other", "unresolved"};
constexpr std::array<std::string_view, 6> kPartyNames = {"PD", "Lega", "M5S",
                                                         "FdI", "IV", "none"};

}  // namespace

std::string_view to_string(ActorType t) { return kActorNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Party p) { return kPartyNames[static_cast<std::size_t>(p)]; }

std::optional<ActorType> parse_actor_type(std::string_view s) {
  for (std::size_t i = 0; i < kActorNames.size(); ++i) {
    if (kActorNames[i] == s) return static_cast<ActorType>(i);
  }
  return std::nullopt;
}

std::optional<Party> parse_party(std::string_view s) {
  for (std::size_t i = 0; i < kPartyNames.size(); ++i) {
    if (kPartyNames[i] == s) return static_cast<Party>(i);
  }
  return std::nullopt;
}

std::string normalize_name(std::string_view name) {
  return join(word_tokens(name), " ");
}

Gazetteer::Gazetteer(const std::vector<GazetteerEntry> &entries) {
  for (const auto &raw : entries) {
    GazetteerEntry e = raw;
    e.surface_form = normalize_name(raw.surface_form);
    if (e.surface_form.empty()) continue;
    if (e.actor_type == ActorType::kParty && e.party_affiliation == Party::kNone)
      throw ValidationError("gazetteer party entry without affiliation: " + raw.surface_form);
    if (e.actor_type == ActorType::kUnresolved)
      throw ValidationError("gazetteer entry cannot be 'unresolved': " + raw.surface_form);
    auto [it, inserted] = index_.try_emplace(e.surface_form, e);
    if (!inserted && !(it->second == e)) {
      conflicts_.push_back(e.surface_form);
      if (std::tie(e.actor_type, e.party_affiliation) <
          std::tie(it->second.actor_type, it->second.party_affiliation))
        it->second = e;
    }
  }
}

Gazetteer Gazetteer::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gazetteer: " + path);
  std::vector<GazetteerEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = split(body, '|');
    if (line_no == 1 && !cols.empty() && trim(cols[0]) == "surface_form") continue;
    if (cols.size() != 3)
      throw ParseError("", "expected surface_form|actor_type|party_affiliation", path, line_no);
    auto type = parse_actor_type(trim(cols[1]));
    auto party = parse_party(trim(cols[2]));
    if (!type) throw ParseError("actor_type", "unknown value '" + cols[1] + "'", path, line_no);
    if (!party) throw ParseError("party_affiliation", "unknown value '" + cols[2] + "'", path, line_no);
    entries.push_back({std::string(trim(cols[0])), *type, *party});
  }
  try {
    return Gazetteer(entries);
  } catch (const ValidationError &e) {
    throw DataError(path + ": " + e.what());
  }
}

const GazetteerEntry *Gazetteer::find(std::string_view normalized) const {
  auto it = index_.find(std::string(normalized));
  return it == index_.end() ? nullptr : &it->second;
}

PageEntity resolve_page(std::string_view page_id, std::string_view name,
                        const Gazetteer &g) {
  PageEntity page;
  page.page_id = std::string(page_id);
  page.name = std::string(name);
  const auto tokens = word_tokens(name);
  for (std::size_t len = tokens.size(); len >= 1; --len) {
    for (std::size_t start = 0; start + len <= tokens.size(); ++start) {
      std::string ngram = tokens[start];
      for (std::size_t i = start + 1; i < start + len; ++i) ngram += " " + tokens[i];
      if (const GazetteerEntry *e = g.find(ngram)) {
        page.actor_type = e->actor_type;
        page.party_affiliation = e->party_affiliation;
        page.matched_ngram = std::move(ngram);
        return page;
      }
    }
  }
  return page;
}

PageEntity resolve_page(std::string_view name, const std::vector<GazetteerEntry> &g) {
  return resolve_page("", name, Gazetteer(g));
}

std::map<Party, std::size_t> affiliation_rollup(const std::vector<PageEntity> &pages) {
  std::map<Party, std::size_t> counts;
  for (const auto &p : pages) {
    if (p.actor_type == ActorType::kUnresolved || p.party_affiliation == Party::kNone)
      continue;
    ++counts[p.party_affiliation];
  }
  return counts;
}

}  // namespace adlens
