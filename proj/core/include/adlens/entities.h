#ifndef ADLENS_ENTITIES_H_
#define ADLENS_ENTITIES_H_

// Offline gazetteer matching of advertiser page names.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adlens {

enum class ActorType {
  kParty,
  kPolitician,
  kNgo,
  kUniversity,
  kTradeUnion,
  kJournalistOrNews,
  kFactChecker,
  kOther,
  kUnresolved,
};

enum class Party { kPD, kLega, kM5S, kFdI, kIV, kNone };

inline constexpr Party kMajorParties[] = {Party::kPD, Party::kLega, Party::kM5S,
                                          Party::kFdI, Party::kIV};

std::string_view to_string(ActorType t);
std::string_view to_string(Party p);
std::optional<ActorType> parse_actor_type(std::string_view s);
std::optional<Party> parse_party(std::string_view s);

struct GazetteerEntry {
  std::string surface_form;
  ActorType actor_type = ActorType::kOther;
  Party party_affiliation = Party::kNone;

  bool operator==(const GazetteerEntry &) const = default;
};

struct PageEntity {
  std::string page_id;
  std::string name;
  ActorType actor_type = ActorType::kUnresolved;
  Party party_affiliation = Party::kNone;
  std::optional<std::string> matched_ngram;

  bool operator==(const PageEntity &) const = default;
};

// Lowercase, punctuation stripped, whitespace collapsed; diacritics kept.
std::string normalize_name(std::string_view name);

// Surface form -> entry index. Entries sharing a surface form are reduced to
// the smallest (actor_type, party) pair, so lookups never depend on the order
// entries were added.
class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(const std::vector<GazetteerEntry> &entries);

  // Reads "surface_form|actor_type|party_affiliation" lines.
  static Gazetteer Load(const std::string &path);

  const GazetteerEntry *find(std::string_view normalized) const;
  std::size_t size() const { return index_.size(); }
  const std::vector<std::string> &conflicts() const { return conflicts_; }

 private:
  std::unordered_map<std::string, GazetteerEntry> index_;
  std::vector<std::string> conflicts_;
};

// Longest n-gram hit wins; equal lengths go to the leftmost start.
PageEntity resolve_page(std::string_view page_id, std::string_view name,
                        const Gazetteer &g);
PageEntity resolve_page(std::string_view name, const std::vector<GazetteerEntry> &g);

// Pages per major party; unresolved and unaffiliated pages are excluded.
std::map<Party, std::size_t> affiliation_rollup(const std::vector<PageEntity> &pages);

}  // namespace adlens

#endif  // ADLENS_ENTITIES_H_
