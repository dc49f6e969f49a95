#ifndef ADLENS_REPORT_H_
#define ADLENS_REPORT_H_

// Run configuration, output tables and the five pipeline commands.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "adlens/agenda.h"
#include "adlens/date.h"
#include "adlens/stance/pipeline.h"
#include "adlens/store.h"

namespace adlens {

struct ReportToggles {
  bool audience = true;
  bool targeting = true;
  bool agenda = true;
  bool features = true;

  bool any() const { return audience || targeting || agenda || features; }
};

// Grid search over the default grid of one family per stage.
struct ModelSelection {
  stance::ModelFamily relevance = stance::ModelFamily::kRandomForest;
  stance::ModelFamily leaning = stance::ModelFamily::kMultinomialNaiveBayes;
  int folds = 10;
};

// Paths are stored resolved against the config file's directory. Empty means
// "not given".
struct RunConfig {
  std::string manifest;
  std::string keywords;
  std::string themes;              // default theme catalog when empty
  std::string gazetteer;
  std::string regions;
  std::string population;          // survey comparison runs only when the
  std::string potential_audience;  // three audience files are all given
  std::string survey;
  std::string events;
  std::string model;  // input model for classify; <output_dir>/model.json when empty

  std::optional<PeriodFilter> period;  // overrides the manifest period
  Date collection_date = kDefaultCollectionDate;
  std::optional<std::uint64_t> seed;
  std::string output_dir;

  stance::PipelineSpec pipeline;
  std::optional<ModelSelection> selection;
  std::size_t extra_irrelevant = 0;  // keyword-negative ads added as irrelevant
  GrangerOptions granger;
  double targeting_epsilon = 0.0;
  int threads = 1;
  std::size_t top_features = 20;
  ReportToggles report;

  // Unknown keys are rejected.
  static RunConfig FromJson(const nlohmann::json &j, const std::string &base_dir);
  static RunConfig Load(const std::string &path);
};

enum class Command { kIngest, kResolve, kTrain, kClassify, kReport };

std::string_view to_string(Command c);

// Throws ValidationError for the first problem found: a missing mandatory
// setting or a referenced path that does not exist.
void validate_config(const RunConfig &c, Command cmd);

using Cell = std::variant<std::monostate, std::string, std::int64_t, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Header row, then one line per row; doubles in shortest round-trip form,
  // missing values empty.
  std::string ToCsv() const;
  // {"columns": [...], "rows": [[...], ...]}
  nlohmann::json to_json() const;
};

// Files written by one command. rollback() deletes them again, together with
// any directory the sink created.
class OutputSink {
 public:
  explicit OutputSink(std::string root);

  const std::string &root() const { return root_; }
  std::string path(const std::string &relative) const;

  // Writes through a temporary file and a rename.
  void write(const std::string &relative, const std::string &content);
  // <name>.csv and <name>.json.
  void write_table(const std::string &name, const Table &t);
  // Registers a file produced by someone else under root().
  void adopt(const std::string &relative);
  // Creates root() and `relative` below it, recording what was new.
  void make_dir(const std::string &relative = {});

  const std::vector<std::string> &written() const { return written_; }
  void rollback() noexcept;

 private:
  std::string root_;
  std::vector<std::string> written_;
  std::vector<std::string> created_dirs_;
};

struct CommandResult {
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> diagnostics;
};

// Each command validates `c`, runs, and on failure removes whatever it wrote.
CommandResult cmd_ingest(const RunConfig &c);
CommandResult cmd_resolve(const RunConfig &c);
CommandResult cmd_train(const RunConfig &c);
CommandResult cmd_classify(const RunConfig &c);
CommandResult cmd_report(const RunConfig &c);

CommandResult run_command(Command cmd, const RunConfig &c);

// Text the classifier sees for an ad: body, then title.
std::string ad_document(const AdRecord &ad);

}  // namespace adlens

#endif  // ADLENS_REPORT_H_
