// adlens command-line front end.
//
//   adlens <ingest|resolve|train|classify|report> --config run.json [overrides]
//
// Exit codes: 0 success, 2 validation, 3 data, 4 numeric, 1 anything else.
// Failures print one JSON line on stderr.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "adlens/error.h"
#include "adlens/report.h"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string period_start;
  std::string period_end;
  std::string out;
  std::string manifest;
  std::string keywords;
  std::string themes;
  std::string gazetteer;
  std::string regions;
  std::string events;
  std::string model;
  std::optional<int> threads;
};

int fail(std::string_view kind, int code, const std::string &message) {
  nlohmann::json j = {{"error", kind}, {"exit_code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

std::string_view kind_name(adlens::ErrorKind k) {
  switch (k) {
    case adlens::ErrorKind::kValidation: return "validation";
    case adlens::ErrorKind::kData: return "data";
    case adlens::ErrorKind::kNumeric: return "numeric";
  }
  return "unknown";
}

adlens::Date parse_date_flag(const std::string &text, const char *flag) {
  auto d = adlens::Date::Parse(text);
  if (!d) throw adlens::ValidationError(std::string(flag) + " is not a YYYY-MM-DD date: " + text);
  return *d;
}

adlens::RunConfig build_config(const Overrides &o) {
  adlens::RunConfig c = adlens::RunConfig::Load(o.config);
  auto set = [](const std::string &flag, std::string &field) {
    if (!flag.empty()) field = flag;
  };
  set(o.out, c.output_dir);
  set(o.manifest, c.manifest);
  set(o.keywords, c.keywords);
  set(o.themes, c.themes);
  set(o.gazetteer, c.gazetteer);
  set(o.regions, c.regions);
  set(o.events, c.events);
  set(o.model, c.model);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (!o.period_start.empty() || !o.period_end.empty()) {
    const adlens::Date start = o.period_start.empty()
                                   ? (c.period ? c.period->start_date
                                               : throw adlens::ValidationError(
                                                     "--period-end given without a start"))
                                   : parse_date_flag(o.period_start, "--period-start");
    const adlens::Date end = o.period_end.empty()
                                 ? (c.period ? c.period->end_date
                                             : throw adlens::ValidationError(
                                                   "--period-start given without an end"))
                                 : parse_date_flag(o.period_end, "--period-end");
    if (end < start) throw adlens::ValidationError("--period-end precedes --period-start");
    c.period.emplace(start, end);
  }
  return c;
}

void add_common(CLI::App *cmd, Overrides &o, bool report) {
  cmd->add_option("--config", o.config, "Run configuration (JSON)")->required();
  auto *seed = cmd->add_option("--seed", o.seed, "Random seed");
  auto *start = cmd->add_option("--period-start", o.period_start, "First day, YYYY-MM-DD");
  auto *end = cmd->add_option("--period-end", o.period_end, "Last day, YYYY-MM-DD");
  auto *out = cmd->add_option("--out", o.out, "Output directory");
  if (report) {
    seed->required();
    start->required();
    end->required();
    out->required();
  }
  cmd->add_option("--manifest", o.manifest, "Dataset manifest");
  cmd->add_option("--keywords", o.keywords, "Keyword list");
  cmd->add_option("--themes", o.themes, "Migration theme list");
  cmd->add_option("--gazetteer", o.gazetteer, "Actor gazetteer");
  cmd->add_option("--regions", o.regions, "Canonical region list");
  cmd->add_option("--events", o.events, "Event markers (CSV)");
  cmd->add_option("--model", o.model, "Trained model (classify)");
  cmd->add_option("--threads", o.threads, "Worker threads");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"adlens: political ad archive analysis"};
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char *, adlens::Command> commands[] = {
      {"ingest", adlens::Command::kIngest},     {"resolve", adlens::Command::kResolve},
      {"train", adlens::Command::kTrain},       {"classify", adlens::Command::kClassify},
      {"report", adlens::Command::kReport}};
  const char *descriptions[] = {
      "Load, deduplicate and period-filter the dataset", "Resolve pages against the gazetteer",
      "Train the two-stage stance classifier", "Label ads with a trained classifier",
      "Run the full chain and write the report bundle"};
  std::vector<std::pair<CLI::App *, adlens::Command>> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App *cmd = app.add_subcommand(commands[i].first, descriptions[i]);
    add_common(cmd, o, commands[i].second == adlens::Command::kReport);
    subs.emplace_back(cmd, commands[i].second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("validation", 2, e.what());
  }

  try {
    for (const auto &[cmd, command] : subs) {
      if (!cmd->parsed()) continue;
      const adlens::RunConfig config = build_config(o);
      const adlens::CommandResult result = adlens::run_command(command, config);
      nlohmann::json summary = {{"command", adlens::to_string(command)},
                                {"output_dir", config.output_dir},
                                {"files", result.files},
                                {"diagnostics", result.diagnostics}};
      std::cout << summary.dump() << "\n";
    }
  } catch (const adlens::Error &e) {
    return fail(kind_name(e.kind()), e.exit_code(), e.what());
  } catch (const std::exception &e) {
    return fail("internal", 1, e.what());
  }
  return 0;
}
