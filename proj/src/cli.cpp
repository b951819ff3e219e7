#include "oa/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <ostream>

#include "oa/pipeline.hpp"
#include "oa/text.hpp"

namespace oa::cli {

namespace {

struct Flags {
  InputPaths inputs;
  int min_universities = 10;
  int min_universities_gold = 5;
  std::string denominator = "all";
  std::vector<std::string> pmc_patterns;
  std::string handle_pattern = "hdl.handle.net";
  std::string period = "2014-2017";
  std::string format = "csv";
  std::string out_dir = "oa_report";
  std::size_t shards = 1;
  double max_issue_rate = 0.10;
  std::string issue_log;
  std::string apc, country_names, country_regions;
};

void add_common_options(CLI::App& app, Flags& f) {
  app.add_option("--evidence", f.inputs.evidence, "Evidence dump (JSON lines, optionally gzipped); repeatable")
      ->envname("OAIND_EVIDENCE")
      ->delimiter(',');
  app.add_option("--publications", f.inputs.publications, "Publication table (CSV or JSON lines)")
      ->envname("OAIND_PUBLICATIONS");
  app.add_option("--institutions", f.inputs.institutions, "Institution roster (CSV)")->envname("OAIND_INSTITUTIONS");
  app.add_option("--journals", f.inputs.journals, "Journal registry (CSV)")->envname("OAIND_JOURNALS");
  app.add_option("--apc", f.apc, "APC source: issn,has_apc (CSV)")->envname("OAIND_APC");
  app.add_option("--country-names", f.country_names, "Extra country-name lookup: name,code (CSV)")
      ->envname("OAIND_COUNTRY_NAMES");
  app.add_option("--region-table", f.country_regions, "Country to region table: country,regions (CSV)")
      ->envname("OAIND_REGION_TABLE");

  app.add_option("--min-universities", f.min_universities, "Universities a country needs to be displayed")
      ->envname("OAIND_MIN_UNIVERSITIES");
  app.add_option("--min-universities-gold", f.min_universities_gold,
                 "Universities a country needs to appear in the gold-model table")
      ->envname("OAIND_MIN_UNIVERSITIES_GOLD");
  app.add_option("--denominator", f.denominator, "Share denominator: all publications or only those with a DOI")
      ->envname("OAIND_DENOMINATOR")
      ->check(CLI::IsMember({"all", "doi"}));
  app.add_option("--pmc-pattern", f.pmc_patterns, "URL substring identifying PMC copies; repeatable")
      ->envname("OAIND_PMC_PATTERN")
      ->delimiter(',');
  app.add_option("--handle-pattern", f.handle_pattern, "URL substring of the handle resolver")
      ->envname("OAIND_HANDLE_PATTERN");
  app.add_option("--period", f.period, "Publication years, e.g. 2014-2017")->envname("OAIND_PERIOD");
  app.add_option("--format", f.format, "Output format")
      ->envname("OAIND_FORMAT")
      ->check(CLI::IsMember({"csv", "json-lines", "jsonl"}));
  app.add_option("--out-dir", f.out_dir, "Output directory")->envname("OAIND_OUT_DIR");
  app.add_option("--shards", f.shards, "Worker shards")->envname("OAIND_SHARDS");
  app.add_option("--max-issue-rate", f.max_issue_rate, "Largest tolerated share of schema-violating lines per input")
      ->envname("OAIND_MAX_ISSUE_RATE");
  app.add_option("--issue-log", f.issue_log, "Write every parse issue to this CSV file")->envname("OAIND_ISSUE_LOG");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Open Access indicators for universities"};
  app.name("oa-indicators");
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_common_options(app, flags);

  const std::vector<std::pair<std::string, std::set<Section>>> commands = {
      {"classify", {Section::Classification}},
      {"aggregate", {Section::Aggregate}},
      {"repo-match", {Section::RepoMatch}},
      {"pmc-report", {Section::PmcReport}},
      {"gold-model", {Section::GoldModel}},
      {"report", kAllSections},
  };
  const std::map<std::string, std::string> descriptions = {
      {"classify", "Per-publication OA type labels"},
      {"aggregate", "University, country, region and field indicator tables"},
      {"repo-match", "Institutional repository lower/upper bounds"},
      {"pmc-report", "PubMed Central overlap by country"},
      {"gold-model", "Gold OA country models"},
      {"report", "Full report bundle"},
  };
  for (const auto& [name, sections] : commands) app.add_subcommand(name, descriptions.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    PipelineConfig config;
    config.min_universities_country = flags.min_universities;
    config.min_universities_gold_model = flags.min_universities_gold;
    config.denominator_mode = flags.denominator == "doi" ? DenominatorMode::DoiPubs : DenominatorMode::AllPubs;
    if (!flags.pmc_patterns.empty()) config.pmc_url_patterns = flags.pmc_patterns;
    config.handle_pattern = flags.handle_pattern;
    config.period = parse_year_range(flags.period);

    RunOptions options;
    for (const auto& [name, sections] : commands) {
      if (app.got_subcommand(name)) options.sections = sections;
    }
    options.shards = flags.shards;
    options.format = *report::parse_format(flags.format);
    options.out_dir = flags.out_dir;
    options.max_issue_rate = flags.max_issue_rate;
    if (!flags.issue_log.empty()) options.issue_log = flags.issue_log;

    InputPaths inputs = flags.inputs;
    if (!flags.apc.empty()) inputs.apc = flags.apc;
    if (!flags.country_names.empty()) inputs.country_names = flags.country_names;
    if (!flags.country_regions.empty()) inputs.country_regions = flags.country_regions;

    const auto result = run_pipeline(config, inputs, options);
    std::size_t issue_count = 0;
    for (const auto& [key, count] : result.issues) issue_count += count;
    out << fmt::format("wrote {} tables to {} ({} input issues)\n", result.bundle.tables.size(), options.out_dir,
                       issue_count);
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SchemaViolationError& e) {
    err << "schema violation ceiling exceeded: " << e.what() << '\n';
    return kSchemaCeiling;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace oa::cli
