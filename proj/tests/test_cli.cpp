#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "oa/cli.hpp"
#include "support/test_support.hpp"

using namespace oa::testing;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;
  fs::path evidence, publications, institutions, journals;
};

Fixture make_fixture(const std::string& name, const std::string& evidence_text, const std::string& pubs_text) {
  Fixture f;
  f.dir = temp_dir("cli_" + name);
  f.evidence = f.dir / "evidence.jsonl";
  f.publications = f.dir / "publications.csv";
  f.institutions = f.dir / "institutions.csv";
  f.journals = f.dir / "journals.csv";
  write_file(f.evidence, evidence_text);
  write_file(f.publications, pubs_text);
  write_file(f.institutions,
             "inst_id,name,country,regions,repo_url_patterns\n"
             "U1,Univ One,TR,Asia;Europe,repository.one.edu.tr\n"
             "U2,Univ Two,GB,Europe,\n");
  write_file(f.journals,
             "journal_id,issns,country,is_fully_oa,has_apc,publisher_address\n"
             "J1,1111-1111,TR,true,no,\n"
             "J2,2222-2222,,false,yes,\"LONDON, ENGLAND\"\n");
  return f;
}

const std::string kPubHeader = "pub_id,doi,year,doc_type,journal_id,institution_ids,field_ids,language\n";

const std::string kEvidence =
    R"({"doi":"10.1/a","journal_is_oa":true,"oa_locations":[{"host_type":"publisher","url":"https://x.org/a","license":"cc-by"}]})"
    "\n"
    R"({"doi":"10.1/b","journal_is_oa":false,"oa_locations":[{"host_type":"repository","url":"https://repository.one.edu.tr/1"}]})"
    "\n";

const std::string kPubs = kPubHeader +
                          "P1,10.1/a,2015,article,J1,U1,BHS,en\n"
                          "P2,10.1/b,2016,review,J2,U1;U2,LES,en\n";

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "oa-indicators");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = oa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> base_args(const Fixture& f, const std::string& command) {
  return {command,
          "--evidence", f.evidence.string(),
          "--publications", f.publications.string(),
          "--institutions", f.institutions.string(),
          "--journals", f.journals.string(),
          "--out-dir", (f.dir / "out").string()};
}

}  // namespace

TEST_CASE("cli: report writes every table") {
  const auto f = make_fixture("report", kEvidence, kPubs);
  const auto r = run_cli(base_args(f, "report"));
  CHECK(r.code == 0);
  CHECK(r.out.find("tables to") != std::string::npos);
  const auto classification = read_file(f.dir / "out" / "classification.csv");
  CHECK(classification ==
        "pub_id,doi,gold,green,hybrid,bronze,any_oa\n"
        "P1,10.1/a,1,0,0,0,1\n"
        "P2,10.1/b,0,1,0,0,1\n");
  for (const auto* name : {"overlap", "university_indicators", "country_medians", "region_medians", "field_summary",
                           "university_profiles", "repo_bounds", "pmc_overlap", "gold_model", "issues_summary"}) {
    CAPTURE(name);
    CHECK(fs::exists(f.dir / "out" / (std::string(name) + ".csv")));
  }
}

TEST_CASE("cli: missing evidence file exits 1 and names the path") {
  const auto f = make_fixture("missing", kEvidence, kPubs);
  auto args = base_args(f, "classify");
  args[2] = (f.dir / "nope.jsonl").string();
  const auto r = run_cli(args);
  CHECK(r.code == 1);
  CHECK(r.err.find("nope.jsonl") != std::string::npos);
}

TEST_CASE("cli: invalid configuration exits 2") {
  const auto f = make_fixture("config", kEvidence, kPubs);
  for (const auto& extra : std::vector<std::vector<std::string>>{
           {"--min-universities", "0"}, {"--period", "2017-2014"}, {"--format", "xml"}, {"--bogus"}}) {
    auto args = base_args(f, "aggregate");
    args.insert(args.end(), extra.begin(), extra.end());
    CAPTURE(extra.front());
    CHECK(run_cli(args).code == 2);
  }
  CHECK(run_cli({}).code == 2);  // no subcommand
}

TEST_CASE("cli: schema violation ceiling exits 3") {
  std::string bad_evidence = kEvidence;
  for (int i = 0; i < 5; ++i) bad_evidence += "{not json\n";
  const auto f = make_fixture("ceiling", bad_evidence, kPubs);
  const auto r = run_cli(base_args(f, "classify"));
  CHECK(r.code == 3);
  CHECK(r.err.find("evidence") != std::string::npos);

  auto tolerant = base_args(f, "classify");
  tolerant.insert(tolerant.end(), {"--max-issue-rate", "0.9"});
  CHECK(run_cli(tolerant).code == 0);
}

TEST_CASE("cli: empty publication table gives empty tables") {
  const auto f = make_fixture("empty", kEvidence, kPubHeader);
  const auto r = run_cli(base_args(f, "classify"));
  CHECK(r.code == 0);
  CHECK(read_file(f.dir / "out" / "classification.csv") == "pub_id,doi,gold,green,hybrid,bronze,any_oa\n");
}

TEST_CASE("cli: environment variables stand in for flags") {
  const auto f = make_fixture("env", kEvidence, kPubs);
  ::setenv("OAIND_FORMAT", "jsonl", 1);
  const auto r = run_cli(base_args(f, "classify"));
  ::unsetenv("OAIND_FORMAT");
  CHECK(r.code == 0);
  CHECK(fs::exists(f.dir / "out" / "classification.jsonl"));

  ::setenv("OAIND_MIN_UNIVERSITIES", "0", 1);
  const auto bad = run_cli(base_args(f, "aggregate"));
  ::unsetenv("OAIND_MIN_UNIVERSITIES");
  CHECK(bad.code == 2);
}

TEST_CASE("cli: shard count does not change output bytes") {
  const auto corpus = make_random_corpus(17, 500);
  std::string evidence_text;
  for (const auto& [doi, e] : corpus.evidence) evidence_text += evidence_json(e) + "\n";
  std::string pubs_text = kPubHeader;
  for (const auto& p : corpus.publications) {
    std::string insts, fields;
    for (const auto& i : p.institution_ids) insts += (insts.empty() ? "" : ";") + i;
    for (const auto fld : p.field_ids) fields += std::string(fields.empty() ? "" : ";") + std::string(oa::field_name(fld));
    pubs_text += p.pub_id + "," + p.doi.value_or("") + ",2015,article," + p.journal_id + "," + insts + "," + fields +
                 "," + p.language + "\n";
  }
  const auto f = make_fixture("shards", evidence_text, pubs_text);
  std::string inst_text = "inst_id,name,country,regions,repo_url_patterns\n";
  for (const auto& [id, inst] : corpus.institutions) {
    std::string regions;
    for (const auto& r : inst.regions) regions += (regions.empty() ? "" : ";") + r;
    inst_text += id + "," + inst.name + "," + inst.country + "," + regions + "," + inst.repo_url_patterns[0] + "\n";
  }
  write_file(f.institutions, inst_text);

  auto one = base_args(f, "report");
  one.back() = (f.dir / "one").string();
  auto many = base_args(f, "report");
  many.back() = (f.dir / "many").string();
  many.insert(many.end(), {"--shards", "4"});
  for (auto* args : {&one, &many}) args->insert(args->end(), {"--min-universities", "1", "--min-universities-gold", "1"});
  REQUIRE(run_cli(one).code == 0);
  REQUIRE(run_cli(many).code == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(f.dir / "one")) {
    CAPTURE(entry.path().filename().string());
    CHECK(read_file(entry.path()) == read_file(f.dir / "many" / entry.path().filename()));
    ++compared;
  }
  CHECK(compared >= 10);
}
