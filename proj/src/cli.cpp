#include "sememe_kb/cli.hpp"

#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "sememe_kb/dataset.hpp"
#include "sememe_kb/error.hpp"
#include "sememe_kb/queries.hpp"
#include "sememe_kb/service.hpp"

namespace sememe_kb {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::string> data;
  bool json = false;

  std::string query;
  std::string lang;
  std::string mode = "exact";
  std::size_t limit = kDefaultLimit;
  std::uint64_t id = 0;
  std::string format = "ascii";
  bool ascii_only = false;
  std::string word_a;
  std::string word_b;
  std::optional<std::string> config;
  std::size_t k = kDefaultK;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::size_t k_default = kDefaultK;
  std::optional<std::string> cors_origin;
  std::optional<std::string> static_dir;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Dataset directory (default: $SEMEME_KB_DATA)");
  cmd->add_flag("--json", o.json, "Machine-readable JSON output");
}

std::filesystem::path data_dir(const Options& o) {
  auto dir = resolve_data_dir(o.data);
  if (!dir) throw UsageError("missing --data <dir> (or set SEMEME_KB_DATA)");
  return *dir;
}

SimilarityConfig similarity_config(const Options& o) {
  return o.config ? SimilarityConfig::from_file(*o.config) : SimilarityConfig{};
}

std::string fmt_score(double score) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << score;
  return s.str();
}

std::string str(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void print_summaries(const Json& list, std::ostream& out) {
  for (const auto& s : list) {
    out << s["id"].get<SenseId>() << "\t" << str(s["zh"]) << "\t" << str(s["en"]) << "\t" << str(s["pos"]) << "\t"
        << str(s["def"]) << "\n";
  }
}

void print_scored(const Json& list, std::ostream& out) {
  for (const auto& item : list) {
    const auto& s = item["sense"];
    out << fmt_score(item["score"].get<double>()) << "\t" << s["id"].get<SenseId>() << "\t" << str(s["zh"]) << "\t"
        << str(s["en"]) << "\t" << str(s["def"]) << "\n";
  }
}

void print_human(const std::string& command, const Json& j, std::ostream& out) {
  if (command == "stats") {
    out << "senses                 " << j["sense_count"] << "\n"
        << "distinct Chinese words " << j["distinct_zh_words"] << "\n"
        << "distinct English words " << j["distinct_en_words"] << "\n"
        << "sememes                " << j["sememe_count"] << "\n";
  } else if (command == "search") {
    print_summaries(j, out);
  } else if (command == "sense") {
    out << "id         " << j["id"] << "\n"
        << "word       " << str(j["zh"]) << " / " << str(j["en"]) << "\n"
        << "pos        " << str(j["pos"]) << "\n"
        << "definition " << str(j["def_text"]) << "\n";
    if (!j["sentiment"].is_null()) out << "sentiment  " << str(j["sentiment"]) << "\n";
    for (const auto& ex : j["examples"]) out << "example    " << str(ex) << "\n";
    out << "near senses:\n";
    print_scored(j["near"], out);
  } else if (command == "tree") {
    out << (j.contains("text") ? j["text"].get<std::string>() : j["tree"].dump(2) + "\n");
  } else if (command == "sim") {
    out << fmt_score(j["score"].get<double>()) << "\n"
        << "best pair: " << j["best_pair"][0] << " ~ " << j["best_pair"][1] << " (" << j["pairs_evaluated"]
        << " pairs)\n";
  } else if (command == "nearest") {
    print_scored(j, out);
  } else if (command == "sememe") {
    for (const auto& s : j) {
      out << s["id"] << "\t" << str(s["ref"]) << "\t" << str(s["category"]) << "\t"
          << (s["parent"].is_null() ? std::string("-") : s["parent"].dump()) << "\n";
    }
  }
}

// Lenient load that reports every problem instead of stopping at the first.
int run_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dir = data_dir(o);
  Json issues = Json::array();
  Json stats = nullptr;
  try {
    const Dataset ds = load_dataset(dir, LoadOptions{.lenient = true});
    for (const LoadIssue& issue : ds.skipped) {
      Json item = Json::object();
      item["record"] = issue.record_index;
      item["sense_id"] = issue.sense_id;
      item["kind"] = std::string(to_string(issue.kind));
      item["message"] = issue.message;
      issues.push_back(std::move(item));
    }
    stats = to_json(ds.lexicon->stats());
  } catch (const KbError& e) {
    Json item = Json::object();
    item["record"] = nullptr;
    item["sense_id"] = nullptr;
    item["kind"] = std::string(to_string(e.kind()));
    item["message"] = e.what();
    issues.push_back(std::move(item));
  }

  const bool ok = issues.empty();
  if (o.json) {
    Json j = Json::object();
    j["ok"] = ok;
    j["issues"] = issues;
    j["stats"] = stats;
    out << j.dump() << "\n";
  } else {
    for (const auto& issue : issues) out << str(issue["kind"]) << ": " << str(issue["message"]) << "\n";
    out << (ok ? "ok" : std::to_string(issues.size()) + " issue(s)") << "\n";
  }
  if (!ok) err << "validation failed with " << issues.size() << " issue(s)\n";
  return ok ? kExitOk : kExitDomainError;
}

int run_serve(const Options& o, std::ostream& err) {
  ServiceConfig config;
  config.host = o.host;
  config.port = o.port;
  config.data_dir = data_dir(o);
  if (o.config) config.similarity_config = *o.config;
  config.k_default = o.k_default;
  config.cors_origin = o.cors_origin;
  if (o.static_dir) config.static_dir = *o.static_dir;
  if (o.port < 1 || o.port > 65535) throw UsageError("--port must be within [1, 65535]");
  if (o.k_default < 1 || o.k_default > kMaxK) throw UsageError("--k-default must be within [1, 100]");
  return serve(config, err);
}

Json run_query(const std::string& command, const Options& o) {
  // Flag values are checked before touching the dataset so a bad flag is
  // always a usage error.
  const Lang search_lang = require_lang("--lang", o.lang.empty() ? "auto" : o.lang);
  const MatchMode mode = require_mode("--mode", o.mode);
  const RenderFormat format = require_format("--format", o.format);
  const Lang word_lang = command == "sim" ? require_word_lang("--lang", o.lang.empty() ? "en" : o.lang) : Lang::En;
  if (command == "search" && o.limit == 0) throw UsageError("--limit must be at least 1");
  if (command == "nearest" && o.k == 0) throw KbError(ErrorKind::InvalidK, "k must be at least 1");
  const SimilarityConfig sim = similarity_config(o);

  const Dataset ds = load_dataset(data_dir(o));
  const Queries q(ds.lexicon, sim);
  if (command == "stats") return q.stats();
  if (command == "search") return q.search(o.query, search_lang, mode, o.limit);
  if (command == "sense") return q.sense_card(o.id);
  if (command == "tree") return q.tree(o.id, format, o.ascii_only);
  if (command == "sim") return q.similarity(o.word_a, o.word_b, word_lang);
  if (command == "nearest") return q.nearest(o.id, o.k);
  if (command == "sememe") return q.sememes(o.query);
  throw UsageError("unknown command " + command);
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sememe knowledge base: search senses and sememes, draw sememe trees, compare words.", "sememe-kb"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  add_common(stats, o);

  auto* search = app.add_subcommand("search", "Find senses by word form");
  search->add_option("query", o.query, "Word to look up")->required();
  search->add_option("--lang", o.lang, "zh, en or auto (default auto)");
  search->add_option("--mode", o.mode, "exact, prefix or substring")->capture_default_str();
  search->add_option("--limit", o.limit, "Maximum results (capped at 500)")->capture_default_str();
  add_common(search, o);

  auto* sense = app.add_subcommand("sense", "Show a sense card");
  sense->add_option("id", o.id, "Sense id")->required();
  add_common(sense, o);

  auto* tree = app.add_subcommand("tree", "Draw the sememe tree of a sense");
  tree->add_option("id", o.id, "Sense id")->required();
  tree->add_option("--format", o.format, "ascii, dot or json")->capture_default_str();
  tree->add_flag("--ascii-only", o.ascii_only, "Plain ASCII connectors");
  add_common(tree, o);

  auto* sim = app.add_subcommand("sim", "Word similarity by sememe-tree comparison");
  sim->add_option("wordA", o.word_a)->required();
  sim->add_option("wordB", o.word_b)->required();
  sim->add_option("--lang", o.lang, "zh or en (default en)");
  sim->add_option("--config", o.config, "Similarity config JSON file");
  add_common(sim, o);

  auto* nearest = app.add_subcommand("nearest", "Semantically near senses");
  nearest->add_option("id", o.id, "Sense id")->required();
  nearest->add_option("-k", o.k, "Number of senses (capped at 100)")->capture_default_str();
  nearest->add_option("--config", o.config, "Similarity config JSON file");
  add_common(nearest, o);

  auto* sememe = app.add_subcommand("sememe", "Resolve a sememe by label or en|zh");
  sememe->add_option("query", o.query, "Label or en|zh reference")->required();
  add_common(sememe, o);

  auto* validate = app.add_subcommand("validate", "Run every load-time check and report issues");
  add_common(validate, o);

  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP query service");
  serve_cmd->add_option("--port", o.port)->capture_default_str();
  serve_cmd->add_option("--host", o.host)->capture_default_str();
  serve_cmd->add_option("--config", o.config, "Similarity config JSON file");
  serve_cmd->add_option("--k-default", o.k_default, "Near senses on each sense card")->capture_default_str();
  serve_cmd->add_option("--cors-origin", o.cors_origin, "Extra origin allowed to call the API");
  serve_cmd->add_option("--static", o.static_dir, "Directory served at /");
  serve_cmd->add_option("--data", o.data, "Dataset directory (default: $SEMEME_KB_DATA)");

  std::vector<std::string> argv_storage{"sememe-kb"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "validate") return run_validate(o, out, err);
    if (command == "serve") return run_serve(o, err);
    const Json result = run_query(command, o);
    if (o.json) {
      out << result.dump() << "\n";
    } else {
      print_human(command, result, out);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsageError;
  } catch (const KbError& e) {
    const bool usage = e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::InvalidK;
    if (o.json) out << error_body(e.kind(), e.what()).dump() << "\n";
    err << "error: " << e.what() << "\n";
    if (usage) err << "\n" << app.get_subcommands().front()->help();
    return usage ? kExitUsageError : kExitDomainError;
  }
}

}  // namespace sememe_kb
