// erbench: expert-finding benchmark harness.
//
//   erbench index   --docs documents.jsonl --out corpus.idx
//   erbench search  --index corpus.idx --topics topics.tsv --run-out run.txt
//   erbench eval    --run run.txt --qrels qrels.txt
//   erbench audit   tfidf-groups | niche-recall | overlap | synonym-swap
//   erbench suggest --topics topics.tsv --gt gt.tsv --embeddings emb.tsv
//   erbench synth   --config synth.conf --out-dir data/
//
// Shared defaults may come from a `key = value` file given with --config-file or
// the ERBENCH_CONFIG environment variable; flags take precedence.
// Exit codes: 0 success, 1 internal error, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "erbench/bias_audit.h"
#include "erbench/config.h"
#include "erbench/corpus.h"
#include "erbench/error.h"
#include "erbench/evaluation.h"
#include "erbench/retrieval.h"
#include "erbench/simd/kernels.h"
#include "erbench/suggestion.h"
#include "erbench/synthetic.h"
#include "erbench/text_index.h"

namespace fs = std::filesystem;
using namespace erbench;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

// Values from the shared config file; flags win over these.
struct Defaults {
  KeyValueConfig kv;

  void fill(std::string& flag, std::string_view key) const {
    if (flag.empty()) {
      if (auto v = kv.get(key)) flag = *v;
    }
  }
  void fill(double& flag, bool given, std::string_view key) const {
    if (!given) {
      if (auto v = kv.get_double(key)) flag = *v;
    }
  }
  void fill(size_t& flag, bool given, std::string_view key) const {
    if (!given) {
      if (auto v = kv.get_uint(key)) flag = static_cast<size_t>(*v);
    }
  }
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

Qrels load_judgments(const std::string& qrels, const std::string& gt,
                     const std::string& topics) {
  if (!qrels.empty() && !gt.empty()) throw InputError("--qrels and --gt are exclusive");
  if (!qrels.empty()) return load_qrels(qrels);
  require(gt, "--qrels or --gt");
  require(topics, "--topics (needed to read --gt)");
  const TopicCatalog catalog = load_topics(topics);
  return qrels_from_ground_truth(binarize(load_ground_truth(gt, Scheme::kCustom, catalog)));
}

struct Bm25Flags {
  double k1 = Bm25Params{}.k1;
  double b = Bm25Params{}.b;
  size_t cutoff = Bm25Params{}.doc_cutoff;
  CLI::Option* k1_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* cutoff_opt = nullptr;

  void add(CLI::App* cmd) {
    k1_opt = cmd->add_option("--k1", k1, "BM25 k1");
    b_opt = cmd->add_option("--b", b, "BM25 b");
    cutoff_opt = cmd->add_option("--doc-cutoff", cutoff, "documents kept per query");
  }
  Bm25Params resolve(const Defaults& d) {
    d.fill(k1, k1_opt->count() > 0, "k1");
    d.fill(b, b_opt->count() > 0, "b");
    d.fill(cutoff, cutoff_opt->count() > 0, "doc_cutoff");
    Bm25Params p{k1, b, cutoff};
    p.validate();
    return p;
  }
};

// ---------------------------------------------------------------------------

struct IndexCmd {
  std::string docs, out;
  unsigned workers = default_workers();

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("index", "Build an inverted index from documents");
    cmd->add_option("--docs", docs, "documents JSONL");
    cmd->add_option("--out", out, "index file to write");
    cmd->add_option("--workers", workers, "indexing threads");
  }

  int run(const Defaults& d) {
    d.fill(docs, "documents");
    d.fill(out, "index");
    require(docs, "--docs");
    require(out, "--out");
    const DocumentCollection collection = load_documents(docs);
    if (collection.empty()) throw InputError("empty corpus: " + docs);
    const InvertedIndex index = InvertedIndex::build(collection, workers);
    const fs::path p(out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    index.save(p);
    std::cout << "documents\t" << index.doc_count() << '\n'
              << "avgdl\t" << format_double(index.avgdl()) << '\n'
              << "vocabulary\t" << index.vocabulary_size() << '\n';
    return 0;
  }
};

struct SearchCmd {
  std::string index, topics, mode = "normal", synonyms, external, chunk_map, run_out, tag;
  unsigned workers = default_workers();
  Bm25Flags bm25;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("search", "Rank experts for every topic");
    cmd->add_option("--index", index, "index file from `erbench index`");
    cmd->add_option("--topics", topics, "topics TSV");
    cmd->add_option("--mode", mode, "normal or synonym")
        ->check(CLI::IsMember({"normal", "synonym"}));
    cmd->add_option("--synonyms", synonyms, "synonyms TSV (synonym mode)");
    cmd->add_option("--external-scores", external,
                    "query/doc-or-chunk/score TSV replacing BM25");
    cmd->add_option("--chunk-map", chunk_map, "chunk/doc TSV for chunk-level scores");
    cmd->add_option("--run-out", run_out, "TREC run file to write");
    cmd->add_option("--tag", tag, "run tag");
    cmd->add_option("--workers", workers, "query threads");
    bm25.add(cmd);
  }

  int run(const Defaults& d) {
    d.fill(index, "index");
    d.fill(topics, "topics");
    d.fill(synonyms, "synonyms");
    d.fill(run_out, "run");
    require(index, "--index");
    require(topics, "--topics");
    require(run_out, "--run-out");
    const Bm25Params params = bm25.resolve(d);
    if (!chunk_map.empty() && external.empty()) {
      throw InputError("--chunk-map requires --external-scores");
    }
    const QueryMode qmode = mode == "synonym" ? QueryMode::kSynonym : QueryMode::kNormal;
    if (qmode == QueryMode::kSynonym && synonyms.empty()) {
      throw InputError("synonym mode requires --synonyms");
    }
    const TopicCatalog catalog = load_topics(topics);
    const InvertedIndex idx = InvertedIndex::load(fs::path(index));

    RankedRun run;
    if (!external.empty()) {
      if (qmode == QueryMode::kSynonym) {
        throw InputError("--external-scores cannot be combined with synonym mode");
      }
      const auto table = load_external_scores(
          external, chunk_map.empty() ? std::nullopt : std::optional<fs::path>(chunk_map));
      run = expert_search_external(table, catalog.topics(), expert_lookup(idx), params.doc_cutoff,
                                   tag.empty() ? "external" : tag);
    } else {
      std::optional<SynonymTable> table;
      if (qmode == QueryMode::kSynonym) table = load_synonyms(synonyms, catalog);
      SearchOptions opts;
      opts.params = params;
      opts.mode = qmode;
      opts.synonyms = table ? &*table : nullptr;
      opts.workers = workers;
      opts.tag = tag.empty() ? (qmode == QueryMode::kSynonym ? "bm25-synonym" : "bm25") : tag;
      run = expert_search(idx, catalog.topics(), opts);
    }
    write_file(run_out, [&](std::ostream& o) { write_run(o, run); });
    size_t rows = 0;
    for (const auto& [_, entries] : run.queries) rows += entries.size();
    std::cout << "topics\t" << catalog.size() << '\n'
              << "queries_with_results\t" << run.queries.size() << '\n'
              << "rows\t" << rows << '\n';
    return 0;
  }
};

struct EvalCmd {
  std::string run, qrels, gt, topics, out, label;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "Score a run against qrels");
    cmd->add_option("--run", run, "TREC run file");
    cmd->add_option("--qrels", qrels, "TREC qrels file");
    cmd->add_option("--gt", gt, "ground-truth TSV used as qrels (needs --topics)");
    cmd->add_option("--topics", topics, "topics TSV");
    cmd->add_option("--out", out, "per-query metric TSV to write");
    cmd->add_option("--label", label, "label for the summary line");
  }

  int run_cmd(const Defaults& d) {
    d.fill(run, "run");
    d.fill(topics, "topics");
    require(run, "--run");
    const RankedRun r = load_run(run);
    const Qrels judgments = load_judgments(qrels, gt, topics);
    const MetricReport report = evaluate_run(r, judgments);
    constexpr size_t kShownWarnings = 10;
    for (size_t i = 0; i < report.warnings.size() && i < kShownWarnings; ++i) {
      std::cerr << "warning: " << report.warnings[i] << '\n';
    }
    if (report.warnings.size() > kShownWarnings) {
      std::cerr << "warning: " << report.warnings.size() - kShownWarnings
                << " more warnings not shown\n";
    }
    if (report.skipped_no_relevant > 0) {
      std::cerr << "note: " << report.skipped_no_relevant
                << " judged queries without relevant experts excluded\n";
    }
    if (!out.empty()) write_file(out, [&](std::ostream& o) { write_report_tsv(o, report); });
    std::cout << format_summary(report, label.empty() ? (r.tag.empty() ? run : r.tag) : label)
              << '\n';
    return 0;
  }
};

struct AuditCmd {
  CLI::App* tfidf = nullptr;
  CLI::App* niche = nullptr;
  CLI::App* overlap = nullptr;
  CLI::App* swap = nullptr;

  std::string docs, topics, gt_a, gt_b, analysis = "fig2", out, boxplot_out;
  std::string gt, contrast, suggestions;
  size_t niche_min = 2, niche_max = 3;
  std::string index, synonyms, qrels;
  unsigned workers = default_workers();
  Bm25Flags bm25;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("audit", "Term-mention bias analyses");
    cmd->require_subcommand(1);

    tfidf = cmd->add_subcommand("tfidf-groups", "tf-idf distributions by annotation group");
    tfidf->add_option("--docs", docs, "documents JSONL");
    tfidf->add_option("--topics", topics, "topics TSV");
    tfidf->add_option("--gt-a", gt_a, "self-selected ground truth");
    tfidf->add_option("--gt-b", gt_b,
                      "fig1: self-selected and suggested; fig2: extended ground truth");
    tfidf->add_option("--analysis", analysis, "fig1 or fig2")
        ->check(CLI::IsMember({"fig1", "fig2"}));
    tfidf->add_option("--out", out, "per-pair tf-idf TSV");
    tfidf->add_option("--boxplot-out", boxplot_out, "per-group boxplot TSV");

    niche = cmd->add_subcommand("niche-recall", "Strict recall of niche topics");
    niche->add_option("--topics", topics, "topics TSV");
    niche->add_option("--gt", gt, "self-selected ground truth");
    niche->add_option("--contrast", contrast,
                      "ground truth of self-selected topics that were also suggested");
    niche->add_option("--suggestions", suggestions, "suggestion TSV from `erbench suggest`");
    niche->add_option("--min-count", niche_min, "smallest niche profile count");
    niche->add_option("--max-count", niche_max, "largest niche profile count");
    niche->add_option("--out", out, "per-(topic, expert) recall TSV");

    overlap = cmd->add_subcommand("overlap", "Share of ground-truth additions that were suggested");
    overlap->add_option("--topics", topics, "topics TSV");
    overlap->add_option("--gt-a", gt_a, "base ground truth");
    overlap->add_option("--gt-b", gt_b, "extended ground truth");
    overlap->add_option("--suggestions", suggestions, "suggestion TSV");
    overlap->add_option("--out", out, "summary TSV");

    swap = cmd->add_subcommand("synonym-swap", "Compare original and synonym queries");
    swap->add_option("--index", index, "index file");
    swap->add_option("--topics", topics, "topics TSV");
    swap->add_option("--synonyms", synonyms, "synonyms TSV");
    swap->add_option("--qrels", qrels, "TREC qrels file");
    swap->add_option("--gt", gt, "ground-truth TSV used as qrels");
    swap->add_option("--out", out, "comparison TSV");
    swap->add_option("--workers", workers, "query threads");
    bm25.add(swap);
  }

  int run(const Defaults& d) {
    d.fill(topics, "topics");
    if (tfidf->parsed()) return run_tfidf(d);
    if (niche->parsed()) return run_niche();
    if (overlap->parsed()) return run_overlap();
    return run_swap(d);
  }

  int run_tfidf(const Defaults& d) {
    d.fill(docs, "documents");
    require(docs, "--docs");
    require(topics, "--topics");
    require(gt_a, "--gt-a");
    require(gt_b, "--gt-b");
    const TopicCatalog catalog = load_topics(topics);
    const auto a = binarize(load_ground_truth(gt_a, Scheme::kCustom, catalog));
    const auto b = binarize(load_ground_truth(gt_b, Scheme::kCustom, catalog));
    const auto corpus = ExpertCorpus::build(load_documents(docs));
    const auto report = group_tfidf_distributions(corpus, catalog, a, b, parse_analysis(analysis));
    if (!out.empty()) write_file(out, [&](std::ostream& o) { write_tfidf_report(o, report); });
    if (!boxplot_out.empty()) {
      write_file(boxplot_out, [&](std::ostream& o) { write_boxplot_tsv(o, report); });
    }
    std::cout << "tfidf\t" << kTfIdfVariant << '\n';
    for (const auto& [g, s] : report.summaries) {
      std::cout << to_string(g) << "\tn=" << s.n << "\tmedian=" << format_double(s.median)
                << "\tq1=" << format_double(s.q1) << "\tq3=" << format_double(s.q3) << '\n';
    }
    if (report.skipped_no_documents > 0) {
      std::cerr << "note: " << report.skipped_no_documents
                << " pairs skipped (expert has no documents)\n";
    }
    return 0;
  }

  int run_niche() {
    require(topics, "--topics");
    require(gt, "--gt");
    if (contrast.empty() == suggestions.empty()) {
      throw InputError("give exactly one of --contrast or --suggestions");
    }
    const TopicCatalog catalog = load_topics(topics);
    const auto self = binarize(load_ground_truth(gt, Scheme::kCustom, catalog));
    const auto lists = contrast.empty()
                           ? load_suggestions(suggestions)
                           : suggestions_from_ground_truth(
                                 binarize(load_ground_truth(contrast, Scheme::kCustom, catalog)));
    const auto niche_ids = niche_topics(self, niche_min, niche_max);
    // Experts absent from a contrast ground truth were offered nothing.
    RecallReport report =
        contrast.empty()
            ? suggestion_recall(niche_ids, self, lists)
            : suggestion_recall(niche_ids, self,
                                [&](const std::string& e, const std::string&) -> const SuggestionList* {
                                  static const SuggestionList kEmpty;
                                  auto it = lists.find(e);
                                  return it == lists.end() ? &kEmpty : &it->second;
                                });
    if (!out.empty()) write_file(out, [&](std::ostream& o) { write_recall_tsv(o, report); });
    std::cout << "niche_recall\t" << report.recalled << '/' << report.total << '\t'
              << percent(report.strict_recall) << "%\n";
    return 0;
  }

  int run_overlap() {
    require(topics, "--topics");
    require(gt_a, "--gt-a");
    require(gt_b, "--gt-b");
    require(suggestions, "--suggestions");
    const TopicCatalog catalog = load_topics(topics);
    const auto a = binarize(load_ground_truth(gt_a, Scheme::kCustom, catalog));
    const auto b = binarize(load_ground_truth(gt_b, Scheme::kCustom, catalog));
    const AdditionSet additions = diff_ground_truth(a, b);
    const OverlapReport r = addition_overlap(additions, load_suggestions(suggestions));
    if (!out.empty()) {
      write_file(out, [&](std::ostream& o) {
        o << "covered\ttotal\tfraction\tvacuous\n"
          << r.covered << '\t' << r.total << '\t' << format_double(r.fraction) << '\t'
          << (r.vacuous ? 1 : 0) << '\n';
      });
    }
    std::cout << "overlap\t" << r.covered << '/' << r.total << '\t' << percent(r.fraction) << '%'
              << (r.vacuous ? "\t(no additions)" : "") << '\n';
    if (!additions.only_in_a.empty() || !additions.only_in_b.empty()) {
      std::cerr << "note: " << additions.only_in_a.size() << " experts only in --gt-a, "
                << additions.only_in_b.size() << " only in --gt-b\n";
    }
    return 0;
  }

  int run_swap(const Defaults& d) {
    d.fill(index, "index");
    d.fill(synonyms, "synonyms");
    require(index, "--index");
    require(topics, "--topics");
    require(synonyms, "--synonyms");
    SearchOptions opts;
    opts.params = bm25.resolve(d);
    opts.workers = workers;
    const TopicCatalog catalog = load_topics(topics);
    const SynonymTable table = load_synonyms(synonyms, catalog);
    const Qrels judgments = load_judgments(qrels, gt, topics);
    const InvertedIndex idx = InvertedIndex::load(fs::path(index));
    const SwapReport r = synonym_swap_eval(idx, catalog, table, judgments, opts);
    if (!out.empty()) write_file(out, [&](std::ostream& o) { write_comparison_tsv(o, r); });
    std::cout << "topics_evaluated\t" << r.topics_evaluated << '\n'
              << "topics_without_synonyms\t" << r.topics_without_synonyms << '\n'
              << format_summary(r.normal, "normal") << '\n'
              << format_summary(r.synonym, "synonym") << '\n';
    std::cout << "delta\tP@5=" << percent(r.delta.p_at_5) << "\tMAP=" << percent(r.delta.map)
              << "\tnDCG=" << percent(r.delta.ndcg) << "\tMRR=" << percent(r.delta.mrr) << '\n';
    return 0;
  }
};

struct SuggestCmd {
  std::string topics, gt, pmi_gt, embeddings, out;
  size_t cap = 100;
  CLI::Option* cap_opt = nullptr;
  bool leave_one_out = false;
  unsigned workers = default_workers();

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("suggest", "Pooled PMI and embedding topic suggestions");
    cmd->add_option("--topics", topics, "topics TSV");
    cmd->add_option("--gt", gt, "expert profiles to suggest for");
    cmd->add_option("--pmi-gt", pmi_gt, "profiles for co-occurrence counts (default: --gt)");
    cmd->add_option("--embeddings", embeddings, "topic embedding TSV (PMI only if absent)");
    cap_opt = cmd->add_option("--cap", cap, "maximum suggestions per expert");
    cmd->add_flag("--leave-one-out", leave_one_out,
                  "hold out each niche topic and report whether it comes back");
    cmd->add_option("--out", out, "suggestion or recall TSV");
    cmd->add_option("--workers", workers, "threads for leave-one-out");
  }

  int run(const Defaults& d) {
    d.fill(topics, "topics");
    d.fill(embeddings, "embeddings");
    d.fill(cap, cap_opt->count() > 0, "cap");
    require(topics, "--topics");
    require(gt, "--gt");
    require(out, "--out");
    if (cap == 0) throw InputError("--cap must be positive");
    const TopicCatalog catalog = load_topics(topics);
    const auto profiles = binarize(load_ground_truth(gt, Scheme::kCustom, catalog));
    const auto pmi_profiles =
        pmi_gt.empty() ? profiles : binarize(load_ground_truth(pmi_gt, Scheme::kCustom, catalog));
    std::optional<EmbeddingTable> table;
    if (!embeddings.empty()) table = load_embeddings(embeddings);
    const SuggestionEngine engine(CooccurrenceStats::build(pmi_profiles), std::move(table), cap);

    if (leave_one_out) {
      const auto niche_ids = niche_topics(profiles);
      const RecallReport r = leave_one_out_recall(niche_ids, profiles, engine, workers);
      write_file(out, [&](std::ostream& o) { write_recall_tsv(o, r); });
      std::cout << "niche_recall\t" << r.recalled << '/' << r.total << '\t'
                << percent(r.strict_recall) << "%\n";
      return 0;
    }
    std::vector<SuggestionList> lists;
    size_t items = 0;
    for (const auto& [e, p] : profiles.profiles) {
      lists.push_back(engine.suggest(e, p.topic_ids()));
      items += lists.back().items.size();
    }
    write_file(out, [&](std::ostream& o) { write_suggestions(o, lists); });
    std::cout << "experts\t" << lists.size() << '\n'
              << "suggestions\t" << items << '\n'
              << "sources\t" << (engine.has_embeddings() ? "pmi,embedding" : "pmi") << '\n';
    return 0;
  }
};

struct SynthCmd {
  std::string config, out_dir;
  uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic collection");
    cmd->add_option("--config", config, "synthetic config (key = value)");
    cmd->add_option("--out-dir", out_dir, "output directory");
    seed_opt = cmd->add_option("--seed", seed, "override the config seed");
  }

  int run(const Defaults& d) {
    d.fill(out_dir, "out_dir");
    require(out_dir, "--out-dir");
    SyntheticConfig cfg;
    if (!config.empty()) cfg = synthetic_config_from(KeyValueConfig::load(config));
    if (seed_opt->count() > 0) {
      cfg.seed = seed;
    } else if (config.empty()) {
      if (auto v = d.kv.get_uint("seed")) cfg.seed = *v;
    }
    cfg.validate();
    const SyntheticCollection c = generate_synthetic(cfg);
    write_synthetic(c, out_dir);
    write_file((fs::path(out_dir) / "synth.conf").string(),
               [&](std::ostream& o) { write_synthetic_config(o, cfg); });
    std::cout << "experts\t" << cfg.n_experts << '\n'
              << "topics\t" << c.topics.size() << '\n'
              << "documents\t" << c.documents.size() << '\n'
              << "self_selected_pairs\t" << c.self_selected.pair_count() << '\n'
              << "system_validated_pairs\t" << c.system_validated.pair_count() << '\n'
              << "out_dir\t" << out_dir << '\n';
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"erbench: expert-finding benchmark harness"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config-file", config_path,
                 "shared key = value defaults (else $ERBENCH_CONFIG)");
  bool show_isa = false;
  app.add_flag("--simd-info", show_isa, "print the selected kernel set to stderr");

  IndexCmd index_cmd;
  SearchCmd search_cmd;
  EvalCmd eval_cmd;
  AuditCmd audit_cmd;
  SuggestCmd suggest_cmd;
  SynthCmd synth_cmd;
  index_cmd.add(app);
  search_cmd.add(app);
  eval_cmd.add(app);
  audit_cmd.add(app);
  suggest_cmd.add(app);
  synth_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (app.get_subcommands().empty()) {
    if (!show_isa) {
      std::cerr << app.help();
      return kExitInput;
    }
    std::cout << "simd\t" << simd::to_string(simd::active_kernels().isa) << "\navailable";
    for (const auto* k : simd::available_kernels()) std::cout << '\t' << simd::to_string(k->isa);
    std::cout << '\n';
    return 0;
  }

  try {
    if (show_isa) {
      std::cerr << "simd: " << simd::to_string(simd::active_kernels().isa) << '\n';
    }
    Defaults defaults;
    if (config_path.empty()) {
      if (const char* env = std::getenv("ERBENCH_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) defaults.kv = KeyValueConfig::load(config_path);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "index") return index_cmd.run(defaults);
    if (name == "search") return search_cmd.run(defaults);
    if (name == "eval") return eval_cmd.run_cmd(defaults);
    if (name == "audit") return audit_cmd.run(defaults);
    if (name == "suggest") return suggest_cmd.run(defaults);
    return synth_cmd.run(defaults);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
