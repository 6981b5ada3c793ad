#pragma once

// TREC-style runs, qrels and the four reported metrics (P@5, AP/MAP, nDCG,
// reciprocal rank). Relevance is binary: rel > 0 counts as relevant.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erbench/corpus.h"

namespace erbench {

struct RunEntry {
  std::string expert_id;
  uint32_t rank = 0;  // 1-based
  double score = 0.0;
  bool operator==(const RunEntry&) const = default;
};

// Per-query rankings, each ordered by rank.
struct RankedRun {
  std::string tag;
  StringMap<std::vector<RunEntry>> queries;
  bool operator==(const RankedRun&) const = default;
};

// query_id -> expert_id -> relevance
using QueryJudgments = StringMap<int>;
using Qrels = StringMap<QueryJudgments>;

// Inverts expert profiles into topic queries: (topic, expert) -> 1.
Qrels qrels_from_ground_truth(const GroundTruth& gt);

// Lines are `query_id Q0 expert_id rank score tag`, space or tab separated.
// Rows are ordered by the rank column. A score that increases with rank is
// tolerated and reported through `warnings`.
RankedRun read_run(std::istream& in, const std::string& source,
                   std::vector<std::string>* warnings = nullptr);
RankedRun load_run(const std::filesystem::path& path,
                   std::vector<std::string>* warnings = nullptr);
// Sorted by query_id then rank; scores in shortest round-trip form.
void write_run(std::ostream& out, const RankedRun& run);

// Lines are `query_id 0 expert_id rel`.
Qrels read_qrels(std::istream& in, const std::string& source);
Qrels load_qrels(const std::filesystem::path& path);
void write_qrels(std::ostream& out, const Qrels& qrels);

size_t count_relevant(const QueryJudgments& judgments);

// (#relevant in the top k) / k; missing positions count as non-relevant.
double precision_at_k(std::span<const RunEntry> ranking,
                      const QueryJudgments& judgments, size_t k);
// The remaining metrics are undefined (nullopt) for queries without a
// relevant expert.
std::optional<double> average_precision(std::span<const RunEntry> ranking,
                                        const QueryJudgments& judgments);
std::optional<double> ndcg(std::span<const RunEntry> ranking,
                           const QueryJudgments& judgments);
std::optional<double> reciprocal_rank(std::span<const RunEntry> ranking,
                                      const QueryJudgments& judgments);

struct MetricValues {
  double p_at_5 = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  double mrr = 0.0;
};

struct QueryMetrics {
  std::string query_id;
  MetricValues values;
  size_t relevant = 0;
  size_t retrieved = 0;
};

struct MetricReport {
  std::vector<QueryMetrics> per_query;  // ascending query_id
  MetricValues mean;
  // Qrels queries without any relevant expert; excluded from the means.
  size_t skipped_no_relevant = 0;
  // Run queries that have no qrels at all; skipped.
  std::vector<std::string> unknown_queries;
  std::vector<std::string> warnings;
};

// Means run over every qrels query with at least one relevant expert; a
// query the run does not contain scores zero on all metrics.
MetricReport evaluate_run(const RankedRun& run, const Qrels& qrels);

// TSV with header `query_id P@5 MAP nDCG MRR`, one row per query and a final
// `all` row with the means. Values are in [0, 1].
void write_report_tsv(std::ostream& out, const MetricReport& report);
// Human-readable means, as percentages with two decimals.
std::string format_summary(const MetricReport& report, const std::string& label);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace erbench
