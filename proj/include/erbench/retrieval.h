#pragma once

// Document-model expert finding: rank documents for a topic query, then
// score every expert by the sum of reciprocal ranks of their retrieved
// documents.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erbench/corpus.h"
#include "erbench/evaluation.h"
#include "erbench/text_index.h"

namespace erbench {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  size_t doc_cutoff = 1000;

  void validate() const;  // throws InputError
};

struct RankedDoc {
  std::string doc_id;
  double score = 0.0;
  uint32_t rank = 0;
  bool operator==(const RankedDoc&) const = default;
};

struct DocumentRanking {
  std::string query_id;
  std::vector<RankedDoc> entries;
  bool operator==(const DocumentRanking&) const = default;
};

struct RankedExpert {
  std::string expert_id;
  double score = 0.0;
  uint32_t rank = 0;
  bool operator==(const RankedExpert&) const = default;
};

struct ExpertRanking {
  std::string query_id;
  std::vector<RankedExpert> entries;
  bool operator==(const ExpertRanking&) const = default;
};

enum class QueryMode { kNormal, kSynonym };

// Tokens of the English name followed by tokens of the Dutch name. In
// synonym mode the synonyms are used instead; a topic missing from the
// table is an InputError.
std::vector<std::string> build_query(const Topic& topic, QueryMode mode,
                                     const SynonymTable* synonyms = nullptr);

// BM25 with idf = ln((N - df + 0.5) / (df + 0.5) + 1). Repeated query
// tokens count once per occurrence. Throws InputError for unknown doc ids.
double bm25_score(const InvertedIndex& index, std::span<const std::string> query,
                  std::string_view doc_id, const Bm25Params& params);

// Documents with a positive score, best first, ties by ascending doc_id,
// truncated to params.doc_cutoff.
DocumentRanking rank_documents(const InvertedIndex& index,
                               std::span<const std::string> query,
                               const Bm25Params& params,
                               std::string query_id = {});

// Same ordering and truncation rule for externally supplied document scores.
DocumentRanking rank_scored_documents(std::string query_id,
                                      std::vector<std::pair<std::string, double>> scores,
                                      size_t cutoff);

// Expert ids linked to a document, or null if the document is unknown.
using ExpertLookup =
    std::function<const std::vector<std::string>*(std::string_view doc_id)>;

ExpertLookup expert_lookup(const DocumentCollection& docs);
ExpertLookup expert_lookup(const InvertedIndex& index);

// rr(c) = sum over c's retrieved documents of 1 / rank. Experts sorted by
// rr descending, ties by ascending expert_id. Throws InputError when a
// ranked document has no expert link.
ExpertRanking aggregate_rr(const DocumentRanking& ranking, const ExpertLookup& experts);
ExpertRanking aggregate_rr(const DocumentRanking& ranking, const DocumentCollection& docs);

struct SearchOptions {
  Bm25Params params;
  QueryMode mode = QueryMode::kNormal;
  const SynonymTable* synonyms = nullptr;  // required in synonym mode
  unsigned workers = 1;
  std::string tag = "bm25";
};

// One run block per topic; topics with an empty expert ranking contribute
// no rows. Query ids are topic ids.
RankedRun expert_search(const InvertedIndex& index, std::span<const Topic> topics,
                        const SearchOptions& options);

std::vector<RunEntry> to_run_entries(const ExpertRanking& ranking);

// Scores for documents or for chunks of documents, keyed by query.
struct ExternalScoreTable {
  enum class Unit { kDocument, kChunk };
  Unit unit = Unit::kDocument;
  StringMap<StringMap<double>> scores;  // query_id -> unit_id -> score
  StringMap<std::string> chunk_parent;  // chunk_id -> doc_id
};

// `query_id<TAB>unit_id<TAB>score` lines, plus an optional
// `chunk_id<TAB>doc_id` map that switches the table to chunk units.
ExternalScoreTable load_external_scores(
    const std::filesystem::path& scores,
    const std::optional<std::filesystem::path>& chunk_map = std::nullopt);
ExternalScoreTable read_external_scores(std::istream& scores, const std::string& source,
                                        std::istream* chunk_map = nullptr,
                                        const std::string& chunk_source = {});

// query_id -> doc_id -> score. In chunk mode a document scores the mean of
// its scored chunks; documents without scored chunks are absent.
StringMap<StringMap<double>> aggregate_chunk_scores(const ExternalScoreTable& table);

// Expert search driven by external document scores instead of BM25.
RankedRun expert_search_external(const ExternalScoreTable& table,
                                 std::span<const Topic> topics,
                                 const ExpertLookup& experts, size_t doc_cutoff,
                                 const std::string& tag);

}  // namespace erbench
