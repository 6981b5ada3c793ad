#pragma once

// Corpus-independent annotation suggestions. Two item-to-item recommenders
// (profile co-occurrence PMI and name-embedding cosine) are pooled
// round-robin over an expert's own topics. Nothing here reads documents:
// inputs are ground-truth profiles and embedding tables only.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erbench/corpus.h"

namespace erbench {

// Topic occurrence and pair co-occurrence counts over expert profiles.
// Topics seen fewer than `min_count` times are excluded, both as seeds and
// as candidates.
class CooccurrenceStats {
 public:
  static constexpr uint32_t kDefaultMinCount = 4;

  // Throws InputError on a ground truth without annotations.
  static CooccurrenceStats build(const GroundTruth& gt,
                                 uint32_t min_count = kDefaultMinCount);

  size_t profile_count() const { return profile_count_; }
  uint32_t min_count() const { return min_count_; }
  std::span<const std::string> topics() const { return topics_; }
  bool contains(std::string_view topic) const;
  uint32_t count(std::string_view topic) const;
  uint32_t pair_count(std::string_view a, std::string_view b) const;
  bool excluded(std::string_view topic) const;

  // ln(N * pair / (count(a) * count(b))); nullopt when either topic is
  // excluded or unknown, or the pair never co-occurs.
  std::optional<double> pmi(std::string_view a, std::string_view b) const;

  struct Neighbor {
    uint32_t topic;  // index into topics()
    uint32_t pair_count;
  };
  std::span<const Neighbor> neighbors(uint32_t topic) const { return neighbors_[topic]; }
  std::optional<uint32_t> topic_index(std::string_view topic) const;

 private:
  size_t profile_count_ = 0;
  uint32_t min_count_ = kDefaultMinCount;
  std::vector<std::string> topics_;  // sorted
  StringMap<uint32_t> index_;
  std::vector<uint32_t> counts_;
  std::vector<std::vector<Neighbor>> neighbors_;  // sorted by topic index
};

struct ScoredTopic {
  std::string topic_id;
  double score = 0.0;
};

enum class RecommendStatus { kOk, kUnknownSeed, kExcludedSeed, kNoVectors };

struct Recommendation {
  RecommendStatus status = RecommendStatus::kOk;
  std::vector<ScoredTopic> items;
};

constexpr size_t kAllItems = std::numeric_limits<size_t>::max();

// Candidates co-occurring with the seed, by PMI descending, then pair count
// descending, then topic_id ascending.
Recommendation pmi_recommend(const CooccurrenceStats& stats, std::string_view seed,
                             size_t n = kAllItems);

// Raw (unnormalized) vectors per (topic, language); cosine similarity
// normalizes on use.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(size_t dim = 0) : dim_(dim) {}

  // Throws InputError on dimension mismatch, zero or non-finite vectors and
  // duplicate (topic, lang) rows. The first row fixes the dimension of an
  // empty table.
  void add(const std::string& topic_id, Lang lang, std::vector<float> values);

  size_t dim() const { return dim_; }
  size_t vector_count() const { return row_topic_.size(); }
  size_t topic_count() const { return topics_.size(); }
  bool contains(std::string_view topic_id) const { return topic_rows_.contains(topic_id); }
  std::optional<std::span<const float>> vector(std::string_view topic_id, Lang lang) const;

  // Max cosine over the available language pairs; nullopt if either topic
  // has no vectors.
  std::optional<double> similarity(std::string_view a, std::string_view b) const;

  // Similarity of `seed` against every topic with vectors, indexed like
  // topic_ids().
  std::vector<double> similarities_from(std::string_view seed) const;
  std::span<const std::string> topic_ids() const { return topics_; }

 private:
  struct Rows {
    int32_t en = -1;
    int32_t nl = -1;
    uint32_t topic = 0;
  };

  size_t dim_;
  std::vector<float> data_;       // row-major, vector_count() x dim_
  std::vector<double> norms_;     // per row
  std::vector<uint32_t> row_topic_;
  std::vector<std::string> topics_;  // insertion order
  StringMap<Rows> topic_rows_;
};

// `topic_id<TAB>lang<TAB>v1,v2,...,vd`
EmbeddingTable read_embeddings(std::istream& in, const std::string& source);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

// All other topics with vectors, by similarity descending, ties by
// topic_id ascending.
Recommendation embed_recommend(const EmbeddingTable& table, std::string_view seed,
                               size_t n = kAllItems);

enum class SuggestionSource { kPmi, kEmbedding };
std::string_view to_string(SuggestionSource source);
SuggestionSource parse_suggestion_source(std::string_view s);

struct SuggestionItem {
  std::string topic_id;
  SuggestionSource source = SuggestionSource::kPmi;
  std::string seed_topic_id;
  bool operator==(const SuggestionItem&) const = default;
};

struct SuggestionList {
  std::string expert_id;
  std::vector<SuggestionItem> items;
  size_t cap = 100;
  bool empty_profile = false;

  bool contains(std::string_view topic_id) const;
  std::optional<size_t> position(std::string_view topic_id) const;  // 1-based
  bool operator==(const SuggestionList&) const = default;
};

// A recommender maps a seed topic to its full ranked candidate list.
struct RankedSource {
  SuggestionSource source;
  std::function<const std::vector<std::string>&(const std::string& seed)> ranked;
};

// Round-robin pooling. Each round visits the seeds in profile order and,
// per seed, each source in the given order; a (seed, source) cursor skips
// topics already emitted or in the profile and emits the next one. Stops at
// `cap` or when every cursor is exhausted.
SuggestionList pool_round_robin(const std::string& expert_id,
                                std::span<const std::string> profile,
                                std::span<const RankedSource> sources, size_t cap = 100);

// Both recommenders plus per-seed caches of their full ranked lists. Safe to
// share between threads.
class SuggestionEngine {
 public:
  SuggestionEngine(CooccurrenceStats stats, std::optional<EmbeddingTable> embeddings,
                   size_t cap = 100,
                   std::vector<SuggestionSource> order = {SuggestionSource::kPmi,
                                                          SuggestionSource::kEmbedding});

  size_t cap() const { return cap_; }
  const CooccurrenceStats& stats() const { return stats_; }
  bool has_embeddings() const { return embeddings_.has_value(); }

  SuggestionList suggest(const std::string& expert_id,
                         std::span<const std::string> profile) const;

  const std::vector<std::string>& ranked(SuggestionSource source,
                                         const std::string& seed) const;

 private:
  CooccurrenceStats stats_;
  std::optional<EmbeddingTable> embeddings_;
  size_t cap_;
  std::vector<SuggestionSource> order_;

  mutable std::mutex mu_;
  mutable std::map<std::pair<SuggestionSource, std::string>,
                   std::unique_ptr<const std::vector<std::string>>>
      cache_;
};

// Suggestions for the expert's profile with `held_out_topic` removed, so the
// held-out topic itself can be suggested. Throws InputError if the topic is
// not in the profile.
SuggestionList leave_one_out_suggestions(const GroundTruth& gt,
                                         const std::string& expert_id,
                                         const std::string& held_out_topic,
                                         const SuggestionEngine& engine);

// `expert_id<TAB>rank<TAB>topic_id<TAB>source<TAB>seed_topic_id`
void write_suggestions(std::ostream& out, std::span<const SuggestionList> lists);
StringMap<SuggestionList> read_suggestions(std::istream& in, const std::string& source);
StringMap<SuggestionList> load_suggestions(const std::filesystem::path& path);

}  // namespace erbench
