#pragma once

// Seeded synthetic expertise collections. Topics are grouped into planted
// clusters; each expert draws a self-selected profile mostly from one home
// cluster and writes documents over a filler vocabulary into which topic
// names are inserted literally. System-validated additions are drawn from
// latent home-cluster topics, conditioned on literal mention with
// probability `bias_strength`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "erbench/config.h"
#include "erbench/corpus.h"
#include "erbench/suggestion.h"

namespace erbench {

struct SyntheticConfig {
  uint32_t n_experts = 200;
  uint32_t n_topics = 500;
  uint32_t docs_per_expert_min = 4;
  uint32_t docs_per_expert_max = 10;
  uint32_t vocab_size = 5000;
  double topic_mention_rate = 0.5;
  double bias_strength = 0.9;
  uint32_t cluster_count = 25;
  uint64_t seed = 42;

  void validate() const;  // throws InputError
};

// Keys match the field names; `docs_per_expert` accepts "N" or "MIN-MAX".
// Unknown keys are rejected.
SyntheticConfig synthetic_config_from(const KeyValueConfig& kv);
void write_synthetic_config(std::ostream& out, const SyntheticConfig& cfg);

struct SyntheticCollection {
  TopicCatalog topics;
  DocumentCollection documents;
  GroundTruth self_selected;     // gradeless
  GroundTruth system_validated;  // self_selected plus additions, graded 1..5
  SynonymTable synonyms;         // words never used in any document

  // Self-selected topics that a term-matching suggester would have offered
  // (the topic is mentioned in the expert's documents).
  GroundTruth self_suggested;
  // Name vectors near their cluster centroid, one per available language.
  EmbeddingTable embeddings;
  std::vector<uint32_t> topic_cluster;  // parallel to topics.topics()
};

SyntheticCollection generate_synthetic(const SyntheticConfig& cfg);

// True when every token of at least one of the topic's names occurs in
// `tokens` (sorted, unique).
bool topic_mentioned(const Topic& topic, const std::vector<std::string>& tokens);

// File names inside the output directory.
inline constexpr const char* kTopicsFile = "topics.tsv";
inline constexpr const char* kDocumentsFile = "documents.jsonl";
inline constexpr const char* kSelfSelectedFile = "self_selected.tsv";
inline constexpr const char* kSystemValidatedFile = "system_validated.tsv";
inline constexpr const char* kSynonymsFile = "synonyms.tsv";
inline constexpr const char* kSelfSuggestedFile = "self_suggested.tsv";
inline constexpr const char* kEmbeddingsFile = "embeddings.tsv";

void write_synthetic(const SyntheticCollection& collection, const std::filesystem::path& dir);

}  // namespace erbench
