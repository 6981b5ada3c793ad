#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "erbench/corpus.h"

namespace erbench {

// Document-level inverted index with the corpus statistics BM25 needs.
// Documents are numbered by ascending doc_id and terms are stored sorted,
// so the index does not depend on input order. Each document also keeps its
// expert links, which lets a saved index drive expert search on its own.
class InvertedIndex {
 public:
  struct PostingList {
    std::span<const uint32_t> docs;  // ascending document numbers
    std::span<const uint32_t> tfs;
  };

  InvertedIndex() = default;

  // Throws InputError on an empty collection. Tokenization is spread over
  // `workers` threads; the merge is sequential, so the result is identical
  // for any worker count.
  static InvertedIndex build(const DocumentCollection& docs, unsigned workers = 1);

  size_t doc_count() const { return doc_ids_.size(); }
  double avgdl() const { return avgdl_; }
  size_t vocabulary_size() const { return terms_.size(); }
  uint64_t total_tokens() const { return total_tokens_; }

  std::span<const std::string> doc_ids() const { return doc_ids_; }
  std::optional<uint32_t> doc_number(std::string_view doc_id) const;
  uint32_t doc_length(uint32_t doc) const { return doc_lengths_[doc]; }
  std::span<const uint32_t> doc_lengths() const { return doc_lengths_; }
  const std::vector<std::string>& doc_experts(uint32_t doc) const {
    return doc_experts_[doc];
  }

  std::span<const std::string> terms() const { return terms_; }
  std::optional<uint32_t> term_id(std::string_view term) const;
  PostingList postings(uint32_t term) const;
  PostingList postings(std::string_view term) const;
  uint32_t df(std::string_view term) const;
  uint32_t tf(std::string_view term, std::string_view doc_id) const;

  void save(std::ostream& out) const;
  static InvertedIndex load(std::istream& in, const std::string& source);
  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

  bool operator==(const InvertedIndex& o) const;

 private:
  void rebuild_lookups();

  std::vector<std::string> doc_ids_;
  std::vector<uint32_t> doc_lengths_;
  std::vector<std::vector<std::string>> doc_experts_;
  std::vector<std::string> terms_;
  std::vector<uint64_t> offsets_;  // terms_.size() + 1 entries
  std::vector<uint32_t> post_docs_;
  std::vector<uint32_t> post_tfs_;
  uint64_t total_tokens_ = 0;
  double avgdl_ = 0.0;

  std::unordered_map<std::string, uint32_t> term_lookup_;
  std::unordered_map<std::string, uint32_t> doc_lookup_;
};

// One long pseudo-document per expert: the concatenation of the token
// sequences of all documents linked to that expert.
class ExpertCorpus {
 public:
  ExpertCorpus() = default;
  static ExpertCorpus build(const DocumentCollection& docs);

  size_t expert_count() const { return experts_.size(); }
  bool contains(std::string_view expert_id) const;
  std::vector<std::string> expert_ids() const;

  // Throws InputError for experts without documents.
  std::span<const std::string> tokens(std::string_view expert_id) const;
  uint32_t count(std::string_view expert_id, const std::string& term) const;
  uint32_t expert_df(const std::string& term) const;

 private:
  struct Entry {
    std::vector<std::string> tokens;
    std::unordered_map<std::string, uint32_t> counts;
  };
  const Entry& entry(std::string_view expert_id) const;

  StringMap<Entry> experts_;
  std::unordered_map<std::string, uint32_t> expert_df_;
};

}  // namespace erbench
