#include "erbench/text_index.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

#include "erbench/error.h"
#include "erbench/tokenizer.h"

namespace erbench {

namespace {

using TermCounts = std::vector<std::pair<std::string, uint32_t>>;

// Sorted (term, tf) pairs and the token count of one document.
struct DocStats {
  TermCounts counts;
  uint32_t length = 0;
};

DocStats count_terms(std::string_view text) {
  std::unordered_map<std::string, uint32_t> counts;
  DocStats out;
  for_each_token(text, [&](std::string_view tok) {
    ++counts[std::string(tok)];
    ++out.length;
  });
  out.counts.assign(counts.begin(), counts.end());
  std::sort(out.counts.begin(), out.counts.end());
  return out;
}

constexpr char kMagic[8] = {'E', 'R', 'B', 'I', 'D', 'X', '\0', '\0'};
constexpr uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put<uint32_t>(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
void put_vector(std::ostream& out, const std::vector<T>& v) {
  put<uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

class Reader {
 public:
  Reader(std::istream& in, const std::string& source) : in_(in), source_(source) {}

  template <typename T>
  T get() {
    T v{};
    read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
  }

  std::string get_string() {
    auto n = get<uint32_t>();
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }

  template <typename T>
  std::vector<T> get_vector() {
    auto n = get<uint64_t>();
    if (n > (uint64_t{1} << 40)) fail("implausible array length");
    std::vector<T> v(n);
    read(reinterpret_cast<char*>(v.data()), n * sizeof(T));
    return v;
  }

  void read(char* dst, size_t n) {
    if (!in_.read(dst, static_cast<std::streamsize>(n))) fail("truncated index file");
  }

  [[noreturn]] void fail(const std::string& what) {
    throw InputError(source_ + ": " + what);
  }

 private:
  std::istream& in_;
  const std::string& source_;
};

}  // namespace

InvertedIndex InvertedIndex::build(const DocumentCollection& docs,
                                   unsigned workers) {
  if (docs.empty()) throw InputError("cannot index an empty document collection");

  std::vector<const Document*> ordered;
  ordered.reserve(docs.size());
  for (const Document& d : docs.documents()) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(),
            [](const Document* a, const Document* b) { return a->id < b->id; });

  std::vector<DocStats> stats(ordered.size());
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(ordered.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < ordered.size(); i += workers) {
          stats[i] = count_terms(ordered[i]->text);
        }
      });
    }
  }

  InvertedIndex idx;
  std::map<std::string, std::vector<std::pair<uint32_t, uint32_t>>> lists;
  for (uint32_t d = 0; d < ordered.size(); ++d) {
    idx.doc_ids_.push_back(ordered[d]->id);
    idx.doc_lengths_.push_back(stats[d].length);
    std::vector<std::string> experts;
    for (const auto& e : ordered[d]->expert_ids) {
      if (std::find(experts.begin(), experts.end(), e) == experts.end()) {
        experts.push_back(e);
      }
    }
    idx.doc_experts_.push_back(std::move(experts));
    idx.total_tokens_ += stats[d].length;
    for (auto& [term, tf] : stats[d].counts) lists[term].emplace_back(d, tf);
  }
  idx.offsets_.push_back(0);
  for (auto& [term, list] : lists) {
    idx.terms_.push_back(term);
    for (auto [d, tf] : list) {
      idx.post_docs_.push_back(d);
      idx.post_tfs_.push_back(tf);
    }
    idx.offsets_.push_back(idx.post_docs_.size());
  }
  idx.avgdl_ = static_cast<double>(idx.total_tokens_) /
               static_cast<double>(idx.doc_ids_.size());
  idx.rebuild_lookups();
  return idx;
}

void InvertedIndex::rebuild_lookups() {
  term_lookup_.clear();
  doc_lookup_.clear();
  term_lookup_.reserve(terms_.size());
  for (uint32_t t = 0; t < terms_.size(); ++t) term_lookup_.emplace(terms_[t], t);
  doc_lookup_.reserve(doc_ids_.size());
  for (uint32_t d = 0; d < doc_ids_.size(); ++d) doc_lookup_.emplace(doc_ids_[d], d);
}

std::optional<uint32_t> InvertedIndex::doc_number(std::string_view doc_id) const {
  auto it = doc_lookup_.find(std::string(doc_id));
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> InvertedIndex::term_id(std::string_view term) const {
  auto it = term_lookup_.find(std::string(term));
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

InvertedIndex::PostingList InvertedIndex::postings(uint32_t term) const {
  const size_t begin = offsets_[term];
  const size_t len = offsets_[term + 1] - begin;
  return {std::span<const uint32_t>(post_docs_).subspan(begin, len),
          std::span<const uint32_t>(post_tfs_).subspan(begin, len)};
}

InvertedIndex::PostingList InvertedIndex::postings(std::string_view term) const {
  auto t = term_id(term);
  if (!t) return {};
  return postings(*t);
}

uint32_t InvertedIndex::df(std::string_view term) const {
  return static_cast<uint32_t>(postings(term).docs.size());
}

uint32_t InvertedIndex::tf(std::string_view term, std::string_view doc_id) const {
  auto d = doc_number(doc_id);
  if (!d) return 0;
  auto pl = postings(term);
  auto it = std::lower_bound(pl.docs.begin(), pl.docs.end(), *d);
  if (it == pl.docs.end() || *it != *d) return 0;
  return pl.tfs[static_cast<size_t>(it - pl.docs.begin())];
}

bool InvertedIndex::operator==(const InvertedIndex& o) const {
  return doc_ids_ == o.doc_ids_ && doc_lengths_ == o.doc_lengths_ &&
         doc_experts_ == o.doc_experts_ && terms_ == o.terms_ &&
         offsets_ == o.offsets_ && post_docs_ == o.post_docs_ &&
         post_tfs_ == o.post_tfs_ && total_tokens_ == o.total_tokens_ &&
         avgdl_ == o.avgdl_;
}

// Layout: magic, u32 version, then the arrays in member order. Integers and
// doubles are written in host byte order.
void InvertedIndex::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put<uint32_t>(out, kFormatVersion);
  put<uint64_t>(out, doc_ids_.size());
  for (const auto& id : doc_ids_) put_string(out, id);
  put_vector(out, doc_lengths_);
  for (const auto& experts : doc_experts_) {
    put<uint32_t>(out, static_cast<uint32_t>(experts.size()));
    for (const auto& e : experts) put_string(out, e);
  }
  put<uint64_t>(out, terms_.size());
  for (const auto& t : terms_) put_string(out, t);
  put_vector(out, offsets_);
  put_vector(out, post_docs_);
  put_vector(out, post_tfs_);
  put<uint64_t>(out, total_tokens_);
  put<double>(out, avgdl_);
}

InvertedIndex InvertedIndex::load(std::istream& in, const std::string& source) {
  Reader r(in, source);
  char magic[sizeof(kMagic)];
  r.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) r.fail("not an index file");
  if (auto v = r.get<uint32_t>(); v != kFormatVersion) {
    r.fail("unsupported index version " + std::to_string(v));
  }
  InvertedIndex idx;
  auto n_docs = r.get<uint64_t>();
  for (uint64_t i = 0; i < n_docs; ++i) idx.doc_ids_.push_back(r.get_string());
  idx.doc_lengths_ = r.get_vector<uint32_t>();
  for (uint64_t i = 0; i < n_docs; ++i) {
    auto n = r.get<uint32_t>();
    std::vector<std::string> experts;
    for (uint32_t j = 0; j < n; ++j) experts.push_back(r.get_string());
    idx.doc_experts_.push_back(std::move(experts));
  }
  auto n_terms = r.get<uint64_t>();
  for (uint64_t i = 0; i < n_terms; ++i) idx.terms_.push_back(r.get_string());
  idx.offsets_ = r.get_vector<uint64_t>();
  idx.post_docs_ = r.get_vector<uint32_t>();
  idx.post_tfs_ = r.get_vector<uint32_t>();
  idx.total_tokens_ = r.get<uint64_t>();
  idx.avgdl_ = r.get<double>();
  if (idx.doc_lengths_.size() != n_docs || idx.offsets_.size() != n_terms + 1 ||
      idx.post_docs_.size() != idx.post_tfs_.size() ||
      idx.offsets_.back() != idx.post_docs_.size()) {
    r.fail("inconsistent index sections");
  }
  for (uint32_t d : idx.post_docs_) {
    if (d >= n_docs) r.fail("posting references unknown document");
  }
  idx.rebuild_lookups();
  return idx;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  save(out);
  if (!out) throw InputError("error writing " + path.string());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return load(in, path.string());
}

// ---------------------------------------------------------------------------
// ExpertCorpus

ExpertCorpus ExpertCorpus::build(const DocumentCollection& docs) {
  ExpertCorpus corpus;
  for (const auto& [expert, doc_ids] : docs.expert_docs()) {
    Entry entry;
    for (const std::string& id : doc_ids) {
      for_each_token(docs.find(id)->text, [&](std::string_view tok) {
        entry.tokens.emplace_back(tok);
      });
    }
    for (const auto& t : entry.tokens) ++entry.counts[t];
    for (const auto& [t, _] : entry.counts) ++corpus.expert_df_[t];
    corpus.experts_.emplace(expert, std::move(entry));
  }
  return corpus;
}

bool ExpertCorpus::contains(std::string_view expert_id) const {
  return experts_.find(expert_id) != experts_.end();
}

std::vector<std::string> ExpertCorpus::expert_ids() const {
  std::vector<std::string> out;
  out.reserve(experts_.size());
  for (const auto& [e, _] : experts_) out.push_back(e);
  return out;
}

const ExpertCorpus::Entry& ExpertCorpus::entry(std::string_view expert_id) const {
  auto it = experts_.find(expert_id);
  if (it == experts_.end()) {
    throw InputError("expert '" + std::string(expert_id) + "' has no documents");
  }
  return it->second;
}

std::span<const std::string> ExpertCorpus::tokens(std::string_view expert_id) const {
  return entry(expert_id).tokens;
}

uint32_t ExpertCorpus::count(std::string_view expert_id, const std::string& term) const {
  const auto& counts = entry(expert_id).counts;
  auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

uint32_t ExpertCorpus::expert_df(const std::string& term) const {
  auto it = expert_df_.find(term);
  return it == expert_df_.end() ? 0 : it->second;
}

}  // namespace erbench
