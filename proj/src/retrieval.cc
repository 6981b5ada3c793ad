#include "erbench/retrieval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <thread>

#include "erbench/error.h"
#include "erbench/simd/kernels.h"
#include "erbench/tokenizer.h"

namespace erbench {

void Bm25Params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1)) throw InputError("k1 must be >= 0");
  if (!(b >= 0.0 && b <= 1.0)) throw InputError("b must lie in [0, 1]");
  if (doc_cutoff == 0) throw InputError("doc_cutoff must be > 0");
}

std::vector<std::string> build_query(const Topic& topic, QueryMode mode,
                                     const SynonymTable* synonyms) {
  std::vector<std::string> query;
  auto add = [&](const std::optional<std::string>& text) {
    if (text) {
      for_each_token(*text, [&](std::string_view tok) { query.emplace_back(tok); });
    }
  };
  if (mode == QueryMode::kNormal) {
    add(topic.name_en);
    add(topic.name_nl);
    return query;
  }
  const Synonyms* syn = synonyms ? synonyms->find(topic.id) : nullptr;
  if (syn == nullptr) {
    throw InputError("topic '" + topic.id + "' has no synonyms");
  }
  add(syn->en);
  add(syn->nl);
  return query;
}

namespace {

double bm25_idf(size_t n_docs, size_t df) {
  const double n = static_cast<double>(n_docs);
  const double d = static_cast<double>(df);
  return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

// Per-document length normalization k1 * (1 - b + b * dl / avgdl), computed
// once per (index, params).
class Bm25Ranker {
 public:
  Bm25Ranker(const InvertedIndex& index, const Bm25Params& params)
      : index_(index), params_(params), norm_(index.doc_count()) {
    params.validate();
    for (uint32_t d = 0; d < index.doc_count(); ++d) {
      norm_[d] = params.k1 * (1.0 - params.b +
                              params.b * static_cast<double>(index.doc_length(d)) /
                                  index.avgdl());
    }
  }

  DocumentRanking rank(std::span<const std::string> query, std::string query_id) const {
    const auto& kernels = simd::active_kernels();
    std::vector<double> acc(index_.doc_count(), 0.0);
    const double k1p1 = params_.k1 + 1.0;
    for (const std::string& tok : query) {
      auto term = index_.term_id(tok);
      if (!term) continue;
      auto pl = index_.postings(*term);
      const double idf = bm25_idf(index_.doc_count(), pl.docs.size());
      kernels.bm25_accumulate(pl.docs, pl.tfs, norm_, idf, k1p1, acc);
    }
    std::vector<uint32_t> hits;
    for (uint32_t d = 0; d < acc.size(); ++d) {
      if (acc[d] > 0.0) hits.push_back(d);
    }
    // Document numbers follow doc_id order, so they double as the tie-break.
    auto better = [&](uint32_t a, uint32_t b) {
      return acc[a] != acc[b] ? acc[a] > acc[b] : a < b;
    };
    const size_t keep = std::min(hits.size(), params_.doc_cutoff);
    std::partial_sort(hits.begin(), hits.begin() + static_cast<ptrdiff_t>(keep),
                      hits.end(), better);
    DocumentRanking out;
    out.query_id = std::move(query_id);
    out.entries.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
      out.entries.push_back({index_.doc_ids()[hits[i]], acc[hits[i]],
                             static_cast<uint32_t>(i + 1)});
    }
    return out;
  }

 private:
  const InvertedIndex& index_;
  Bm25Params params_;
  std::vector<double> norm_;
};

template <typename Fn>
void parallel_for(size_t n, unsigned workers, Fn&& fn) {
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<size_t>(n, 1)));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < n; i += workers) fn(i);
    });
  }
}

}  // namespace

double bm25_score(const InvertedIndex& index, std::span<const std::string> query,
                  std::string_view doc_id, const Bm25Params& params) {
  auto doc = index.doc_number(doc_id);
  if (!doc) throw InputError("unknown doc_id '" + std::string(doc_id) + "'");
  const double norm = params.k1 * (1.0 - params.b +
                                   params.b * static_cast<double>(index.doc_length(*doc)) /
                                       index.avgdl());
  double score = 0.0;
  for (const std::string& tok : query) {
    const uint32_t tf = index.tf(tok, doc_id);
    if (tf == 0) continue;
    const double idf = bm25_idf(index.doc_count(), index.df(tok));
    const double t = static_cast<double>(tf);
    score += idf * ((t * (params.k1 + 1.0)) / (t + norm));
  }
  return score;
}

DocumentRanking rank_documents(const InvertedIndex& index,
                               std::span<const std::string> query,
                               const Bm25Params& params, std::string query_id) {
  return Bm25Ranker(index, params).rank(query, std::move(query_id));
}

DocumentRanking rank_scored_documents(std::string query_id,
                                      std::vector<std::pair<std::string, double>> scores,
                                      size_t cutoff) {
  auto better = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const size_t keep = std::min(scores.size(), cutoff);
  std::partial_sort(scores.begin(), scores.begin() + static_cast<ptrdiff_t>(keep),
                    scores.end(), better);
  DocumentRanking out;
  out.query_id = std::move(query_id);
  for (size_t i = 0; i < keep; ++i) {
    out.entries.push_back(
        {std::move(scores[i].first), scores[i].second, static_cast<uint32_t>(i + 1)});
  }
  return out;
}

ExpertLookup expert_lookup(const DocumentCollection& docs) {
  return [&docs](std::string_view doc_id) -> const std::vector<std::string>* {
    const Document* d = docs.find(doc_id);
    return d ? &d->expert_ids : nullptr;
  };
}

ExpertLookup expert_lookup(const InvertedIndex& index) {
  return [&index](std::string_view doc_id) -> const std::vector<std::string>* {
    auto d = index.doc_number(doc_id);
    return d ? &index.doc_experts(*d) : nullptr;
  };
}

ExpertRanking aggregate_rr(const DocumentRanking& ranking, const ExpertLookup& experts) {
  StringMap<double> rr;
  for (const RankedDoc& doc : ranking.entries) {
    const auto* linked = experts(doc.doc_id);
    if (linked == nullptr || linked->empty()) {
      throw InputError("ranked document '" + doc.doc_id + "' has no linked expert");
    }
    const double contribution = 1.0 / static_cast<double>(doc.rank);
    for (size_t i = 0; i < linked->size(); ++i) {
      const std::string& e = (*linked)[i];
      // A document listing an expert twice still contributes once.
      if (std::find(linked->begin(), linked->begin() + static_cast<ptrdiff_t>(i), e) !=
          linked->begin() + static_cast<ptrdiff_t>(i)) {
        continue;
      }
      rr[e] += contribution;
    }
  }
  ExpertRanking out;
  out.query_id = ranking.query_id;
  out.entries.reserve(rr.size());
  for (auto& [e, score] : rr) out.entries.push_back({e, score, 0});
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const RankedExpert& a, const RankedExpert& b) {
                     return a.score > b.score;
                   });
  for (size_t i = 0; i < out.entries.size(); ++i) {
    out.entries[i].rank = static_cast<uint32_t>(i + 1);
  }
  return out;
}

ExpertRanking aggregate_rr(const DocumentRanking& ranking, const DocumentCollection& docs) {
  return aggregate_rr(ranking, expert_lookup(docs));
}

std::vector<RunEntry> to_run_entries(const ExpertRanking& ranking) {
  std::vector<RunEntry> out;
  out.reserve(ranking.entries.size());
  for (const auto& e : ranking.entries) out.push_back({e.expert_id, e.rank, e.score});
  return out;
}

namespace {

RankedRun assemble_run(std::span<const Topic> topics,
                       std::vector<ExpertRanking> rankings, const std::string& tag) {
  RankedRun run;
  run.tag = tag;
  for (size_t i = 0; i < topics.size(); ++i) {
    if (rankings[i].entries.empty()) continue;
    run.queries[topics[i].id] = to_run_entries(rankings[i]);
  }
  return run;
}

}  // namespace

RankedRun expert_search(const InvertedIndex& index, std::span<const Topic> topics,
                        const SearchOptions& options) {
  if (options.mode == QueryMode::kSynonym && options.synonyms == nullptr) {
    throw InputError("synonym mode requires a synonym table");
  }
  // Build every query up front so errors surface before any work starts.
  std::vector<std::vector<std::string>> queries;
  queries.reserve(topics.size());
  for (const Topic& t : topics) {
    queries.push_back(build_query(t, options.mode, options.synonyms));
  }
  const Bm25Ranker ranker(index, options.params);
  const ExpertLookup experts = expert_lookup(index);
  std::vector<ExpertRanking> rankings(topics.size());
  parallel_for(topics.size(), options.workers, [&](size_t i) {
    rankings[i] = aggregate_rr(ranker.rank(queries[i], topics[i].id), experts);
  });
  return assemble_run(topics, std::move(rankings), options.tag);
}

// ---------------------------------------------------------------------------
// External scores

ExternalScoreTable read_external_scores(std::istream& scores, const std::string& source,
                                        std::istream* chunk_map,
                                        const std::string& chunk_source) {
  ExternalScoreTable table;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(scores, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 3 || f[0].empty() || f[1].empty()) {
      throw input_error_at(source, lineno, "expected query_id<TAB>unit_id<TAB>score");
    }
    std::string score_text(f[2]);
    size_t used = 0;
    double score = 0.0;
    try {
      score = std::stod(score_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != score_text.size() || !std::isfinite(score)) {
      throw input_error_at(source, lineno, "bad score '" + score_text + "'");
    }
    if (!table.scores[std::string(f[0])].emplace(std::string(f[1]), score).second) {
      throw input_error_at(source, lineno, "duplicate score for (" + std::string(f[0]) +
                                               ", " + std::string(f[1]) + ")");
    }
  }
  if (chunk_map != nullptr) {
    table.unit = ExternalScoreTable::Unit::kChunk;
    lineno = 0;
    while (std::getline(*chunk_map, raw)) {
      ++lineno;
      std::string_view line = strip_cr(raw);
      if (is_blank(line)) continue;
      auto f = split_tabs(line);
      if (f.size() != 2 || f[0].empty() || f[1].empty()) {
        throw input_error_at(chunk_source, lineno, "expected chunk_id<TAB>doc_id");
      }
      if (!table.chunk_parent.emplace(std::string(f[0]), std::string(f[1])).second) {
        throw input_error_at(chunk_source, lineno,
                             "chunk '" + std::string(f[0]) + "' mapped twice");
      }
    }
    for (const auto& [qid, units] : table.scores) {
      for (const auto& [chunk, _] : units) {
        if (!table.chunk_parent.contains(chunk)) {
          throw InputError(source + ": chunk '" + chunk + "' has no parent document");
        }
      }
    }
  }
  return table;
}

ExternalScoreTable load_external_scores(
    const std::filesystem::path& scores,
    const std::optional<std::filesystem::path>& chunk_map) {
  std::ifstream in(scores);
  if (!in) throw InputError("cannot open " + scores.string());
  if (!chunk_map) return read_external_scores(in, scores.string());
  std::ifstream map_in(*chunk_map);
  if (!map_in) throw InputError("cannot open " + chunk_map->string());
  return read_external_scores(in, scores.string(), &map_in, chunk_map->string());
}

StringMap<StringMap<double>> aggregate_chunk_scores(const ExternalScoreTable& table) {
  if (table.unit == ExternalScoreTable::Unit::kDocument) return table.scores;
  StringMap<StringMap<double>> out;
  for (const auto& [qid, chunks] : table.scores) {
    StringMap<std::pair<double, size_t>> sums;
    for (const auto& [chunk, score] : chunks) {
      auto it = table.chunk_parent.find(chunk);
      if (it == table.chunk_parent.end()) {
        throw InputError("chunk '" + chunk + "' has no parent document");
      }
      auto& s = sums[it->second];
      s.first += score;
      ++s.second;
    }
    auto& docs = out[qid];
    for (const auto& [doc, s] : sums) {
      docs.emplace(doc, s.first / static_cast<double>(s.second));
    }
  }
  return out;
}

RankedRun expert_search_external(const ExternalScoreTable& table,
                                 std::span<const Topic> topics,
                                 const ExpertLookup& experts, size_t doc_cutoff,
                                 const std::string& tag) {
  const auto doc_scores = aggregate_chunk_scores(table);
  std::vector<ExpertRanking> rankings(topics.size());
  for (size_t i = 0; i < topics.size(); ++i) {
    auto it = doc_scores.find(topics[i].id);
    if (it == doc_scores.end()) continue;
    std::vector<std::pair<std::string, double>> scores(it->second.begin(),
                                                       it->second.end());
    rankings[i] = aggregate_rr(
        rank_scored_documents(topics[i].id, std::move(scores), doc_cutoff), experts);
  }
  return assemble_run(topics, std::move(rankings), tag);
}

}  // namespace erbench
