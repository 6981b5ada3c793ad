#include "erbench/suggestion.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "erbench/error.h"
#include "erbench/evaluation.h"
#include "erbench/simd/kernels.h"

namespace erbench {

// ---------------------------------------------------------------------------
// Co-occurrence statistics and PMI

CooccurrenceStats CooccurrenceStats::build(const GroundTruth& gt, uint32_t min_count) {
  CooccurrenceStats s;
  s.min_count_ = min_count;
  std::set<std::string, std::less<>> all;
  for (const auto& [_, p] : gt.profiles) {
    for (const auto& a : p.items) all.insert(a.topic_id);
  }
  if (all.empty()) throw InputError("cannot build co-occurrence stats from an empty ground truth");
  s.topics_.assign(all.begin(), all.end());
  for (uint32_t i = 0; i < s.topics_.size(); ++i) s.index_.emplace(s.topics_[i], i);
  s.counts_.assign(s.topics_.size(), 0);

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> pairs;
  for (const auto& [_, p] : gt.profiles) {
    if (p.empty()) continue;
    ++s.profile_count_;
    std::vector<uint32_t> ids;
    for (const auto& a : p.items) ids.push_back(s.index_.find(a.topic_id)->second);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (size_t i = 0; i < ids.size(); ++i) {
      ++s.counts_[ids[i]];
      for (size_t j = i + 1; j < ids.size(); ++j) ++pairs[{ids[i], ids[j]}];
    }
  }
  s.neighbors_.resize(s.topics_.size());
  for (const auto& [ab, n] : pairs) {
    s.neighbors_[ab.first].push_back({ab.second, n});
    s.neighbors_[ab.second].push_back({ab.first, n});
  }
  for (auto& list : s.neighbors_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.topic < y.topic; });
  }
  return s;
}

std::optional<uint32_t> CooccurrenceStats::topic_index(std::string_view topic) const {
  auto it = index_.find(topic);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CooccurrenceStats::contains(std::string_view topic) const {
  return index_.find(topic) != index_.end();
}

uint32_t CooccurrenceStats::count(std::string_view topic) const {
  auto i = topic_index(topic);
  return i ? counts_[*i] : 0;
}

uint32_t CooccurrenceStats::pair_count(std::string_view a, std::string_view b) const {
  auto ia = topic_index(a);
  auto ib = topic_index(b);
  if (!ia || !ib || *ia == *ib) return 0;
  const auto& list = neighbors_[*ia];
  auto it = std::lower_bound(list.begin(), list.end(), *ib,
                             [](const Neighbor& n, uint32_t t) { return n.topic < t; });
  return (it != list.end() && it->topic == *ib) ? it->pair_count : 0;
}

bool CooccurrenceStats::excluded(std::string_view topic) const {
  return count(topic) < min_count_;
}

namespace {

double pmi_value(size_t n, uint32_t pair, uint32_t ca, uint32_t cb) {
  return std::log(static_cast<double>(n) * static_cast<double>(pair) /
                  (static_cast<double>(ca) * static_cast<double>(cb)));
}

}  // namespace

std::optional<double> CooccurrenceStats::pmi(std::string_view a, std::string_view b) const {
  if (!contains(a) || !contains(b) || excluded(a) || excluded(b)) return std::nullopt;
  const uint32_t pair = pair_count(a, b);
  if (pair == 0) return std::nullopt;
  return pmi_value(profile_count_, pair, count(a), count(b));
}

Recommendation pmi_recommend(const CooccurrenceStats& stats, std::string_view seed,
                             size_t n) {
  Recommendation out;
  auto si = stats.topic_index(seed);
  if (!si) {
    out.status = RecommendStatus::kUnknownSeed;
    return out;
  }
  const uint32_t seed_count = stats.count(seed);
  if (seed_count < stats.min_count()) {
    out.status = RecommendStatus::kExcludedSeed;
    return out;
  }
  struct Candidate {
    uint32_t topic;
    uint32_t pair;
    double score;
  };
  std::vector<Candidate> cands;
  const auto topics = stats.topics();
  for (const auto& nb : stats.neighbors(*si)) {
    const uint32_t c = stats.count(topics[nb.topic]);
    if (c < stats.min_count()) continue;
    cands.push_back({nb.topic, nb.pair_count,
                     pmi_value(stats.profile_count(), nb.pair_count, seed_count, c)});
  }
  // Topic indices follow topic_id order.
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.pair != y.pair) return x.pair > y.pair;
    return x.topic < y.topic;
  });
  if (cands.size() > n) cands.resize(n);
  for (const auto& c : cands) out.items.push_back({topics[c.topic], c.score});
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

void EmbeddingTable::add(const std::string& topic_id, Lang lang, std::vector<float> values) {
  if (lang == Lang::kUnknown) throw InputError("embedding language must be en or nl");
  if (dim_ == 0) dim_ = values.size();
  if (values.empty()) throw InputError("empty embedding for '" + topic_id + "'");
  if (values.size() != dim_) {
    throw InputError("embedding for '" + topic_id + "' has dimension " +
                     std::to_string(values.size()) + ", expected " + std::to_string(dim_));
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw InputError("non-finite embedding for '" + topic_id + "'");
  }
  const double sq = simd::active_kernels().dot(values, values);
  if (!(sq > 0.0)) throw InputError("zero embedding vector for '" + topic_id + "'");

  auto [it, inserted] = topic_rows_.try_emplace(topic_id);
  if (inserted) {
    it->second.topic = static_cast<uint32_t>(topics_.size());
    topics_.push_back(topic_id);
  }
  int32_t& slot = lang == Lang::kEn ? it->second.en : it->second.nl;
  if (slot >= 0) {
    throw InputError("duplicate " + std::string(to_string(lang)) + " embedding for '" +
                     topic_id + "'");
  }
  slot = static_cast<int32_t>(row_topic_.size());
  row_topic_.push_back(it->second.topic);
  norms_.push_back(std::sqrt(sq));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::span<const float>> EmbeddingTable::vector(std::string_view topic_id,
                                                             Lang lang) const {
  auto it = topic_rows_.find(topic_id);
  if (it == topic_rows_.end()) return std::nullopt;
  int32_t row = lang == Lang::kEn ? it->second.en : lang == Lang::kNl ? it->second.nl : -1;
  if (row < 0) return std::nullopt;
  return std::span<const float>(data_).subspan(static_cast<size_t>(row) * dim_, dim_);
}

std::vector<double> EmbeddingTable::similarities_from(std::string_view seed) const {
  std::vector<double> best(topics_.size(), -std::numeric_limits<double>::infinity());
  auto it = topic_rows_.find(seed);
  if (it == topic_rows_.end()) return best;
  const auto& kernels = simd::active_kernels();
  std::vector<double> dots(row_topic_.size());
  for (int32_t seed_row : {it->second.en, it->second.nl}) {
    if (seed_row < 0) continue;
    auto q = std::span<const float>(data_).subspan(static_cast<size_t>(seed_row) * dim_, dim_);
    kernels.dot_rows(q, data_, dim_, dots);
    const double qn = norms_[static_cast<size_t>(seed_row)];
    for (size_t r = 0; r < dots.size(); ++r) {
      const double cos = dots[r] / (qn * norms_[r]);
      double& b = best[row_topic_[r]];
      if (cos > b) b = cos;
    }
  }
  return best;
}

std::optional<double> EmbeddingTable::similarity(std::string_view a, std::string_view b) const {
  auto ib = topic_rows_.find(b);
  if (!contains(a) || ib == topic_rows_.end()) return std::nullopt;
  return similarities_from(a)[ib->second.topic];
}

EmbeddingTable read_embeddings(std::istream& in, const std::string& source) {
  EmbeddingTable table;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 3 || f[0].empty()) {
      throw input_error_at(source, lineno, "expected topic_id<TAB>lang<TAB>v1,...,vd");
    }
    std::vector<float> values;
    std::string_view rest = f[2];
    while (!rest.empty()) {
      size_t comma = rest.find(',');
      std::string_view tok = rest.substr(0, comma);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      float v = 0.0f;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw input_error_at(source, lineno, "bad vector component '" + std::string(tok) + "'");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    try {
      table.add(std::string(f[0]), parse_lang(f[1]), std::move(values));
    } catch (const InputError& e) {
      throw input_error_at(source, lineno, e.what());
    }
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_embeddings(in, path.string());
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  for (const std::string& topic : table.topic_ids()) {
    for (Lang lang : {Lang::kEn, Lang::kNl}) {
      auto v = table.vector(topic, lang);
      if (!v) continue;
      out << topic << '\t' << to_string(lang) << '\t';
      for (size_t i = 0; i < v->size(); ++i) {
        if (i > 0) out << ',';
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), (*v)[i]);
        out.write(buf, ptr - buf);
      }
      out << '\n';
    }
  }
}

Recommendation embed_recommend(const EmbeddingTable& table, std::string_view seed, size_t n) {
  Recommendation out;
  if (!table.contains(seed)) {
    out.status = RecommendStatus::kNoVectors;
    return out;
  }
  const auto sims = table.similarities_from(seed);
  const auto topics = table.topic_ids();
  std::vector<uint32_t> order;
  for (uint32_t t = 0; t < topics.size(); ++t) {
    if (topics[t] != seed) order.push_back(t);
  }
  auto better = [&](uint32_t a, uint32_t b) {
    return sims[a] != sims[b] ? sims[a] > sims[b] : topics[a] < topics[b];
  };
  const size_t keep = std::min(order.size(), n);
  std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(keep), order.end(),
                    better);
  for (size_t i = 0; i < keep; ++i) out.items.push_back({topics[order[i]], sims[order[i]]});
  return out;
}

// ---------------------------------------------------------------------------
// Pooling

std::string_view to_string(SuggestionSource source) {
  return source == SuggestionSource::kPmi ? "pmi" : "embedding";
}

SuggestionSource parse_suggestion_source(std::string_view s) {
  if (s == "pmi") return SuggestionSource::kPmi;
  if (s == "embedding" || s == "emb") return SuggestionSource::kEmbedding;
  throw InputError("unknown suggestion source '" + std::string(s) + "'");
}

bool SuggestionList::contains(std::string_view topic_id) const {
  return position(topic_id).has_value();
}

std::optional<size_t> SuggestionList::position(std::string_view topic_id) const {
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i].topic_id == topic_id) return i + 1;
  }
  return std::nullopt;
}

SuggestionList pool_round_robin(const std::string& expert_id,
                                std::span<const std::string> profile,
                                std::span<const RankedSource> sources, size_t cap) {
  SuggestionList out;
  out.expert_id = expert_id;
  out.cap = cap;
  if (profile.empty()) {
    out.empty_profile = true;
    return out;
  }
  std::unordered_set<std::string> blocked(profile.begin(), profile.end());
  std::vector<const std::vector<std::string>*> lists;
  for (const std::string& seed : profile) {
    for (const RankedSource& src : sources) lists.push_back(&src.ranked(seed));
  }
  std::vector<size_t> cursor(lists.size(), 0);
  while (out.items.size() < cap) {
    bool progressed = false;
    for (size_t s = 0; s < profile.size(); ++s) {
      for (size_t k = 0; k < sources.size(); ++k) {
        const size_t slot = s * sources.size() + k;
        const auto& list = *lists[slot];
        size_t& c = cursor[slot];
        while (c < list.size() && blocked.contains(list[c])) ++c;
        if (c == list.size()) continue;
        blocked.insert(list[c]);
        out.items.push_back({list[c], sources[k].source, profile[s]});
        ++c;
        progressed = true;
        if (out.items.size() == cap) return out;
      }
    }
    if (!progressed) break;
  }
  return out;
}

SuggestionEngine::SuggestionEngine(CooccurrenceStats stats,
                                   std::optional<EmbeddingTable> embeddings, size_t cap,
                                   std::vector<SuggestionSource> order)
    : stats_(std::move(stats)),
      embeddings_(std::move(embeddings)),
      cap_(cap),
      order_(std::move(order)) {
  if (!embeddings_) {
    std::erase(order_, SuggestionSource::kEmbedding);
  }
}

const std::vector<std::string>& SuggestionEngine::ranked(SuggestionSource source,
                                                         const std::string& seed) const {
  static const std::vector<std::string> kEmpty;
  if (source == SuggestionSource::kEmbedding && !embeddings_) return kEmpty;
  std::lock_guard lock(mu_);
  auto& slot = cache_[{source, seed}];
  if (!slot) {
    Recommendation rec = source == SuggestionSource::kPmi
                             ? pmi_recommend(stats_, seed)
                             : embed_recommend(*embeddings_, seed);
    auto list = std::make_unique<std::vector<std::string>>();
    list->reserve(rec.items.size());
    for (auto& item : rec.items) list->push_back(std::move(item.topic_id));
    slot = std::move(list);
  }
  return *slot;
}

SuggestionList SuggestionEngine::suggest(const std::string& expert_id,
                                         std::span<const std::string> profile) const {
  std::vector<RankedSource> sources;
  for (SuggestionSource s : order_) {
    sources.push_back({s, [this, s](const std::string& seed) -> const std::vector<std::string>& {
                         return ranked(s, seed);
                       }});
  }
  return pool_round_robin(expert_id, profile, sources, cap_);
}

SuggestionList leave_one_out_suggestions(const GroundTruth& gt, const std::string& expert_id,
                                         const std::string& held_out_topic,
                                         const SuggestionEngine& engine) {
  const Profile* p = gt.profile(expert_id);
  if (p == nullptr || !p->contains(held_out_topic)) {
    throw InputError("topic '" + held_out_topic + "' is not in the profile of expert '" +
                     expert_id + "'");
  }
  std::vector<std::string> reduced;
  for (const auto& a : p->items) {
    if (a.topic_id != held_out_topic) reduced.push_back(a.topic_id);
  }
  return engine.suggest(expert_id, reduced);
}

// ---------------------------------------------------------------------------
// Suggestion files

void write_suggestions(std::ostream& out, std::span<const SuggestionList> lists) {
  for (const auto& list : lists) {
    for (size_t i = 0; i < list.items.size(); ++i) {
      const auto& item = list.items[i];
      out << list.expert_id << '\t' << (i + 1) << '\t' << item.topic_id << '\t'
          << to_string(item.source) << '\t' << item.seed_topic_id << '\n';
    }
  }
}

StringMap<SuggestionList> read_suggestions(std::istream& in, const std::string& source) {
  StringMap<std::vector<std::pair<size_t, SuggestionItem>>> rows;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 5 || f[0].empty() || f[2].empty()) {
      throw input_error_at(source, lineno,
                           "expected expert_id<TAB>rank<TAB>topic_id<TAB>source<TAB>seed");
    }
    size_t rank = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), rank);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size() || rank == 0) {
      throw input_error_at(source, lineno, "bad rank '" + std::string(f[1]) + "'");
    }
    SuggestionItem item;
    item.topic_id = std::string(f[2]);
    try {
      item.source = parse_suggestion_source(f[3]);
    } catch (const InputError& e) {
      throw input_error_at(source, lineno, e.what());
    }
    item.seed_topic_id = std::string(f[4]);
    rows[std::string(f[0])].emplace_back(rank, std::move(item));
  }
  StringMap<SuggestionList> out;
  for (auto& [expert, items] : rows) {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    SuggestionList list;
    list.expert_id = expert;
    for (auto& [_, item] : items) list.items.push_back(std::move(item));
    list.cap = std::max<size_t>(list.items.size(), 100);
    out.emplace(expert, std::move(list));
  }
  return out;
}

StringMap<SuggestionList> load_suggestions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_suggestions(in, path.string());
}

}  // namespace erbench
