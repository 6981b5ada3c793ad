#include "erbench/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "erbench/error.h"
#include "erbench/evaluation.h"
#include "erbench/tokenizer.h"

namespace erbench {

namespace {

// Fixed generator shape; the config exposes only the knobs the analyses vary.
constexpr double kOffClusterRate = 0.05;
constexpr double kCoauthorRate = 0.05;
constexpr double kDutchOnlyRate = 0.10;
constexpr double kEnglishOnlyRate = 0.25;
constexpr double kRelationRate = 0.30;
constexpr double kDutchDocRate = 0.30;
constexpr uint32_t kProfileMin = 3;
constexpr uint32_t kProfileMax = 8;
constexpr uint32_t kLatentMin = 2;
constexpr uint32_t kLatentMax = 5;
constexpr uint32_t kDocLengthMin = 30;
constexpr uint32_t kDocLengthMax = 90;
constexpr size_t kEmbeddingDim = 32;
constexpr double kTopicSpread = 0.35;
constexpr double kLanguageSpread = 0.10;

// Distributions are hand-rolled so output does not depend on the standard
// library's implementation-defined algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on [lo, hi].
  uint64_t between(uint64_t lo, uint64_t hi) {
    const uint64_t range = hi - lo + 1;
    if (range == 0) return engine_();
    const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                           std::numeric_limits<uint64_t>::max() % range;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }
  size_t index(size_t n) { return static_cast<size_t>(between(0, n - 1)); }

  // Index in [0, n) skewed towards 0.
  size_t skewed(size_t n, double power) {
    return std::min(n - 1, static_cast<size_t>(std::pow(uniform(), power) * n));
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Distinct integers map to distinct pronounceable words of at least two
// syllables.
std::string make_word(uint64_t n) {
  static constexpr std::string_view kConsonants = "bcdfghjklmnprstvwxyz";
  static constexpr std::string_view kVowels = "aeiou";
  std::vector<uint32_t> digits;
  do {
    digits.push_back(static_cast<uint32_t>(n % 100));
    n /= 100;
  } while (n > 0);
  if (digits.size() < 2) digits.push_back(0);
  std::string out;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    out += kConsonants[*it / 5];
    out += kVowels[*it % 5];
  }
  return out;
}

std::string padded_id(char prefix, size_t n, size_t width) {
  std::string digits = std::to_string(n);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

size_t width_for(size_t count) { return std::max<size_t>(4, std::to_string(count).size()); }

struct WordPool {
  uint64_t next;
  std::string take() { return make_word(next++); }
  std::string phrase(size_t words) {
    std::string out;
    for (size_t i = 0; i < words; ++i) {
      if (i) out += ' ';
      out += take();
    }
    return out;
  }
};

size_t word_count(const std::string& s) {
  return static_cast<size_t>(std::count(s.begin(), s.end(), ' ')) + 1;
}

std::vector<std::string> sorted_tokens(const std::string& text) {
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

struct ExpertPlan {
  uint32_t home = 0;
  std::vector<uint32_t> profile;  // topic indices, selection order
  std::vector<uint32_t> latent;
  std::vector<uint32_t> docs;  // indices into the document list
};

}  // namespace

void SyntheticConfig::validate() const {
  auto positive = [](uint64_t v, const char* name) {
    if (v == 0) throw InputError(std::string("synthetic config: ") + name + " must be positive");
  };
  positive(n_experts, "n_experts");
  positive(n_topics, "n_topics");
  positive(docs_per_expert_min, "docs_per_expert");
  positive(vocab_size, "vocab_size");
  positive(cluster_count, "cluster_count");
  if (docs_per_expert_max < docs_per_expert_min) {
    throw InputError("synthetic config: docs_per_expert range is empty");
  }
  auto rate = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InputError(std::string("synthetic config: ") + name + " must lie in [0, 1]");
    }
  };
  rate(topic_mention_rate, "topic_mention_rate");
  rate(bias_strength, "bias_strength");
  if (cluster_count > n_topics) {
    throw InputError("synthetic config: cluster_count cannot exceed n_topics");
  }
}

SyntheticConfig synthetic_config_from(const KeyValueConfig& kv) {
  static const std::set<std::string, std::less<>> kKeys = {
      "n_experts",          "n_topics",      "docs_per_expert", "vocab_size",
      "topic_mention_rate", "bias_strength", "cluster_count",   "seed"};
  for (const auto& [key, _] : kv.values()) {
    if (!kKeys.contains(key)) {
      throw InputError(kv.source() + ": unknown synthetic config key '" + key + "'");
    }
  }
  SyntheticConfig cfg;
  auto count = [&](const char* key, uint32_t& field) {
    if (auto v = kv.get_int(key)) {
      if (*v < 0 || *v > std::numeric_limits<uint32_t>::max()) {
        throw InputError(kv.source() + ": " + key + " out of range");
      }
      field = static_cast<uint32_t>(*v);
    }
  };
  count("n_experts", cfg.n_experts);
  count("n_topics", cfg.n_topics);
  count("vocab_size", cfg.vocab_size);
  count("cluster_count", cfg.cluster_count);
  if (auto v = kv.get("docs_per_expert")) {
    const std::string what = kv.source() + ": docs_per_expert";
    const auto dash = v->find('-', 1);
    const long long lo = parse_int(v->substr(0, dash), what);
    const long long hi = dash == std::string::npos ? lo : parse_int(v->substr(dash + 1), what);
    if (lo < 0 || hi < 0 || hi > std::numeric_limits<uint32_t>::max()) {
      throw InputError(what + " out of range");
    }
    cfg.docs_per_expert_min = static_cast<uint32_t>(lo);
    cfg.docs_per_expert_max = static_cast<uint32_t>(hi);
  }
  if (auto v = kv.get_double("topic_mention_rate")) cfg.topic_mention_rate = *v;
  if (auto v = kv.get_double("bias_strength")) cfg.bias_strength = *v;
  if (auto v = kv.get_uint("seed")) cfg.seed = *v;
  cfg.validate();
  return cfg;
}

void write_synthetic_config(std::ostream& out, const SyntheticConfig& cfg) {
  out << "n_experts = " << cfg.n_experts << '\n'
      << "n_topics = " << cfg.n_topics << '\n'
      << "docs_per_expert = " << cfg.docs_per_expert_min << '-' << cfg.docs_per_expert_max
      << '\n'
      << "vocab_size = " << cfg.vocab_size << '\n'
      << "topic_mention_rate = " << format_double(cfg.topic_mention_rate) << '\n'
      << "bias_strength = " << format_double(cfg.bias_strength) << '\n'
      << "cluster_count = " << cfg.cluster_count << '\n'
      << "seed = " << cfg.seed << '\n';
}

bool topic_mentioned(const Topic& topic, const std::vector<std::string>& tokens) {
  for (const auto* name : {&topic.name_en, &topic.name_nl}) {
    if (!*name) continue;
    const auto words = tokenize(**name);
    if (words.empty()) continue;
    if (std::all_of(words.begin(), words.end(), [&](const std::string& w) {
          return std::binary_search(tokens.begin(), tokens.end(), w);
        })) {
      return true;
    }
  }
  return false;
}

SyntheticCollection generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SyntheticCollection out;

  // Topics: cluster membership by position, names from a word pool disjoint
  // from the filler vocabulary, synonyms from a third pool that never
  // reaches a document.
  const size_t n_topics = cfg.n_topics;
  const size_t topic_width = width_for(n_topics);
  WordPool name_words{cfg.vocab_size};
  std::vector<Topic> topics(n_topics);
  std::vector<std::vector<uint32_t>> clusters(cfg.cluster_count);
  out.topic_cluster.resize(n_topics);
  for (size_t i = 0; i < n_topics; ++i) {
    Topic& t = topics[i];
    t.id = padded_id('t', i + 1, topic_width);
    const double u = rng.uniform();
    const bool has_en = u >= kDutchOnlyRate;
    const bool has_nl = u < kDutchOnlyRate + (1.0 - kDutchOnlyRate - kEnglishOnlyRate);
    if (has_en) {
      const double w = rng.uniform();
      t.name_en = name_words.phrase(w < 0.4 ? 1 : (w < 0.8 ? 2 : 3));
    }
    if (has_nl || !has_en) t.name_nl = name_words.take();
    const uint32_t c = static_cast<uint32_t>(i % cfg.cluster_count);
    out.topic_cluster[i] = c;
    clusters[c].push_back(static_cast<uint32_t>(i));
  }
  for (size_t i = 0; i < n_topics; ++i) {
    const auto& members = clusters[out.topic_cluster[i]];
    if (members.size() > 1 && rng.bernoulli(kRelationRate)) {
      uint32_t target;
      do {
        target = members[rng.index(members.size())];
      } while (target == i);
      topics[i].relations.push_back({"related", topics[target].id});
    }
  }
  WordPool synonym_words{name_words.next};
  for (const Topic& t : topics) {
    Synonyms s;
    if (t.name_en) s.en = synonym_words.phrase(word_count(*t.name_en));
    if (t.name_nl) s.nl = synonym_words.phrase(word_count(*t.name_nl));
    out.synonyms.entries.emplace(t.id, std::move(s));
  }

  // Embeddings: cluster centroid plus per-topic and per-language noise.
  out.embeddings = EmbeddingTable(kEmbeddingDim);
  std::vector<std::vector<double>> centroids(cfg.cluster_count,
                                             std::vector<double>(kEmbeddingDim));
  for (auto& c : centroids) {
    for (double& x : c) x = rng.normal();
  }
  for (size_t i = 0; i < n_topics; ++i) {
    std::vector<double> base = centroids[out.topic_cluster[i]];
    for (double& x : base) x += kTopicSpread * rng.normal();
    for (Lang lang : {Lang::kEn, Lang::kNl}) {
      const auto& name = lang == Lang::kEn ? topics[i].name_en : topics[i].name_nl;
      if (!name) continue;
      std::vector<float> v(kEmbeddingDim);
      for (size_t d = 0; d < kEmbeddingDim; ++d) {
        v[d] = static_cast<float>(base[d] + kLanguageSpread * rng.normal());
      }
      out.embeddings.add(topics[i].id, lang, std::move(v));
    }
  }

  // Expert plans.
  auto draw_from = [&](const std::vector<uint32_t>& pool, std::vector<uint32_t>& taken,
                       const std::vector<uint32_t>& avoid) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const uint32_t t = pool[rng.skewed(pool.size(), 2.0)];
      if (std::find(taken.begin(), taken.end(), t) == taken.end() &&
          std::find(avoid.begin(), avoid.end(), t) == avoid.end()) {
        taken.push_back(t);
        return;
      }
    }
  };
  const size_t n_experts = cfg.n_experts;
  const size_t expert_width = width_for(n_experts);
  std::vector<std::string> expert_ids(n_experts);
  std::vector<ExpertPlan> plans(n_experts);
  for (size_t e = 0; e < n_experts; ++e) {
    expert_ids[e] = padded_id('e', e + 1, expert_width);
    ExpertPlan& p = plans[e];
    p.home = static_cast<uint32_t>(rng.index(cfg.cluster_count));
    const auto profile_size = rng.between(kProfileMin, kProfileMax);
    for (uint64_t k = 0; k < profile_size; ++k) {
      uint32_t c = p.home;
      if (cfg.cluster_count > 1 && rng.bernoulli(kOffClusterRate)) {
        do {
          c = static_cast<uint32_t>(rng.index(cfg.cluster_count));
        } while (c == p.home);
      }
      draw_from(clusters[c], p.profile, {});
    }
    const auto latent_size = rng.between(kLatentMin, kLatentMax);
    for (uint64_t k = 0; k < latent_size; ++k) draw_from(clusters[p.home], p.latent, p.profile);
  }

  // Documents: filler text with literal topic-name insertions.
  const size_t n_docs_max = n_experts * cfg.docs_per_expert_max;
  const size_t doc_width = std::max<size_t>(6, std::to_string(n_docs_max).size());
  std::vector<Document> docs;
  std::vector<std::vector<std::string>> doc_words;
  static constexpr DocType kTypes[] = {DocType::kPublication, DocType::kDissertation,
                                       DocType::kCourse, DocType::kSummary};
  for (size_t e = 0; e < n_experts; ++e) {
    ExpertPlan& p = plans[e];
    const auto n_docs = rng.between(cfg.docs_per_expert_min, cfg.docs_per_expert_max);
    for (uint64_t k = 0; k < n_docs; ++k) {
      Document d;
      d.id = padded_id('d', docs.size() + 1, doc_width);
      d.expert_ids.push_back(expert_ids[e]);
      if (n_experts > 1 && rng.bernoulli(kCoauthorRate)) {
        size_t other;
        do {
          other = rng.index(n_experts);
        } while (other == e);
        d.expert_ids.push_back(expert_ids[other]);
      }
      d.lang = rng.bernoulli(kDutchDocRate) ? Lang::kNl : Lang::kEn;
      d.type = kTypes[rng.index(std::size(kTypes))];
      const auto length = rng.between(kDocLengthMin, kDocLengthMax);
      std::vector<std::string> words;
      for (uint64_t w = 0; w < length; ++w) words.push_back(make_word(rng.skewed(cfg.vocab_size, 1.6)));
      p.docs.push_back(static_cast<uint32_t>(docs.size()));
      docs.push_back(std::move(d));
      doc_words.push_back(std::move(words));
    }
    std::vector<uint32_t> candidates = p.profile;
    candidates.insert(candidates.end(), p.latent.begin(), p.latent.end());
    for (uint32_t t : candidates) {
      if (!rng.bernoulli(cfg.topic_mention_rate)) continue;
      const auto n_docs_with = rng.between(1, std::min<uint64_t>(3, p.docs.size()));
      for (uint64_t k = 0; k < n_docs_with; ++k) {
        const uint32_t doc = p.docs[rng.index(p.docs.size())];
        const Topic& topic = topics[t];
        const bool nl = docs[doc].lang == Lang::kNl;
        const std::string& name = (nl && topic.name_nl) || !topic.name_en ? *topic.name_nl
                                                                          : *topic.name_en;
        const auto repeats = rng.between(1, 2);
        for (uint64_t r = 0; r < repeats; ++r) {
          auto& words = doc_words[doc];
          const size_t at = rng.index(words.size() + 1);
          words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), name);
        }
      }
    }
  }
  for (size_t i = 0; i < docs.size(); ++i) {
    std::string text;
    const auto& words = doc_words[i];
    for (size_t w = 0; w < words.size(); ++w) {
      const bool sentence_start = w % 12 == 0;
      if (w) text += sentence_start ? ". " : " ";
      std::string word = words[w];
      if (sentence_start) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      text += word;
    }
    text += '.';
    docs[i].text = std::move(text);
  }

  // Mentions are read back from the final texts, so co-authored documents
  // count for every linked expert.
  std::vector<std::string> expert_text(n_experts);
  StringMap<size_t> expert_index;
  for (size_t e = 0; e < n_experts; ++e) expert_index.emplace(expert_ids[e], e);
  for (const Document& d : docs) {
    for (const auto& id : d.expert_ids) {
      auto& text = expert_text[expert_index.at(id)];
      text += d.text;
      text += ' ';
    }
  }

  out.self_selected.scheme = Scheme::kGT2;
  out.system_validated.scheme = Scheme::kGT5;
  out.self_suggested.scheme = Scheme::kGT3;
  for (size_t e = 0; e < n_experts; ++e) {
    const ExpertPlan& p = plans[e];
    const auto tokens = sorted_tokens(expert_text[e]);
    Profile self, validated, suggested;
    for (uint32_t t : p.profile) {
      self.items.push_back({topics[t].id, std::nullopt});
      validated.items.push_back({topics[t].id, static_cast<int>(rng.between(1, 5))});
      if (topic_mentioned(topics[t], tokens)) suggested.items.push_back({topics[t].id, std::nullopt});
    }
    for (uint32_t t : p.latent) {
      const bool mentioned = topic_mentioned(topics[t], tokens);
      const bool conditioned = rng.bernoulli(cfg.bias_strength);
      const bool coin = rng.bernoulli(cfg.topic_mention_rate);
      if (conditioned ? mentioned : coin) {
        validated.items.push_back({topics[t].id, static_cast<int>(rng.between(1, 5))});
      }
    }
    out.self_selected.profiles.emplace(expert_ids[e], std::move(self));
    out.system_validated.profiles.emplace(expert_ids[e], std::move(validated));
    if (!suggested.empty()) out.self_suggested.profiles.emplace(expert_ids[e], std::move(suggested));
  }

  out.topics = TopicCatalog(std::move(topics));
  out.documents = DocumentCollection(std::move(docs));
  return out;
}

void write_synthetic(const SyntheticCollection& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, auto&& fn) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    fn(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
  };
  write(kTopicsFile, [&](std::ostream& o) { write_topics(o, c.topics); });
  write(kDocumentsFile, [&](std::ostream& o) { write_documents(o, c.documents); });
  write(kSelfSelectedFile, [&](std::ostream& o) { write_ground_truth(o, c.self_selected); });
  write(kSystemValidatedFile,
        [&](std::ostream& o) { write_ground_truth(o, c.system_validated); });
  write(kSynonymsFile, [&](std::ostream& o) { write_synonyms(o, c.synonyms); });
  write(kSelfSuggestedFile, [&](std::ostream& o) { write_ground_truth(o, c.self_suggested); });
  write(kEmbeddingsFile, [&](std::ostream& o) { write_embeddings(o, c.embeddings); });
}

}  // namespace erbench
