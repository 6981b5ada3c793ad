#include "erbench/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "erbench/error.h"
#include "json.hpp"

namespace erbench {

InputError input_error_at(const std::string& path, size_t line,
                          const std::string& what) {
  return InputError(path + ":" + std::to_string(line) + ": " + what);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::optional<std::string> optional_field(std::string_view f) {
  if (f.empty()) return std::nullopt;
  return std::string(f);
}

std::string_view field_or_empty(const std::optional<std::string>& s) {
  return s ? std::string_view(*s) : std::string_view();
}

}  // namespace

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

std::string_view to_string(Lang lang) {
  switch (lang) {
    case Lang::kEn: return "en";
    case Lang::kNl: return "nl";
    case Lang::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::kPublication: return "publication";
    case DocType::kDissertation: return "dissertation";
    case DocType::kCourse: return "course";
    case DocType::kSummary: return "summary";
    case DocType::kOther: return "other";
  }
  return "other";
}

Lang parse_lang(std::string_view s) {
  if (s == "en") return Lang::kEn;
  if (s == "nl") return Lang::kNl;
  if (s == "unknown" || s.empty()) return Lang::kUnknown;
  throw InputError("unknown language tag '" + std::string(s) + "'");
}

DocType parse_doc_type(std::string_view s) {
  if (s == "publication") return DocType::kPublication;
  if (s == "dissertation") return DocType::kDissertation;
  if (s == "course") return DocType::kCourse;
  if (s == "summary") return DocType::kSummary;
  if (s == "other" || s.empty()) return DocType::kOther;
  throw InputError("unknown document type '" + std::string(s) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kGT1: return "GT1";
    case Scheme::kGT2: return "GT2";
    case Scheme::kGT3: return "GT3";
    case Scheme::kGT4: return "GT4";
    case Scheme::kGT5: return "GT5";
    case Scheme::kCustom: return "custom";
  }
  return "custom";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "GT1") return Scheme::kGT1;
  if (s == "GT2") return Scheme::kGT2;
  if (s == "GT3") return Scheme::kGT3;
  if (s == "GT4") return Scheme::kGT4;
  if (s == "GT5") return Scheme::kGT5;
  if (s == "custom") return Scheme::kCustom;
  throw InputError("unknown ground-truth scheme '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// TopicCatalog

TopicCatalog::TopicCatalog(std::vector<Topic> topics)
    : topics_(std::move(topics)) {
  for (size_t i = 0; i < topics_.size(); ++i) {
    const Topic& t = topics_[i];
    if (t.id.empty()) throw InputError("topic with empty id");
    if (!t.name_en && !t.name_nl) {
      throw InputError("topic '" + t.id + "' has neither name_en nor name_nl");
    }
    if (!by_id_.emplace(t.id, i).second) {
      throw InputError("duplicate topic_id '" + t.id + "'");
    }
  }
  for (const Topic& t : topics_) {
    for (const TopicRelation& r : t.relations) {
      if (!by_id_.contains(r.target)) {
        throw InputError("topic '" + t.id + "' relation '" + r.kind +
                         "' targets unknown topic '" + r.target + "'");
      }
    }
  }
}

const Topic* TopicCatalog::find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &topics_[it->second];
}

const Topic& TopicCatalog::at(std::string_view id) const {
  const Topic* t = find(id);
  if (t == nullptr) throw InputError("unknown topic '" + std::string(id) + "'");
  return *t;
}

TopicCatalog read_topics(std::istream& in, const std::string& source) {
  std::vector<Topic> topics;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() < 3 || f.size() > 4) {
      throw input_error_at(source, lineno, "expected 3 or 4 tab-separated fields");
    }
    Topic t;
    t.id = std::string(f[0]);
    if (t.id.empty()) throw input_error_at(source, lineno, "empty topic_id");
    if (!seen.insert(t.id).second) {
      throw input_error_at(source, lineno, "duplicate topic_id '" + t.id + "'");
    }
    t.name_en = optional_field(f[1]);
    t.name_nl = optional_field(f[2]);
    if (!t.name_en && !t.name_nl) {
      throw input_error_at(source, lineno,
                           "topic '" + t.id + "' has neither name_en nor name_nl");
    }
    if (f.size() == 4 && !f[3].empty()) {
      try {
        auto rel = nlohmann::json::parse(f[3]);
        if (!rel.is_array()) throw InputError("relations_json must be an array");
        for (const auto& r : rel) {
          t.relations.push_back(
              {r.at("kind").get<std::string>(), r.at("target").get<std::string>()});
        }
      } catch (const nlohmann::json::exception& e) {
        throw input_error_at(source, lineno,
                             std::string("bad relations_json: ") + e.what());
      } catch (const InputError& e) {
        throw input_error_at(source, lineno, e.what());
      }
    }
    topics.push_back(std::move(t));
  }
  return TopicCatalog(std::move(topics));
}

TopicCatalog load_topics(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_topics(in, path.string());
}

void write_topics(std::ostream& out, const TopicCatalog& catalog) {
  for (const Topic& t : catalog.topics()) {
    out << t.id << '\t' << field_or_empty(t.name_en) << '\t'
        << field_or_empty(t.name_nl) << '\t';
    if (!t.relations.empty()) {
      nlohmann::json rel = nlohmann::json::array();
      for (const auto& r : t.relations) {
        rel.push_back({{"kind", r.kind}, {"target", r.target}});
      }
      out << rel.dump();
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// DocumentCollection

DocumentCollection::DocumentCollection(std::vector<Document> docs)
    : docs_(std::move(docs)) {
  for (size_t i = 0; i < docs_.size(); ++i) {
    const Document& d = docs_[i];
    if (d.id.empty()) throw InputError("document with empty doc_id");
    if (d.expert_ids.empty()) {
      throw InputError("document '" + d.id + "' has no expert_ids");
    }
    if (is_blank(d.text)) {
      throw InputError("document '" + d.id + "' has empty text");
    }
    if (!by_id_.emplace(d.id, i).second) {
      throw InputError("duplicate doc_id '" + d.id + "'");
    }
    for (const std::string& e : d.expert_ids) {
      auto& list = expert_docs_[e];
      // A document listing the same expert twice is linked once.
      if (list.empty() || list.back() != d.id) list.push_back(d.id);
    }
  }
}

const Document* DocumentCollection::find(std::string_view doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

DocumentCollection read_documents(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    Document d;
    try {
      auto j = nlohmann::json::parse(line);
      d.id = j.at("doc_id").get<std::string>();
      d.expert_ids = j.at("expert_ids").get<std::vector<std::string>>();
      d.text = j.at("text").get<std::string>();
      d.lang = parse_lang(j.value("lang", std::string("unknown")));
      d.type = parse_doc_type(j.value("doc_type", std::string("other")));
    } catch (const nlohmann::json::exception& e) {
      throw input_error_at(source, lineno, std::string("bad document: ") + e.what());
    } catch (const InputError& e) {
      throw input_error_at(source, lineno, e.what());
    }
    if (d.expert_ids.empty()) {
      throw input_error_at(source, lineno, "document '" + d.id + "' has no expert_ids");
    }
    if (is_blank(d.text)) {
      throw input_error_at(source, lineno, "document '" + d.id + "' has empty text");
    }
    docs.push_back(std::move(d));
  }
  try {
    return DocumentCollection(std::move(docs));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

DocumentCollection load_documents(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_documents(in, path.string());
}

void write_documents(std::ostream& out, const DocumentCollection& docs) {
  for (const Document& d : docs.documents()) {
    nlohmann::json j = {{"doc_id", d.id},
                        {"expert_ids", d.expert_ids},
                        {"text", d.text},
                        {"lang", std::string(to_string(d.lang))},
                        {"doc_type", std::string(to_string(d.type))}};
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// GroundTruth

bool Profile::contains(std::string_view topic_id) const {
  return std::any_of(items.begin(), items.end(),
                     [&](const Annotation& a) { return a.topic_id == topic_id; });
}

std::vector<std::string> Profile::topic_ids() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& a : items) out.push_back(a.topic_id);
  return out;
}

bool GroundTruth::contains(std::string_view expert_id,
                           std::string_view topic_id) const {
  const Profile* p = profile(expert_id);
  return p != nullptr && p->contains(topic_id);
}

const Profile* GroundTruth::profile(std::string_view expert_id) const {
  auto it = profiles.find(expert_id);
  return it == profiles.end() ? nullptr : &it->second;
}

size_t GroundTruth::pair_count() const {
  size_t n = 0;
  for (const auto& [_, p] : profiles) n += p.size();
  return n;
}

bool GroundTruth::is_binary() const {
  for (const auto& [_, p] : profiles) {
    for (const auto& a : p.items) {
      if (a.grade) return false;
    }
  }
  return true;
}

GroundTruth binarize(const GroundTruth& gt) {
  GroundTruth out = gt;
  for (auto& [_, p] : out.profiles) {
    for (auto& a : p.items) a.grade.reset();
  }
  return out;
}

size_t AdditionSet::total_added() const {
  size_t n = 0;
  for (const auto& [_, d] : by_expert) n += d.added.size();
  return n;
}

size_t AdditionSet::total_removed() const {
  size_t n = 0;
  for (const auto& [_, d] : by_expert) n += d.removed.size();
  return n;
}

AdditionSet diff_ground_truth(const GroundTruth& a, const GroundTruth& b) {
  static const Profile kEmpty;
  AdditionSet out;
  std::set<std::string, std::less<>> experts;
  for (const auto& [e, _] : a.profiles) experts.insert(e);
  for (const auto& [e, _] : b.profiles) experts.insert(e);
  for (const std::string& e : experts) {
    const Profile* pa = a.profile(e);
    const Profile* pb = b.profile(e);
    if (pa == nullptr) out.only_in_b.push_back(e);
    if (pb == nullptr) out.only_in_a.push_back(e);
    const Profile& ra = pa ? *pa : kEmpty;
    const Profile& rb = pb ? *pb : kEmpty;
    ProfileDiff d;
    for (const auto& ann : rb.items) {
      if (!ra.contains(ann.topic_id)) d.added.push_back(ann.topic_id);
    }
    for (const auto& ann : ra.items) {
      if (!rb.contains(ann.topic_id)) d.removed.push_back(ann.topic_id);
    }
    if (!d.added.empty() || !d.removed.empty()) out.by_expert.emplace(e, std::move(d));
  }
  return out;
}

GroundTruth apply_diff(const GroundTruth& a, const AdditionSet& diff) {
  GroundTruth out;
  out.scheme = a.scheme;
  for (const auto& [e, p] : a.profiles) {
    if (std::find(diff.only_in_a.begin(), diff.only_in_a.end(), e) !=
        diff.only_in_a.end()) {
      continue;
    }
    out.profiles[e] = p;
  }
  for (const auto& e : diff.only_in_b) out.profiles[e];
  for (const auto& [e, d] : diff.by_expert) {
    auto it = out.profiles.find(e);
    if (it == out.profiles.end()) continue;
    auto& items = it->second.items;
    std::erase_if(items, [&](const Annotation& ann) {
      return std::find(d.removed.begin(), d.removed.end(), ann.topic_id) !=
             d.removed.end();
    });
    for (const auto& t : d.added) items.push_back({t, std::nullopt});
  }
  return out;
}

GroundTruth read_ground_truth(std::istream& in, const std::string& source,
                              Scheme scheme, const TopicCatalog& catalog) {
  GroundTruth gt;
  gt.scheme = scheme;
  std::vector<std::string> unknown;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() < 2 || f.size() > 3 || f[0].empty() || f[1].empty()) {
      throw input_error_at(source, lineno,
                           "expected expert_id<TAB>topic_id[<TAB>grade]");
    }
    Annotation ann{std::string(f[1]), std::nullopt};
    if (f.size() == 3 && !f[2].empty()) {
      int grade = 0;
      auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), grade);
      if (ec != std::errc() || ptr != f[2].data() + f[2].size()) {
        throw input_error_at(source, lineno, "grade is not an integer");
      }
      if (grade < 1 || grade > 5) {
        throw input_error_at(source, lineno,
                             "grade " + std::to_string(grade) + " outside 1..5");
      }
      ann.grade = grade;
    }
    if (!catalog.contains(ann.topic_id)) {
      unknown.push_back(ann.topic_id);
      continue;
    }
    Profile& p = gt.profiles[std::string(f[0])];
    if (p.contains(ann.topic_id)) {
      throw input_error_at(source, lineno, "duplicate annotation (" +
                                               std::string(f[0]) + ", " +
                                               ann.topic_id + ")");
    }
    p.items.push_back(std::move(ann));
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
    std::string msg = source + ": unknown topic ids:";
    for (const auto& u : unknown) msg += " " + u;
    throw InputError(msg);
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path, Scheme scheme,
                              const TopicCatalog& catalog) {
  auto in = open_input(path);
  return read_ground_truth(in, path.string(), scheme, catalog);
}

void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
  for (const auto& [e, p] : gt.profiles) {
    for (const auto& a : p.items) {
      out << e << '\t' << a.topic_id;
      if (a.grade) out << '\t' << *a.grade;
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// SynonymTable

const Synonyms* SynonymTable::find(std::string_view topic_id) const {
  auto it = entries.find(topic_id);
  return it == entries.end() ? nullptr : &it->second;
}

SynonymTable read_synonyms(std::istream& in, const std::string& source,
                           const TopicCatalog& catalog) {
  SynonymTable table;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 3 || f[0].empty()) {
      throw input_error_at(source, lineno,
                           "expected topic_id<TAB>synonym_en<TAB>synonym_nl");
    }
    std::string id(f[0]);
    if (!catalog.contains(id)) {
      throw input_error_at(source, lineno, "unknown topic id '" + id + "'");
    }
    Synonyms s{optional_field(f[1]), optional_field(f[2])};
    if (!s.en && !s.nl) {
      throw input_error_at(source, lineno, "topic '" + id + "' has no synonyms");
    }
    if (!table.entries.emplace(id, std::move(s)).second) {
      throw input_error_at(source, lineno, "duplicate synonyms for '" + id + "'");
    }
  }
  return table;
}

SynonymTable load_synonyms(const std::filesystem::path& path,
                           const TopicCatalog& catalog) {
  auto in = open_input(path);
  return read_synonyms(in, path.string(), catalog);
}

void write_synonyms(std::ostream& out, const SynonymTable& table) {
  for (const auto& [id, s] : table.entries) {
    out << id << '\t' << field_or_empty(s.en) << '\t' << field_or_empty(s.nl)
        << '\n';
  }
}

}  // namespace erbench
