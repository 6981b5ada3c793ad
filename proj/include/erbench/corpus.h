#pragma once

// Data model for the expertise collection: topics (knowledge areas),
// documents linked to experts, ground-truth expert profiles and topic
// synonyms, plus their line-oriented file formats.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace erbench {

template <typename V>
using StringMap = std::map<std::string, V, std::less<>>;

enum class Lang { kEn, kNl, kUnknown };
enum class DocType { kPublication, kDissertation, kCourse, kSummary, kOther };

std::string_view to_string(Lang lang);
std::string_view to_string(DocType type);
Lang parse_lang(std::string_view s);        // throws InputError
DocType parse_doc_type(std::string_view s);  // throws InputError

struct TopicRelation {
  std::string kind;
  std::string target;
  bool operator==(const TopicRelation&) const = default;
};

struct Topic {
  std::string id;
  std::optional<std::string> name_en;
  std::optional<std::string> name_nl;
  std::vector<TopicRelation> relations;
  bool operator==(const Topic&) const = default;
};

// Immutable after construction. Topics keep their file order.
class TopicCatalog {
 public:
  TopicCatalog() = default;
  // Throws InputError on duplicate ids, nameless topics or dangling
  // relation targets.
  explicit TopicCatalog(std::vector<Topic> topics);

  const Topic* find(std::string_view id) const;
  const Topic& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  std::span<const Topic> topics() const { return topics_; }
  size_t size() const { return topics_.size(); }

  bool operator==(const TopicCatalog& o) const { return topics_ == o.topics_; }

 private:
  std::vector<Topic> topics_;
  StringMap<size_t> by_id_;
};

struct Document {
  std::string id;
  std::vector<std::string> expert_ids;
  std::string text;
  Lang lang = Lang::kUnknown;
  DocType type = DocType::kOther;
  bool operator==(const Document&) const = default;
};

// Documents in input order plus the inverse expert -> documents mapping.
class DocumentCollection {
 public:
  DocumentCollection() = default;
  // Throws InputError on duplicate ids, empty expert lists or blank text.
  explicit DocumentCollection(std::vector<Document> docs);

  std::span<const Document> documents() const { return docs_; }
  size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const Document* find(std::string_view doc_id) const;

  // expert_id -> doc ids, each list in input order.
  const StringMap<std::vector<std::string>>& expert_docs() const {
    return expert_docs_;
  }

  bool operator==(const DocumentCollection& o) const { return docs_ == o.docs_; }

 private:
  std::vector<Document> docs_;
  StringMap<size_t> by_id_;
  StringMap<std::vector<std::string>> expert_docs_;
};

enum class Scheme { kGT1, kGT2, kGT3, kGT4, kGT5, kCustom };
std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view s);

struct Annotation {
  std::string topic_id;
  std::optional<int> grade;  // 1..5 when present
  bool operator==(const Annotation&) const = default;
};

// One expert's annotations, in file order.
struct Profile {
  std::vector<Annotation> items;

  bool contains(std::string_view topic_id) const;
  std::vector<std::string> topic_ids() const;
  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool operator==(const Profile&) const = default;
};

struct GroundTruth {
  Scheme scheme = Scheme::kCustom;
  StringMap<Profile> profiles;

  bool contains(std::string_view expert_id, std::string_view topic_id) const;
  const Profile* profile(std::string_view expert_id) const;
  size_t pair_count() const;
  bool is_binary() const;
  bool operator==(const GroundTruth&) const = default;
};

// Drops all grades; topic sets and their order are preserved.
GroundTruth binarize(const GroundTruth& gt);

struct ProfileDiff {
  std::vector<std::string> added;    // in b, not in a (b's order)
  std::vector<std::string> removed;  // in a, not in b (a's order)
  bool operator==(const ProfileDiff&) const = default;
};

struct AdditionSet {
  StringMap<ProfileDiff> by_expert;  // only experts with a non-empty diff
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;

  size_t total_added() const;
  size_t total_removed() const;
};

AdditionSet diff_ground_truth(const GroundTruth& a, const GroundTruth& b);

// Reconstructs b from a and diff_ground_truth(a, b). Topic order inside a
// profile is a's surviving topics followed by the additions.
GroundTruth apply_diff(const GroundTruth& a, const AdditionSet& diff);

struct Synonyms {
  std::optional<std::string> en;
  std::optional<std::string> nl;
  bool operator==(const Synonyms&) const = default;
};

struct SynonymTable {
  StringMap<Synonyms> entries;

  const Synonyms* find(std::string_view topic_id) const;
  bool operator==(const SynonymTable&) const = default;
};

// Readers take a `source` name used in error messages. Loaders open the file
// and throw InputError if it cannot be read.
TopicCatalog read_topics(std::istream& in, const std::string& source);
TopicCatalog load_topics(const std::filesystem::path& path);
void write_topics(std::ostream& out, const TopicCatalog& catalog);

DocumentCollection read_documents(std::istream& in, const std::string& source);
DocumentCollection load_documents(const std::filesystem::path& path);
void write_documents(std::ostream& out, const DocumentCollection& docs);

GroundTruth read_ground_truth(std::istream& in, const std::string& source,
                              Scheme scheme, const TopicCatalog& catalog);
GroundTruth load_ground_truth(const std::filesystem::path& path, Scheme scheme,
                              const TopicCatalog& catalog);
void write_ground_truth(std::ostream& out, const GroundTruth& gt);

SynonymTable read_synonyms(std::istream& in, const std::string& source,
                           const TopicCatalog& catalog);
SynonymTable load_synonyms(const std::filesystem::path& path,
                           const TopicCatalog& catalog);
void write_synonyms(std::ostream& out, const SynonymTable& table);

// Shared line helpers for the TSV formats.
std::vector<std::string_view> split_tabs(std::string_view line);
std::string_view strip_cr(std::string_view line);
bool is_blank(std::string_view s);

}  // namespace erbench
