#pragma once

// Term-mention bias analyses: tf-idf of topic names against per-expert
// concatenated documents grouped by annotation origin, niche-topic recall of
// suggestion lists, overlap of suggestions with system-validated additions,
// and normal-vs-synonym query comparisons.

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "erbench/corpus.h"
#include "erbench/evaluation.h"
#include "erbench/retrieval.h"
#include "erbench/suggestion.h"
#include "erbench/text_index.h"

namespace erbench {

// Recorded in report headers so the numbers can be interpreted.
inline constexpr std::string_view kTfIdfVariant =
    "tf=1+ln(count) (0 if absent); idf=ln(E/expert_df) (0 if df=0); "
    "mean over unique name tokens; max over EN/NL names";

// Throws InputError if the expert has no documents.
double tfidf_topic_expert(const ExpertCorpus& corpus, const Topic& topic,
                          std::string_view expert_id);

enum class Group { kSelfSuggested, kSelfNotSuggested, kSelfSelected, kSystemAdded };
std::string_view to_string(Group group);

// fig1: pairs of a (self-selected) split by membership in b (self-selected
// restricted to suggested topics). fig2: pairs of a as self_selected, pairs
// of b not in a as system_added.
enum class Analysis { kFig1, kFig2 };
Analysis parse_analysis(std::string_view s);

struct TfIdfRow {
  std::string expert_id;
  std::string topic_id;
  Group group;
  double tfidf = 0.0;
};

// Tukey boxplot: quartiles by linear interpolation, whiskers at the most
// extreme data points within 1.5 IQR of the nearest hinge. All values are
// NaN when n == 0.
struct BoxplotSummary {
  size_t n = 0;
  double min = 0, whisker_low = 0, q1 = 0, median = 0, q3 = 0, whisker_high = 0, max = 0;
};

BoxplotSummary summarize(std::vector<double> values);

struct TfIdfReport {
  Analysis analysis = Analysis::kFig1;
  std::vector<TfIdfRow> rows;
  std::map<Group, BoxplotSummary> summaries;
  // Pairs whose expert has no documents cannot be scored.
  size_t skipped_no_documents = 0;
};

// Throws InputError when the expert universes do not fit the analysis:
// fig1 needs experts(b) within experts(a), fig2 needs experts(a) within
// experts(b).
TfIdfReport group_tfidf_distributions(const ExpertCorpus& corpus,
                                      const TopicCatalog& catalog, const GroundTruth& a,
                                      const GroundTruth& b, Analysis analysis);

void write_tfidf_report(std::ostream& out, const TfIdfReport& report);
void write_boxplot_tsv(std::ostream& out, const TfIdfReport& report);

// Topics whose profile count lies in [min_count, max_count], sorted.
std::vector<std::string> niche_topics(const GroundTruth& gt, size_t min_count = 2,
                                      size_t max_count = 3);

struct ExpertRecall {
  std::string expert_id;
  std::optional<size_t> position;  // 1-based rank in the suggestion list
};

struct TopicRecall {
  std::string topic_id;
  std::vector<ExpertRecall> experts;
  bool recalled = false;
};

struct RecallReport {
  size_t recalled = 0;
  size_t total = 0;
  double strict_recall = 0.0;  // recalled / total, 0 when total == 0
  std::vector<TopicRecall> topics;
};

// Suggestion list for (expert, topic); null if none exists.
using SuggestionLookup =
    std::function<const SuggestionList*(const std::string& expert_id,
                                        const std::string& topic_id)>;

// A niche topic is recalled iff it is suggested to every expert who
// self-selected it. Throws InputError naming the expert when a list is
// missing.
RecallReport suggestion_recall(const std::vector<std::string>& niche, const GroundTruth& gt,
                               const SuggestionLookup& lookup);
RecallReport suggestion_recall(const std::vector<std::string>& niche, const GroundTruth& gt,
                               const StringMap<SuggestionList>& suggestions);

// Recall where each (expert, topic) check uses suggestions computed from the
// expert's profile without that topic.
RecallReport leave_one_out_recall(const std::vector<std::string>& niche,
                                  const GroundTruth& gt, const SuggestionEngine& engine,
                                  unsigned workers = 1);

// Suggestion lists reconstructed from a "self-selected and suggested" ground
// truth: each expert's list holds exactly their profile topics.
StringMap<SuggestionList> suggestions_from_ground_truth(const GroundTruth& gt);

void write_recall_tsv(std::ostream& out, const RecallReport& report);

struct OverlapReport {
  size_t covered = 0;
  size_t total = 0;
  double fraction = 1.0;
  bool vacuous = true;  // no additions at all
};

// Fraction of (expert, added topic) pairs whose topic is in that expert's
// suggestion list. Experts without a list cover nothing.
OverlapReport addition_overlap(const AdditionSet& additions,
                               const StringMap<SuggestionList>& suggestions);

struct SwapReport {
  MetricReport normal;
  MetricReport synonym;
  MetricValues delta;  // synonym - normal
  size_t topics_evaluated = 0;
  size_t topics_without_synonyms = 0;
};

// Runs expert search with original names and with synonyms over the same
// topics (qrels queries with a relevant expert and a synonym entry) and the
// same qrels.
SwapReport synonym_swap_eval(const InvertedIndex& index, const TopicCatalog& catalog,
                             const SynonymTable& synonyms, const Qrels& qrels,
                             const SearchOptions& options);

void write_comparison_tsv(std::ostream& out, const SwapReport& report);

}  // namespace erbench
