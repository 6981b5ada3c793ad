#include "erbench/bias_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include "erbench/error.h"
#include "erbench/tokenizer.h"

namespace erbench {

namespace {

std::vector<std::string> unique_tokens(const std::string& text) {
  std::vector<std::string> out;
  for_each_token(text, [&](std::string_view tok) {
    if (std::find(out.begin(), out.end(), tok) == out.end()) out.emplace_back(tok);
  });
  return out;
}

double name_score(const ExpertCorpus& corpus, const std::string& name,
                  std::string_view expert_id) {
  const auto tokens = unique_tokens(name);
  if (tokens.empty()) return 0.0;
  const double experts = static_cast<double>(corpus.expert_count());
  double sum = 0.0;
  for (const std::string& tok : tokens) {
    const uint32_t count = corpus.count(expert_id, tok);
    const uint32_t df = corpus.expert_df(tok);
    const double tf = count > 0 ? 1.0 + std::log(static_cast<double>(count)) : 0.0;
    const double idf = df > 0 ? std::log(experts / static_cast<double>(df)) : 0.0;
    sum += tf * idf;
  }
  return sum / static_cast<double>(tokens.size());
}

std::set<std::string, std::less<>> expert_set(const GroundTruth& gt) {
  std::set<std::string, std::less<>> out;
  for (const auto& [e, p] : gt.profiles) {
    if (!p.empty()) out.insert(e);
  }
  return out;
}

void require_subset(const GroundTruth& inner, const GroundTruth& outer,
                    const char* inner_name, const char* outer_name) {
  const auto outer_experts = expert_set(outer);
  for (const auto& e : expert_set(inner)) {
    if (!outer_experts.contains(e)) {
      throw InputError(std::string("expert '") + e + "' appears in " + inner_name +
                       " but not in " + outer_name + "; mismatched expert universes");
    }
  }
}

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

double tfidf_topic_expert(const ExpertCorpus& corpus, const Topic& topic,
                          std::string_view expert_id) {
  if (!corpus.contains(expert_id)) {
    throw InputError("expert '" + std::string(expert_id) + "' has no documents");
  }
  double best = 0.0;
  for (const auto* name : {&topic.name_en, &topic.name_nl}) {
    if (*name) best = std::max(best, name_score(corpus, **name, expert_id));
  }
  return best;
}

std::string_view to_string(Group group) {
  switch (group) {
    case Group::kSelfSuggested: return "self_suggested";
    case Group::kSelfNotSuggested: return "self_not_suggested";
    case Group::kSelfSelected: return "self_selected";
    case Group::kSystemAdded: return "system_added";
  }
  return "self_selected";
}

Analysis parse_analysis(std::string_view s) {
  if (s == "fig1") return Analysis::kFig1;
  if (s == "fig2") return Analysis::kFig2;
  throw InputError("unknown analysis '" + std::string(s) + "' (expected fig1 or fig2)");
}

BoxplotSummary summarize(std::vector<double> values) {
  BoxplotSummary s;
  s.n = values.size();
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.min = s.whisker_low = s.q1 = s.median = s.q3 = s.whisker_high = s.max = nan;
    return s;
  }
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  const double reach = 1.5 * (s.q3 - s.q1);
  s.whisker_low = *std::lower_bound(values.begin(), values.end(), s.q1 - reach);
  s.whisker_high = *(std::upper_bound(values.begin(), values.end(), s.q3 + reach) - 1);
  // Interpolated hinges can sit between data points; keep the whiskers
  // outside the box.
  s.whisker_low = std::min(s.whisker_low, s.q1);
  s.whisker_high = std::max(s.whisker_high, s.q3);
  return s;
}

TfIdfReport group_tfidf_distributions(const ExpertCorpus& corpus,
                                      const TopicCatalog& catalog, const GroundTruth& a,
                                      const GroundTruth& b, Analysis analysis) {
  TfIdfReport report;
  report.analysis = analysis;
  std::vector<std::pair<const std::string*, const std::string*>> pairs;
  std::vector<Group> groups;
  auto add = [&](const std::string& e, const std::string& t, Group g) {
    pairs.emplace_back(&e, &t);
    groups.push_back(g);
  };
  if (analysis == Analysis::kFig1) {
    require_subset(b, a, "the suggested ground truth", "the self-selected ground truth");
    for (const auto& [e, p] : a.profiles) {
      for (const auto& ann : p.items) {
        add(e, ann.topic_id,
            b.contains(e, ann.topic_id) ? Group::kSelfSuggested : Group::kSelfNotSuggested);
      }
    }
  } else {
    require_subset(a, b, "the self-selected ground truth", "the extended ground truth");
    for (const auto& [e, p] : a.profiles) {
      for (const auto& ann : p.items) add(e, ann.topic_id, Group::kSelfSelected);
    }
    for (const auto& [e, p] : b.profiles) {
      for (const auto& ann : p.items) {
        if (!a.contains(e, ann.topic_id)) add(e, ann.topic_id, Group::kSystemAdded);
      }
    }
  }

  std::map<Group, std::vector<double>> values;
  if (analysis == Analysis::kFig1) {
    values[Group::kSelfSuggested];
    values[Group::kSelfNotSuggested];
  } else {
    values[Group::kSelfSelected];
    values[Group::kSystemAdded];
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& [e, t] = pairs[i];
    if (!corpus.contains(*e)) {
      ++report.skipped_no_documents;
      continue;
    }
    const double score = tfidf_topic_expert(corpus, catalog.at(*t), *e);
    report.rows.push_back({*e, *t, groups[i], score});
    values[groups[i]].push_back(score);
  }
  for (auto& [g, v] : values) report.summaries[g] = summarize(std::move(v));
  return report;
}

void write_tfidf_report(std::ostream& out, const TfIdfReport& report) {
  out << "# tfidf: " << kTfIdfVariant << '\n';
  out << "expert_id\ttopic_id\tgroup\ttfidf\n";
  for (const auto& r : report.rows) {
    out << r.expert_id << '\t' << r.topic_id << '\t' << to_string(r.group) << '\t'
        << format_double(r.tfidf) << '\n';
  }
}

void write_boxplot_tsv(std::ostream& out, const TfIdfReport& report) {
  out << "# tfidf: " << kTfIdfVariant << '\n';
  out << "group\tn\tmin\twhisker_low\tq1\tmedian\tq3\twhisker_high\tmax\n";
  for (const auto& [g, s] : report.summaries) {
    out << to_string(g) << '\t' << s.n << '\t' << format_double(s.min) << '\t'
        << format_double(s.whisker_low) << '\t' << format_double(s.q1) << '\t'
        << format_double(s.median) << '\t' << format_double(s.q3) << '\t'
        << format_double(s.whisker_high) << '\t' << format_double(s.max) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Niche-topic recall

std::vector<std::string> niche_topics(const GroundTruth& gt, size_t min_count,
                                      size_t max_count) {
  StringMap<size_t> counts;
  for (const auto& [_, p] : gt.profiles) {
    for (const auto& a : p.items) ++counts[a.topic_id];
  }
  std::vector<std::string> out;
  for (const auto& [t, n] : counts) {
    if (n >= min_count && n <= max_count) out.push_back(t);
  }
  return out;
}

namespace {

StringMap<std::vector<std::string>> selectors_of(const std::vector<std::string>& topics,
                                                 const GroundTruth& gt) {
  StringMap<std::vector<std::string>> out;
  for (const auto& t : topics) out[t];
  for (const auto& [e, p] : gt.profiles) {
    for (const auto& a : p.items) {
      auto it = out.find(a.topic_id);
      if (it != out.end()) it->second.push_back(e);
    }
  }
  return out;
}

void finish(RecallReport& report) {
  report.total = report.topics.size();
  report.recalled = static_cast<size_t>(std::count_if(
      report.topics.begin(), report.topics.end(), [](const TopicRecall& t) { return t.recalled; }));
  report.strict_recall = report.total == 0 ? 0.0
                                           : static_cast<double>(report.recalled) /
                                                 static_cast<double>(report.total);
}

}  // namespace

RecallReport suggestion_recall(const std::vector<std::string>& niche, const GroundTruth& gt,
                               const SuggestionLookup& lookup) {
  RecallReport report;
  const auto selectors = selectors_of(niche, gt);
  for (const auto& t : niche) {
    TopicRecall tr;
    tr.topic_id = t;
    tr.recalled = true;
    for (const auto& e : selectors.find(t)->second) {
      const SuggestionList* list = lookup(e, t);
      if (list == nullptr) {
        throw InputError("no suggestion list for expert '" + e + "'");
      }
      auto pos = list->position(t);
      tr.recalled = tr.recalled && pos.has_value();
      tr.experts.push_back({e, pos});
    }
    // A topic nobody selected cannot be niche; treat it as not recalled.
    if (tr.experts.empty()) tr.recalled = false;
    report.topics.push_back(std::move(tr));
  }
  finish(report);
  return report;
}

RecallReport suggestion_recall(const std::vector<std::string>& niche, const GroundTruth& gt,
                               const StringMap<SuggestionList>& suggestions) {
  return suggestion_recall(niche, gt,
                           [&](const std::string& e, const std::string&) -> const SuggestionList* {
                             auto it = suggestions.find(e);
                             return it == suggestions.end() ? nullptr : &it->second;
                           });
}

RecallReport leave_one_out_recall(const std::vector<std::string>& niche,
                                  const GroundTruth& gt, const SuggestionEngine& engine,
                                  unsigned workers) {
  const auto selectors = selectors_of(niche, gt);
  std::vector<std::pair<std::string, std::string>> jobs;  // (expert, topic)
  for (const auto& t : niche) {
    for (const auto& e : selectors.find(t)->second) jobs.emplace_back(e, t);
  }
  std::vector<SuggestionList> lists(jobs.size());
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<size_t>(jobs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < jobs.size(); i += workers) {
          lists[i] = leave_one_out_suggestions(gt, jobs[i].first, jobs[i].second, engine);
        }
      });
    }
  }
  std::map<std::pair<std::string, std::string>, const SuggestionList*, std::less<>> by_job;
  for (size_t i = 0; i < jobs.size(); ++i) by_job[jobs[i]] = &lists[i];
  return suggestion_recall(niche, gt,
                           [&](const std::string& e, const std::string& t) -> const SuggestionList* {
                             auto it = by_job.find({e, t});
                             return it == by_job.end() ? nullptr : it->second;
                           });
}

StringMap<SuggestionList> suggestions_from_ground_truth(const GroundTruth& gt) {
  StringMap<SuggestionList> out;
  for (const auto& [e, p] : gt.profiles) {
    SuggestionList list;
    list.expert_id = e;
    for (const auto& a : p.items) list.items.push_back({a.topic_id, SuggestionSource::kPmi, ""});
    list.cap = std::max<size_t>(list.items.size(), 100);
    out.emplace(e, std::move(list));
  }
  return out;
}

void write_recall_tsv(std::ostream& out, const RecallReport& report) {
  out << "topic_id\texpert_id\tsuggested\tposition\ttopic_recalled\n";
  for (const auto& t : report.topics) {
    for (const auto& e : t.experts) {
      out << t.topic_id << '\t' << e.expert_id << '\t' << (e.position ? 1 : 0) << '\t'
          << (e.position ? std::to_string(*e.position) : std::string("-")) << '\t'
          << (t.recalled ? 1 : 0) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Overlap and synonym swap

OverlapReport addition_overlap(const AdditionSet& additions,
                               const StringMap<SuggestionList>& suggestions) {
  OverlapReport r;
  for (const auto& [e, diff] : additions.by_expert) {
    auto it = suggestions.find(e);
    for (const auto& t : diff.added) {
      ++r.total;
      if (it != suggestions.end() && it->second.contains(t)) ++r.covered;
    }
  }
  r.vacuous = r.total == 0;
  r.fraction = r.vacuous ? 1.0 : static_cast<double>(r.covered) / static_cast<double>(r.total);
  return r;
}

SwapReport synonym_swap_eval(const InvertedIndex& index, const TopicCatalog& catalog,
                             const SynonymTable& synonyms, const Qrels& qrels,
                             const SearchOptions& options) {
  SwapReport report;
  std::vector<Topic> topics;
  Qrels restricted;
  for (const auto& [qid, judgments] : qrels) {
    if (count_relevant(judgments) == 0) continue;
    const Topic* t = catalog.find(qid);
    if (t == nullptr) continue;
    if (synonyms.find(qid) == nullptr) {
      ++report.topics_without_synonyms;
      continue;
    }
    topics.push_back(*t);
    restricted.emplace(qid, judgments);
  }
  report.topics_evaluated = topics.size();

  SearchOptions normal = options;
  normal.mode = QueryMode::kNormal;
  SearchOptions swapped = options;
  swapped.mode = QueryMode::kSynonym;
  swapped.synonyms = &synonyms;
  report.normal = evaluate_run(expert_search(index, topics, normal), restricted);
  report.synonym = evaluate_run(expert_search(index, topics, swapped), restricted);
  report.delta = {report.synonym.mean.p_at_5 - report.normal.mean.p_at_5,
                  report.synonym.mean.map - report.normal.mean.map,
                  report.synonym.mean.ndcg - report.normal.mean.ndcg,
                  report.synonym.mean.mrr - report.normal.mean.mrr};
  return report;
}

void write_comparison_tsv(std::ostream& out, const SwapReport& report) {
  out << "metric\tnormal\tsynonym\tdelta\n";
  auto row = [&](const char* name, double n, double s, double d) {
    out << name << '\t' << format_double(n) << '\t' << format_double(s) << '\t'
        << format_double(d) << '\n';
  };
  const auto& n = report.normal.mean;
  const auto& s = report.synonym.mean;
  row("P@5", n.p_at_5, s.p_at_5, report.delta.p_at_5);
  row("MAP", n.map, s.map, report.delta.map);
  row("nDCG", n.ndcg, s.ndcg, report.delta.ndcg);
  row("MRR", n.mrr, s.mrr, report.delta.mrr);
}

}  // namespace erbench
