#include "erbench/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "erbench/error.h"

namespace erbench {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_relevant(const QueryJudgments& judgments, const std::string& expert) {
  auto it = judgments.find(expert);
  return it != judgments.end() && it->second > 0;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Qrels qrels_from_ground_truth(const GroundTruth& gt) {
  Qrels q;
  for (const auto& [expert, profile] : gt.profiles) {
    for (const auto& a : profile.items) q[a.topic_id][expert] = 1;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Runs and qrels

RankedRun read_run(std::istream& in, const std::string& source,
                   std::vector<std::string>* warnings) {
  RankedRun run;
  std::string raw;
  size_t lineno = 0;
  StringMap<std::set<std::string, std::less<>>> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_ws(line);
    if (f.size() != 6) {
      throw input_error_at(source, lineno,
                           "expected `query_id Q0 expert_id rank score tag`");
    }
    RunEntry e;
    e.expert_id = std::string(f[2]);
    if (!parse_number(f[3], e.rank) || e.rank == 0) {
      throw input_error_at(source, lineno, "bad rank '" + std::string(f[3]) + "'");
    }
    if (!parse_number(f[4], e.score) || !std::isfinite(e.score)) {
      throw input_error_at(source, lineno, "bad score '" + std::string(f[4]) + "'");
    }
    if (run.tag.empty()) run.tag = std::string(f[5]);
    std::string qid(f[0]);
    if (!seen[qid].insert(e.expert_id).second) {
      throw input_error_at(source, lineno, "duplicate expert '" + e.expert_id +
                                               "' for query '" + qid + "'");
    }
    run.queries[qid].push_back(std::move(e));
  }
  for (auto& [qid, entries] : run.queries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    bool warned = false;
    for (size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].rank == entries[i - 1].rank) {
        throw InputError(source + ": duplicate rank " +
                         std::to_string(entries[i].rank) + " for query '" + qid + "'");
      }
      if (!warned && entries[i].score > entries[i - 1].score) {
        warned = true;
        if (warnings != nullptr) {
          warnings->push_back(source + ": query '" + qid +
                              "': score increases with rank at rank " +
                              std::to_string(entries[i].rank) +
                              "; keeping file rank order");
        }
      }
    }
  }
  return run;
}

RankedRun load_run(const std::filesystem::path& path,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_run(in, path.string(), warnings);
}

void write_run(std::ostream& out, const RankedRun& run) {
  const std::string tag = run.tag.empty() ? "erbench" : run.tag;
  for (const auto& [qid, entries] : run.queries) {
    std::vector<const RunEntry*> sorted;
    for (const auto& e : entries) sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RunEntry* a, const RunEntry* b) { return a->rank < b->rank; });
    for (const RunEntry* e : sorted) {
      out << qid << " Q0 " << e->expert_id << ' ' << e->rank << ' '
          << format_double(e->score) << ' ' << tag << '\n';
    }
  }
}

Qrels read_qrels(std::istream& in, const std::string& source) {
  Qrels qrels;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto f = split_ws(line);
    if (f.size() != 4) {
      throw input_error_at(source, lineno, "expected `query_id 0 expert_id rel`");
    }
    int rel = 0;
    if (!parse_number(f[3], rel) || rel < 0) {
      throw input_error_at(source, lineno, "bad relevance '" + std::string(f[3]) + "'");
    }
    auto& judgments = qrels[std::string(f[0])];
    if (!judgments.emplace(std::string(f[2]), rel).second) {
      throw input_error_at(source, lineno, "duplicate judgment for (" +
                                               std::string(f[0]) + ", " +
                                               std::string(f[2]) + ")");
    }
  }
  return qrels;
}

Qrels load_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_qrels(in, path.string());
}

void write_qrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [qid, judgments] : qrels) {
    for (const auto& [expert, rel] : judgments) {
      out << qid << "\t0\t" << expert << '\t' << rel << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Metrics

size_t count_relevant(const QueryJudgments& judgments) {
  return static_cast<size_t>(std::count_if(
      judgments.begin(), judgments.end(), [](const auto& kv) { return kv.second > 0; }));
}

double precision_at_k(std::span<const RunEntry> ranking,
                      const QueryJudgments& judgments, size_t k) {
  if (k == 0) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < std::min(k, ranking.size()); ++i) {
    if (is_relevant(judgments, ranking[i].expert_id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::optional<double> average_precision(std::span<const RunEntry> ranking,
                                        const QueryJudgments& judgments) {
  const size_t relevant = count_relevant(judgments);
  if (relevant == 0) return std::nullopt;
  double sum = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < ranking.size(); ++i) {
    if (is_relevant(judgments, ranking[i].expert_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant);
}

std::optional<double> ndcg(std::span<const RunEntry> ranking,
                           const QueryJudgments& judgments) {
  const size_t relevant = count_relevant(judgments);
  if (relevant == 0) return std::nullopt;
  double dcg = 0.0;
  for (size_t i = 0; i < ranking.size(); ++i) {
    if (is_relevant(judgments, ranking[i].expert_id)) {
      dcg += 1.0 / std::log2(static_cast<double>(i + 2));
    }
  }
  double ideal = 0.0;
  for (size_t i = 0; i < relevant; ++i) ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / ideal;
}

std::optional<double> reciprocal_rank(std::span<const RunEntry> ranking,
                                      const QueryJudgments& judgments) {
  if (count_relevant(judgments) == 0) return std::nullopt;
  for (size_t i = 0; i < ranking.size(); ++i) {
    if (is_relevant(judgments, ranking[i].expert_id)) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

MetricReport evaluate_run(const RankedRun& run, const Qrels& qrels) {
  MetricReport report;
  for (const auto& [qid, _] : run.queries) {
    if (!qrels.contains(qid)) {
      report.unknown_queries.push_back(qid);
      report.warnings.push_back("query '" + qid + "' has no qrels; skipped");
    }
  }
  static const std::vector<RunEntry> kEmpty;
  MetricValues sum;
  for (const auto& [qid, judgments] : qrels) {
    auto it = run.queries.find(qid);
    const auto& ranking = it == run.queries.end() ? kEmpty : it->second;
    auto ap = average_precision(ranking, judgments);
    if (!ap) {
      ++report.skipped_no_relevant;
      continue;
    }
    QueryMetrics m;
    m.query_id = qid;
    m.relevant = count_relevant(judgments);
    m.retrieved = ranking.size();
    m.values.p_at_5 = precision_at_k(ranking, judgments, 5);
    m.values.map = *ap;
    m.values.ndcg = *ndcg(ranking, judgments);
    m.values.mrr = *reciprocal_rank(ranking, judgments);
    sum.p_at_5 += m.values.p_at_5;
    sum.map += m.values.map;
    sum.ndcg += m.values.ndcg;
    sum.mrr += m.values.mrr;
    report.per_query.push_back(std::move(m));
  }
  if (!report.per_query.empty()) {
    const double n = static_cast<double>(report.per_query.size());
    report.mean = {sum.p_at_5 / n, sum.map / n, sum.ndcg / n, sum.mrr / n};
  }
  return report;
}

void write_report_tsv(std::ostream& out, const MetricReport& report) {
  out << "query_id\tP@5\tMAP\tnDCG\tMRR\n";
  auto row = [&](const std::string& id, const MetricValues& v) {
    out << id << '\t' << format_double(v.p_at_5) << '\t' << format_double(v.map)
        << '\t' << format_double(v.ndcg) << '\t' << format_double(v.mrr) << '\n';
  };
  for (const auto& q : report.per_query) row(q.query_id, q.values);
  row("all", report.mean);
}

std::string format_summary(const MetricReport& report, const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s: queries=%zu skipped_no_relevant=%zu  P@5=%.2f MAP=%.2f "
                "nDCG=%.2f MRR=%.2f",
                label.c_str(), report.per_query.size(), report.skipped_no_relevant,
                100.0 * report.mean.p_at_5, 100.0 * report.mean.map,
                100.0 * report.mean.ndcg, 100.0 * report.mean.mrr);
  return buf;
}

}  // namespace erbench
