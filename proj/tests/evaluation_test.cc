#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "erbench/error.h"
#include "erbench/evaluation.h"

using namespace erbench;

namespace {

std::vector<RunEntry> run_of(std::vector<std::string> experts) {
  std::vector<RunEntry> out;
  for (size_t i = 0; i < experts.size(); ++i) {
    out.push_back({experts[i], static_cast<uint32_t>(i + 1), 100.0 - static_cast<double>(i)});
  }
  return out;
}

QueryJudgments rel(std::vector<std::string> relevant) {
  QueryJudgments j;
  for (auto& e : relevant) j[e] = 1;
  return j;
}

struct Expected {
  std::map<std::string, std::array<double, 4>> rows;
};

Expected read_expected(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  Expected e;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string q;
    std::array<double, 4> v{};
    ls >> q >> v[0] >> v[1] >> v[2] >> v[3];
    e.rows[q] = v;
  }
  return e;
}

}  // namespace

TEST(PrecisionAtK, Cases) {
  const auto j = rel({"a", "b", "c", "d", "e"});
  EXPECT_DOUBLE_EQ(precision_at_k(run_of({"a", "b", "c", "d", "e"}), j, 5), 1.0);
  EXPECT_DOUBLE_EQ(precision_at_k(run_of({"a", "x", "b", "y", "z"}), j, 5), 0.4);
  EXPECT_DOUBLE_EQ(precision_at_k(run_of({"x", "a", "y"}), j, 5), 0.2);
}

TEST(AveragePrecision, HandEnumeration) {
  EXPECT_NEAR(*average_precision(run_of({"e1", "e3", "e2"}), rel({"e1", "e2"})), 5.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(*average_precision(run_of({"e1", "e2", "x"}), rel({"e1", "e2"})), 1.0);
  EXPECT_DOUBLE_EQ(*average_precision(run_of({"x", "y"}), rel({"e1"})), 0.0);
  EXPECT_FALSE(average_precision(run_of({"x"}), QueryJudgments{{"x", 0}}).has_value());
}

TEST(Ndcg, HandEnumeration) {
  const double want = 1.5 / (1.0 + 1.0 / std::log2(3.0));
  EXPECT_NEAR(*ndcg(run_of({"e1", "x", "e2"}), rel({"e1", "e2"})), want, 1e-12);
  EXPECT_NEAR(*ndcg(run_of({"e1", "x", "e2"}), rel({"e1", "e2"})), 0.91976, 1e-4);
  EXPECT_DOUBLE_EQ(*ndcg(run_of({"e2", "e1"}), rel({"e1", "e2"})), 1.0);
  EXPECT_DOUBLE_EQ(*ndcg(run_of({"x"}), rel({"e1"})), 0.0);
}

TEST(ReciprocalRank, Cases) {
  EXPECT_DOUBLE_EQ(*reciprocal_rank(run_of({"x", "e1"}), rel({"e1"})), 0.5);
  EXPECT_DOUBLE_EQ(*reciprocal_rank(run_of({"e1"}), rel({"e1"})), 1.0);
  EXPECT_DOUBLE_EQ(*reciprocal_rank(run_of({"x"}), rel({"e1"})), 0.0);
}

TEST(EvaluateRun, PerfectRun) {
  RankedRun run;
  run.queries["q1"] = run_of({"a", "b", "c", "d", "e"});
  Qrels q;
  q["q1"] = rel({"a", "b", "c", "d", "e"});
  const auto r = evaluate_run(run, q);
  EXPECT_DOUBLE_EQ(r.mean.p_at_5, 1.0);
  EXPECT_DOUBLE_EQ(r.mean.map, 1.0);
  EXPECT_DOUBLE_EQ(r.mean.ndcg, 1.0);
  EXPECT_DOUBLE_EQ(r.mean.mrr, 1.0);
  EXPECT_NE(format_summary(r, "perfect").find("P@5=100.00"), std::string::npos);
}

TEST(EvaluateRun, MeanOfTwoQueries) {
  RankedRun run;
  run.queries["q1"] = run_of({"a"});
  run.queries["q2"] = run_of({"x", "b"});
  Qrels q;
  q["q1"] = rel({"a"});
  q["q2"] = rel({"b"});
  EXPECT_DOUBLE_EQ(evaluate_run(run, q).mean.map, 0.75);
}

TEST(EvaluateRun, SkipsQueriesWithoutRelevantAndWarnsOnUnknown) {
  RankedRun run;
  run.queries["q1"] = run_of({"a"});
  run.queries["q9"] = run_of({"a"});
  Qrels q;
  q["q1"] = rel({"a"});
  q["q2"] = {{"a", 0}};
  const auto r = evaluate_run(run, q);
  EXPECT_EQ(r.skipped_no_relevant, 1u);
  EXPECT_EQ(r.unknown_queries, (std::vector<std::string>{"q9"}));
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.per_query.size(), 1u);
}

TEST(EvaluateRun, JudgedQueryMissingFromRunScoresZero) {
  RankedRun run;
  run.queries["q1"] = run_of({"a"});
  Qrels q;
  q["q1"] = rel({"a"});
  q["q2"] = rel({"b"});
  const auto r = evaluate_run(run, q);
  EXPECT_DOUBLE_EQ(r.mean.map, 0.5);
}

// Random property checks: bounds, relabeling invariance, appending
// non-relevant entries, and agreement with the single-metric functions.
TEST(Metrics, Properties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    std::vector<std::string> experts;
    for (int i = 0; i < n; ++i) experts.push_back("e" + std::to_string(i));
    std::shuffle(experts.begin(), experts.end(), rng);
    QueryJudgments j;
    for (int i = 0; i < n + 3; ++i) {
      if (rng() % 3 == 0) j["e" + std::to_string(i)] = 1;
    }
    if (count_relevant(j) == 0) j["e0"] = 1;
    const auto ranking = run_of(experts);
    const double ap = *average_precision(ranking, j);
    const double nd = *ndcg(ranking, j);
    const double rr = *reciprocal_rank(ranking, j);
    for (double v : {ap, nd, rr, precision_at_k(ranking, j, 5)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }

    // Relabel every id through the same bijection.
    auto relabel = [](const std::string& e) { return "x_" + e + "_y"; };
    std::vector<std::string> relabeled;
    for (const auto& e : experts) relabeled.push_back(relabel(e));
    QueryJudgments rj;
    for (const auto& [e, r] : j) rj[relabel(e)] = r;
    EXPECT_DOUBLE_EQ(*average_precision(run_of(relabeled), rj), ap);
    EXPECT_DOUBLE_EQ(*ndcg(run_of(relabeled), rj), nd);

    // Append non-relevant entries.
    auto longer = experts;
    for (int k = 0; k < 4; ++k) longer.push_back("junk" + std::to_string(k));
    EXPECT_DOUBLE_EQ(*average_precision(run_of(longer), j), ap);
    EXPECT_DOUBLE_EQ(*reciprocal_rank(run_of(longer), j), rr);
    EXPECT_LE(*ndcg(run_of(longer), j), nd + 1e-15);

    RankedRun run;
    run.queries["q"] = ranking;
    Qrels q;
    q["q"] = j;
    const auto rep = evaluate_run(run, q);
    EXPECT_DOUBLE_EQ(rep.mean.map, ap);
    EXPECT_DOUBLE_EQ(rep.mean.ndcg, nd);
    EXPECT_DOUBLE_EQ(rep.mean.mrr, rr);
  }
}

TEST(Metrics, PerfectExactlyWhenRelevantFormPrefix) {
  const auto j = rel({"a", "b"});
  EXPECT_DOUBLE_EQ(*average_precision(run_of({"b", "a", "x"}), j), 1.0);
  EXPECT_LT(*average_precision(run_of({"b", "x", "a"}), j), 1.0);
  EXPECT_DOUBLE_EQ(*ndcg(run_of({"a", "b"}), j), 1.0);
  EXPECT_LT(*ndcg(run_of({"x", "a", "b"}), j), 1.0);
}

TEST(RunIo, RoundTrip) {
  RankedRun run;
  run.tag = "bm25";
  run.queries["q1"] = {{"e1", 1, 1.3333333333333333}, {"e2", 2, 0.5}};
  run.queries["q2"] = {{"e9", 1, 2.0}};
  std::ostringstream out;
  write_run(out, run);
  std::istringstream in(out.str());
  EXPECT_EQ(read_run(in, "run"), run);
}

TEST(RunIo, IncreasingScoreWarnsAndKeepsRankOrder) {
  std::istringstream in("q1 Q0 e1 2 5.0 t\nq1 Q0 e2 1 1.0 t\n");
  std::vector<std::string> warnings;
  const auto run = read_run(in, "run", &warnings);
  EXPECT_EQ(run.queries.at("q1")[0].expert_id, "e2");
  EXPECT_FALSE(warnings.empty());
}

TEST(RunIo, MalformedLineNumbered) {
  std::istringstream in("q1 Q0 e1 1 1.0 t\nq1 Q0 e2 x 1.0 t\n");
  try {
    read_run(in, "run");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos);
  }
}

TEST(QrelsIo, LineAndRoundTrip) {
  std::istringstream in("q1 0 e1 1\nq1 0 e2 0\n");
  const auto q = read_qrels(in, "qrels");
  EXPECT_EQ(q.at("q1").at("e1"), 1);
  EXPECT_EQ(q.at("q1").at("e2"), 0);
  std::ostringstream out;
  write_qrels(out, q);
  std::istringstream back(out.str());
  EXPECT_EQ(read_qrels(back, "qrels"), q);
}

TEST(QrelsFromGroundTruth, InvertsProfiles) {
  GroundTruth gt;
  gt.profiles["e1"].items = {{"t1", 4}, {"t2", std::nullopt}};
  gt.profiles["e2"].items = {{"t1", std::nullopt}};
  const auto q = qrels_from_ground_truth(gt);
  EXPECT_EQ(q.at("t1").size(), 2u);
  EXPECT_EQ(q.at("t2").at("e1"), 1);
}

// Frozen trec_eval output on random pairs (see tests/tools/gen_trec_pairs.py).
TEST(TrecEvalOracle, FrozenPairs) {
  const std::filesystem::path dir = std::filesystem::path(ERBENCH_TEST_DATA) / "trec_eval";
  for (int i = 0; i < 10; ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "pair_%02d", i);
    const auto run = load_run(dir / (std::string(stem) + ".run"));
    const auto qrels = load_qrels(dir / (std::string(stem) + ".qrels"));
    const auto want = read_expected(dir / (std::string(stem) + ".expected"));
    const auto got = evaluate_run(run, qrels);
    ASSERT_EQ(got.per_query.size() + 1, want.rows.size()) << stem;
    for (const auto& q : got.per_query) {
      const auto& w = want.rows.at(q.query_id);
      EXPECT_NEAR(q.values.p_at_5, w[0], 1e-4) << stem << ' ' << q.query_id;
      EXPECT_NEAR(q.values.map, w[1], 1e-4) << stem << ' ' << q.query_id;
      EXPECT_NEAR(q.values.ndcg, w[2], 1e-4) << stem << ' ' << q.query_id;
      EXPECT_NEAR(q.values.mrr, w[3], 1e-4) << stem << ' ' << q.query_id;
    }
    const auto& all = want.rows.at("all");
    EXPECT_NEAR(got.mean.p_at_5, all[0], 1e-4);
    EXPECT_NEAR(got.mean.map, all[1], 1e-4);
    EXPECT_NEAR(got.mean.ndcg, all[2], 1e-4);
    EXPECT_NEAR(got.mean.mrr, all[3], 1e-4);
    EXPECT_EQ(got.unknown_queries, (std::vector<std::string>{"q_unjudged"}));
  }
}
