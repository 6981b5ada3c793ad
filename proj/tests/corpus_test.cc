#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "erbench/corpus.h"
#include "erbench/error.h"

using namespace erbench;

namespace {

TopicCatalog catalog_of(const std::string& tsv) {
  std::istringstream in(tsv);
  return read_topics(in, "topics.tsv");
}

TopicCatalog small_catalog() {
  return catalog_of(
      "t1\tauction theory\tveilingstheorie\t\n"
      "t2\tgame theory\t\t[{\"kind\":\"broader\",\"target\":\"t1\"}]\n"
      "t3\t\tbestuursrecht\t\n");
}

GroundTruth gt_of(const std::string& tsv, const TopicCatalog& catalog) {
  std::istringstream in(tsv);
  return read_ground_truth(in, "gt.tsv", Scheme::kCustom, catalog);
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Topics, ParsesThreeLines) {
  const TopicCatalog c = small_catalog();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.at("t1").name_nl, "veilingstheorie");
  ASSERT_EQ(c.at("t2").relations.size(), 1u);
  EXPECT_EQ(c.at("t2").relations[0].kind, "broader");
  EXPECT_EQ(c.at("t2").relations[0].target, "t1");
}

TEST(Topics, DutchOnlyNameAccepted) {
  const TopicCatalog c = catalog_of("t9\t\tveilingstheorie\t\n");
  EXPECT_FALSE(c.at("t9").name_en.has_value());
  EXPECT_EQ(c.at("t9").name_nl, "veilingstheorie");
}

TEST(Topics, DuplicateIdNamed) {
  const auto msg = message_of([] { catalog_of("t1\ta\t\t\nt1\tb\t\t\n"); });
  EXPECT_NE(msg.find("t1"), std::string::npos);
}

TEST(Topics, NamelessTopicNamesLine) {
  const auto msg = message_of([] { catalog_of("t1\ta\t\t\nt2\t\t\t\n"); });
  EXPECT_NE(msg.find(":2:"), std::string::npos) << msg;
}

TEST(Topics, DanglingRelationRejected) {
  EXPECT_THROW(catalog_of("t1\ta\t\t[{\"kind\":\"broader\",\"target\":\"t7\"}]\n"), InputError);
}

TEST(Documents, InverseMapping) {
  std::istringstream in(
      R"({"doc_id":"d1","expert_ids":["e1"],"text":"alpha","lang":"en","doc_type":"publication"})"
      "\n"
      R"({"doc_id":"d2","expert_ids":["e1","e2"],"text":"beta","lang":"nl","doc_type":"course"})"
      "\n"
      R"({"doc_id":"d3","expert_ids":["e2"],"text":"gamma","lang":"unknown","doc_type":"other"})"
      "\n");
  const DocumentCollection docs = read_documents(in, "docs.jsonl");
  const auto& inv = docs.expert_docs();
  EXPECT_EQ(inv.at("e1"), (std::vector<std::string>{"d1", "d2"}));
  EXPECT_EQ(inv.at("e2"), (std::vector<std::string>{"d2", "d3"}));
  EXPECT_EQ(docs.find("d2")->lang, Lang::kNl);
  EXPECT_EQ(docs.find("d2")->type, DocType::kCourse);
}

TEST(Documents, BlankTextRejectedWithId) {
  std::istringstream in(R"({"doc_id":"d7","expert_ids":["e1"],"text":"  "})" "\n");
  const auto msg = message_of([&] { read_documents(in, "docs.jsonl"); });
  EXPECT_NE(msg.find("d7"), std::string::npos);
}

TEST(Documents, EmptyExpertsRejected) {
  std::istringstream in(R"({"doc_id":"d1","expert_ids":[],"text":"x"})" "\n");
  EXPECT_THROW(read_documents(in, "docs.jsonl"), InputError);
}

TEST(Documents, MalformedLineReportsLineNumber) {
  std::istringstream in(R"({"doc_id":"d1","expert_ids":["e1"],"text":"x"})" "\n{oops\n");
  const auto msg = message_of([&] { read_documents(in, "docs.jsonl"); });
  EXPECT_NE(msg.find(":2:"), std::string::npos) << msg;
}

TEST(GroundTruthIo, GradesKept) {
  const auto c = small_catalog();
  const auto gt = gt_of("e1\tt1\t4\ne1\tt2\t5\n", c);
  const auto& p = gt.profiles.at("e1");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.items[0].grade, 4);
  EXPECT_EQ(p.items[1].grade, 5);
}

TEST(GroundTruthIo, GradeOutOfRange) {
  const auto c = small_catalog();
  EXPECT_THROW(gt_of("e1\tt1\t7\n", c), InputError);
  EXPECT_THROW(gt_of("e1\tt1\t0\n", c), InputError);
}

TEST(GroundTruthIo, GradelessLine) {
  const auto gt = gt_of("e1\tt1\n", small_catalog());
  EXPECT_FALSE(gt.profiles.at("e1").items[0].grade.has_value());
}

TEST(GroundTruthIo, UnknownTopicsListed) {
  const auto msg = message_of([] { gt_of("e1\tt8\ne2\tt9\ne3\tt1\n", small_catalog()); });
  EXPECT_NE(msg.find("t8"), std::string::npos);
  EXPECT_NE(msg.find("t9"), std::string::npos);
}

TEST(Binarize, DropsGrades) {
  const auto c = small_catalog();
  const auto b = binarize(gt_of("e1\tt1\t4\ne1\tt2\t5\n", c));
  EXPECT_TRUE(b.is_binary());
  EXPECT_EQ(b.profiles.at("e1").topic_ids(), (std::vector<std::string>{"t1", "t2"}));
}

TEST(Binarize, Idempotent) {
  const auto c = small_catalog();
  const auto once = binarize(gt_of("e1\tt1\t4\ne2\tt3\n", c));
  EXPECT_EQ(binarize(once), once);
}

TEST(Binarize, EmptyProfileStaysEmpty) {
  GroundTruth gt;
  gt.profiles["e1"];
  const auto b = binarize(gt);
  EXPECT_TRUE(b.profiles.at("e1").empty());
}

TEST(Diff, AddedTopic) {
  const auto c = small_catalog();
  const auto d = diff_ground_truth(gt_of("e1\tt1\n", c), gt_of("e1\tt1\ne1\tt2\n", c));
  ASSERT_EQ(d.by_expert.size(), 1u);
  EXPECT_EQ(d.by_expert.at("e1").added, (std::vector<std::string>{"t2"}));
  EXPECT_TRUE(d.by_expert.at("e1").removed.empty());
  EXPECT_EQ(d.total_added(), 1u);
}

TEST(Diff, IdentityIsEmpty) {
  const auto c = small_catalog();
  const auto a = gt_of("e1\tt1\ne2\tt2\n", c);
  const auto d = diff_ground_truth(a, a);
  EXPECT_TRUE(d.by_expert.empty());
  EXPECT_EQ(d.total_added(), 0u);
  EXPECT_EQ(d.total_removed(), 0u);
}

TEST(Diff, ExpertsOnOneSideReported) {
  const auto c = small_catalog();
  const auto d = diff_ground_truth(gt_of("e1\tt1\n", c), gt_of("e2\tt1\n", c));
  EXPECT_EQ(d.only_in_a, (std::vector<std::string>{"e1"}));
  EXPECT_EQ(d.only_in_b, (std::vector<std::string>{"e2"}));
}

// Random pairs: applying the diff to a reproduces b, and added/removed are
// disjoint.
TEST(Diff, ApplyReconstructsRandomPairs) {
  std::mt19937 rng(7);
  std::vector<Topic> topics;
  for (int i = 0; i < 30; ++i) topics.push_back({"t" + std::to_string(i), "name", {}, {}});
  const TopicCatalog catalog(topics);
  for (int trial = 0; trial < 200; ++trial) {
    GroundTruth a, b;
    for (int e = 0; e < 8; ++e) {
      const std::string id = "e" + std::to_string(e);
      for (int t = 0; t < 30; ++t) {
        const std::string tid = "t" + std::to_string(t);
        if (rng() % 5 == 0) a.profiles[id].items.push_back({tid, std::nullopt});
        if (rng() % 5 == 0) b.profiles[id].items.push_back({tid, std::nullopt});
      }
    }
    const auto d = diff_ground_truth(a, b);
    for (const auto& [e, pd] : d.by_expert) {
      for (const auto& t : pd.added) {
        EXPECT_EQ(std::find(pd.removed.begin(), pd.removed.end(), t), pd.removed.end());
      }
    }
    const auto rebuilt = apply_diff(a, d);
    ASSERT_EQ(rebuilt.profiles.size(), b.profiles.size());
    for (const auto& [e, p] : b.profiles) {
      auto want = p.topic_ids();
      auto got = rebuilt.profiles.at(e).topic_ids();
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, want);
    }
  }
}

TEST(Synonyms, PairedNames) {
  const TopicCatalog c = catalog_of("t1\tauction theory\tveilingstheorie\t\n");
  std::istringstream in("t1\tBidding Theory\tBiedingstheorie\n");
  const auto table = read_synonyms(in, "syn.tsv", c);
  EXPECT_EQ(table.find("t1")->en, "Bidding Theory");
  EXPECT_EQ(table.find("t1")->nl, "Biedingstheorie");
}

TEST(Synonyms, DutchOnlyAccepted) {
  std::istringstream in("t1\t\tbiedingstheorie\n");
  const auto table = read_synonyms(in, "syn.tsv", small_catalog());
  EXPECT_FALSE(table.find("t1")->en.has_value());
}

TEST(Synonyms, UnknownTopicAndEmptyRowRejected) {
  std::istringstream unknown("t9\tx\ty\n");
  EXPECT_THROW(read_synonyms(unknown, "syn.tsv", small_catalog()), InputError);
  std::istringstream empty("t1\t\t\n");
  EXPECT_THROW(read_synonyms(empty, "syn.tsv", small_catalog()), InputError);
}

TEST(RoundTrip, AllFormats) {
  const TopicCatalog c = small_catalog();
  std::ostringstream topics_out;
  write_topics(topics_out, c);
  EXPECT_EQ(catalog_of(topics_out.str()), c);

  const auto gt = gt_of("e1\tt1\t4\ne1\tt3\ne2\tt2\t1\n", c);
  std::ostringstream gt_out;
  write_ground_truth(gt_out, gt);
  EXPECT_EQ(gt_of(gt_out.str(), c), gt);

  SynonymTable syn;
  syn.entries["t1"] = {"bidding theory", std::nullopt};
  syn.entries["t3"] = {std::nullopt, "overheidsrecht"};
  std::ostringstream syn_out;
  write_synonyms(syn_out, syn);
  std::istringstream syn_in(syn_out.str());
  EXPECT_EQ(read_synonyms(syn_in, "syn.tsv", c), syn);

  const DocumentCollection docs({{"d1", {"e1", "e2"}, "tab\there \"quoted\" ünïcode", Lang::kNl,
                                  DocType::kDissertation},
                                 {"d2", {"e3"}, "line\nbreak", Lang::kUnknown, DocType::kOther}});
  std::ostringstream docs_out;
  write_documents(docs_out, docs);
  std::istringstream docs_in(docs_out.str());
  EXPECT_EQ(read_documents(docs_in, "docs.jsonl"), docs);
}
