#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "erbench/error.h"
#include "erbench/suggestion.h"
#include "oracles.h"

using namespace erbench;

namespace {

GroundTruth profiles(std::vector<std::vector<std::string>> lists) {
  GroundTruth gt;
  for (size_t i = 0; i < lists.size(); ++i) {
    auto& p = gt.profiles["e" + std::to_string(i)];
    for (auto& t : lists[i]) p.items.push_back({t, std::nullopt});
  }
  return gt;
}

RankedSource fixed(SuggestionSource s, std::map<std::string, std::vector<std::string>> lists) {
  auto shared = std::make_shared<std::map<std::string, std::vector<std::string>>>(std::move(lists));
  return {s, [shared](const std::string& seed) -> const std::vector<std::string>& {
            static const std::vector<std::string> kEmpty;
            auto it = shared->find(seed);
            return it == shared->end() ? kEmpty : it->second;
          }};
}

std::vector<std::string> ids(const SuggestionList& l) {
  std::vector<std::string> out;
  for (const auto& i : l.items) out.push_back(i.topic_id);
  return out;
}

EmbeddingTable table_of(std::vector<std::tuple<std::string, Lang, std::vector<float>>> rows) {
  EmbeddingTable t;
  for (auto& [id, lang, v] : rows) t.add(id, lang, v);
  return t;
}

}  // namespace

TEST(Cooccurrence, TwoIdenticalProfiles) {
  const auto s = CooccurrenceStats::build(profiles({{"A", "B"}, {"A", "B"}}));
  EXPECT_EQ(s.count("A"), 2u);
  EXPECT_EQ(s.count("B"), 2u);
  EXPECT_EQ(s.pair_count("A", "B"), 2u);
  EXPECT_EQ(s.profile_count(), 2u);
}

TEST(Cooccurrence, ThreeOccurrencesExcluded) {
  const auto s = CooccurrenceStats::build(
      profiles({{"A", "B"}, {"A", "B"}, {"A", "B"}, {"B"}}));
  EXPECT_TRUE(s.excluded("A"));
  EXPECT_FALSE(s.excluded("B"));
}

TEST(Cooccurrence, EmptyGroundTruthRejected) {
  EXPECT_THROW(CooccurrenceStats::build(GroundTruth{}), InputError);
}

TEST(Cooccurrence, CountsEqualRecount) {
  std::mt19937_64 rng(2);
  const auto gt = oracle::random_ground_truth(rng, 50, 20, 6);
  const auto s = CooccurrenceStats::build(gt);
  for (int a = 0; a < 20; ++a) {
    const std::string ta = "t" + std::to_string(a);
    uint32_t count = 0;
    for (const auto& [_, p] : gt.profiles) count += p.contains(ta) ? 1 : 0;
    EXPECT_EQ(s.count(ta), count);
    for (int b = 0; b < 20; ++b) {
      if (a == b) continue;
      const std::string tb = "t" + std::to_string(b);
      uint32_t pair = 0;
      for (const auto& [_, p] : gt.profiles) pair += (p.contains(ta) && p.contains(tb)) ? 1 : 0;
      EXPECT_EQ(s.pair_count(ta, tb), pair);
      EXPECT_EQ(s.pair_count(tb, ta), pair);
      EXPECT_LE(pair, std::min(s.count(ta), s.count(tb)));
    }
  }
}

TEST(Pmi, HandValues) {
  // N = 4 profiles, A and B each in two of them.
  const auto together = CooccurrenceStats::build(profiles({{"A", "B"}, {"A", "B"}, {"C"}, {"D"}}), 1);
  EXPECT_NEAR(*together.pmi("A", "B"), std::log(2.0), 1e-12);
  EXPECT_NEAR(*together.pmi("A", "B"), 0.6931, 1e-4);
  const auto independent = CooccurrenceStats::build(profiles({{"A", "B"}, {"A"}, {"B"}, {"C"}}), 1);
  EXPECT_NEAR(*independent.pmi("A", "B"), 0.0, 1e-15);
  EXPECT_FALSE(independent.pmi("A", "C").has_value());
  const auto rec = pmi_recommend(independent, "A");
  ASSERT_EQ(rec.items.size(), 1u);
  EXPECT_EQ(rec.items[0].topic_id, "B");
}

TEST(Pmi, ExcludedAndUnknownSeedsFlagged) {
  const auto s = CooccurrenceStats::build(profiles({{"A", "B"}, {"A", "B"}}));
  EXPECT_EQ(pmi_recommend(s, "A").status, RecommendStatus::kExcludedSeed);
  EXPECT_TRUE(pmi_recommend(s, "A").items.empty());
  EXPECT_EQ(pmi_recommend(s, "Z").status, RecommendStatus::kUnknownSeed);
}

TEST(Pmi, TieBreakPairCountThenId) {
  // B and C tie on score and pair count, so the id decides.
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 4; ++i) lists.push_back({"A", "C", "B"});
  lists.push_back({"D"});
  const auto rec = pmi_recommend(CooccurrenceStats::build(profiles(lists)), "A");
  ASSERT_EQ(rec.items.size(), 2u);
  EXPECT_EQ(rec.items[0].topic_id, "B");
  EXPECT_EQ(rec.items[1].topic_id, "C");
}

TEST(Pmi, EqualScoreDifferentPairCount) {
  // count(A)=4, count(B)=4, pair=2 -> ln(N*2/16); count(C)=8, pair=4 ->
  // ln(N*4/32): same score, C has the larger pair count.
  std::vector<std::vector<std::string>> lists = {{"A", "B", "C"}, {"A", "B", "C"}, {"A", "C"},
                                                 {"A", "C"},      {"B", "C"},      {"B", "C"},
                                                 {"C"},           {"C"}};
  const auto s = CooccurrenceStats::build(profiles(lists));
  const auto rec = pmi_recommend(s, "A");
  ASSERT_EQ(rec.items.size(), 2u);
  EXPECT_EQ(rec.items[0].score, rec.items[1].score);
  EXPECT_EQ(rec.items[0].topic_id, "C");
}

TEST(Pmi, MatchesProfileEnumerationAndIsSymmetric) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto gt = oracle::random_ground_truth(rng, 60, 25, 7);
    const auto s = CooccurrenceStats::build(gt);
    for (int a = 0; a < 25; ++a) {
      const std::string seed = "t" + std::to_string(a);
      const auto want = oracle::pmi_from_profiles(gt, seed);
      const auto got = pmi_recommend(s, seed);
      ASSERT_EQ(got.items.size(), want.size()) << seed;
      for (const auto& item : got.items) {
        EXPECT_EQ(item.score, want.at(item.topic_id));
        EXPECT_EQ(*s.pmi(seed, item.topic_id), *s.pmi(item.topic_id, seed));
      }
    }
  }
}

TEST(Pmi, AddingUnrelatedProfilesOnlyShiftsN) {
  auto gt = profiles({{"A", "B"}, {"A", "B"}, {"A", "B"}, {"A", "B", "C"}, {"C"}});
  const double before = *CooccurrenceStats::build(gt).pmi("A", "B");
  gt.profiles["x1"].items = {{"Z", std::nullopt}};
  gt.profiles["x2"].items = {{"Z", std::nullopt}};
  const double after = *CooccurrenceStats::build(gt).pmi("A", "B");
  EXPECT_NEAR(after - before, std::log(7.0 / 5.0), 1e-12);
}

TEST(Embeddings, LoadsAndRejectsBadRows) {
  std::istringstream in(
      "t1\ten\t1,0,0,0\nt1\tnl\t0,1,0,0\nt2\ten\t1,1,0,0\nt2\tnl\t0,0,1,0\n"
      "t3\ten\t0,0,0,1\nt3\tnl\t1,0,0,1\n");
  const auto t = read_embeddings(in, "emb.tsv");
  EXPECT_EQ(t.vector_count(), 6u);
  EXPECT_EQ(t.dim(), 4u);
  std::istringstream short_row("t1\ten\t1,0,0,0\nt2\ten\t1,0,0\n");
  EXPECT_THROW(read_embeddings(short_row, "emb.tsv"), InputError);
  std::istringstream zero("t1\ten\t0,0,0,0\n");
  EXPECT_THROW(read_embeddings(zero, "emb.tsv"), InputError);
}

TEST(Embeddings, RoundTrip) {
  const auto t = table_of({{"t1", Lang::kEn, {0.25f, -1.5f}}, {"t2", Lang::kNl, {3.0f, 1e-7f}}});
  std::ostringstream out;
  write_embeddings(out, t);
  std::istringstream in(out.str());
  const auto back = read_embeddings(in, "emb.tsv");
  EXPECT_EQ(back.vector_count(), 2u);
  const auto a = *back.vector("t2", Lang::kNl);
  const auto b = *t.vector("t2", Lang::kNl);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
}

TEST(Embeddings, SimilarityRules) {
  const auto t = table_of({{"s", Lang::kEn, {1, 0, 0}},
                           {"same", Lang::kEn, {2, 0, 0}},
                           {"orth", Lang::kEn, {0, 1, 0}},
                           {"mixed", Lang::kEn, {0.3f, std::sqrt(1 - 0.09f), 0}},
                           {"mixed", Lang::kNl, {0.8f, 0.6f, 0}},
                           {"nl_only", Lang::kNl, {0, 0, 1}}});
  EXPECT_NEAR(*t.similarity("s", "same"), 1.0, 1e-12);
  EXPECT_NEAR(*t.similarity("s", "orth"), 0.0, 1e-12);
  EXPECT_NEAR(*t.similarity("s", "mixed"), 0.8, 1e-6);
  EXPECT_NEAR(*t.similarity("s", "nl_only"), 0.0, 1e-12);
  EXPECT_FALSE(t.similarity("s", "missing").has_value());
  const auto rec = embed_recommend(t, "s");
  ASSERT_EQ(rec.items.size(), 4u);
  EXPECT_EQ(rec.items[0].topic_id, "same");
  EXPECT_EQ(rec.items[1].topic_id, "mixed");
  // Equal similarities fall back to topic id order.
  EXPECT_EQ(rec.items[2].topic_id, "nl_only");
  EXPECT_EQ(rec.items[3].topic_id, "orth");
  EXPECT_EQ(embed_recommend(t, "missing").status, RecommendStatus::kNoVectors);
}

TEST(Embeddings, RescalingDoesNotChangeOrdering) {
  std::mt19937_64 rng(10);
  std::normal_distribution<float> nd;
  EmbeddingTable a, b;
  for (int i = 0; i < 40; ++i) {
    std::vector<float> v(16);
    for (auto& x : v) x = nd(rng);
    auto scaled = v;
    const float k = 0.1f + static_cast<float>(rng() % 100);
    for (auto& x : scaled) x *= k;
    a.add("t" + std::to_string(i), Lang::kEn, v);
    b.add("t" + std::to_string(i), Lang::kEn, scaled);
  }
  const auto ra = embed_recommend(a, "t0");
  const auto rb = embed_recommend(b, "t0");
  ASSERT_EQ(ra.items.size(), rb.items.size());
  for (size_t i = 0; i < ra.items.size(); ++i) {
    EXPECT_EQ(ra.items[i].topic_id, rb.items[i].topic_id);
    EXPECT_NEAR(ra.items[i].score, rb.items[i].score, 1e-6);
  }
}

TEST(Pooling, HandTrace) {
  const std::vector<RankedSource> sources = {
      fixed(SuggestionSource::kPmi, {{"t1", {"a", "b"}}}),
      fixed(SuggestionSource::kEmbedding, {{"t1", {"a", "c"}}})};
  const std::vector<std::string> profile{"t1"};
  const auto l = pool_round_robin("e1", profile, sources, 3);
  const std::vector<SuggestionItem> want = {{"a", SuggestionSource::kPmi, "t1"},
                                            {"c", SuggestionSource::kEmbedding, "t1"},
                                            {"b", SuggestionSource::kPmi, "t1"}};
  EXPECT_EQ(l.items, want);
}

TEST(Pooling, EmptyProfileFlagged) {
  const std::vector<RankedSource> sources = {fixed(SuggestionSource::kPmi, {})};
  const auto l = pool_round_robin("e1", {}, sources);
  EXPECT_TRUE(l.items.empty());
  EXPECT_TRUE(l.empty_profile);
}

TEST(Pooling, CapsAtHundred) {
  std::vector<std::string> p, q;
  for (int i = 0; i < 100; ++i) {
    p.push_back("p" + std::to_string(i));
    q.push_back("q" + std::to_string(i));
  }
  const std::vector<RankedSource> sources = {fixed(SuggestionSource::kPmi, {{"t1", p}}),
                                             fixed(SuggestionSource::kEmbedding, {{"t1", q}})};
  const std::vector<std::string> profile{"t1"};
  EXPECT_EQ(pool_round_robin("e1", profile, sources).items.size(), 100u);
}

TEST(Pooling, SkipsProfileTopicsAndEmptySources) {
  const std::vector<RankedSource> sources = {
      fixed(SuggestionSource::kPmi, {{"t1", {"t2", "x"}}}),
      fixed(SuggestionSource::kEmbedding, {{"t2", {"t1", "y", "x"}}})};
  const std::vector<std::string> profile{"t1", "t2"};
  const auto l = pool_round_robin("e1", profile, sources);
  EXPECT_EQ(ids(l), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(l.items[1].seed_topic_id, "t2");
}

TEST(Pooling, RandomInputsKeepInvariants) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, std::vector<std::string>> pmi, emb;
    std::vector<std::string> profile;
    const int seeds = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < seeds; ++s) profile.push_back("t" + std::to_string(rng() % 30));
    std::sort(profile.begin(), profile.end());
    profile.erase(std::unique(profile.begin(), profile.end()), profile.end());
    for (const auto& s : profile) {
      for (int k = 0; k < 60; ++k) {
        pmi[s].push_back("t" + std::to_string(rng() % 80));
        emb[s].push_back("t" + std::to_string(rng() % 80));
      }
    }
    const std::vector<RankedSource> sources = {fixed(SuggestionSource::kPmi, pmi),
                                               fixed(SuggestionSource::kEmbedding, emb)};
    const size_t cap = 1 + rng() % 120;
    const auto l = pool_round_robin("e", profile, sources, cap);
    EXPECT_LE(l.items.size(), cap);
    std::set<std::string> seen;
    for (const auto& item : l.items) {
      EXPECT_TRUE(seen.insert(item.topic_id).second);
      EXPECT_EQ(std::find(profile.begin(), profile.end(), item.topic_id), profile.end());
    }
    EXPECT_EQ(pool_round_robin("e", profile, sources, cap), l);
  }
}

TEST(Engine, LeaveOneOutRecoversPlantedCluster) {
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 12; ++i) lists.push_back({"t1", "t2", "t3"});
  for (int i = 0; i < 12; ++i) lists.push_back({"u1", "u2", "u" + std::to_string(3 + i % 3)});
  const auto gt = profiles(lists);
  const SuggestionEngine engine(CooccurrenceStats::build(gt), std::nullopt);
  const auto l = leave_one_out_suggestions(gt, "e0", "t3", engine);
  EXPECT_TRUE(l.contains("t3"));
  EXPECT_FALSE(l.contains("t1"));
  EXPECT_THROW(leave_one_out_suggestions(gt, "e0", "u1", engine), InputError);
}

TEST(Engine, SingleTopicProfileYieldsNothing) {
  const auto gt = profiles({{"A"}, {"A", "B"}, {"A", "B"}, {"A", "B"}, {"B"}});
  const SuggestionEngine engine(CooccurrenceStats::build(gt), std::nullopt);
  const auto l = leave_one_out_suggestions(gt, "e0", "A", engine);
  EXPECT_TRUE(l.items.empty());
  EXPECT_TRUE(l.empty_profile);
}

TEST(Engine, PmiOnlySourcesAndCap) {
  std::mt19937_64 rng(3);
  const auto gt = oracle::random_ground_truth(rng, 200, 150, 8);
  const SuggestionEngine engine(CooccurrenceStats::build(gt), std::nullopt, 10);
  for (const auto& [e, p] : gt.profiles) {
    const auto l = engine.suggest(e, p.topic_ids());
    EXPECT_LE(l.items.size(), 10u);
    for (const auto& item : l.items) EXPECT_EQ(item.source, SuggestionSource::kPmi);
  }
}

TEST(SuggestionIo, RoundTrip) {
  SuggestionList a;
  a.expert_id = "e1";
  a.items = {{"t5", SuggestionSource::kPmi, "t1"}, {"t7", SuggestionSource::kEmbedding, "t1"}};
  SuggestionList b;
  b.expert_id = "e2";
  b.items = {{"t1", SuggestionSource::kEmbedding, "t9"}};
  const std::vector<SuggestionList> lists{a, b};
  std::ostringstream out;
  write_suggestions(out, lists);
  std::istringstream in(out.str());
  const auto back = read_suggestions(in, "s.tsv");
  EXPECT_EQ(back.at("e1").items, a.items);
  EXPECT_EQ(back.at("e2").items, b.items);
  EXPECT_EQ(*back.at("e1").position("t7"), 2u);
}
