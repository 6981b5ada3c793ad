#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "erbench/error.h"
#include "erbench/text_index.h"
#include "erbench/tokenizer.h"

using namespace erbench;

namespace {

DocumentCollection docs_of(std::vector<std::pair<std::string, std::string>> texts) {
  std::vector<Document> docs;
  for (auto& [id, text] : texts) {
    docs.push_back({id, {"e_" + id}, text, Lang::kEn, DocType::kPublication});
  }
  return DocumentCollection(std::move(docs));
}

}  // namespace

TEST(Tokenize, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(tokenize("Auction Theory, 2nd ed."),
            (std::vector<std::string>{"auction", "theory", "2nd", "ed"}));
}

TEST(Tokenize, HyphensSeparate) {
  EXPECT_EQ(tokenize("state-of-the-art"),
            (std::vector<std::string>{"state", "of", "the", "art"}));
}

TEST(Tokenize, DigitsRetainedNoStemming) {
  EXPECT_EQ(tokenize("running runs 1999"),
            (std::vector<std::string>{"running", "runs", "1999"}));
}

TEST(Tokenize, UnicodeLettersKept) {
  EXPECT_EQ(tokenize("Ökonomie «CAFÉ» naïve"),
            (std::vector<std::string>{"ökonomie", "café", "naïve"}));
  EXPECT_EQ(tokenize("ΣΟΦΙΑ Москва"), (std::vector<std::string>{"σοφια", "москва"}));
}

TEST(Tokenize, EmptyAndSeparatorOnly) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ,.;-- ").empty());
}

TEST(Tokenize, InvalidUtf8ActsAsSeparator) {
  EXPECT_EQ(tokenize("ab\xff" "cd"), (std::vector<std::string>{"ab", "cd"}));
}

TEST(InvertedIndexTest, StatisticsOnSmallCorpus) {
  const auto docs = docs_of({{"d2", "cat cat dog"}, {"d1", "dog bird"}, {"d3", "fish"}});
  const auto idx = InvertedIndex::build(docs);
  EXPECT_EQ(idx.doc_count(), 3u);
  EXPECT_DOUBLE_EQ(idx.avgdl(), 6.0 / 3.0);
  EXPECT_EQ(idx.df("dog"), 2u);
  EXPECT_EQ(idx.df("cat"), 1u);
  EXPECT_EQ(idx.df("zebra"), 0u);
  EXPECT_EQ(idx.tf("cat", "d2"), 2u);
  EXPECT_EQ(idx.tf("cat", "d1"), 0u);
  EXPECT_EQ(idx.doc_ids()[0], "d1");
  EXPECT_EQ(idx.doc_length(*idx.doc_number("d2")), 3u);
}

TEST(InvertedIndexTest, SingleDocument) {
  const auto idx = InvertedIndex::build(docs_of({{"d1", "only words here"}}));
  EXPECT_EQ(idx.doc_count(), 1u);
  EXPECT_DOUBLE_EQ(idx.avgdl(), 3.0);
}

TEST(InvertedIndexTest, EmptyCollectionRejected) {
  EXPECT_THROW(InvertedIndex::build(DocumentCollection()), InputError);
}

// df equals postings length, postings are sorted, lengths sum to the token
// total, and the worker count does not change the result.
TEST(InvertedIndexTest, InvariantsOnRandomCorpora) {
  std::mt19937 rng(11);
  const char* words[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<std::string, std::string>> texts;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      std::string text;
      const int len = 1 + static_cast<int>(rng() % 20);
      for (int w = 0; w < len; ++w) text += std::string(words[rng() % 8]) + " ";
      texts.emplace_back("d" + std::to_string(rng() % 100000) + "_" + std::to_string(i), text);
    }
    const auto docs = docs_of(texts);
    const auto idx = InvertedIndex::build(docs, 1);
    EXPECT_EQ(idx, InvertedIndex::build(docs, 4));
    uint64_t total = 0;
    for (uint32_t len : idx.doc_lengths()) total += len;
    EXPECT_EQ(total, idx.total_tokens());
    EXPECT_DOUBLE_EQ(idx.avgdl(), static_cast<double>(total) / idx.doc_count());
    for (uint32_t t = 0; t < idx.terms().size(); ++t) {
      const auto p = idx.postings(t);
      EXPECT_EQ(p.docs.size(), idx.df(idx.terms()[t]));
      EXPECT_TRUE(std::is_sorted(p.docs.begin(), p.docs.end()));
      for (uint32_t d : p.docs) EXPECT_LT(d, idx.doc_count());
    }
    for (const auto& d : docs.documents()) {
      EXPECT_EQ(idx.doc_length(*idx.doc_number(d.id)), tokenize(d.text).size());
    }
  }
}

TEST(InvertedIndexTest, SaveLoadRoundTrip) {
  std::vector<Document> docs = {{"d1", {"e1", "e2"}, "alpha beta beta", Lang::kEn, DocType::kCourse},
                                {"d2", {"e2"}, "gamma", Lang::kNl, DocType::kOther}};
  const auto idx = InvertedIndex::build(DocumentCollection(docs));
  std::stringstream buf;
  idx.save(buf);
  const auto loaded = InvertedIndex::load(buf, "mem");
  EXPECT_EQ(loaded, idx);
  EXPECT_EQ(loaded.doc_experts(*loaded.doc_number("d1")), (std::vector<std::string>{"e1", "e2"}));
  EXPECT_EQ(loaded.tf("beta", "d1"), 2u);
}

TEST(InvertedIndexTest, LoadRejectsGarbage) {
  std::stringstream buf("not an index");
  EXPECT_THROW(InvertedIndex::load(buf, "mem"), InputError);
}

TEST(ExpertCorpusTest, ConcatenatesLinkedDocuments) {
  std::vector<Document> docs = {{"d1", {"e1"}, "auction theory", Lang::kEn, DocType::kOther},
                                {"d2", {"e1", "e2"}, "theory of games", Lang::kEn, DocType::kOther},
                                {"d3", {"e3"}, "law", Lang::kEn, DocType::kOther}};
  const auto corpus = ExpertCorpus::build(DocumentCollection(docs));
  EXPECT_EQ(corpus.expert_count(), 3u);
  const auto tokens = corpus.tokens("e1");
  EXPECT_EQ(std::vector<std::string>(tokens.begin(), tokens.end()),
            (std::vector<std::string>{"auction", "theory", "theory", "of", "games"}));
  EXPECT_EQ(corpus.count("e1", "theory"), 2u);
  EXPECT_EQ(corpus.expert_df("theory"), 2u);
  EXPECT_EQ(corpus.expert_df("law"), 1u);
  EXPECT_EQ(corpus.expert_df("missing"), 0u);
  EXPECT_THROW(corpus.tokens("nobody"), InputError);
}
