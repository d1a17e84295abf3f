#include "slr/synthetic.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "slr/error.h"
#include "slr/logic.h"
#include "slr/tokenizer.h"

namespace slr {
namespace {

TEST(SyntheticTest, DeterministicPerSeed) {
  SyntheticConfig sc;
  sc.examples = 50;
  EXPECT_EQ(generate_synthetic(sc, "a").split, generate_synthetic(sc, "a").split);
  SyntheticConfig other = sc;
  other.seed = 2;
  EXPECT_NE(generate_synthetic(other, "a").split, generate_synthetic(sc, "a").split);
}

TEST(SyntheticTest, AtomsComposeAndSegmentOneToOne) {
  SyntheticConfig sc;
  sc.examples = 400;
  SyntheticCorpus corpus = generate_synthetic(sc, "s");
  Segmenter seg(3);
  int per_class[3] = {0, 0, 0};
  for (size_t n = 0; n < corpus.split.size(); ++n) {
    const NLIExample& ex = corpus.split.examples[n];
    const auto& atoms = corpus.atom_labels[n];
    EXPECT_EQ(compose_labels(atoms), ex.gold);
    SpanSet spans = seg.segment(ex.id, ex.hypothesis);
    ASSERT_EQ(spans.granular.size(), atoms.size()) << ex.hypothesis;
    ASSERT_EQ(ex.rationales.size(), 1u);
    const auto& r = ex.rationales[0];
    ASSERT_EQ(r.size(), 1u);
    bool found = false;
    for (size_t g = 0; g < atoms.size(); ++g) {
      if (spans.granular[g].range.contains({r[0], r[0] + 1})) {
        EXPECT_EQ(atoms[g], ex.gold);
        found = true;
      }
    }
    EXPECT_TRUE(found);
    ++per_class[static_cast<int>(ex.gold)];
  }
  for (int c : per_class) EXPECT_GT(c, 100);
}

TEST(SyntheticTest, BiasedDecoysSkipEntailment) {
  SyntheticConfig sc;
  sc.examples = 600;
  sc.decoy_rate = 1.0;
  sc.biased_decoys = true;
  SyntheticCorpus corpus = generate_synthetic(sc, "d");
  auto has_decoy = [](const NLIExample& ex) {
    for (const char* w : {"kite", "lamp", "drum", "vase"}) {
      auto words = tokenize(ex.hypothesis).words();
      if (std::find(words.begin(), words.end(), w) != words.end()) return true;
    }
    return false;
  };
  for (const auto& ex : corpus.split.examples) {
    EXPECT_EQ(has_decoy(ex), ex.gold != Label::kEntailment) << ex.hypothesis;
  }
}

TEST(SyntheticTest, RejectsImpossibleConfig) {
  SyntheticConfig sc;
  sc.max_atoms = 30;
  EXPECT_THROW(generate_synthetic(sc, "x"), InvalidArgument);
  sc = SyntheticConfig{};
  sc.decoy_rate = 2.0;
  EXPECT_THROW(generate_synthetic(sc, "x"), InvalidArgument);
}

}  // namespace
}  // namespace slr
