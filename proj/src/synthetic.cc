#include "slr/synthetic.h"

#include <algorithm>
#include <random>

#include "slr/error.h"
#include "slr/logic.h"
#include "slr/tokenizer.h"

namespace slr {

namespace {

const std::vector<std::string>& decoy_nouns() {
  static const std::vector<std::string> kNouns = {"kite", "lamp", "drum",
                                                  "vase"};
  return kNouns;
}

const std::vector<std::string>& connectors() {
  static const std::vector<std::string> kWords = {
      "with", "near", "beside", "behind", "holding", "watching"};
  return kWords;
}

struct Atom {
  std::string noun;
  Label label = Label::kEntailment;
  std::string premise_noun;  // empty for neutral atoms
};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

}  // namespace

const std::vector<std::string>& synthetic_nouns() {
  static const std::vector<std::string> kNouns = {
      "man",    "woman",   "boy",   "girl",    "dog",    "cat",
      "car",    "truck",   "hat",   "helmet",  "beach",  "forest",
      "guitar", "piano",   "horse", "cow",     "ball",   "frisbee",
      "bench",  "chair",   "boat",  "train",   "city",   "village",
      "table",  "bed",     "apple", "banana",  "shirt",  "jacket",
      "river",  "desert",  "bike",  "scooter", "street", "field",
      "book",   "phone",   "coffee", "tea"};
  return kNouns;
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& config,
                                   const std::string& name) {
  const int max_pairs = static_cast<int>(synthetic_nouns().size() / 2);
  if (config.noun_pairs < 2 || config.noun_pairs > max_pairs) {
    throw InvalidArgument("noun_pairs must be in [2, " +
                          std::to_string(max_pairs) + "]");
  }
  if (config.min_atoms < 1 || config.max_atoms < config.min_atoms ||
      config.max_atoms + config.distractors > config.noun_pairs) {
    throw InvalidArgument("atom counts do not fit the noun inventory");
  }
  if (config.decoy_rate < 0.0 || config.decoy_rate > 1.0) {
    throw InvalidArgument("decoy_rate must be in [0, 1]");
  }
  const auto& nouns = synthetic_nouns();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> label_dist(0, kNumLabels - 1);
  std::uniform_int_distribution<int> atom_count(config.min_atoms,
                                                config.max_atoms);
  const std::vector<std::string> dets = {"a", "the"};

  SyntheticCorpus corpus;
  corpus.split.name = name;
  corpus.split.source_format = SourceFormat::kCanonicalJsonl;

  std::vector<int> pair_ids(config.noun_pairs);
  for (int i = 0; i < config.noun_pairs; ++i) pair_ids[i] = i;

  for (int n = 0; n < config.examples; ++n) {
    Label sentence = static_cast<Label>(label_dist(rng));
    int k = atom_count(rng);
    std::shuffle(pair_ids.begin(), pair_ids.end(), rng);

    std::vector<Atom> atoms(k);
    std::vector<int> positions(k);
    for (int i = 0; i < k; ++i) positions[i] = i;
    std::shuffle(positions.begin(), positions.end(), rng);
    // positions[0] carries the sentence label; the rest are filler.
    for (int i = 0; i < k; ++i) {
      Label l = Label::kEntailment;
      if (sentence != Label::kEntailment) {
        if (i == positions[0]) {
          l = sentence;
        } else if (unit(rng) < 0.3) {
          l = Label::kNeutral;
        } else if (sentence == Label::kContradiction && unit(rng) < 0.2) {
          l = Label::kContradiction;
        }
      }
      int pair = pair_ids[i];
      int side = unit(rng) < 0.5 ? 0 : 1;
      Atom& a = atoms[i];
      a.noun = nouns[2 * pair + side];
      a.label = l;
      if (l == Label::kEntailment) a.premise_noun = a.noun;
      if (l == Label::kContradiction) a.premise_noun = nouns[2 * pair + 1 - side];
    }
    bool allow_decoy = !(config.biased_decoys && sentence == Label::kEntailment);
    if (allow_decoy && config.decoy_rate > 0.0 && unit(rng) < config.decoy_rate) {
      std::uniform_int_distribution<int> at(0, k);
      Atom decoy;
      decoy.noun = pick(decoy_nouns(), rng);
      decoy.premise_noun = decoy.noun;
      atoms.insert(atoms.begin() + at(rng), decoy);
    }

    std::vector<std::string> premise_nouns;
    for (const auto& a : atoms) {
      if (!a.premise_noun.empty()) premise_nouns.push_back(a.premise_noun);
    }
    for (int d = 0; d < config.distractors; ++d) {
      int pair = pair_ids[k + d];
      premise_nouns.push_back(nouns[2 * pair + (unit(rng) < 0.5 ? 0 : 1)]);
    }
    std::shuffle(premise_nouns.begin(), premise_nouns.end(), rng);
    std::string premise;
    for (size_t i = 0; i < premise_nouns.size(); ++i) {
      if (i > 0) premise += i + 1 == premise_nouns.size() ? " and " : " , ";
      premise += pick(dets, rng) + " " + premise_nouns[i];
    }
    if (premise.empty()) premise = "nothing";
    premise += " .";

    std::string hypothesis;
    std::vector<int> noun_token(atoms.size());
    int tokens = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (i > 0) {
        hypothesis += " " + pick(connectors(), rng) + " ";
        ++tokens;
      }
      hypothesis += pick(dets, rng) + " " + atoms[i].noun;
      noun_token[i] = tokens + 1;
      tokens += 2;
    }
    hypothesis += ".";

    std::vector<int> carriers;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].label == sentence) carriers.push_back(static_cast<int>(i));
    }
    int carrier = pick(carriers, rng);

    NLIExample ex;
    ex.id = name + "-" + std::to_string(n);
    ex.premise = premise;
    ex.hypothesis = hypothesis;
    ex.gold = sentence;
    ex.rationales = {{noun_token[carrier]}};
    std::vector<Label> labels;
    for (const auto& a : atoms) labels.push_back(a.label);
    if (compose_labels(labels) != sentence) {
      throw Error("internal", "synthetic atom labels do not compose");
    }
    corpus.split.examples.push_back(std::move(ex));
    corpus.atom_labels.push_back(std::move(labels));
  }
  return corpus;
}

SyntheticSpanAccuracy synthetic_span_report(const SlrModel& model,
                                            const SyntheticCorpus& corpus,
                                            const Segmenter& segmenter) {
  long correct[2] = {0, 0}, total[2] = {0, 0};
  for (size_t n = 0; n < corpus.split.examples.size(); ++n) {
    const auto& ex = corpus.split.examples[n];
    const auto& atoms = corpus.atom_labels[n];
    SpanSet spans = segmenter.segment(ex.id, ex.hypothesis);
    if (spans.granular.size() != atoms.size()) {
      throw InvalidArgument("example '" + ex.id + "' segments into " +
                            std::to_string(spans.granular.size()) +
                            " spans for " + std::to_string(atoms.size()) +
                            " atoms");
    }
    SpanScores scores = model.forward(tokenize(ex.premise).words(), spans);
    for (int i = 0; i < spans.size(); ++i) {
      std::vector<Label> parts;
      for (int g : spans.at(i).constituents) parts.push_back(atoms[g]);
      Label gold = compose_labels(parts);
      Label predicted = span_prediction(scores[Detector::kNeutral].a_raw[i],
                                        scores[Detector::kContradiction].a_raw[i]);
      int kind = spans.at(i).kind == SpanKind::kGranular ? 0 : 1;
      correct[kind] += predicted == gold;
      ++total[kind];
    }
  }
  auto ratio = [](long c, long t) {
    return t == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(t);
  };
  SyntheticSpanAccuracy out;
  out.all = ratio(correct[0] + correct[1], total[0] + total[1]);
  out.granular = ratio(correct[0], total[0]);
  out.composite = ratio(correct[1], total[1]);
  return out;
}

double synthetic_span_accuracy(const SlrModel& model,
                               const SyntheticCorpus& corpus,
                               const Segmenter& segmenter) {
  return synthetic_span_report(model, corpus, segmenter).all;
}

}  // namespace slr
