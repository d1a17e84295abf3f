#ifndef SLR_SYNTHETIC_H_
#define SLR_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "slr/corpus.h"
#include "slr/model.h"
#include "slr/segmenter.h"

namespace slr {

// Generator for premise/hypothesis pairs with known per-atom labels.
//
// Nouns come in opposing pairs. A hypothesis is a chain of atoms
// ("a dog", "with the hat", "near a car", ...), each anchored on one noun,
// ending in a period. An atom is entailed when its noun is in the premise,
// contradicted when its opposite is, and neutral otherwise. Sentence labels
// follow from the atom labels by the usual composition rule. Each example
// carries one rationale: the noun of an atom whose label equals the
// sentence label.
struct SyntheticConfig {
  int examples = 2400;
  int noun_pairs = 16;
  int min_atoms = 2;
  int max_atoms = 4;
  int distractors = 1;  // unrelated premise nouns
  // Decoy atoms are always entailed (their noun is in the premise). With
  // probability decoy_rate a non-entailment sentence gains one decoy atom.
  // When biased_decoys is set, decoys never occur in entailment sentences,
  // so sentence labels alone cannot tell a decoy from the atom that actually
  // makes the sentence neutral or contradictory. Otherwise decoys are added
  // to every class at the same rate.
  double decoy_rate = 0.0;
  bool biased_decoys = false;
  uint64_t seed = 1;
};

struct SyntheticCorpus {
  DatasetSplit split;
  std::vector<std::vector<Label>> atom_labels;  // aligned with split.examples
};

SyntheticCorpus generate_synthetic(const SyntheticConfig& config,
                                   const std::string& name);

// The noun vocabulary used by the generator, in pair order.
const std::vector<std::string>& synthetic_nouns();

// Scores every span of every example against the label composed from the
// hidden labels of its atoms. Throws InvalidArgument when an example does
// not segment into one granular span per atom.
double synthetic_span_accuracy(const SlrModel& model,
                               const SyntheticCorpus& corpus,
                               const Segmenter& segmenter);

// The same score split by span kind.
struct SyntheticSpanAccuracy {
  double all = 0.0;
  double granular = 0.0;
  double composite = 0.0;
};

SyntheticSpanAccuracy synthetic_span_report(const SlrModel& model,
                                            const SyntheticCorpus& corpus,
                                            const Segmenter& segmenter);

}  // namespace slr

#endif  // SLR_SYNTHETIC_H_
