#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stnn/model.hpp"
#include "stnn/types.hpp"

namespace stnn {

/// Immutable interaction dataset. Positive triples are stored canonically
/// (p < q), sorted and duplicate-free; self-pairs are rejected.
struct Dataset {
    std::size_t n = 0;  // substructure universe size
    std::size_t f = 0;  // interaction-type count
    std::vector<std::string> drug_ids;
    std::vector<Fingerprint> fingerprints;  // one per drug
    std::vector<std::string> type_ids;
    std::vector<Triple> positives;  // canonical, sorted, unique
    std::unordered_set<std::uint64_t> positive_keys;

    std::size_t num_drugs() const { return drug_ids.size(); }

    bool is_positive(std::uint32_t p, std::uint32_t q, std::uint32_t k) const {
        if (p > q) std::swap(p, q);
        return positive_keys.contains(triple_key(p, q, k));
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.n == b.n && a.f == b.f && a.drug_ids == b.drug_ids &&
               a.fingerprints == b.fingerprints && a.type_ids == b.type_ids &&
               a.positives == b.positives;
    }
};

/// Assemble and validate a dataset. Triples are canonicalized to p < q and
/// deduplicated; self-pairs or out-of-range indices throw ArgumentError.
Dataset make_dataset(std::size_t n, std::vector<std::string> drug_ids,
                     std::vector<Fingerprint> fingerprints,
                     std::vector<std::string> type_ids,
                     std::vector<Triple> positives);

struct FingerprintFile {
    std::vector<std::string> drug_ids;
    std::vector<Fingerprint> fingerprints;
    std::size_t duplicate_bits_dropped = 0;
    std::uint32_t max_bit = 0;  // largest index seen; 0 when no bits at all
};

/// TSV: `drug_id<TAB>comma-separated bit indices` (second field may be
/// empty). Lines starting with '#' are ignored. Indices are validated
/// against n and deduplicated, counting the drops.
/// Throws IngestError (with line number) on malformed lines or indices >= n.
FingerprintFile load_fingerprints(const std::filesystem::path& path,
                                  std::size_t n);

struct TripleFile {
    std::vector<Triple> positives;  // canonical, sorted, unique
    std::size_t duplicates_collapsed = 0;
};

/// TSV: `drug_id_a<TAB>drug_id_b<TAB>type_id`, one positive per line.
/// Lines starting with '#' are ignored. Identifiers are resolved against
/// the given vocabularies, pairs canonicalized to p < q, duplicates
/// collapsed with a count. Self-pairs throw IngestError.
TripleFile load_triples(const std::filesystem::path& path,
                        std::span<const std::string> drug_ids,
                        std::span<const std::string> type_ids);

/// One type_id per line; 0-based line number = type index.
std::vector<std::string> load_type_vocabulary(const std::filesystem::path& path);

/// Optional `index<TAB>description` TSV with human-readable substructure
/// labels (used by explanation output).
std::unordered_map<std::uint32_t, std::string> load_substructure_labels(
    const std::filesystem::path& path);

/// Candidate space for negative sampling: unordered drug pairs with one
/// endpoint from drugs_a and the other from drugs_b (distinct drugs), times
/// the listed types. drugs_a == drugs_b gives all pairs within one set.
struct NegativeScope {
    std::vector<std::uint32_t> drugs_a;
    std::vector<std::uint32_t> drugs_b;
    std::vector<std::uint32_t> types;
};

/// All drugs x all types.
NegativeScope full_scope(const Dataset& dataset);

/// Uniformly sample ceil(ratio * |positives_in_scope|) distinct canonical
/// triples from the scope, excluding every dataset positive (and the
/// optional extra key set). Deterministic given seed.
/// Throws SamplingError when the scope cannot supply the requested count.
std::vector<LabeledTriple> sample_negatives(
    const Dataset& dataset, std::span<const Triple> positives_in_scope,
    double ratio, std::uint64_t seed, const NegativeScope& scope,
    const std::unordered_set<std::uint64_t>* also_exclude = nullptr);

std::vector<LabeledTriple> sample_negatives(
    const Dataset& dataset, std::span<const Triple> positives_in_scope,
    double ratio, std::uint64_t seed);

enum class Task { C1, C2, C3 };

const char* task_name(Task task);

/// One cross-validation fold: labeled positives + negatives for training
/// and testing. A fold with an empty test set is reported but skipped by
/// the evaluation aggregation.
struct FoldSplit {
    Task task = Task::C1;
    std::size_t fold_index = 0;
    std::vector<LabeledTriple> train;
    std::vector<LabeledTriple> test;
};

/// Transductive split: positive triples are partitioned into `folds`
/// near-equal parts; each fold tests on one part (plus fresh negatives of
/// equal count, disjoint from the training negatives) and trains on the
/// rest. Throws SplitError when there are fewer positives than folds.
std::vector<FoldSplit> split_c1(const Dataset& dataset, std::size_t folds,
                                std::uint64_t seed);

/// Inductive splits: drugs are partitioned into `folds` parts; per fold the
/// part is "new", the rest "known". Training sees only triples among known
/// drugs. C2 tests triples with exactly one new drug, C3 triples with two;
/// test negatives mirror that structure. The drug partition depends only on
/// (seed, folds), so C2 and C3 from the same seed are comparable.
std::vector<FoldSplit> split_by_drug(const Dataset& dataset, std::size_t folds,
                                     std::uint64_t seed, Task task);

/// Synthetic benchmark with a known ground truth: a randomly initialized
/// factor model scores every canonical triple and the top `density`
/// fraction become the positives, so the planted model ranks positives
/// above negatives perfectly. Deterministic given seed.
std::pair<Dataset, FactorModel> generate_planted(std::size_t n, std::size_t m,
                                                 std::size_t f, std::size_t rank,
                                                 double density,
                                                 std::uint64_t seed);

}  // namespace stnn
