#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blicket/oracle.hpp"
#include "blicket/problem.hpp"
#include "blicket/rng.hpp"

namespace blicket::gen {

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ActivationCount { One, Two, Either };

struct LabelShares {
    double activated = 0.373;
    double inactivated = 0.3135;
    double undetermined = 0.3135;

    double of(Label l) const {
        switch (l) {
            case Label::Inactivated: return inactivated;
            case Label::Undetermined: return undetermined;
            case Label::Activated: return activated;
        }
        return 0.0;
    }
    bool valid() const;
};

struct GenConfig {
    SplitKind split = SplitKind::Iid;
    Fold fold = Fold::Train;
    int problems_per_split = 10000;
    LabelShares target_label_shares{};
    int max_rejections = 1000;
    ActivationCount activation_count_main = ActivationCount::Either;

    // Distributional knobs. blicket_prob is the marginal Blicketness of
    // non-familiarization objects; plain_off_bias steers non-Blickets toward
    // inactivated trials (where their Blicketness resolves); the dup
    // probabilities control how often an object joins a second main trial
    // (the source of screening-off and backward-blocking evidence patterns).
    double blicket_prob = 0.35;
    double plain_off_bias = 0.5;
    double solo_dup_prob = 0.5;
    double on_dup_prob = 0.5;
};

struct CombinationPartition {
    std::vector<AttributeTriple> train_pool;
    std::vector<AttributeTriple> test_pool;
};

// Greedy 36/12 split of the attribute space: shuffle, then siphon triples into
// the test pool as long as the train pool keeps covering every shape, material
// and color value.
CombinationPartition make_partition(Rng& rng);

std::vector<AttributeTriple> pool_for(const GenConfig& cfg, const CombinationPartition& partition);

std::vector<ObjectSpec> sample_objects(Rng& rng, const std::vector<AttributeTriple>& pool,
                                       double blicket_prob);

std::vector<ContextTrial> gen_familiarization(Rng& rng, const ObjectSpec& blicket,
                                              const ObjectSpec& non_blicket);

// Three main trials over the non-familiarization objects. Empty result is the
// resample signal: the drawn Blicket flags cannot realize the requested
// activation count (all or none of the remaining objects are Blickets).
std::optional<std::vector<ContextTrial>> gen_main_context(Rng& rng,
                                                          const std::vector<ObjectSpec>& remaining,
                                                          ActivationCount activation,
                                                          const GenConfig& cfg);

std::vector<Query> gen_queries(Rng& rng, const std::vector<ObjectSpec>& objects,
                               const std::vector<ContextTrial>& context,
                               const oracle::HypothesisSet& hs, int max_rejections);

// Running label balance over a split: a candidate problem is admitted only if
// no label's running count would exceed its target share by more than
// max(1%, 6 labels).
class LabelQuota {
public:
    explicit LabelQuota(LabelShares target) : target_(target) {}

    bool accepts(const std::array<int, 3>& candidate) const;
    void commit(const std::array<int, 3>& candidate);

    std::int64_t total() const { return total_; }

private:
    LabelShares target_;
    std::array<std::int64_t, 3> counts_{};
    std::int64_t total_ = 0;
};

std::array<int, 3> label_counts(const std::vector<Query>& queries);

Problem generate_problem(std::uint64_t seed, const GenConfig& cfg,
                         const CombinationPartition& partition, std::string problem_id = {});

// generate_problem plus label-quota rejection: queries are resampled first,
// the whole problem when the query budget is exhausted. quota may be null.
Problem generate_problem_balanced(std::uint64_t seed, const GenConfig& cfg,
                                  const CombinationPartition& partition, LabelQuota* quota,
                                  std::string problem_id = {});

Fold fold_of_index(int index);

Dataset generate_split(SplitKind kind, const GenConfig& cfg, std::uint64_t master_seed);

// Split-level structural checks (fold stratification and counts, per-problem
// validity, pool disjointness and attribute coverage for comp, activation
// counts for sys). Empty result means the dataset is well-formed.
std::vector<std::string> validate_split_structure(const Dataset& ds);

// Sidecar scene descriptor: uniformly random non-overlapping 2D positions in
// the unit square, derived from the problem seed. Positions carry no semantic
// weight.
struct ScenePoint {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

std::vector<ScenePoint> scene_positions(const Problem& p);
std::string encode_scene(const Problem& p);

} // namespace blicket::gen
