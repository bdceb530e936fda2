#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "blicket/problem.hpp"

namespace blicket::oracle {

// Object sets as bitmasks over dense ids; the hypothesis space for n <= 8
// objects has at most 256 members, so exact enumeration is the oracle.
using ObjectMask = std::uint32_t;

ObjectMask mask_of(const std::vector<int>& ids);

class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All Blicket-subset assignments consistent with an observed context.
struct HypothesisSet {
    std::vector<ObjectMask> hypotheses;
    int universe = 0;

    bool empty() const { return hypotheses.empty(); }
};

enum class Blicketness { NonBlicket, Undetermined, Blicket };

// Disjunctive mechanism: on iff the configuration contains a Blicket.
inline bool machine_on(ObjectMask hypothesis, ObjectMask config) {
    return (hypothesis & config) != 0;
}

HypothesisSet consistent_hypotheses(const std::vector<ContextTrial>& context, int n_objects);

Blicketness blicketness(const HypothesisSet& hs, int object_id);

Label label_query(const HypothesisSet& hs, ObjectMask config);
Label label_query(const HypothesisSet& hs, const std::vector<int>& objects);

// Evidence class of a single object, following the independent-query rules.
QueryType classify_object(const std::vector<ContextTrial>& context, const HypothesisSet& hs,
                          int object_id);

// Requires q.label to be filled in. Pure function of (context, query).
QueryType classify_query_type(const std::vector<ContextTrial>& context, const HypothesisSet& hs,
                              const Query& q);

} // namespace blicket::oracle
