#include "blicket/oracle.hpp"

#include <algorithm>

namespace blicket::oracle {

ObjectMask mask_of(const std::vector<int>& ids) {
    ObjectMask m = 0;
    for (int id : ids) m |= (ObjectMask{1} << id);
    return m;
}

HypothesisSet consistent_hypotheses(const std::vector<ContextTrial>& context, int n_objects) {
    if (n_objects < 0 || n_objects > 16) {
        throw std::invalid_argument("consistent_hypotheses: n_objects out of range");
    }
    std::vector<std::pair<ObjectMask, bool>> trials;
    trials.reserve(context.size());
    for (const auto& t : context) trials.emplace_back(mask_of(t.objects), t.light_on);

    HypothesisSet hs;
    hs.universe = n_objects;
    const ObjectMask end = ObjectMask{1} << n_objects;
    for (ObjectMask h = 0; h < end; ++h) {
        bool ok = true;
        for (const auto& [config, on] : trials) {
            if (machine_on(h, config) != on) {
                ok = false;
                break;
            }
        }
        if (ok) hs.hypotheses.push_back(h);
    }
    return hs;
}

Blicketness blicketness(const HypothesisSet& hs, int object_id) {
    if (hs.empty()) throw InconsistencyError("blicketness: empty hypothesis set");
    const ObjectMask bit = ObjectMask{1} << object_id;
    bool in_all = true;
    bool in_none = true;
    for (ObjectMask h : hs.hypotheses) {
        if (h & bit) {
            in_none = false;
        } else {
            in_all = false;
        }
    }
    if (in_all) return Blicketness::Blicket;
    if (in_none) return Blicketness::NonBlicket;
    return Blicketness::Undetermined;
}

Label label_query(const HypothesisSet& hs, ObjectMask config) {
    if (hs.empty()) throw InconsistencyError("label_query: empty hypothesis set");
    bool all_on = true;
    bool all_off = true;
    for (ObjectMask h : hs.hypotheses) {
        if (machine_on(h, config)) {
            all_off = false;
        } else {
            all_on = false;
        }
    }
    if (all_on) return Label::Activated;
    if (all_off) return Label::Inactivated;
    return Label::Undetermined;
}

Label label_query(const HypothesisSet& hs, const std::vector<int>& objects) {
    return label_query(hs, mask_of(objects));
}

namespace {

struct ObjectEvidence {
    bool appears = false;
    bool solo = false;          // some trial is exactly {o}
    bool solo_off = false;      // some off-trial is exactly {o}
    bool all_on = true;         // every trial containing o is on
    bool all_off = true;        // every trial containing o is off
    bool any_on = false;
};

ObjectEvidence gather(const std::vector<ContextTrial>& context, int object_id) {
    ObjectEvidence e;
    for (const auto& t : context) {
        const bool has = std::find(t.objects.begin(), t.objects.end(), object_id) != t.objects.end();
        if (!has) continue;
        e.appears = true;
        if (t.objects.size() == 1) {
            e.solo = true;
            if (!t.light_on) e.solo_off = true;
        }
        if (t.light_on) {
            e.any_on = true;
            e.all_off = false;
        } else {
            e.all_on = false;
        }
    }
    return e;
}

} // namespace

QueryType classify_object(const std::vector<ContextTrial>& context, const HypothesisSet& hs,
                          int object_id) {
    const ObjectEvidence e = gather(context, object_id);
    const Label label = label_query(hs, ObjectMask{1} << object_id);

    // Direct: tested alone and every appearance agrees with the resolved label.
    if (e.solo && label != Label::Undetermined) {
        const bool consistent = (label == Label::Activated) ? e.all_on : e.all_off;
        if (consistent) return QueryType::Direct;
    }
    // Screening-off: fails alone but rides along in activated trials.
    if (label == Label::Inactivated && e.solo_off && e.any_on) {
        return QueryType::ScreeningOff;
    }
    // Backward-blocking: never tested alone, only ever seen with an active machine.
    if (label == Label::Undetermined && !e.solo && e.appears && e.all_on) {
        return QueryType::BackwardBlocking;
    }
    return QueryType::Indirect;
}

QueryType classify_query_type(const std::vector<ContextTrial>& context, const HypothesisSet& hs,
                              const Query& q) {
    if (q.kind == QueryKind::Independent) {
        return classify_object(context, hs, q.objects.front());
    }

    // Interventional: attribute the label to the decisive evidence among the
    // base-trial members and the added objects.
    std::vector<int> base;
    if (q.base_trial && *q.base_trial >= 0 &&
        *q.base_trial < static_cast<int>(context.size())) {
        base = context[*q.base_trial].objects;
    }
    std::vector<int> added;
    std::set_difference(q.objects.begin(), q.objects.end(), base.begin(), base.end(),
                        std::back_inserter(added));
    std::vector<int> all = q.objects;

    if (q.label == Label::Activated) {
        for (int o : all) {
            if (blicketness(hs, o) == Blicketness::Blicket &&
                classify_object(context, hs, o) == QueryType::Direct) {
                return QueryType::Direct;
            }
        }
    }
    if (q.label == Label::Undetermined) {
        for (int o : added) {
            if (classify_object(context, hs, o) == QueryType::BackwardBlocking) {
                return QueryType::BackwardBlocking;
            }
        }
    }
    if (q.label == Label::Inactivated) {
        for (int o : all) {
            if (classify_object(context, hs, o) == QueryType::ScreeningOff) {
                return QueryType::ScreeningOff;
            }
        }
    }
    return QueryType::Indirect;
}

} // namespace blicket::oracle
