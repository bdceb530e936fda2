#include "blicket/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

namespace blicket::gen {

namespace {

constexpr std::uint64_t kPartitionTag = 0x706f6f6cULL;
constexpr std::uint64_t kSceneTag = 0x7363656eULL;
constexpr int kQueryResampleBudget = 25;

std::string default_problem_id(SplitKind split, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s-%016llx", std::string(to_token(split)).c_str(),
                  static_cast<unsigned long long>(seed));
    return buf;
}

} // namespace

bool LabelShares::valid() const {
    return std::abs(activated + inactivated + undetermined - 1.0) <= 1e-9 && activated >= 0 &&
           inactivated >= 0 && undetermined >= 0;
}

CombinationPartition make_partition(Rng& rng) {
    std::vector<AttributeTriple> order = attribute_space();
    rng.shuffle(order);

    std::array<int, kNumShapes> shape_left{};
    std::array<int, kNumMaterials> material_left{};
    std::array<int, kNumColors> color_left{};
    for (const auto& t : order) {
        ++shape_left[static_cast<int>(t.shape)];
        ++material_left[static_cast<int>(t.material)];
        ++color_left[static_cast<int>(t.color)];
    }

    CombinationPartition part;
    const int test_size = kNumTriples / 4;
    for (const auto& t : order) {
        const bool coverage_survives = shape_left[static_cast<int>(t.shape)] > 1 &&
                                       material_left[static_cast<int>(t.material)] > 1 &&
                                       color_left[static_cast<int>(t.color)] > 1;
        if (static_cast<int>(part.test_pool.size()) < test_size && coverage_survives) {
            part.test_pool.push_back(t);
            --shape_left[static_cast<int>(t.shape)];
            --material_left[static_cast<int>(t.material)];
            --color_left[static_cast<int>(t.color)];
        } else {
            part.train_pool.push_back(t);
        }
    }
    return part;
}

std::vector<AttributeTriple> pool_for(const GenConfig& cfg, const CombinationPartition& partition) {
    if (cfg.split != SplitKind::Comp) return attribute_space();
    return cfg.fold == Fold::Test ? partition.test_pool : partition.train_pool;
}

std::vector<ObjectSpec> sample_objects(Rng& rng, const std::vector<AttributeTriple>& pool,
                                       double blicket_prob) {
    if (static_cast<int>(pool.size()) < kMaxObjects) {
        throw GenerationError("sample_objects: pool smaller than the maximum object count");
    }
    const int n = rng.uniform_int(kMinObjects, kMaxObjects);
    const auto triples = rng.sample(pool, static_cast<std::size_t>(n));

    std::vector<ObjectSpec> objects(n);
    for (int i = 0; i < n; ++i) {
        objects[i] = {i, triples[i].shape, triples[i].material, triples[i].color, false};
    }
    // Objects 0 and 1 are the familiarization pair: exactly one is a Blicket.
    const int fam_blicket = rng.bernoulli(0.5) ? 0 : 1;
    objects[fam_blicket].is_blicket = true;
    for (int i = 2; i < n; ++i) objects[i].is_blicket = rng.bernoulli(blicket_prob);
    return objects;
}

std::vector<ContextTrial> gen_familiarization(Rng& rng, const ObjectSpec& blicket,
                                              const ObjectSpec& non_blicket) {
    if (!blicket.is_blicket || non_blicket.is_blicket) {
        throw GenerationError("gen_familiarization: flag precondition violated");
    }
    ContextTrial solo_b{{blicket.id}, true};
    ContextTrial solo_n{{non_blicket.id}, false};
    ContextTrial both{{std::min(blicket.id, non_blicket.id), std::max(blicket.id, non_blicket.id)},
                      true};
    if (rng.bernoulli(0.5)) return {solo_b, solo_n, both};
    return {solo_n, solo_b, both};
}

std::optional<std::vector<ContextTrial>> gen_main_context(Rng& rng,
                                                          const std::vector<ObjectSpec>& remaining,
                                                          ActivationCount activation,
                                                          const GenConfig& cfg) {
    if (remaining.size() < 3) {
        throw GenerationError("gen_main_context: needs at least 3 remaining objects");
    }
    std::vector<int> blickets;
    std::vector<int> plains;
    for (const auto& o : remaining) (o.is_blicket ? blickets : plains).push_back(o.id);
    // Both an activated and an inactivated trial must be realizable.
    if (blickets.empty() || plains.empty()) return std::nullopt;

    int k = 0;
    switch (activation) {
        case ActivationCount::One: k = 1; break;
        case ActivationCount::Two: k = 2; break;
        case ActivationCount::Either: k = rng.uniform_int(1, 2); break;
    }

    const auto on_slots = rng.sample(std::vector<int>{0, 1, 2}, static_cast<std::size_t>(k));
    std::array<bool, 3> is_on{};
    for (int s : on_slots) is_on[s] = true;
    std::vector<int> off_slots;
    for (int s = 0; s < 3; ++s) {
        if (!is_on[s]) off_slots.push_back(s);
    }

    std::array<std::vector<int>, 3> members;
    auto contains = [&](int slot, int id) {
        return std::find(members[slot].begin(), members[slot].end(), id) != members[slot].end();
    };

    for (int b : blickets) members[on_slots[rng.below(on_slots.size())]].push_back(b);
    for (int p : plains) {
        if (rng.bernoulli(cfg.plain_off_bias)) {
            members[off_slots[rng.below(off_slots.size())]].push_back(p);
        } else {
            members[rng.below(3)].push_back(p);
        }
    }

    for (int s : on_slots) {
        const bool has_blicket = std::any_of(members[s].begin(), members[s].end(), [&](int id) {
            return std::find(blickets.begin(), blickets.end(), id) != blickets.end();
        });
        if (!has_blicket) members[s].push_back(blickets[rng.below(blickets.size())]);
    }
    for (int s : off_slots) {
        if (!members[s].empty()) continue;
        // Prefer a plain with no activated-trial appearances so the filler
        // reads as a clean solo failure rather than an explained-away one.
        std::vector<int> off_only;
        for (int p : plains) {
            bool in_on = false;
            for (int t : on_slots) in_on = in_on || contains(t, p);
            if (!in_on) off_only.push_back(p);
        }
        const auto& cands = off_only.empty() ? plains : off_only;
        members[s].push_back(cands[rng.below(cands.size())]);
    }

    // Overlap pass. A plain alone in a single inactivated trial may join an
    // activated one (its failure is then explained away by the co-present
    // Blicket); a plain seen only in activated trials may join another,
    // keeping its Blicketness unresolved. Blickets may ride along twice.
    for (int p : plains) {
        std::vector<int> in_off;
        std::vector<int> in_on;
        for (int s = 0; s < 3; ++s) {
            if (!contains(s, p)) continue;
            (is_on[s] ? in_on : in_off).push_back(s);
        }
        if (in_on.empty() && in_off.size() == 1 && members[in_off[0]].size() == 1) {
            if (rng.bernoulli(cfg.solo_dup_prob)) {
                members[on_slots[rng.below(on_slots.size())]].push_back(p);
            }
        } else if (in_off.empty() && !in_on.empty()) {
            std::vector<int> other_on;
            for (int s : on_slots) {
                if (!contains(s, p)) other_on.push_back(s);
            }
            if (!other_on.empty() && rng.bernoulli(cfg.on_dup_prob)) {
                members[other_on[rng.below(other_on.size())]].push_back(p);
            }
        }
    }
    for (int b : blickets) {
        std::vector<int> other_on;
        for (int s : on_slots) {
            if (!contains(s, b)) other_on.push_back(s);
        }
        if (!other_on.empty() && rng.bernoulli(cfg.on_dup_prob)) {
            members[other_on[rng.below(other_on.size())]].push_back(b);
        }
    }

    std::vector<ContextTrial> trials(3);
    for (int s = 0; s < 3; ++s) {
        std::sort(members[s].begin(), members[s].end());
        trials[s] = {std::move(members[s]), is_on[s]};
    }
    return trials;
}

std::vector<Query> gen_queries(Rng& rng, const std::vector<ObjectSpec>& objects,
                               const std::vector<ContextTrial>& context,
                               const oracle::HypothesisSet& hs, int max_rejections) {
    std::vector<int> ids;
    ids.reserve(objects.size());
    for (const auto& o : objects) ids.push_back(o.id);

    std::vector<Query> out;
    out.reserve(kQueriesPerProblem);
    for (int o : rng.sample(ids, 2)) {
        Query q;
        q.objects = {o};
        q.kind = QueryKind::Independent;
        q.label = oracle::label_query(hs, q.objects);
        q.type = oracle::classify_query_type(context, hs, q);
        out.push_back(std::move(q));
    }

    std::vector<int> off_trials;
    for (int i = 0; i < static_cast<int>(context.size()); ++i) {
        if (!context[i].light_on) off_trials.push_back(i);
    }
    std::vector<std::pair<int, std::vector<int>>> used;
    for (int qi = 0; qi < 2; ++qi) {
        for (int tries = 0;; ++tries) {
            if (tries >= max_rejections) {
                throw GenerationError("gen_queries: no distinct interventional query found");
            }
            const int base = off_trials[rng.below(off_trials.size())];
            const auto& base_objs = context[base].objects;
            std::vector<int> candidates;
            for (int id : ids) {
                if (std::find(base_objs.begin(), base_objs.end(), id) == base_objs.end()) {
                    candidates.push_back(id);
                }
            }
            const int want = rng.uniform_int(1, 3);
            const auto size = std::min<std::size_t>(want, candidates.size());
            auto added = rng.sample(candidates, size);
            std::sort(added.begin(), added.end());
            if (std::find(used.begin(), used.end(), std::pair{base, added}) != used.end()) {
                continue;
            }
            used.emplace_back(base, added);

            Query q;
            q.kind = QueryKind::Interventional;
            q.base_trial = base;
            q.objects = base_objs;
            q.objects.insert(q.objects.end(), added.begin(), added.end());
            std::sort(q.objects.begin(), q.objects.end());
            q.label = oracle::label_query(hs, q.objects);
            q.type = oracle::classify_query_type(context, hs, q);
            out.push_back(std::move(q));
            break;
        }
    }
    return out;
}

bool LabelQuota::accepts(const std::array<int, 3>& candidate) const {
    const auto next_total = static_cast<double>(total_ + kQueriesPerProblem);
    const double slack = std::max(0.01 * next_total, 6.0);
    for (int l = 0; l < 3; ++l) {
        const double cap = target_.of(static_cast<Label>(l)) * next_total + slack;
        if (static_cast<double>(counts_[l] + candidate[l]) > cap) return false;
    }
    return true;
}

void LabelQuota::commit(const std::array<int, 3>& candidate) {
    for (int l = 0; l < 3; ++l) counts_[l] += candidate[l];
    total_ += kQueriesPerProblem;
}

std::array<int, 3> label_counts(const std::vector<Query>& queries) {
    std::array<int, 3> counts{};
    for (const auto& q : queries) ++counts[static_cast<int>(q.label)];
    return counts;
}

Problem generate_problem(std::uint64_t seed, const GenConfig& cfg,
                         const CombinationPartition& partition, std::string problem_id) {
    return generate_problem_balanced(seed, cfg, partition, nullptr, std::move(problem_id));
}

Problem generate_problem_balanced(std::uint64_t seed, const GenConfig& cfg,
                                  const CombinationPartition& partition, LabelQuota* quota,
                                  std::string problem_id) {
    const auto pool = pool_for(cfg, partition);
    Rng rng(seed);
    for (int attempt = 0; attempt < cfg.max_rejections; ++attempt) {
        auto objects = sample_objects(rng, pool, cfg.blicket_prob);
        const int bi = objects[0].is_blicket ? 0 : 1;
        auto context = gen_familiarization(rng, objects[bi], objects[1 - bi]);

        const std::vector<ObjectSpec> remaining(objects.begin() + 2, objects.end());
        auto main = gen_main_context(rng, remaining, cfg.activation_count_main, cfg);
        if (!main) continue;
        context.insert(context.end(), main->begin(), main->end());

        const auto hs = oracle::consistent_hypotheses(context, static_cast<int>(objects.size()));
        for (int qtry = 0; qtry < kQueryResampleBudget; ++qtry) {
            auto queries = gen_queries(rng, objects, context, hs, cfg.max_rejections);
            const auto counts = label_counts(queries);
            if (quota && !quota->accepts(counts)) continue;
            if (quota) quota->commit(counts);

            Problem p;
            p.problem_id = problem_id.empty() ? default_problem_id(cfg.split, seed) : problem_id;
            p.seed = seed;
            p.split = cfg.split;
            p.fold = cfg.fold;
            p.objects = std::move(objects);
            p.context = std::move(context);
            p.queries = std::move(queries);
            return p;
        }
    }
    throw GenerationError("generate_problem: exceeded max_rejections (" +
                          std::to_string(cfg.max_rejections) + ")");
}

Fold fold_of_index(int index) {
    const int r = index % 10;
    if (r < 6) return Fold::Train;
    if (r < 8) return Fold::Val;
    return Fold::Test;
}

Dataset generate_split(SplitKind kind, const GenConfig& cfg, std::uint64_t master_seed) {
    if (!cfg.target_label_shares.valid()) {
        throw GenerationError("generate_split: target label shares must sum to 1");
    }
    if (cfg.problems_per_split < 1) {
        throw GenerationError("generate_split: problems_per_split must be at least 1");
    }

    const std::uint64_t split_seed =
        mix64(mix64(master_seed) ^ (static_cast<std::uint64_t>(kind) + 1));

    CombinationPartition partition;
    if (kind == SplitKind::Comp) {
        Rng prng(mix64(split_seed ^ kPartitionTag));
        partition = make_partition(prng);
    }

    LabelQuota quota(cfg.target_label_shares);
    Dataset ds;
    ds.split = kind;
    ds.problems.reserve(static_cast<std::size_t>(cfg.problems_per_split));
    for (int i = 0; i < cfg.problems_per_split; ++i) {
        GenConfig pc = cfg;
        pc.split = kind;
        pc.fold = fold_of_index(i);
        if (kind == SplitKind::Sys) {
            pc.activation_count_main =
                pc.fold == Fold::Test ? ActivationCount::Two : ActivationCount::One;
        }
        const std::uint64_t seed = mix64(split_seed ^ static_cast<std::uint64_t>(i));
        char pid[32];
        std::snprintf(pid, sizeof(pid), "%s-%06d", std::string(to_token(kind)).c_str(), i);
        try {
            ds.problems.push_back(generate_problem_balanced(seed, pc, partition, &quota, pid));
        } catch (const GenerationError& e) {
            throw GenerationError("problem index " + std::to_string(i) + ": " + e.what());
        }
        switch (pc.fold) {
            case Fold::Train: ++ds.fold_counts.train; break;
            case Fold::Val: ++ds.fold_counts.val; break;
            case Fold::Test: ++ds.fold_counts.test; break;
        }
    }
    return ds;
}

std::vector<std::string> validate_split_structure(const Dataset& ds) {
    std::vector<std::string> violations;

    FoldCounts seen;
    bool stratified = true;
    for (int i = 0; i < static_cast<int>(ds.problems.size()); ++i) {
        const Problem& p = ds.problems[i];
        if (p.fold != fold_of_index(i)) stratified = false;
        switch (p.fold) {
            case Fold::Train: ++seen.train; break;
            case Fold::Val: ++seen.val; break;
            case Fold::Test: ++seen.test; break;
        }
        for (const auto& name : validate_problem(p)) {
            violations.push_back("problem:" + p.problem_id + ":" + name);
        }
        if (p.split != ds.split) violations.push_back("problem:" + p.problem_id + ":split-tag");
    }
    if (!stratified) violations.push_back("fold-stratification");
    if (seen.train != ds.fold_counts.train || seen.val != ds.fold_counts.val ||
        seen.test != ds.fold_counts.test) {
        violations.push_back("fold-counts");
    }

    if (ds.split == SplitKind::Comp) {
        std::set<AttributeTriple> train_triples;
        std::set<AttributeTriple> test_triples;
        for (const Problem& p : ds.problems) {
            auto& bucket = p.fold == Fold::Test ? test_triples : train_triples;
            for (const auto& o : p.objects) bucket.insert(o.triple());
        }
        for (const auto& t : test_triples) {
            if (train_triples.count(t)) {
                violations.push_back("comp-pool-overlap");
                break;
            }
        }
        std::set<Shape> shapes;
        std::set<Material> materials;
        std::set<Color> colors;
        for (const auto& t : train_triples) {
            shapes.insert(t.shape);
            materials.insert(t.material);
            colors.insert(t.color);
        }
        if (static_cast<int>(shapes.size()) != kNumShapes ||
            static_cast<int>(materials.size()) != kNumMaterials ||
            static_cast<int>(colors.size()) != kNumColors) {
            violations.push_back("comp-train-coverage");
        }
    }

    if (ds.split == SplitKind::Sys) {
        for (const Problem& p : ds.problems) {
            int on = 0;
            for (const auto& t : p.context) on += t.light_on ? 1 : 0;
            const int expected = p.fold == Fold::Test ? 4 : 3;
            if (on != expected) {
                violations.push_back("problem:" + p.problem_id + ":sys-activation-count");
            }
        }
    }
    return violations;
}

std::vector<ScenePoint> scene_positions(const Problem& p) {
    Rng rng(mix64(p.seed ^ kSceneTag));
    std::vector<ScenePoint> points;
    points.reserve(p.objects.size());
    double min_dist = 0.18;
    for (const auto& o : p.objects) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 200) {
                min_dist *= 0.9;
                attempt = 0;
            }
            const double x = rng.uniform(0.05, 0.95);
            const double y = rng.uniform(0.05, 0.95);
            const bool clear = std::none_of(points.begin(), points.end(), [&](const ScenePoint& q) {
                return std::hypot(q.x - x, q.y - y) < min_dist;
            });
            if (clear) {
                points.push_back({o.id, x, y});
                break;
            }
        }
    }
    return points;
}

std::string encode_scene(const Problem& p) {
    nlohmann::ordered_json j;
    j["problem_id"] = p.problem_id;
    j["positions"] = nlohmann::ordered_json::array();
    for (const auto& pt : scene_positions(p)) {
        nlohmann::ordered_json e;
        e["id"] = pt.id;
        e["x"] = pt.x;
        e["y"] = pt.y;
        j["positions"].push_back(std::move(e));
    }
    return j.dump();
}

} // namespace blicket::gen
