#pragma once

#include <vector>

#include "blicket/problem.hpp"

// Hand-checkable evidence patterns shared across tests. Object ids:
// A=0, B=1, C=2, D=3, E=4; the machine is implicit.
namespace blicket::canon {

// A solo-on, B solo-off, AB on. Forces A Blicket, B not.
inline std::vector<ContextTrial> direct() {
    return {{{0}, true}, {{1}, false}, {{0, 1}, true}};
}

inline std::vector<ContextTrial> direct_doubled() {
    return {{{0}, true}, {{1}, false}, {{0, 1}, true},
            {{0}, true}, {{1}, false}, {{0, 1}, true}};
}

// CD on with C solo-off: D's Blicketness follows only indirectly. True
// Blickets {0, 3} over 5 objects.
inline std::vector<ContextTrial> indirect() {
    return {{{0}, true}, {{1}, false}, {{0, 1}, true},
            {{2, 3}, true}, {{2}, false}, {{4}, false}};
}

// AC on is explained away by A; C solo-off screens C off. True Blickets {0}
// over 3 objects.
inline std::vector<ContextTrial> screening() {
    return {{{0}, true}, {{1}, false}, {{0, 1}, true},
            {{0, 2}, true}, {{2}, false}, {{2}, false}};
}

// C only ever appears beside the confirmed Blicket A, so C stays undetermined
// (hypotheses {A} and {A, C} both fit). True Blickets {0} over 4 objects.
inline std::vector<ContextTrial> backward() {
    return {{{0}, true}, {{1}, false}, {{0, 1}, true},
            {{0, 2}, true}, {{0}, true}, {{3}, false}};
}

inline std::vector<ContextTrial> duplicated(const std::vector<ContextTrial>& base, int k) {
    std::vector<ContextTrial> out;
    out.reserve(base.size() * static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
}

} // namespace blicket::canon
