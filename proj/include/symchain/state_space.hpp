#pragma once

#include "symchain/errors.hpp"

namespace symchain {

// Indexed state space: either {0,...,N} or a lattice window {lo,...,hi}.
// Matrix index i (0-based) maps to the semantic label lo+i.
struct StateSpace {
    enum class Kind { Finite, LatticeWindow };

    Kind kind = Kind::Finite;
    int lo = 0;  // smallest label (always 0 for Finite)
    int hi = 0;  // largest label (N for Finite)

    // Labels 0..n_max.
    static StateSpace finite(int n_max);
    // Labels lo..hi.
    static StateSpace lattice_window(int lo, int hi);

    int size() const { return hi - lo + 1; }
    int label_of(int index) const { return lo + index; }
    int index_of(int label) const;
    bool contains(int label) const { return label >= lo && label <= hi; }

    // Midpoint of the label range; the symmetry center when reflectable.
    double center_label() const { return 0.5 * (static_cast<double>(lo) + hi); }

    // Reflection n -> N-n (finite) / n -> -n (window) is defined for all
    // finite spaces and for windows with lo == -hi.
    bool reflectable() const;
    int reflect_index(int index) const;
    int reflect_label(int label) const;

    bool operator==(const StateSpace&) const = default;
};

}  // namespace symchain
