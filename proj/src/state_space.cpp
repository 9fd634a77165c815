#include "symchain/state_space.hpp"

#include <string>

namespace symchain {

StateSpace StateSpace::finite(int n_max) {
    if (n_max < 0) {
        throw ValidationError("InvalidSpace", "Finite(N) requires N >= 0, got N=" + std::to_string(n_max));
    }
    return StateSpace{Kind::Finite, 0, n_max};
}

StateSpace StateSpace::lattice_window(int lo, int hi) {
    if (lo >= hi) {
        throw ValidationError("InvalidSpace",
                              "window requires lo < hi, got [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    }
    return StateSpace{Kind::LatticeWindow, lo, hi};
}

int StateSpace::index_of(int label) const {
    if (!contains(label)) {
        throw ValidationError("StateOutOfRange", "state " + std::to_string(label) + " not in [" +
                                                     std::to_string(lo) + "," + std::to_string(hi) + "]");
    }
    return label - lo;
}

bool StateSpace::reflectable() const {
    return kind == Kind::Finite || lo == -hi;
}

int StateSpace::reflect_index(int index) const {
    if (!reflectable()) {
        throw ValidationError("AsymmetricWindow", "reflection needs lo == -hi, got [" + std::to_string(lo) + "," +
                                                      std::to_string(hi) + "]");
    }
    return size() - 1 - index;
}

int StateSpace::reflect_label(int label) const {
    return label_of(reflect_index(index_of(label)));
}

}  // namespace symchain
