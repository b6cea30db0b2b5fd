#pragma once

#include "torusmin/blockform.hpp"
#include "torusmin/skew.hpp"
#include "torusmin/spectra.hpp"

namespace torusmin::testing {

inline SkewProductSystem build_system(const IntMatrix& l, unsigned truncation = 3,
                                      unsigned bits = 256) {
    SpectralReport r = classify(l);
    BlockForm bf = block_form(l);
    return construct_minimal(r, bf, truncation, bits);
}

// one representative matrix per constructed branch
inline std::vector<std::pair<const char*, IntMatrix>> branch_matrices() {
    return {
        {"order2-fiber-n2", IntMatrix{{1, 0}, {3, -1}}},
        {"periodic-fiber-n3 (m=3)", IntMatrix{{1, 0, 0}, {1, 0, -1}, {0, 1, -1}}},
        {"periodic-fiber-n3 (m=4)", IntMatrix{{1, 0, 0}, {1, 0, -1}, {0, 1, 0}}},
        {"periodic-fiber-n3 (m=6)", IntMatrix{{1, 0, 0}, {1, 1, -1}, {0, 1, 0}}},
        {"minus-identity-fiber-n3", IntMatrix{{1, 0, 0}, {1, -1, 0}, {0, 0, -1}}},
        {"nested-order2-n3", IntMatrix{{1, 0, 0}, {1, -1, 0}, {0, 2, -1}}},
        {"order2-fiber-affine-base-n3", IntMatrix{{1, 0, 0}, {1, 1, 0}, {1, 0, -1}}},
        {"split-fiber-n4", IntMatrix{{1, 0, 0, 0}, {1, -1, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, -1}}},
        {"regrouped-tower-n4", IntMatrix{{1, 0, 0, 0}, {1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}}},
        {"periodic-fiber-n4 (B=-I)", IntMatrix{{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, -1, 0}, {0, 0, 0, -1}}},
        {"periodic-fiber-n4 (m=4)", IntMatrix{{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 0, -1}, {0, 0, 1, 0}}},
        {"nested-order2-n4", IntMatrix{{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, -1, 0}, {0, 0, 2, -1}}},
        {"order2-fiber-affine-base-n4", IntMatrix{{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 1, 0}, {1, 0, 0, -1}}},
    };
}

}  // namespace torusmin::testing
