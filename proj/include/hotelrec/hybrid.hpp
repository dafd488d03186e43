#pragma once

#include "hotelrec/types.hpp"

namespace hotelrec {

struct HybridSpec {
    int n = 10;
    Source first = Source::Content;      // engine owning slot 1
    Source odd_slot = Source::Content;   // engine owning the last slot when n is odd
};

// Index-alternating merge of two ranked lists. A hotel already placed is
// skipped and the same source's next item takes its slot; when a source
// runs out the other one backfills, so the output length is
// min(n, distinct hotels available). Each slot records which engine
// actually supplied it.
HybridList interleave(const RankedList& content, const RankedList& cf, const HybridSpec& spec);

}  // namespace hotelrec
