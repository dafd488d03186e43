#include "hotelrec/hybrid.hpp"

#include <unordered_set>

namespace hotelrec {

HybridList interleave(const RankedList& content, const RankedList& cf, const HybridSpec& spec) {
    if (spec.n < 1) throw ConfigError("hybrid n must be >= 1");

    HybridList out;
    out.user_id = !content.user_id.empty() ? content.user_id : cf.user_id;
    out.slots.reserve(std::size_t(spec.n));

    std::unordered_set<std::string_view> placed;
    std::size_t cursor_content = 0, cursor_cf = 0;

    // next item of one source not placed yet, or nullptr when exhausted
    auto next_from = [&](Source s) -> const RankedItem* {
        const auto& items = (s == Source::Content ? content : cf).items;
        std::size_t& cur = s == Source::Content ? cursor_content : cursor_cf;
        while (cur < items.size() && placed.contains(items[cur].hotel_code)) ++cur;
        return cur < items.size() ? &items[cur++] : nullptr;
    };

    const Source second = spec.first == Source::Content ? Source::Cf : Source::Content;
    for (int slot = 1; slot <= spec.n; ++slot) {
        Source want = (slot % 2 == 1) ? spec.first : second;
        if (slot == spec.n && spec.n % 2 == 1) want = spec.odd_slot;
        Source actual = want;
        const RankedItem* item = next_from(want);
        if (item == nullptr) {
            // designated source exhausted: backfill from the other one
            actual = want == Source::Content ? Source::Cf : Source::Content;
            item = next_from(actual);
        }
        if (item == nullptr) break;  // no distinct hotels left anywhere
        placed.insert(item->hotel_code);
        out.slots.push_back({item->hotel_code, item->score, actual});
    }
    return out;
}

}  // namespace hotelrec
