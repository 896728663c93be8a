#include "tsyn/enriched.hpp"

#include "tsyn/errors.hpp"

namespace tsyn {

namespace {
std::vector<std::string> protocol_clock_names(int k) {
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
    return names;
}
}  // namespace

EnrichedAlphabet::EnrichedAlphabet(std::vector<std::string> base_a, std::vector<std::string> base_b,
                                   int k)
    : clocks_(protocol_clock_names(k)), base_a_(std::move(base_a)), base_b_(std::move(base_b)) {
    fregs_ = enumerate_frac_regions(k);
    for (int base = -1; base < static_cast<int>(base_a_.size()); ++base) {
        for (std::size_t f = 0; f < fregs_.size(); ++f) {
            a_letters_.push_back({base, static_cast<int>(f)});
            std::string tok = base < 0 ? "tick" : base_a_[static_cast<std::size_t>(base)];
            a_tokens_.push_back(tok + "/" + fregs_[f].token(clocks_));
        }
    }
    std::uint64_t subset_count = std::uint64_t{1} << k;
    for (int base = -1; base < static_cast<int>(base_b_.size()); ++base) {
        for (std::uint64_t mask = 0; mask < subset_count; ++mask) {
            ClockSubset req;
            for (ClockId c = 0; c < k; ++c)
                if ((mask >> c) & 1) req = req.with(c);
            b_letters_.push_back({base, req});
            std::string tok = base < 0 ? "tick" : base_b_[static_cast<std::size_t>(base)];
            tok += "/";
            if (req.empty()) {
                tok += "none";
            } else {
                bool first = true;
                for (ClockId c : req.members(k)) {
                    if (!first) tok += "+";
                    tok += clocks_.name(c);
                    first = false;
                }
            }
            b_tokens_.push_back(tok);
        }
    }
    for (const auto& at : a_tokens_)
        for (const auto& bt : b_tokens_) pair_symbols_.push_back(compose_symbol(at, bt));
}

int EnrichedAlphabet::freg_index(const FractionalRegion& f) const {
    for (std::size_t i = 0; i < fregs_.size(); ++i)
        if (fregs_[i] == f) return static_cast<int>(i);
    throw InternalError("fractional region not enumerated");
}

int EnrichedAlphabet::a_token_index(int base, const FractionalRegion& f) const {
    int fi = freg_index(f);
    // a_letters_ are laid out base-major starting at tick = -1
    int base_pos = base + 1;
    return base_pos * static_cast<int>(fregs_.size()) + fi;
}

}  // namespace tsyn
