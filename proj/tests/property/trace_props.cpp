#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "asess/traces.hpp"
#include "support.hpp"

namespace asess {
namespace {

constexpr int kCases = 500;

std::map<std::pair<Participant, Participant>, std::vector<Label>> channels(const OTrace& w) {
    std::map<std::pair<Participant, Participant>, std::vector<Label>> r;
    for (const Comm& c : w) r[{c.from, c.to}].push_back(c.label);
    return r;
}

TEST(TraceProperties, SwapsPreserveWellFormedness) {
    testing::Gen g(0x7ace'0001);
    for (int c = 0; c < kCases; ++c) {
        auto w = testing::random_wf_trace(g, 2, 2, 7);
        ASSERT_TRUE(well_formed_trace(w.trace, w.omega));
        for (std::size_t i = 0; i + 1 < w.trace.size(); ++i)
            if (auto s = swap_step(w.trace, i + 1, w.omega)) {
                EXPECT_TRUE(well_formed_trace(*s, w.omega));
                EXPECT_EQ(swap_step(*s, i + 1, w.omega), w.trace);
            }
    }
}

TEST(TraceProperties, EquivalentTracesSharePointednessAndLast) {
    testing::Gen g(0x7ace'0002);
    for (int c = 0; c < kCases; ++c) {
        auto w = testing::random_wf_trace(g, 2, 1, 6);
        bool p = pointed(w.trace, w.omega);
        for (const auto& t : swap_closure(w.trace, w.omega)) {
            EXPECT_TRUE(well_formed_trace(t, w.omega));
            if (p) {
                EXPECT_TRUE(pointed(t, w.omega));
                EXPECT_EQ(t.back(), w.trace.back());
            }
            EXPECT_TRUE(trace_equiv(t, w.trace, w.omega));
        }
    }
}

TEST(TraceProperties, CanonicalFormIsAClassInvariant) {
    testing::Gen g(0x7ace'0003);
    for (int c = 0; c < kCases; ++c) {
        auto w = testing::random_wf_trace(g, 2, 1, 7);
        Trace k = canonical_trace(w.trace, w.omega);
        EXPECT_EQ(canonical_trace(k, w.omega), k);
        for (std::size_t i = 0; i + 1 < w.trace.size(); ++i)
            if (auto s = swap_step(w.trace, i + 1, w.omega)) EXPECT_EQ(canonical_trace(*s, w.omega), k);
    }
}

TEST(TraceProperties, ProjectionsAreSwapInvariant) {
    testing::Gen g(0x7ace'0004);
    for (int c = 0; c < kCases; ++c) {
        auto w = testing::random_wf_trace(g, 2, 1, 7);
        for (std::size_t i = 0; i + 1 < w.trace.size(); ++i)
            if (auto s = swap_step(w.trace, i + 1, w.omega))
                for (const auto& r : players(w.trace)) EXPECT_EQ(trace_proj(*s, r), trace_proj(w.trace, r));
    }
}

TEST(TraceProperties, OTraceEquivalenceMatchesQueues) {
    testing::Gen g(0x7ace'0005);
    for (int c = 0; c < kCases; ++c) {
        auto a = testing::random_wf_trace(g, 4, 0, 0).omega;
        auto b = a;
        std::shuffle(b.begin(), b.end(), g.engine());
        EXPECT_EQ(otrace_equiv(a, b), channels(a) == channels(b));
        EXPECT_EQ(otrace_equiv(a, b), canonical_otrace(a) == canonical_otrace(b));
        EXPECT_TRUE(otrace_equiv(a, otr(queue_of(a))));
    }
}

} // namespace
} // namespace asess
