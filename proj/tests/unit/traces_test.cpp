#include <gtest/gtest.h>

#include <algorithm>

#include "asess/textfmt.hpp"
#include "asess/traces.hpp"
#include "support.hpp"

namespace asess {
namespace {

Trace T(const std::string& s) { return parse_trace(s); }

USeq U(std::initializer_list<std::pair<char, const char*>> xs) {
    USeq r;
    for (auto [d, l] : xs) r.push_back(UAct{d == '!' ? Dir::Out : Dir::In, l});
    return r;
}

TEST(Traces, Projections) {
    Trace t = T("p->q!l . p->q?l");
    EXPECT_EQ(trace_proj(t, "p"), (ActionSeq{{Dir::Out, "q", "l"}}));
    EXPECT_EQ(trace_proj(t, "q"), (ActionSeq{{Dir::In, "p", "l"}}));
    EXPECT_TRUE(trace_proj(Trace{}, "r").empty());
    OTrace w = T("p->q!l1 . p->q!l2 . q->s!l5 . q->p!l3");
    EXPECT_EQ(actionseq_proj(trace_proj(w, "p"), "q"), U({{'!', "l1"}, {'!', "l2"}}));
}

TEST(Traces, Matching) {
    Trace t = T("p->q!l . p->q!l . p->q!l . p->q?l . p->q?l");
    EXPECT_TRUE(matches(t, 1, 4));
    EXPECT_TRUE(matches(t, 2, 5));
    for (std::size_t j = 1; j <= 5; ++j) EXPECT_FALSE(matches(t, 3, j));
    EXPECT_FALSE(matches(T("p->q!l"), 1, 1));
    EXPECT_FALSE(matches(T("p->q!l . q->p?l"), 1, 2));
}

TEST(Traces, WellFormedness) {
    Trace t = T("p->q!l . p->q!l' . p->q?l'");
    EXPECT_FALSE(well_formed_trace(t));
    EXPECT_TRUE(well_formed_trace(t, T("p->q!l'")));
    EXPECT_TRUE(well_formed_trace(T("p->q!a . r->s!b . p->q!c")));
    EXPECT_TRUE(well_formed_trace(Trace{}));
}

TEST(Traces, Swaps) {
    auto s = swap_step(T("p->q!l . p->q?l"), 1, T("p->q!l"));
    ASSERT_TRUE(s);
    EXPECT_EQ(*s, T("p->q?l . p->q!l"));
    EXPECT_FALSE(swap_step(T("p->q!l . p->r!l"), 1, {}));
    EXPECT_FALSE(swap_step(T("p->q!l . p->q?l"), 1, {}));
    EXPECT_THROW(swap_step(T("p->q?l . r->s!l"), 1, {}), PreconditionError);
}

TEST(Traces, Pointedness) {
    OTrace w = T("p->q!l . r->q!l");
    EXPECT_FALSE(pointed(T("p->q!l . p->q?l . r->q?l"), w));
    EXPECT_TRUE(pointed(T("p->q?l . r->q?l"), w));
    EXPECT_TRUE(pointed(T("r->q?l . p->q?l"), w));
    EXPECT_TRUE(pointed(Trace{}, {}));
    EXPECT_FALSE(pointed(T("q->p?l"), {}));
}

TEST(Traces, Filtering) {
    EXPECT_EQ(filter_trace(T("p->q?l . q->p?l"), T("p->q!l")), T("p->q?l"));
    EXPECT_TRUE(filter_trace(T("q->p?l"), T("p->q!l")).empty());
    Trace pt = T("p->q!l . q->r!a . p->q?l");
    ASSERT_TRUE(pointed(pt, {}));
    EXPECT_EQ(filter_trace(pt, {}), pt);
}

TEST(Traces, OrderAndDuality) {
    EXPECT_TRUE(precsim(U({{'!', "l1"}, {'!', "l2"}, {'?', "l3"}}), U({{'?', "l3"}, {'!', "l1"}, {'!', "l2"}})));
    EXPECT_FALSE(precsim(U({{'?', "l3"}, {'!', "l1"}}), U({{'!', "l1"}, {'?', "l3"}})));
    EXPECT_TRUE(weak_dual(U({{'!', "l1"}, {'!', "l2"}, {'?', "l3"}}), U({{'!', "l3"}, {'?', "l1"}, {'?', "l2"}})));
    EXPECT_TRUE(dual(USeq{}, USeq{}));
}

TEST(Traces, OTraces) {
    Queue q = parse_queue("<p l q> . <q l' p>");
    OTrace w = otr(q);
    EXPECT_TRUE(is_otrace(w));
    EXPECT_EQ(queue_of(w), q);
    EXPECT_TRUE(otrace_equiv(w, T("q->p!l' . p->q!l")));
    EXPECT_FALSE(otrace_equiv(T("p->q!a . p->q!b"), T("p->q!b . p->q!a")));
}

// Oracle: the closure of t under all permutations that keep each player's order and every
// matched input after its output, obtained by brute force over permutations.
std::set<Trace> permutation_class(const Trace& t, const OTrace& w) {
    std::set<Trace> r;
    std::vector<std::size_t> idx(t.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Trace full = w;
    full.insert(full.end(), t.begin(), t.end());
    auto m = match_map(full);
    do {
        std::vector<std::size_t> pos(t.size());
        for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = k;
        bool ok = true;
        for (std::size_t a = 0; a < t.size() && ok; ++a)
            for (std::size_t b = a + 1; b < t.size() && ok; ++b) {
                if (t[a].player() == t[b].player() && pos[a] > pos[b]) ok = false;
                auto pa = m[a + w.size()];
                if (pa && *pa == b + w.size() && pos[a] > pos[b]) ok = false;
            }
        if (!ok) continue;
        Trace p;
        for (std::size_t k : idx) p.push_back(t[k]);
        r.insert(p);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return r;
}

TEST(Traces, EquivalenceAgreesWithPermutationOracle) {
    testing::Gen g(51);
    for (int i = 0; i < 500; ++i) {
        auto wt = testing::random_wf_trace(g, 2, 1, 6);
        auto cls = permutation_class(wt.trace, wt.omega);
        auto closure = swap_closure(wt.trace, wt.omega);
        EXPECT_EQ(closure, cls) << to_string(wt.omega) << " | " << to_string(wt.trace);
        EXPECT_EQ(canonical_trace(wt.trace, wt.omega), *cls.begin());
        auto other = testing::random_wf_trace(g, 0, wt.trace.size(), wt.trace.size());
        bool in_class = cls.count(other.trace) > 0;
        if (well_formed_trace(other.trace, wt.omega))
            EXPECT_EQ(trace_equiv(wt.trace, other.trace, wt.omega), in_class);
    }
}

TEST(Traces, PrefixesFiltersAndSuffixes) {
    testing::Gen g(52);
    for (int i = 0; i < 500; ++i) {
        auto wt = testing::random_wf_trace(g, 2, 1, 7);
        for (std::size_t k = 0; k <= wt.trace.size(); ++k)
            EXPECT_TRUE(well_formed_trace(Trace(wt.trace.begin(), wt.trace.begin() + k), wt.omega));
        Trace f = filter_trace(wt.trace, wt.omega);
        ASSERT_FALSE(f.empty());
        EXPECT_EQ(f.back(), wt.trace.back());
        EXPECT_TRUE(pointed(f, wt.omega));
        for (std::size_t k = 0; k <= f.size(); ++k) {
            Trace head(f.begin(), f.begin() + k);
            Trace tail(f.begin() + k, f.end());
            Trace prefix = wt.omega;
            prefix.insert(prefix.end(), head.begin(), head.end());
            EXPECT_TRUE(pointed(tail, prefix)) << to_string(f) << " at " << k;
        }
    }
}

} // namespace
} // namespace asess
